//! Word identification through the priority-ordered dictionary cascade.

use std::sync::Arc;

use crate::lexicon::{Dictionary, SuffixTable, SynonymMap, WordClass};
use crate::tokenizer::Token;

/// A token reduced to a dictionary base form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentifiedWord {
    pub token: Token,
    /// Synonym-canonical base form.
    pub base: String,
    pub class: WordClass,
    pub source_dictionary: Arc<str>,
}

/// A token no dictionary recognised under any suffix candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownToken {
    pub token: Token,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Identification {
    Word(IdentifiedWord),
    Unknown(UnknownToken),
}

impl Identification {
    pub fn token(&self) -> &Token {
        match self {
            Identification::Word(w) => &w.token,
            Identification::Unknown(u) => &u.token,
        }
    }

    pub fn as_word(&self) -> Option<&IdentifiedWord> {
        match self {
            Identification::Word(w) => Some(w),
            Identification::Unknown(_) => None,
        }
    }
}

/// Candidate bases for `norm` under the suffix rules of `class`: the surface
/// itself, then one candidate per applicable rule, longest suffix first.
pub fn candidates(norm: &str, class: WordClass, suffixes: &SuffixTable) -> Vec<String> {
    std::iter::once(norm.to_string())
        .chain(suffixes.rules(class).iter().filter_map(|rule| rule.apply(norm)))
        .collect()
}

/// First candidate of `norm` contained in `dict`.
fn lookup(norm: &str, dict: &Dictionary, suffixes: &SuffixTable) -> Option<String> {
    if dict.contains(norm) {
        return Some(norm.to_string());
    }
    let mut buf = String::with_capacity(norm.len() + 4);
    for rule in suffixes.rules(dict.class()) {
        let Some(stem) = norm.strip_suffix(rule.suffix.as_str()) else {
            continue;
        };
        if stem.is_empty() {
            continue;
        }
        buf.clear();
        buf.push_str(stem);
        buf.push_str(&rule.replacement);
        if dict.contains(&buf) {
            return Some(buf);
        }
    }
    None
}

/// Resolves a token against `dictionaries` in the given order. The first
/// dictionary holding any candidate wins; later dictionaries are not consulted.
pub fn identify(token: &Token, dictionaries: &[Dictionary], suffixes: &SuffixTable, synonyms: &SynonymMap) -> Identification {
    for dict in dictionaries {
        if let Some(base) = lookup(&token.norm, dict, suffixes) {
            return Identification::Word(IdentifiedWord {
                token: token.clone(),
                base: synonyms.resolve(&base).to_string(),
                class: dict.class(),
                source_dictionary: Arc::from(dict.name()),
            });
        }
    }
    Identification::Unknown(UnknownToken { token: token.clone() })
}

/// The loaded word-identification configuration.
#[derive(Debug, Clone)]
pub struct Identifier {
    dictionaries: Vec<Dictionary>,
    names: Vec<Arc<str>>,
    suffixes: SuffixTable,
    synonyms: SynonymMap,
}

impl Identifier {
    /// `dictionaries` must already be in priority order.
    pub fn new(dictionaries: Vec<Dictionary>, suffixes: SuffixTable, synonyms: SynonymMap) -> Self {
        let names = dictionaries.iter().map(|d| Arc::from(d.name())).collect();
        Identifier {
            dictionaries,
            names,
            suffixes,
            synonyms,
        }
    }

    pub fn identify(&self, token: &Token) -> Identification {
        for (dict, name) in self.dictionaries.iter().zip(&self.names) {
            if let Some(base) = lookup(&token.norm, dict, &self.suffixes) {
                let base = match self.synonyms.resolve(&base) {
                    canonical if canonical == base => base,
                    canonical => canonical.to_string(),
                };
                return Identification::Word(IdentifiedWord {
                    token: token.clone(),
                    base,
                    class: dict.class(),
                    source_dictionary: Arc::clone(name),
                });
            }
        }
        Identification::Unknown(UnknownToken { token: token.clone() })
    }

    pub fn dictionaries(&self) -> &[Dictionary] {
        &self.dictionaries
    }

    pub fn suffixes(&self) -> &SuffixTable {
        &self.suffixes
    }

    pub fn synonyms(&self) -> &SynonymMap {
        &self.synonyms
    }
}

/// Protocol line in the `lex:)` format; unknown tokens are marked `?`.
pub fn render_protocol(item: &Identification) -> String {
    match item {
        Identification::Word(w) => format!("lex:) <{} = [({}/{})]>", w.token.surface, w.base, w.class.tag()),
        Identification::Unknown(u) => format!("lex:) <{} = [?]>", u.token.surface),
    }
}
