//! Splits clean text into word-candidate tokens.
//!
//! Rules:
//! - letters, digits and apostrophes form chunks; everything else separates,
//!   hyphens included (`einstein-yang-mills-higgs` is four tokens);
//! - a trailing possessive `'s` is removed, any other apostrophe separates;
//! - pieces containing a digit are dropped but still consume an ordinal, so
//!   they interrupt word runs;
//! - `.`, `!`, `?`, `;` and line ends close a sentence.

use std::sync::Arc;

use crate::ingest::CleanText;

/// A word candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// As written in the text.
    pub surface: String,
    /// Lowercased surface, letters only.
    pub norm: String,
    pub doc_id: Arc<str>,
    /// Position in the document; dropped pieces also take a position.
    pub ordinal: u32,
    pub sentence: u32,
}

/// Tokens of one document plus the number of dropped non-word pieces.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tokenized {
    pub tokens: Vec<Token>,
    pub dropped: usize,
}

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}')
}

fn is_sentence_end(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | ';')
}

struct State<'a> {
    doc_id: &'a Arc<str>,
    out: Tokenized,
    ordinal: u32,
    sentence: u32,
    sentence_has_tokens: bool,
}

impl State<'_> {
    fn close_sentence(&mut self) {
        if self.sentence_has_tokens {
            self.sentence += 1;
            self.sentence_has_tokens = false;
        }
    }

    fn chunk(&mut self, chunk: &str) {
        let chunk = chunk
            .strip_suffix("'s")
            .or_else(|| chunk.strip_suffix("\u{2019}s"))
            .or_else(|| chunk.strip_suffix("'S"))
            .unwrap_or(chunk);
        for piece in chunk.split(is_apostrophe).filter(|p| !p.is_empty()) {
            self.sentence_has_tokens = true;
            let ordinal = self.ordinal;
            self.ordinal += 1;
            if piece.chars().all(char::is_alphabetic) {
                self.out.tokens.push(Token {
                    surface: piece.to_string(),
                    norm: piece.to_lowercase(),
                    doc_id: Arc::clone(self.doc_id),
                    ordinal,
                    sentence: self.sentence,
                });
            } else {
                self.out.dropped += 1;
            }
        }
    }

    fn line(&mut self, line: &str) {
        let mut start = None;
        for (i, c) in line.char_indices() {
            if c.is_alphanumeric() || is_apostrophe(c) {
                start.get_or_insert(i);
                continue;
            }
            if let Some(s) = start.take() {
                self.chunk(&line[s..i]);
            }
            if is_sentence_end(c) {
                self.close_sentence();
            }
        }
        if let Some(s) = start {
            self.chunk(&line[s..]);
        }
        self.close_sentence();
    }
}

/// Tokenizes every line of `text` as part of document `doc_id`.
pub fn tokenize(text: &CleanText, doc_id: &Arc<str>) -> Tokenized {
    let mut state = State {
        doc_id,
        out: Tokenized::default(),
        ordinal: 0,
        sentence: 0,
        sentence_has_tokens: false,
    };
    for line in &text.lines {
        state.line(line);
    }
    state.out
}

/// Convenience wrapper for a single line of clean text.
pub fn tokenize_str(text: &str, doc_id: &str) -> Tokenized {
    let clean = CleanText {
        lines: text.lines().map(str::to_string).collect(),
    };
    tokenize(&clean, &Arc::from(doc_id))
}
