//! Class-coded dictionaries, suffix rules, synonyms, the multiword phrase
//! dictionary and the word-class pattern set.
//!
//! Every object here is immutable once loaded and is shared read-only by the
//! pipeline workers.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

/// Longest sequence the sequencer and multiworder will consider.
pub const MAX_SEQUENCE_LEN: usize = 8;
/// Shortest sequence; single words are never sequences.
pub const MIN_SEQUENCE_LEN: usize = 2;

const DEFAULT_PATTERNS: &str = include_str!("../data/patterns.txt");
const DEFAULT_SUFFIXES: &str = include_str!("../data/suffixes.txt");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}: {message}")]
    Malformed {
        origin: String,
        line: usize,
        message: String,
    },
    #[error("invalid pattern `{pattern}`: {reason}")]
    InvalidPattern { pattern: String, reason: String },
    #[error("synonym cycle: {}", .0.join(" -> "))]
    SynonymCycle(Vec<String>),
}

impl LexiconError {
    fn malformed(origin: &str, line: usize, message: impl Into<String>) -> Self {
        LexiconError::Malformed {
            origin: origin.to_string(),
            line,
            message: message.into(),
        }
    }
}

fn read_file(path: &Path) -> Result<String, LexiconError> {
    fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Iterates `(line_number, content)` with `#` comments removed, surrounding
/// whitespace trimmed and blank lines skipped. CRLF endings are tolerated.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let line = line.trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn is_word(s: &str) -> bool {
    !s.is_empty() && s.chars().all(char::is_alphabetic)
}

/// Word class assigned by the dictionary that identified a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordClass {
    /// Adjective.
    A,
    /// Noun of mathematical terminology.
    E,
    /// Personal name.
    N,
    /// General noun from the system dictionary.
    S,
}

impl WordClass {
    pub const ALL: [WordClass; 4] = [WordClass::A, WordClass::E, WordClass::N, WordClass::S];

    /// Upper-case code used in patterns.
    pub fn code(self) -> char {
        match self {
            WordClass::A => 'A',
            WordClass::E => 'E',
            WordClass::N => 'N',
            WordClass::S => 'S',
        }
    }

    /// Lower-case tag used in protocol lines.
    pub fn tag(self) -> char {
        self.code().to_ascii_lowercase()
    }

    pub fn from_code(c: char) -> Option<WordClass> {
        match c.to_ascii_uppercase() {
            'A' => Some(WordClass::A),
            'E' => Some(WordClass::E),
            'N' => Some(WordClass::N),
            'S' => Some(WordClass::S),
            _ => None,
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for WordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl FromStr for WordClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => {
                WordClass::from_code(c).ok_or_else(|| format!("unknown word class `{s}`"))
            }
            _ => Err(format!("unknown word class `{s}`")),
        }
    }
}

/// A base form together with the class of the dictionary that holds it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LexiconEntry {
    pub base: String,
    pub class: WordClass,
}

impl LexiconEntry {
    /// Lowercases `base`; fails unless it is a non-empty run of letters.
    pub fn new(base: &str, class: WordClass) -> Result<Self, String> {
        if !is_word(base) {
            return Err(format!("`{base}` is not a word (letters only)"));
        }
        Ok(LexiconEntry {
            base: base.to_lowercase(),
            class,
        })
    }
}

/// A single-class word list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dictionary {
    name: String,
    class: WordClass,
    entries: HashSet<String>,
}

impl Dictionary {
    pub fn new(name: impl Into<String>, class: WordClass) -> Self {
        Dictionary {
            name: name.into(),
            class,
            entries: HashSet::new(),
        }
    }

    /// Builds a dictionary from in-memory bases, rejecting non-words.
    pub fn from_bases<I, S>(name: impl Into<String>, class: WordClass, bases: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut dict = Dictionary::new(name, class);
        for base in bases {
            dict.insert(base.as_ref())?;
        }
        Ok(dict)
    }

    /// Parses the one-base-per-line format. `origin` labels error messages.
    pub fn parse(name: impl Into<String>, class: WordClass, text: &str, origin: &str) -> Result<Self, LexiconError> {
        let mut dict = Dictionary::new(name, class);
        for (line_no, line) in content_lines(text) {
            let entry = LexiconEntry::new(line, class).map_err(|m| LexiconError::malformed(origin, line_no, m))?;
            if !dict.entries.insert(entry.base) {
                log::warn!("{origin}:{line_no}: duplicate entry `{line}`");
            }
        }
        Ok(dict)
    }

    pub fn insert(&mut self, base: &str) -> Result<bool, String> {
        let entry = LexiconEntry::new(base, self.class)?;
        Ok(self.entries.insert(entry.base))
    }

    pub fn remove(&mut self, base: &str) -> bool {
        self.entries.remove(&base.to_lowercase())
    }

    pub fn contains(&self, base: &str) -> bool {
        self.entries.contains(base)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn class(&self) -> WordClass {
        self.class
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn bases(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }
}

/// Loads a dictionary file; the dictionary is named after the file stem.
pub fn load_dictionary(path: &Path, class: WordClass) -> Result<Dictionary, LexiconError> {
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    load_named_dictionary(path, &name, class)
}

pub fn load_named_dictionary(path: &Path, name: &str, class: WordClass) -> Result<Dictionary, LexiconError> {
    let text = read_file(path)?;
    Dictionary::parse(name, class, &text, &path.display().to_string())
}

/// `surface = stem + suffix` is matched to the base `stem + replacement`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SuffixRule {
    pub suffix: String,
    pub replacement: String,
}

impl SuffixRule {
    pub fn new(suffix: &str, replacement: &str) -> Result<Self, String> {
        if !is_word(suffix) {
            return Err(format!("suffix `{suffix}` must be a non-empty letter string"));
        }
        if !replacement.is_empty() && !is_word(replacement) {
            return Err(format!("replacement `{replacement}` must be a letter string"));
        }
        Ok(SuffixRule {
            suffix: suffix.to_lowercase(),
            replacement: replacement.to_lowercase(),
        })
    }

    /// Candidate base for `norm`, if it ends in the suffix with a non-empty stem.
    pub fn apply(&self, norm: &str) -> Option<String> {
        let stem = norm.strip_suffix(self.suffix.as_str())?;
        if stem.is_empty() {
            return None;
        }
        let mut base = String::with_capacity(stem.len() + self.replacement.len());
        base.push_str(stem);
        base.push_str(&self.replacement);
        Some(base)
    }

    fn suffix_chars(&self) -> usize {
        self.suffix.chars().count()
    }
}

impl FromStr for SuffixRule {
    type Err = String;

    /// `X` or `X/Y`.
    fn from_str(token: &str) -> Result<Self, Self::Err> {
        match token.split_once('/') {
            None => SuffixRule::new(token, ""),
            Some((suffix, replacement)) => {
                if replacement.is_empty() {
                    return Err(format!("empty replacement in rule `{token}`"));
                }
                SuffixRule::new(suffix, replacement)
            }
        }
    }
}

impl fmt::Display for SuffixRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.replacement.is_empty() {
            write!(f, "{}", self.suffix)
        } else {
            write!(f, "{}/{}", self.suffix, self.replacement)
        }
    }
}

/// Suffix rules per word class, longest suffix first. Equal-length suffixes
/// keep their file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuffixTable {
    rules: [Vec<SuffixRule>; 4],
}

impl SuffixTable {
    pub fn empty() -> Self {
        SuffixTable::default()
    }

    /// The table shipped with the crate.
    pub fn bundled() -> Self {
        SuffixTable::parse(DEFAULT_SUFFIXES, "<bundled suffixes>").expect("bundled suffix table is valid")
    }

    /// Parses lines of the form `e: es s ves/f ves/fe ies/y`.
    pub fn parse(text: &str, origin: &str) -> Result<Self, LexiconError> {
        let mut table = SuffixTable::default();
        for (line_no, line) in content_lines(text) {
            let (code, rules) = line
                .split_once(':')
                .ok_or_else(|| LexiconError::malformed(origin, line_no, "expected `<class>: <rules>`"))?;
            let class: WordClass = code.parse().map_err(|m| LexiconError::malformed(origin, line_no, m))?;
            for token in rules.split_whitespace() {
                let rule: SuffixRule = token.parse().map_err(|m| LexiconError::malformed(origin, line_no, m))?;
                table.rules[class.index()].push(rule);
            }
        }
        for rules in &mut table.rules {
            rules.sort_by_key(|r| std::cmp::Reverse(r.suffix_chars()));
        }
        Ok(table)
    }

    pub fn with_rules(mut self, class: WordClass, rules: impl IntoIterator<Item = SuffixRule>) -> Self {
        let list = &mut self.rules[class.index()];
        list.extend(rules);
        list.sort_by_key(|r| std::cmp::Reverse(r.suffix_chars()));
        self
    }

    pub fn rules(&self, class: WordClass) -> &[SuffixRule] {
        &self.rules[class.index()]
    }
}

pub fn load_suffix_table(path: &Path) -> Result<SuffixTable, LexiconError> {
    let text = read_file(path)?;
    SuffixTable::parse(&text, &path.display().to_string())
}

/// Variant base → canonical base, flattened so every lookup is one hop.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymMap {
    map: HashMap<String, String>,
}

impl SynonymMap {
    pub fn empty() -> Self {
        SynonymMap::default()
    }

    /// Flattens chains and rejects cycles.
    pub fn from_pairs<I, S>(pairs: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let raw: HashMap<String, String> = pairs
            .into_iter()
            .map(|(v, c)| (v.as_ref().to_lowercase(), c.as_ref().to_lowercase()))
            .collect();
        let mut variants: Vec<&String> = raw.keys().collect();
        variants.sort();
        let mut map = HashMap::with_capacity(raw.len());
        for variant in variants {
            let mut path = vec![variant.clone()];
            let mut current = variant;
            while let Some(next) = raw.get(current) {
                if let Some(pos) = path.iter().position(|p| p == next) {
                    let mut cycle = path[pos..].to_vec();
                    cycle.push(next.clone());
                    return Err(LexiconError::SynonymCycle(cycle));
                }
                path.push(next.clone());
                current = next;
            }
            map.insert(variant.clone(), current.clone());
        }
        Ok(SynonymMap { map })
    }

    /// Parses `variant<TAB>canonical` lines.
    pub fn parse(text: &str, origin: &str) -> Result<Self, LexiconError> {
        let mut pairs: Vec<(String, String)> = Vec::new();
        for (line_no, line) in content_lines(text) {
            let (variant, canonical) = line
                .split_once('\t')
                .ok_or_else(|| LexiconError::malformed(origin, line_no, "expected `variant<TAB>canonical`"))?;
            let (variant, canonical) = (variant.trim(), canonical.trim());
            for word in [variant, canonical] {
                if !is_word(word) {
                    return Err(LexiconError::malformed(origin, line_no, format!("`{word}` is not a word")));
                }
            }
            if let Some((_, old)) = pairs.iter().find(|(v, _)| v.eq_ignore_ascii_case(variant)) {
                log::warn!("{origin}:{line_no}: `{variant}` remapped (was `{old}`)");
            }
            pairs.retain(|(v, _)| !v.eq_ignore_ascii_case(variant));
            pairs.push((variant.to_string(), canonical.to_string()));
        }
        SynonymMap::from_pairs(pairs)
    }

    /// Canonical form of `base`, or `base` itself.
    pub fn resolve<'a>(&'a self, base: &'a str) -> &'a str {
        self.map.get(base).map(String::as_str).unwrap_or(base)
    }

    pub fn canonicals(&self) -> impl Iterator<Item = &str> {
        self.map.values().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

pub fn load_synonyms(path: &Path) -> Result<SynonymMap, LexiconError> {
    let text = read_file(path)?;
    SynonymMap::parse(&text, &path.display().to_string())
}

/// Intellectually curated phrases, each 2 to 8 base forms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiwordDictionary {
    phrases: HashSet<String>,
    max_len: usize,
}

impl MultiwordDictionary {
    pub fn from_phrases<I, S>(phrases: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut dict = MultiwordDictionary::default();
        for phrase in phrases {
            dict.insert(phrase.as_ref())?;
        }
        Ok(dict)
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, LexiconError> {
        let mut dict = MultiwordDictionary::default();
        for (line_no, line) in content_lines(text) {
            dict.insert(line).map_err(|m| LexiconError::malformed(origin, line_no, m))?;
        }
        Ok(dict)
    }

    fn insert(&mut self, phrase: &str) -> Result<(), String> {
        let words: Vec<String> = phrase.split_whitespace().map(str::to_lowercase).collect();
        if !(MIN_SEQUENCE_LEN..=MAX_SEQUENCE_LEN).contains(&words.len()) {
            return Err(format!(
                "phrase `{phrase}` has {} words, expected {MIN_SEQUENCE_LEN}..={MAX_SEQUENCE_LEN}",
                words.len()
            ));
        }
        if let Some(bad) = words.iter().find(|w| !is_word(w)) {
            return Err(format!("`{bad}` in phrase `{phrase}` is not a word"));
        }
        self.max_len = self.max_len.max(words.len());
        self.phrases.insert(words.join(" "));
        Ok(())
    }

    /// Rewrites every constituent to its synonym-canonical form so that
    /// phrases match identified (already canonical) bases.
    pub fn canonicalize(&self, synonyms: &SynonymMap) -> MultiwordDictionary {
        let phrases = self
            .phrases
            .iter()
            .map(|p| p.split(' ').map(|w| synonyms.resolve(w)).collect::<Vec<_>>().join(" "))
            .collect();
        MultiwordDictionary {
            phrases,
            max_len: self.max_len,
        }
    }

    /// Constituents that no dictionary (nor the synonym map) can produce.
    pub fn orphans(&self, dictionaries: &[Dictionary], synonyms: &SynonymMap) -> Vec<String> {
        let canonicals: HashSet<&str> = synonyms.canonicals().collect();
        let orphans: BTreeSet<String> = self
            .phrases
            .iter()
            .flat_map(|p| p.split(' '))
            .filter(|w| !canonicals.contains(w) && !dictionaries.iter().any(|d| d.contains(w)))
            .map(str::to_string)
            .collect();
        orphans.into_iter().collect()
    }

    /// Membership test on a space-joined key.
    pub fn contains(&self, key: &str) -> bool {
        self.phrases.contains(key)
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }
}

pub fn load_multiwords(path: &Path) -> Result<MultiwordDictionary, LexiconError> {
    let text = read_file(path)?;
    MultiwordDictionary::parse(&text, &path.display().to_string())
}

/// Reverse trie over class strings: walking a run backwards from its last
/// word reaches every pattern that ends there.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct SuffixTrie {
    children: Vec<[u32; 4]>,
    terminal: Vec<bool>,
}

impl SuffixTrie {
    const NONE: u32 = 0;

    fn new() -> Self {
        SuffixTrie {
            children: vec![[Self::NONE; 4]],
            terminal: vec![false],
        }
    }

    fn insert(&mut self, classes: &[WordClass]) {
        let mut node = 0usize;
        for class in classes.iter().rev() {
            let next = self.children[node][class.index()];
            node = if next == Self::NONE {
                self.children.push([Self::NONE; 4]);
                self.terminal.push(false);
                let id = self.children.len() - 1;
                self.children[node][class.index()] = id as u32;
                id
            } else {
                next as usize
            };
        }
        self.terminal[node] = true;
    }
}

/// A set of word-class patterns such as `AANE`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    patterns: BTreeSet<String>,
    max_len: usize,
    trie: SuffixTrie,
}

impl Default for PatternSet {
    fn default() -> Self {
        PatternSet {
            patterns: BTreeSet::new(),
            max_len: 0,
            trie: SuffixTrie::new(),
        }
    }
}

impl PatternSet {
    /// The full pattern list shipped with the crate.
    pub fn bundled() -> Self {
        PatternSet::parse(DEFAULT_PATTERNS).expect("bundled pattern list is valid")
    }

    /// Comma- and/or whitespace-separated pattern tokens; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let tokens = content_lines(text)
            .flat_map(|(_, line)| line.split(|c: char| c == ',' || c.is_whitespace()))
            .filter(|t| !t.is_empty());
        PatternSet::from_patterns(tokens)
    }

    pub fn from_patterns<I, S>(patterns: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = PatternSet::default();
        for pattern in patterns {
            set.insert(pattern.as_ref())?;
        }
        Ok(set)
    }

    fn insert(&mut self, pattern: &str) -> Result<(), LexiconError> {
        let invalid = |reason: String| LexiconError::InvalidPattern {
            pattern: pattern.to_string(),
            reason,
        };
        let classes = pattern
            .chars()
            .map(|c| match c {
                'A' | 'E' | 'N' | 'S' => Ok(WordClass::from_code(c).expect("checked")),
                other => Err(invalid(format!("`{other}` is not one of A, E, N, S"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if !(MIN_SEQUENCE_LEN..=MAX_SEQUENCE_LEN).contains(&classes.len()) {
            return Err(invalid(format!(
                "length {} outside {MIN_SEQUENCE_LEN}..={MAX_SEQUENCE_LEN}",
                classes.len()
            )));
        }
        if self.patterns.insert(pattern.to_string()) {
            self.trie.insert(&classes);
            self.max_len = self.max_len.max(classes.len());
        }
        Ok(())
    }

    /// Keeps only patterns of at most `max_len` classes.
    pub fn limited_to(&self, max_len: usize) -> PatternSet {
        PatternSet::from_patterns(self.patterns.iter().filter(|p| p.len() <= max_len))
            .expect("subset of a valid set")
    }

    pub fn contains(&self, pattern: &str) -> bool {
        self.patterns.contains(pattern)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.patterns.iter().map(String::as_str)
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Lengths of all patterns that equal a suffix of `classes`, ascending.
    pub fn suffix_match_lengths<'a>(&'a self, classes: &'a [WordClass]) -> impl Iterator<Item = usize> + 'a {
        let mut node = Some(0usize);
        let mut iter = classes.iter().rev().enumerate();
        std::iter::from_fn(move || loop {
            let current = node?;
            let (depth, class) = iter.next()?;
            let next = self.trie.children[current][class.index()];
            if next == SuffixTrie::NONE {
                node = None;
                return None;
            }
            node = Some(next as usize);
            if self.trie.terminal[next as usize] {
                return Some(depth + 1);
            }
        })
    }
}

pub fn load_patterns(path: &Path) -> Result<PatternSet, LexiconError> {
    let text = read_file(path)?;
    PatternSet::parse(&text)
}
