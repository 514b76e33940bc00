//! Multiword detection: word-class patterns (`q`) and the phrase dictionary (`m`).

use std::fmt;
use std::sync::Arc;

use crate::identifier::{IdentifiedWord, Identification};
use crate::lexicon::{MultiwordDictionary, PatternSet, WordClass, MIN_SEQUENCE_LEN};

/// Which attendee produced a match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatchKind {
    /// Word-class pattern match.
    Algorithmic,
    /// Phrase dictionary match.
    Dictionary,
}

impl MatchKind {
    pub fn tag(self) -> char {
        match self {
            MatchKind::Algorithmic => 'q',
            MatchKind::Dictionary => 'm',
        }
    }
}

impl fmt::Display for MatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

/// Consecutive identified words of one sentence with no unknown or dropped
/// token in between.
#[derive(Debug, Clone)]
pub struct ClassRun<'a> {
    words: Vec<&'a IdentifiedWord>,
}

impl<'a> ClassRun<'a> {
    /// Panics if the words are not consecutive within one sentence of one document.
    pub fn new(words: Vec<&'a IdentifiedWord>) -> Self {
        for pair in words.windows(2) {
            let (a, b) = (&pair[0].token, &pair[1].token);
            assert!(
                a.doc_id == b.doc_id && a.sentence == b.sentence && a.ordinal + 1 == b.ordinal,
                "words of a class run must be consecutive"
            );
        }
        ClassRun { words }
    }

    pub fn words(&self) -> &[&'a IdentifiedWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn class_string(&self) -> String {
        self.words.iter().map(|w| w.class.code()).collect()
    }

    fn window(&self, start: usize, len: usize, kind: MatchKind) -> SequenceMatch {
        let words = &self.words[start..start + len];
        SequenceMatch {
            doc_id: Arc::clone(&words[0].token.doc_id),
            bases: words.iter().map(|w| w.base.clone()).collect(),
            pattern: words.iter().map(|w| w.class.code()).collect(),
            kind,
            start: words[0].token.ordinal,
        }
    }
}

/// Splits a document's identification results into maximal class runs.
pub fn split_runs(items: &[Identification]) -> Vec<ClassRun<'_>> {
    let mut runs = Vec::new();
    let mut current: Vec<&IdentifiedWord> = Vec::new();
    for item in items {
        match item {
            Identification::Word(w) => {
                if let Some(last) = current.last() {
                    if last.token.sentence != w.token.sentence || last.token.ordinal + 1 != w.token.ordinal {
                        runs.push(ClassRun {
                            words: std::mem::take(&mut current),
                        });
                    }
                }
                current.push(w);
            }
            Identification::Unknown(_) => {
                if !current.is_empty() {
                    runs.push(ClassRun {
                        words: std::mem::take(&mut current),
                    });
                }
            }
        }
    }
    if !current.is_empty() {
        runs.push(ClassRun { words: current });
    }
    runs
}

/// A detected multiword sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SequenceMatch {
    pub doc_id: Arc<str>,
    pub bases: Vec<String>,
    /// Class string of the matched words.
    pub pattern: String,
    pub kind: MatchKind,
    /// Ordinal of the first word.
    pub start: u32,
}

impl SequenceMatch {
    /// Bases joined by single spaces.
    pub fn key(&self) -> String {
        self.bases.join(" ")
    }

    pub fn parts(&self) -> usize {
        self.bases.len()
    }

    pub fn contains_name(&self) -> bool {
        self.pattern.contains(WordClass::N.code())
    }
}

/// Every window of the run whose class string is in `patterns`, ordered by
/// window end, then by length.
pub fn find_sequences(run: &ClassRun<'_>, patterns: &PatternSet) -> Vec<SequenceMatch> {
    let classes: Vec<WordClass> = run.words.iter().map(|w| w.class).collect();
    let mut out = Vec::new();
    for end in 1..classes.len() {
        for len in patterns.suffix_match_lengths(&classes[..=end]) {
            out.push(run.window(end + 1 - len, len, MatchKind::Algorithmic));
        }
    }
    out
}

/// Every window of the run whose base forms make up a dictionary phrase,
/// ordered by window end, then by length.
pub fn match_multiwords(run: &ClassRun<'_>, phrases: &MultiwordDictionary) -> Vec<SequenceMatch> {
    let mut out = Vec::new();
    if phrases.is_empty() {
        return out;
    }
    let mut key = String::new();
    for end in 1..run.len() {
        for len in MIN_SEQUENCE_LEN..=phrases.max_len().min(end + 1) {
            let start = end + 1 - len;
            key.clear();
            for (i, w) in run.words[start..=end].iter().enumerate() {
                if i > 0 {
                    key.push(' ');
                }
                key.push_str(&w.base);
            }
            if phrases.contains(&key) {
                out.push(run.window(start, len, MatchKind::Dictionary));
            }
        }
    }
    out
}

/// Protocol line for a sequence: `lex:) <KEY|SEQ = [(KEY/q)]>`.
pub fn render_sequence_protocol(m: &SequenceMatch) -> String {
    let key = m.key();
    format!("lex:) <{key}|SEQ = [({key}/{})]>", m.kind.tag())
}
