//! Synthetic corpora with planted phrases, and reference statistics computed
//! from the planted counts alone (no tokenizer, identifier or sequencer).
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use lexseq::identifier::Identifier;
use lexseq::lexicon::{Dictionary, PatternSet, SuffixTable, SynonymMap, WordClass};
use lexseq::pipeline::Engine;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub const BUNDLED_PATTERNS: &str = include_str!("../../data/patterns.txt");

/// The bundled pattern list as plain strings, deduplicated.
pub fn pattern_strings() -> Vec<String> {
    let line = BUNDLED_PATTERNS.lines().find(|l| !l.starts_with('#')).unwrap();
    let set: std::collections::BTreeSet<String> = line.split(',').map(|p| p.trim().to_string()).collect();
    set.into_iter().collect()
}

pub fn class_code(c: WordClass) -> char {
    c.code()
}

#[derive(Debug, Clone)]
pub struct Word {
    pub base: String,
    pub class: WordClass,
}

#[derive(Debug, Clone)]
pub struct Phrase {
    pub words: Vec<Word>,
}

impl Phrase {
    pub fn classes(&self) -> String {
        self.words.iter().map(|w| class_code(w.class)).collect()
    }
}

pub struct SyntheticCorpus {
    pub vocabulary: Vec<Word>,
    pub phrases: Vec<Phrase>,
    /// Planted occurrences per phrase index.
    pub planted: Vec<u64>,
    /// `(doc_id, text)` records.
    pub records: Vec<(String, String)>,
}

const VOWELS: &[u8] = b"aeiou";
const CONSONANTS: &[u8] = b"bcdfghkmprtvz";
const ENDINGS: &[u8] = b"aou";

/// Letter-only pseudo words ending in a, o or u, so that the bundled suffix
/// rules invert exactly and never collide with another vocabulary word.
fn pseudo_word(rng: &mut StdRng) -> String {
    let syllables = rng.gen_range(2..=3);
    let mut w = String::new();
    for _ in 0..syllables {
        w.push(*CONSONANTS.choose(rng).unwrap() as char);
        w.push(*VOWELS.choose(rng).unwrap() as char);
    }
    w.push(*CONSONANTS.choose(rng).unwrap() as char);
    w.push(*ENDINGS.choose(rng).unwrap() as char);
    w
}

fn inflect(word: &Word, rng: &mut StdRng) -> String {
    let base = &word.base;
    let surface = match (word.class, rng.gen_range(0..4)) {
        (_, 0) => base.clone(),
        (WordClass::A, 1) => format!("{base}ly"),
        (WordClass::N, 1) => format!("{base}ian"),
        (WordClass::E | WordClass::S, 1) => format!("{base}s"),
        (WordClass::N, 2) => format!("{base}s"),
        _ => base.clone(),
    };
    if rng.gen_bool(0.2) {
        let mut c = surface.chars();
        let first = c.next().unwrap().to_uppercase().collect::<String>();
        format!("{first}{}", c.as_str())
    } else {
        surface
    }
}

const SEPARATORS: &[&str] = &[". ", " qwzx ", " 2012 ", "; ", " 4x "];

impl SyntheticCorpus {
    /// `docs` records with 1..=4 planted phrases each; phrase popularity is
    /// Zipf-like so that every frequency band of the reports is populated.
    pub fn generate(seed: u64, docs: usize, phrase_count: usize) -> Self {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut seen = HashSet::new();
        let mut vocabulary = Vec::new();
        let classes = [WordClass::A, WordClass::E, WordClass::N, WordClass::S];
        while vocabulary.len() < 240 {
            let w = pseudo_word(&mut rng);
            if seen.insert(w.clone()) {
                let class = classes[vocabulary.len() % 4];
                vocabulary.push(Word { base: w, class });
            }
        }
        let patterns = pattern_strings();
        let by_class = |c: WordClass| -> Vec<Word> { vocabulary.iter().filter(|w| w.class == c).cloned().collect() };
        let pools: Vec<Vec<Word>> = classes.iter().map(|c| by_class(*c)).collect();

        let mut phrases = Vec::new();
        let mut keys = HashSet::new();
        while phrases.len() < phrase_count {
            // Mostly pattern-shaped phrases, some arbitrary class strings.
            let shape: String = if rng.gen_bool(0.85) {
                patterns.choose(&mut rng).unwrap().clone()
            } else {
                let len = rng.gen_range(2..=6);
                (0..len).map(|_| *b"AENS".choose(&mut rng).unwrap() as char).collect()
            };
            let words: Vec<Word> = shape
                .chars()
                .map(|c| {
                    let idx = "AENS".find(c).unwrap();
                    pools[idx].choose(&mut rng).unwrap().clone()
                })
                .collect();
            let key: Vec<&str> = words.iter().map(|w| w.base.as_str()).collect();
            if keys.insert(key.join(" ")) {
                phrases.push(Phrase { words });
            }
        }

        let weights: Vec<f64> = (0..phrases.len()).map(|i| 1.0 / (i as f64 + 1.0)).collect();
        let total: f64 = weights.iter().sum();
        let cumulative: Vec<f64> = weights
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w / total;
                Some(*acc)
            })
            .collect();

        let mut planted = vec![0u64; phrases.len()];
        let mut records = Vec::with_capacity(docs);
        for d in 0..docs {
            let mut text = String::new();
            if rng.gen_bool(0.5) {
                text.push_str("We qwzx ");
            }
            let k = rng.gen_range(1..=4);
            for j in 0..k {
                let r: f64 = rng.gen();
                let idx = cumulative.partition_point(|&c| c < r).min(phrases.len() - 1);
                planted[idx] += 1;
                if j > 0 {
                    text.push_str(SEPARATORS.choose(&mut rng).unwrap());
                }
                let surfaces: Vec<String> = phrases[idx].words.iter().map(|w| inflect(w, &mut rng)).collect();
                text.push_str(&surfaces.join(if rng.gen_bool(0.1) { "-" } else { " " }));
            }
            text.push('.');
            records.push((format!("doc{d:06}"), text));
        }
        SyntheticCorpus {
            vocabulary,
            phrases,
            planted,
            records,
        }
    }

    pub fn dictionaries(&self) -> Vec<Dictionary> {
        [("adjectives", WordClass::A), ("terms", WordClass::E), ("names", WordClass::N), ("system", WordClass::S)]
            .iter()
            .map(|(name, class)| {
                Dictionary::from_bases(
                    *name,
                    *class,
                    self.vocabulary.iter().filter(|w| w.class == *class).map(|w| w.base.as_str()),
                )
                .unwrap()
            })
            .collect()
    }

    pub fn engine(&self, patterns: PatternSet) -> Engine {
        Engine::new(
            Identifier::new(self.dictionaries(), SuffixTable::bundled(), SynonymMap::empty()),
            patterns,
            None,
        )
    }

    pub fn records_tsv(&self) -> String {
        let mut out = String::new();
        for (id, text) in &self.records {
            writeln!(out, "{id}\t{text}").unwrap();
        }
        out
    }

    /// Write the four dictionary files into `dir` and return config TOML
    /// lines for them.
    pub fn write_dictionaries(&self, dir: &std::path::Path) -> String {
        let mut toml = String::new();
        for (i, d) in self.dictionaries().iter().enumerate() {
            let mut bases: Vec<&str> = d.bases().collect();
            bases.sort();
            let file = dir.join(format!("{}.txt", d.name()));
            std::fs::write(&file, bases.join("\n") + "\n").unwrap();
            writeln!(
                toml,
                "[[wordsearcher.dictionary]]\npath = {:?}\nclass = \"{}\"\npriority = {}\n",
                file.display().to_string(),
                class_code(d.class()),
                i + 1
            )
            .unwrap();
        }
        toml
    }
}

/// Reference frequency table: key → (count, parts, contains_name), built by
/// enumerating every window of every planted phrase.
pub type RefTable = BTreeMap<String, (u64, usize, bool)>;

pub fn reference_table(corpus: &SyntheticCorpus, patterns: &HashSet<String>) -> RefTable {
    let mut table = RefTable::new();
    for (phrase, &count) in corpus.phrases.iter().zip(&corpus.planted) {
        if count == 0 {
            continue;
        }
        let classes = phrase.classes();
        let n = phrase.words.len();
        for i in 0..n {
            for j in i + 1..n {
                let len = j - i + 1;
                if len > 8 || !patterns.contains(&classes[i..=j]) {
                    continue;
                }
                let key: Vec<&str> = phrase.words[i..=j].iter().map(|w| w.base.as_str()).collect();
                let entry = table.entry(key.join(" ")).or_insert((0, len, false));
                entry.0 += count;
                entry.2 |= classes[i..=j].contains('N');
            }
        }
    }
    table
}

pub fn ref_top_n(table: &RefTable, n: usize) -> Vec<(String, u64)> {
    let mut all: Vec<(String, u64)> = table.iter().map(|(k, v)| (k.clone(), v.0)).collect();
    all.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    all.truncate(n);
    all
}

pub fn ref_by_parts(table: &RefTable) -> BTreeMap<usize, u64> {
    let mut out: BTreeMap<usize, u64> = (2..=8).map(|p| (p, 0)).collect();
    for (count, parts, _) in table.values() {
        *out.get_mut(parts).unwrap() += count;
    }
    out
}

pub fn ref_histogram(table: &RefTable, max_n: u64) -> BTreeMap<u64, u64> {
    let mut out = BTreeMap::new();
    for (count, _, _) in table.values() {
        if *count <= max_n {
            *out.entry(*count).or_insert(0) += 1;
        }
    }
    out
}

/// `(threshold, total, parts bucket → count)`.
pub fn ref_crosstab(table: &RefTable, thresholds: &[u64], collapse_from: usize) -> Vec<(u64, u64, BTreeMap<usize, u64>)> {
    thresholds
        .iter()
        .map(|&t| {
            let mut buckets: BTreeMap<usize, u64> = (2..=collapse_from).map(|p| (p, 0)).collect();
            let mut total = 0;
            for (count, parts, _) in table.values() {
                if *count > t {
                    total += 1;
                    *buckets.get_mut(&(*parts).min(collapse_from)).unwrap() += 1;
                }
            }
            (t, total, buckets)
        })
        .collect()
}

/// `(name-containing distinct, share, parts → distinct)`.
pub fn ref_name_stats(table: &RefTable) -> (u64, f64, BTreeMap<usize, u64>) {
    let mut by_parts: BTreeMap<usize, u64> = (2..=8).map(|p| (p, 0)).collect();
    let mut count = 0;
    for (_, parts, name) in table.values() {
        if *name {
            count += 1;
            *by_parts.get_mut(parts).unwrap() += 1;
        }
    }
    let share = if table.is_empty() { 0.0 } else { count as f64 / table.len() as f64 };
    (count, share, by_parts)
}
