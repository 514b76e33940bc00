//! Frequency tables over detected sequences and the reports derived from them.
//!
//! Counting is by occurrence: every match increments its key. The number of
//! keys is the number of distinct sequences. Tables from disjoint shards of a
//! match stream merge by summing counts, so the merge result does not depend
//! on how the stream was partitioned.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::lexicon::{MAX_SEQUENCE_LEN, MIN_SEQUENCE_LEN};
use crate::sequencer::{MatchKind, SequenceMatch};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceStats {
    pub count: u64,
    pub parts: usize,
    pub contains_name: bool,
}

/// Sequence key → occurrence statistics.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    entries: HashMap<String, SequenceStats>,
}

impl FrequencyTable {
    pub fn new() -> Self {
        FrequencyTable::default()
    }

    pub fn add(&mut self, m: &SequenceMatch) {
        self.add_key(m.key(), m.parts(), m.contains_name(), 1);
    }

    /// `contains_name` is sticky: one name-bearing occurrence marks the key.
    pub fn add_key(&mut self, key: String, parts: usize, contains_name: bool, count: u64) {
        let entry = self.entries.entry(key).or_insert(SequenceStats {
            count: 0,
            parts,
            contains_name: false,
        });
        entry.count += count;
        entry.contains_name |= contains_name;
    }

    pub fn merge(&mut self, other: FrequencyTable) {
        if self.entries.is_empty() {
            self.entries = other.entries;
            return;
        }
        for (key, stats) in other.entries {
            self.add_key(key, stats.parts, stats.contains_name, stats.count);
        }
    }

    pub fn get(&self, key: &str) -> Option<&SequenceStats> {
        self.entries.get(key)
    }

    /// Number of distinct sequences.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of all occurrence counts.
    pub fn occurrences(&self) -> u64 {
        self.entries.values().map(|s| s.count).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &SequenceStats)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Entries ordered by descending count, then key.
    pub fn sorted(&self) -> Vec<(&str, &SequenceStats)> {
        let mut all: Vec<_> = self.iter().collect();
        all.sort_unstable_by(|a, b| b.1.count.cmp(&a.1.count).then_with(|| a.0.cmp(b.0)));
        all
    }

    /// Copy without the given keys.
    pub fn without(&self, excluded: &HashSet<String>) -> FrequencyTable {
        if excluded.is_empty() {
            return self.clone();
        }
        FrequencyTable {
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| !excluded.contains(*k))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }

    /// Only the keys whose pattern contained a personal name.
    pub fn names_only(&self) -> FrequencyTable {
        FrequencyTable {
            entries: self
                .entries
                .iter()
                .filter(|(_, v)| v.contains_name)
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }
}

/// Separate tables for pattern matches, phrase-dictionary matches, and their
/// union where a span found by both counts once.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTables {
    pub algorithmic: FrequencyTable,
    pub dictionary: FrequencyTable,
    pub combined: FrequencyTable,
}

impl FrequencyTables {
    /// Adds the matches of a single document.
    pub fn add_document(&mut self, matches: &[SequenceMatch]) {
        let mut spans = HashSet::with_capacity(matches.len());
        for m in matches {
            match m.kind {
                MatchKind::Algorithmic => self.algorithmic.add(m),
                MatchKind::Dictionary => self.dictionary.add(m),
            }
            if spans.insert((m.start, m.parts())) {
                self.combined.add(m);
            }
        }
    }

    pub fn merge(&mut self, other: FrequencyTables) {
        self.algorithmic.merge(other.algorithmic);
        self.dictionary.merge(other.dictionary);
        self.combined.merge(other.combined);
    }
}

/// Builds the tables from a match stream. The matches of one document must be
/// contiguous in the stream.
pub fn accumulate<'a, I>(matches: I) -> FrequencyTables
where
    I: IntoIterator<Item = &'a SequenceMatch>,
{
    let mut tables = FrequencyTables::default();
    let mut doc: Vec<SequenceMatch> = Vec::new();
    let mut current: Option<Arc<str>> = None;
    for m in matches {
        if current.as_ref() != Some(&m.doc_id) {
            tables.add_document(&doc);
            doc.clear();
            current = Some(Arc::clone(&m.doc_id));
        }
        doc.push(m.clone());
    }
    tables.add_document(&doc);
    tables
}

/// The `n` most frequent sequences, ties in key order.
pub fn top_n(table: &FrequencyTable, n: usize) -> Vec<(String, u64)> {
    let mut all: Vec<(&str, u64)> = table.iter().map(|(k, s)| (k, s.count)).collect();
    let order = |a: &(&str, u64), b: &(&str, u64)| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0));
    if n < all.len() {
        all.select_nth_unstable_by(n, order);
        all.truncate(n);
    }
    all.sort_unstable_by(order);
    all.into_iter().map(|(k, c)| (k.to_string(), c)).collect()
}

/// Total occurrences per part count; every length from 2 to 8 is present.
pub fn distribution_by_parts(table: &FrequencyTable) -> BTreeMap<usize, u64> {
    let mut out: BTreeMap<usize, u64> = (MIN_SEQUENCE_LEN..=MAX_SEQUENCE_LEN).map(|p| (p, 0)).collect();
    for (_, s) in table.iter() {
        *out.entry(s.parts).or_default() += s.count;
    }
    out
}

/// Distinct sequences per part count; every length from 2 to 8 is present.
pub fn distinct_by_parts(table: &FrequencyTable) -> BTreeMap<usize, u64> {
    let mut out: BTreeMap<usize, u64> = (MIN_SEQUENCE_LEN..=MAX_SEQUENCE_LEN).map(|p| (p, 0)).collect();
    for (_, s) in table.iter() {
        *out.entry(s.parts).or_default() += 1;
    }
    out
}

/// For each occurrence count `n <= max_n`, how many distinct sequences occur
/// exactly `n` times. Counts with no sequence are omitted.
pub fn occurrence_histogram(table: &FrequencyTable, max_n: u64) -> BTreeMap<u64, u64> {
    let mut out = BTreeMap::new();
    for (_, s) in table.iter() {
        if s.count <= max_n {
            *out.entry(s.count).or_default() += 1;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosstabRow {
    pub threshold: u64,
    /// Distinct sequences occurring more than `threshold` times.
    pub total: u64,
    /// Keyed by part count; the `collapse_from` bucket holds that length and longer.
    pub by_parts: BTreeMap<usize, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crosstab {
    pub collapse_from: usize,
    pub rows: Vec<CrosstabRow>,
}

/// Distinct sequences above each threshold, broken down by part count.
/// Sequences of `collapse_from` or more parts share one bucket.
pub fn threshold_crosstab(table: &FrequencyTable, thresholds: &[u64], collapse_from: usize) -> Crosstab {
    let collapse_from = collapse_from.clamp(MIN_SEQUENCE_LEN, MAX_SEQUENCE_LEN);
    let rows = thresholds
        .iter()
        .map(|&threshold| {
            let mut by_parts: BTreeMap<usize, u64> = (MIN_SEQUENCE_LEN..=collapse_from).map(|p| (p, 0)).collect();
            let mut total = 0;
            for (_, s) in table.iter().filter(|(_, s)| s.count > threshold) {
                total += 1;
                *by_parts.entry(s.parts.min(collapse_from)).or_default() += 1;
            }
            CrosstabRow {
                threshold,
                total,
                by_parts,
            }
        })
        .collect();
    Crosstab { collapse_from, rows }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NameStats {
    /// Distinct sequences containing a personal name.
    pub count: u64,
    /// All distinct sequences.
    pub total: u64,
    pub share: f64,
    pub by_parts: BTreeMap<usize, u64>,
}

pub fn name_containing_stats(table: &FrequencyTable) -> NameStats {
    let names = table.names_only();
    let count = names.len() as u64;
    let total = table.len() as u64;
    NameStats {
        count,
        total,
        share: if total == 0 { 0.0 } else { count as f64 / total as f64 },
        by_parts: distinct_by_parts(&names),
    }
}

fn parts_label(parts: usize, collapsed: bool) -> String {
    if collapsed {
        format!("{parts} or more parts")
    } else {
        format!("{parts} parts")
    }
}

pub fn render_top_n(rows: &[(String, u64)]) -> String {
    let mut out = String::from("count\tsequence\n");
    for (key, count) in rows {
        writeln!(out, "{count}\t{key}").unwrap();
    }
    out
}

pub fn render_by_parts(table: &FrequencyTable) -> String {
    let occurrences = distribution_by_parts(table);
    let distinct = distinct_by_parts(table);
    let mut out = String::from("parts\toccurrences\tdistinct\n");
    for (parts, occ) in occurrences.iter().rev() {
        writeln!(out, "{parts}\t{occ}\t{}", distinct[parts]).unwrap();
    }
    out
}

pub fn render_histogram(histogram: &BTreeMap<u64, u64>) -> String {
    let mut out = String::from("n\tdistinct_count\n");
    for (n, c) in histogram {
        writeln!(out, "{n}\t{c}").unwrap();
    }
    out
}

pub fn render_crosstab(tab: &Crosstab) -> String {
    let mut out = String::from("threshold\ttotal");
    for parts in (MIN_SEQUENCE_LEN..=tab.collapse_from).rev() {
        let collapsed = parts == tab.collapse_from && parts < MAX_SEQUENCE_LEN;
        write!(out, "\t{}", parts_label(parts, collapsed)).unwrap();
    }
    out.push('\n');
    for row in &tab.rows {
        write!(out, "{}\t{}", row.threshold, row.total).unwrap();
        for count in row.by_parts.values().rev() {
            write!(out, "\t{count}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn render_name_stats(stats: &NameStats) -> String {
    let mut out = String::from("name_sequences\tall_sequences\tshare");
    for parts in stats.by_parts.keys().rev() {
        write!(out, "\t{}", parts_label(*parts, false)).unwrap();
    }
    write!(out, "\n{}\t{}\t{:.4}", stats.count, stats.total, stats.share).unwrap();
    for count in stats.by_parts.values().rev() {
        write!(out, "\t{count}").unwrap();
    }
    out.push('\n');
    out
}

/// The raw table: `key, count, parts, contains_name`, most frequent first.
pub fn render_table(table: &FrequencyTable) -> String {
    let mut out = String::from("sequence\tcount\tparts\tcontains_name\n");
    for (key, s) in table.sorted() {
        writeln!(out, "{key}\t{}\t{}\t{}", s.count, s.parts, s.contains_name).unwrap();
    }
    out
}
