//! Pipeline wiring for the two processing modes and their output files.
//!
//! Output directory layout:
//!
//! ```text
//! protocol.txt          index mode: `lex:)` lines in document order
//! index.tsv             index mode: doc_id<TAB>term
//! unknown.txt           one `lex:)` line per unknown occurrence
//! unknown_summary.tsv   token<TAB>count
//! sequences.tsv         analyze mode: pattern-match frequency table
//! multiwords.tsv        analyze mode, with a phrase dictionary
//! reports/*.tsv         analyze mode reports, plus reports/summary.txt
//! ```
//!
//! Documents are processed in chunks on a worker pool; every file is written
//! by a single writer in input order, so the output does not depend on the
//! number of workers.

use std::collections::{HashMap, HashSet};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::analytics::{self, FrequencyTable, FrequencyTables};
use crate::config::{ConfigError, InputFormat, Mode, PipelineConfig};
use crate::identifier::{render_protocol, Identification, Identifier};
use crate::ingest::{self, strip_latex, CleanText, IngestError};
use crate::lexicon::{self, LexiconError, MultiwordDictionary, PatternSet, SuffixTable, SynonymMap};
use crate::sequencer::{find_sequences, match_multiwords, render_sequence_protocol, split_runs, SequenceMatch};
use crate::tokenizer::tokenize;

const CHUNK_SIZE: usize = 1024;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Everything needed to process a document; shared read-only by workers.
#[derive(Debug, Clone)]
pub struct Engine {
    pub identifier: Identifier,
    pub patterns: PatternSet,
    pub multiwords: Option<MultiwordDictionary>,
}

/// Result of processing one document.
#[derive(Debug, Clone)]
pub struct DocumentResult {
    pub doc_id: Arc<str>,
    pub items: Vec<Identification>,
    /// Per class run: pattern matches, then phrase-dictionary matches.
    pub matches: Vec<SequenceMatch>,
    pub dropped: usize,
}

impl Engine {
    pub fn new(identifier: Identifier, patterns: PatternSet, multiwords: Option<MultiwordDictionary>) -> Self {
        let multiwords = multiwords.map(|m| m.canonicalize(identifier.synonyms()));
        Engine {
            identifier,
            patterns,
            multiwords,
        }
    }

    /// Loads every lexicon object named by `config`.
    pub fn from_config(config: &PipelineConfig) -> Result<Self, Error> {
        let dictionaries = config
            .dictionaries
            .iter()
            .map(|d| lexicon::load_named_dictionary(&d.path, &d.name, d.class))
            .collect::<Result<Vec<_>, _>>()?;
        let suffixes = match &config.suffixes {
            Some(p) => lexicon::load_suffix_table(p)?,
            None => SuffixTable::bundled(),
        };
        let synonyms = match &config.synonyms {
            Some(p) => lexicon::load_synonyms(p)?,
            None => SynonymMap::empty(),
        };
        let patterns = match &config.patterns {
            Some(p) => lexicon::load_patterns(p)?,
            None => PatternSet::bundled(),
        }
        .limited_to(config.max_pattern_len);
        let multiwords = config.multiwords.as_deref().map(lexicon::load_multiwords).transpose()?;
        if let Some(m) = &multiwords {
            let orphans = m.orphans(&dictionaries, &synonyms);
            if !orphans.is_empty() {
                log::warn!("multiword constituents found in no dictionary: {}", orphans.join(", "));
            }
        }
        Ok(Engine::new(Identifier::new(dictionaries, suffixes, synonyms), patterns, multiwords))
    }

    pub fn process(&self, doc_id: &str, text: &CleanText) -> DocumentResult {
        let doc_id: Arc<str> = Arc::from(doc_id);
        let tokenized = tokenize(text, &doc_id);
        let items: Vec<Identification> = tokenized.tokens.iter().map(|t| self.identifier.identify(t)).collect();
        let mut matches = Vec::new();
        for run in split_runs(&items) {
            matches.extend(find_sequences(&run, &self.patterns));
            if let Some(m) = &self.multiwords {
                matches.extend(match_multiwords(&run, m));
            }
        }
        DocumentResult {
            doc_id,
            items,
            matches,
            dropped: tokenized.dropped,
        }
    }
}

impl DocumentResult {
    fn sentence_of(&self, ordinal: u32) -> u32 {
        let i = self.items.partition_point(|it| it.token().ordinal < ordinal);
        self.items[i].token().sentence
    }

    /// Protocol lines: per sentence, the word lines followed by its sequence lines.
    pub fn protocol_lines(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.items.len() + self.matches.len());
        let mut next_match = 0;
        let mut i = 0;
        while i < self.items.len() {
            let sentence = self.items[i].token().sentence;
            while i < self.items.len() && self.items[i].token().sentence == sentence {
                out.push(render_protocol(&self.items[i]));
                i += 1;
            }
            while next_match < self.matches.len() && self.sentence_of(self.matches[next_match].start) == sentence {
                out.push(render_sequence_protocol(&self.matches[next_match]));
                next_match += 1;
            }
        }
        out
    }

    /// Distinct index terms in protocol order: word bases and sequence keys.
    pub fn index_terms(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut next_match = 0;
        let mut i = 0;
        let mut push = |term: String, out: &mut Vec<String>| {
            if seen.insert(term.clone()) {
                out.push(term);
            }
        };
        while i < self.items.len() {
            let sentence = self.items[i].token().sentence;
            while i < self.items.len() && self.items[i].token().sentence == sentence {
                if let Some(w) = self.items[i].as_word() {
                    push(w.base.clone(), &mut out);
                }
                i += 1;
            }
            while next_match < self.matches.len() && self.sentence_of(self.matches[next_match].start) == sentence {
                push(self.matches[next_match].key(), &mut out);
                next_match += 1;
            }
        }
        out
    }

    pub fn unknowns(&self) -> impl Iterator<Item = &Identification> {
        self.items.iter().filter(|i| i.as_word().is_none())
    }
}

/// Counters over a whole run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub documents: u64,
    pub tokens: u64,
    pub identified: u64,
    pub unknown: u64,
    pub dropped: u64,
    pub sequence_occurrences: u64,
    pub distinct_sequences: u64,
    pub multiword_occurrences: u64,
    pub distinct_multiwords: u64,
}

impl RunSummary {
    fn add(&mut self, doc: &DocumentResult) {
        self.documents += 1;
        self.tokens += doc.items.len() as u64;
        let unknown = doc.unknowns().count() as u64;
        self.unknown += unknown;
        self.identified += doc.items.len() as u64 - unknown;
        self.dropped += doc.dropped as u64;
    }
}

fn write_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Write {
        path: path.to_path_buf(),
        source,
    }
}

struct Output {
    path: PathBuf,
    writer: BufWriter<File>,
}

impl Output {
    fn create(path: PathBuf) -> Result<Self, Error> {
        let file = File::create(&path).map_err(write_err(&path))?;
        Ok(Output {
            writer: BufWriter::new(file),
            path,
        })
    }

    fn line(&mut self, line: &str) -> Result<(), Error> {
        self.writer
            .write_all(line.as_bytes())
            .and_then(|_| self.writer.write_all(b"\n"))
            .map_err(write_err(&self.path))
    }

    fn finish(mut self) -> Result<(), Error> {
        self.writer.flush().map_err(write_err(&self.path))
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), Error> {
    fs::write(path, content).map_err(write_err(path))
}

/// Work units of the configured input: `(doc_id, text)`.
fn units(config: &PipelineConfig) -> Result<Box<dyn Iterator<Item = Result<(String, CleanText), Error>>>, Error> {
    match config.input_format {
        InputFormat::Records => {
            let records = ingest::parse_records(&config.input)?;
            Ok(Box::new(records.map(|r| {
                let r = r?;
                Ok((r.id, strip_latex(&r.text)))
            })))
        }
        InputFormat::Text => {
            let text = ingest::read_corpus(&config.input)?;
            let stem = config
                .input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "corpus".to_string());
            Ok(Box::new(text.lines.into_iter().enumerate().map(move |(i, line)| {
                Ok((format!("{stem}:{}", i + 1), CleanText { lines: vec![line] }))
            })))
        }
    }
}

/// Runs `engine` over the input in chunks and hands each chunk, in input
/// order, to `sink`.
fn drive<F>(config: &PipelineConfig, engine: &Engine, mut sink: F) -> Result<(), Error>
where
    F: FnMut(Vec<DocumentResult>) -> Result<(), Error>,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.worker_count())
        .build()
        .map_err(|e| ConfigError::Invalid(format!("cannot start worker pool: {e}")))?;
    let mut units = units(config)?;
    loop {
        let chunk: Vec<(String, CleanText)> = units.by_ref().take(CHUNK_SIZE).collect::<Result<_, _>>()?;
        if chunk.is_empty() {
            return Ok(());
        }
        let results = pool.install(|| chunk.par_iter().map(|(id, text)| engine.process(id, text)).collect());
        sink(results)?;
    }
}

#[derive(Default)]
struct UnknownLog {
    counts: HashMap<String, u64>,
}

impl UnknownLog {
    fn record(&mut self, doc: &DocumentResult, out: &mut Output) -> Result<(), Error> {
        for item in doc.unknowns() {
            out.line(&render_protocol(item))?;
            *self.counts.entry(item.token().norm.clone()).or_default() += 1;
        }
        Ok(())
    }

    fn write_summary(self, path: &Path) -> Result<(), Error> {
        let mut rows: Vec<(String, u64)> = self.counts.into_iter().collect();
        rows.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let mut out = Output::create(path.to_path_buf())?;
        for (token, count) in rows {
            out.line(&format!("{token}\t{count}"))?;
        }
        out.finish()
    }
}

fn prepare(config: &PipelineConfig, mode: Mode) -> Result<Engine, Error> {
    if config.mode != mode {
        return Err(ConfigError::Invalid(format!("configuration is for {:?} mode", config.mode)).into());
    }
    config.validate()?;
    let engine = Engine::from_config(config)?;
    fs::create_dir_all(&config.output).map_err(write_err(&config.output))?;
    Ok(engine)
}

/// Index mode: protocol, per-record index terms and the unknown-token files.
pub fn run_index_mode(config: &PipelineConfig) -> Result<RunSummary, Error> {
    let engine = prepare(config, Mode::Index)?;
    let out = &config.output;
    let mut protocol = Output::create(out.join("protocol.txt"))?;
    let mut index = Output::create(out.join("index.tsv"))?;
    let mut unknown = Output::create(out.join("unknown.txt"))?;
    let mut unknown_log = UnknownLog::default();
    let mut summary = RunSummary::default();
    let mut tables = FrequencyTables::default();

    drive(config, &engine, |docs| {
        for doc in docs {
            summary.add(&doc);
            for line in doc.protocol_lines() {
                protocol.line(&line)?;
            }
            for term in doc.index_terms() {
                index.line(&format!("{}\t{term}", doc.doc_id))?;
            }
            unknown_log.record(&doc, &mut unknown)?;
            tables.add_document(&doc.matches);
        }
        Ok(())
    })?;

    protocol.finish()?;
    index.finish()?;
    unknown.finish()?;
    unknown_log.write_summary(&out.join("unknown_summary.tsv"))?;
    fill_table_counts(&mut summary, &tables);
    log::info!("indexed {} records", summary.documents);
    Ok(summary)
}

fn fill_table_counts(summary: &mut RunSummary, tables: &FrequencyTables) {
    summary.sequence_occurrences = tables.algorithmic.occurrences();
    summary.distinct_sequences = tables.algorithmic.len() as u64;
    summary.multiword_occurrences = tables.dictionary.occurrences();
    summary.distinct_multiwords = tables.dictionary.len() as u64;
}

/// Reads an exclusion list: one sequence key per line, `#` comments allowed.
pub fn load_exclusions(path: &Path) -> Result<HashSet<String>, Error> {
    let text = fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase())
        .filter(|l| !l.is_empty())
        .collect())
}

/// Writes the report files for one table view under `dir`, file names
/// prefixed with `prefix`.
pub fn write_reports(dir: &Path, prefix: &str, table: &FrequencyTable, config: &PipelineConfig) -> Result<(), Error> {
    let opts = &config.reports;
    let file = |name: &str| dir.join(format!("{prefix}{name}"));
    let max_n = opts.histogram_max.unwrap_or(u64::MAX);
    let names = table.names_only();

    write_file(&file("top_n.tsv"), &analytics::render_top_n(&analytics::top_n(table, opts.top_n)))?;
    write_file(&file("by_parts.tsv"), &analytics::render_by_parts(table))?;
    write_file(
        &file("histogram.tsv"),
        &analytics::render_histogram(&analytics::occurrence_histogram(table, max_n)),
    )?;
    write_file(
        &file("crosstab.tsv"),
        &analytics::render_crosstab(&analytics::threshold_crosstab(table, &opts.thresholds, opts.collapse_parts)),
    )?;
    write_file(
        &file("names.tsv"),
        &analytics::render_name_stats(&analytics::name_containing_stats(table)),
    )?;
    write_file(&file("names_top_n.tsv"), &analytics::render_top_n(&analytics::top_n(&names, opts.top_n)))?;
    write_file(
        &file("names_crosstab.tsv"),
        &analytics::render_crosstab(&analytics::threshold_crosstab(&names, &opts.thresholds, opts.collapse_parts)),
    )?;
    Ok(())
}

fn render_summary(summary: &RunSummary, tables: &FrequencyTables, with_multiwords: bool) -> String {
    let names = analytics::name_containing_stats(&tables.algorithmic);
    let mut out = format!(
        "documents\t{}\ntokens\t{}\nidentified\t{}\nunknown\t{}\ndropped\t{}\n\
         sequence_occurrences\t{}\ndistinct_sequences\t{}\nname_sequences\t{}\nname_share\t{:.4}\n",
        summary.documents,
        summary.tokens,
        summary.identified,
        summary.unknown,
        summary.dropped,
        summary.sequence_occurrences,
        summary.distinct_sequences,
        names.count,
        names.share,
    );
    if with_multiwords {
        out.push_str(&format!(
            "multiword_occurrences\t{}\ndistinct_multiwords\t{}\ncombined_occurrences\t{}\ndistinct_combined\t{}\n",
            summary.multiword_occurrences,
            summary.distinct_multiwords,
            tables.combined.occurrences(),
            tables.combined.len(),
        ));
    }
    out
}

/// Analyze mode: frequency tables, reports and the unknown-token files.
pub fn run_analyze_mode(config: &PipelineConfig) -> Result<RunSummary, Error> {
    let engine = prepare(config, Mode::Analyze)?;
    let excluded = match &config.exclude {
        Some(p) => load_exclusions(p)?,
        None => HashSet::new(),
    };
    let out = &config.output;
    let mut unknown = Output::create(out.join("unknown.txt"))?;
    let mut unknown_log = UnknownLog::default();
    let mut summary = RunSummary::default();
    let mut tables = FrequencyTables::default();

    drive(config, &engine, |docs| {
        for doc in &docs {
            summary.add(doc);
            unknown_log.record(doc, &mut unknown)?;
            tables.add_document(&doc.matches);
        }
        Ok(())
    })?;
    unknown.finish()?;
    unknown_log.write_summary(&out.join("unknown_summary.tsv"))?;
    fill_table_counts(&mut summary, &tables);

    let with_multiwords = engine.multiwords.is_some();
    write_file(&out.join("sequences.tsv"), &analytics::render_table(&tables.algorithmic))?;
    let reports = out.join("reports");
    fs::create_dir_all(&reports).map_err(write_err(&reports))?;
    write_reports(&reports, "", &tables.algorithmic.without(&excluded), config)?;
    if with_multiwords {
        write_file(&out.join("multiwords.tsv"), &analytics::render_table(&tables.dictionary))?;
        write_reports(&reports, "multiword_", &tables.dictionary.without(&excluded), config)?;
        write_reports(&reports, "combined_", &tables.combined.without(&excluded), config)?;
    }
    write_file(&reports.join("summary.txt"), &render_summary(&summary, &tables, with_multiwords))?;
    log::info!(
        "analyzed {} documents: {} distinct sequences",
        summary.documents,
        summary.distinct_sequences
    );
    Ok(summary)
}

/// Dispatches on `config.mode`.
pub fn run(config: &PipelineConfig) -> Result<RunSummary, Error> {
    match config.mode {
        Mode::Index => run_index_mode(config),
        Mode::Analyze => run_analyze_mode(config),
    }
}
