//! Declarative pipeline configuration (TOML, one section per attendee).
//!
//! ```toml
//! [input]
//! path = "abstracts.tsv"
//! format = "records"        # or "text"; defaults per mode
//!
//! [output]
//! dir = "out"
//!
//! [wordsearcher]
//! suffixes = "suffixes.txt" # optional, bundled table otherwise
//!
//! [[wordsearcher.dictionary]]
//! path = "adjectives.txt"
//! class = "A"
//! priority = 1
//!
//! [synonymer]
//! path = "synonyms.tsv"
//!
//! [sequencer]
//! patterns = "patterns.txt" # optional, bundled list otherwise
//! max_pattern_len = 8
//!
//! [multiworder]
//! path = "phrases.txt"
//!
//! [analytics]
//! top_n = 50
//! thresholds = [500, 200, 100, 50, 20]
//! collapse_parts = 5
//! exclude = "exclude.txt"
//!
//! [pipeline]
//! workers = 4
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::lexicon::{WordClass, MAX_SEQUENCE_LEN, MIN_SEQUENCE_LEN};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{what} not found: {path}")]
    MissingFile { what: String, path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Record input; protocol and per-record index terms.
    Index,
    /// Whole-corpus frequency analysis.
    Analyze,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    /// `id<TAB>text` lines.
    Records,
    /// Plain text; every line is processed as its own unit.
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictionarySpec {
    pub name: String,
    pub path: PathBuf,
    pub class: WordClass,
    pub priority: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportOptions {
    pub top_n: usize,
    pub thresholds: Vec<u64>,
    pub collapse_parts: usize,
    /// Largest occurrence count written to the histogram; all counts when unset.
    pub histogram_max: Option<u64>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            top_n: 50,
            thresholds: vec![500, 200, 100, 50, 20],
            collapse_parts: 5,
            histogram_max: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    /// Sorted by priority.
    pub dictionaries: Vec<DictionarySpec>,
    pub suffixes: Option<PathBuf>,
    pub synonyms: Option<PathBuf>,
    pub patterns: Option<PathBuf>,
    pub multiwords: Option<PathBuf>,
    pub mode: Mode,
    pub input: PathBuf,
    pub input_format: InputFormat,
    pub output: PathBuf,
    pub workers: Option<usize>,
    pub max_pattern_len: usize,
    pub exclude: Option<PathBuf>,
    pub reports: ReportOptions,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    input: RawInput,
    output: RawOutput,
    wordsearcher: RawWordsearcher,
    synonymer: Option<RawPath>,
    sequencer: Option<RawSequencer>,
    multiworder: Option<RawPath>,
    analytics: Option<RawAnalytics>,
    pipeline: Option<RawPipeline>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    path: PathBuf,
    format: Option<InputFormat>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWordsearcher {
    suffixes: Option<PathBuf>,
    #[serde(default)]
    dictionary: Vec<RawDictionary>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDictionary {
    name: Option<String>,
    path: PathBuf,
    class: String,
    priority: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPath {
    path: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSequencer {
    patterns: Option<PathBuf>,
    max_pattern_len: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnalytics {
    top_n: Option<usize>,
    thresholds: Option<Vec<u64>>,
    collapse_parts: Option<usize>,
    histogram_max: Option<u64>,
    exclude: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPipeline {
    workers: Option<usize>,
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
    pub exclude: Option<PathBuf>,
    pub max_pattern_len: Option<usize>,
}

impl PipelineConfig {
    pub fn load(path: &Path, mode: Mode) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        PipelineConfig::parse(&text, base, mode).map_err(|e| match e {
            ConfigError::Parse { message, .. } => ConfigError::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    /// Parses TOML text; relative paths resolve against `base`. Does not
    /// touch the file system; see [`PipelineConfig::validate`].
    pub fn parse(text: &str, base: &Path, mode: Mode) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: PathBuf::from("<config>"),
            message: e.to_string(),
        })?;
        let resolve = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };

        let mut dictionaries = raw
            .wordsearcher
            .dictionary
            .into_iter()
            .map(|d| {
                let class: WordClass = d.class.parse().map_err(ConfigError::Invalid)?;
                let name = d.name.unwrap_or_else(|| {
                    d.path
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| format!("dictionary{}", d.priority))
                });
                Ok(DictionarySpec {
                    name,
                    path: resolve(d.path),
                    class,
                    priority: d.priority,
                })
            })
            .collect::<Result<Vec<_>, ConfigError>>()?;
        dictionaries.sort_by_key(|d| d.priority);

        let analytics = raw.analytics.unwrap_or(RawAnalytics {
            top_n: None,
            thresholds: None,
            collapse_parts: None,
            histogram_max: None,
            exclude: None,
        });
        let defaults = ReportOptions::default();
        let (patterns, max_pattern_len) = match raw.sequencer {
            Some(s) => (s.patterns.map(resolve), s.max_pattern_len.unwrap_or(MAX_SEQUENCE_LEN)),
            None => (None, MAX_SEQUENCE_LEN),
        };

        Ok(PipelineConfig {
            dictionaries,
            suffixes: raw.wordsearcher.suffixes.map(resolve),
            synonyms: raw.synonymer.map(|s| resolve(s.path)),
            patterns,
            multiwords: raw.multiworder.map(|m| resolve(m.path)),
            mode,
            input: resolve(raw.input.path),
            input_format: raw.input.format.unwrap_or(match mode {
                Mode::Index => InputFormat::Records,
                Mode::Analyze => InputFormat::Text,
            }),
            output: resolve(raw.output.dir),
            workers: raw.pipeline.and_then(|p| p.workers),
            max_pattern_len,
            exclude: analytics.exclude.map(resolve),
            reports: ReportOptions {
                top_n: analytics.top_n.unwrap_or(defaults.top_n),
                thresholds: analytics.thresholds.unwrap_or(defaults.thresholds),
                collapse_parts: analytics.collapse_parts.unwrap_or(defaults.collapse_parts),
                histogram_max: analytics.histogram_max,
            },
        })
    }

    pub fn apply(&mut self, overrides: Overrides) {
        if let Some(p) = overrides.input {
            self.input = p;
        }
        if let Some(p) = overrides.output {
            self.output = p;
        }
        if let Some(w) = overrides.workers {
            self.workers = Some(w);
        }
        if let Some(p) = overrides.exclude {
            self.exclude = Some(p);
        }
        if let Some(n) = overrides.max_pattern_len {
            self.max_pattern_len = n;
        }
    }

    /// Checks every invariant and that all referenced files exist.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        if self.dictionaries.is_empty() {
            return invalid("at least one dictionary is required".into());
        }
        for (i, d) in self.dictionaries.iter().enumerate() {
            if d.priority as usize != i + 1 {
                return invalid(format!(
                    "dictionary priorities must be unique and contiguous from 1 (found {} at position {})",
                    d.priority,
                    i + 1
                ));
            }
        }
        if !(MIN_SEQUENCE_LEN..=MAX_SEQUENCE_LEN).contains(&self.max_pattern_len) {
            return invalid(format!(
                "max_pattern_len must be in {MIN_SEQUENCE_LEN}..={MAX_SEQUENCE_LEN}, got {}",
                self.max_pattern_len
            ));
        }
        if self.workers == Some(0) {
            return invalid("workers must be at least 1".into());
        }
        if self.reports.top_n == 0 {
            return invalid("top_n must be at least 1".into());
        }
        if self.reports.thresholds.contains(&0) {
            return invalid("thresholds must be positive".into());
        }
        if self.reports.histogram_max == Some(0) {
            return invalid("histogram_max must be at least 1".into());
        }
        if self.mode == Mode::Index && self.input_format != InputFormat::Records {
            return invalid("index mode requires record input".into());
        }
        let mut files: Vec<(String, &Path)> = self
            .dictionaries
            .iter()
            .map(|d| (format!("dictionary `{}`", d.name), d.path.as_path()))
            .collect();
        for (what, path) in [
            ("suffix table", &self.suffixes),
            ("synonym file", &self.synonyms),
            ("pattern file", &self.patterns),
            ("multiword file", &self.multiwords),
            ("exclusion list", &self.exclude),
        ] {
            if let Some(p) = path {
                files.push((what.to_string(), p.as_path()));
            }
        }
        files.push(("input".to_string(), self.input.as_path()));
        for (what, path) in files {
            if !path.is_file() {
                return Err(ConfigError::MissingFile {
                    what,
                    path: path.to_path_buf(),
                });
            }
        }
        Ok(())
    }

    pub fn worker_count(&self) -> usize {
        self.workers
            .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
    }
}
