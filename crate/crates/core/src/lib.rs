//! Dictionary-based indexing of scientific text with multiword phrase detection.
//!
//! Tokens are reduced to base forms by a priority-ordered cascade of
//! single-class dictionaries (adjectives `A`, terminology nouns `E`, personal
//! names `N`, general nouns `S`) with per-class suffix rules. Runs of
//! identified words are then matched against word-class patterns such as
//! `AANE` and, optionally, against a dictionary of curated phrases. The
//! resulting sequences feed frequency tables and distribution reports.
//!
//! ```
//! use lexseq::lexicon::{Dictionary, PatternSet, SuffixTable, SynonymMap, WordClass};
//! use lexseq::identifier::Identifier;
//! use lexseq::ingest::strip_latex;
//! use lexseq::pipeline::Engine;
//!
//! let dictionaries = vec![
//!     Dictionary::from_bases("adjectives", WordClass::A, ["local", "symmetric"]).unwrap(),
//!     Dictionary::from_bases("terms", WordClass::E, ["manifold"]).unwrap(),
//!     Dictionary::from_bases("names", WordClass::N, ["finsler"]).unwrap(),
//! ];
//! let identifier = Identifier::new(dictionaries, SuffixTable::bundled(), SynonymMap::empty());
//! let engine = Engine::new(identifier, PatternSet::bundled(), None);
//! let doc = engine.process("d1", &strip_latex("locally symmetrical Finsler manifolds"));
//! let keys: Vec<String> = doc.matches.iter().map(|m| m.key()).collect();
//! assert_eq!(keys, ["finsler manifold", "symmetric finsler manifold", "local symmetric finsler manifold"]);
//! ```

pub mod analytics;
pub mod config;
pub mod identifier;
pub mod ingest;
pub mod lexicon;
pub mod pipeline;
pub mod sequencer;
pub mod tokenizer;

pub use config::{Mode, PipelineConfig};
pub use pipeline::{run, run_analyze_mode, run_index_mode, Engine, Error, RunSummary};
