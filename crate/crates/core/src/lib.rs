//! Keystroke-dynamics analytics for lifelogging.
//!
//! Ingests timestamped keystroke logs and nightly sleep scores, extracts
//! inter-key latencies for adjacently typed letter pairs (bigrams) under
//! the standard filtering rules (letters only, case folded, gaps above a
//! threshold excluded), and computes the analysis suite on top:
//!
//! - frequency rankings and per-bigram timing statistics
//! - deviation spread around the overall mean
//! - latency banding detection per bigram
//! - day-on-day consistency of bigram speed rankings (Spearman)
//! - daily typing speed vs prior-night sleep score (Pearson)
//! - profile matching across enrolled participants
//!
//! The `synth` module generates deterministic synthetic typists with
//! known ground truth; they drive the verification suite and stand in
//! for real logging data at desk scale.

pub mod analysis;
pub mod export;
pub mod ingest;
pub mod stats;
pub mod synth;
pub mod types;

pub use types::{
    AnalysisConfig, Bigram, BigramObservation, BigramStats, ConsistencyMatrix, KeyEvent,
    KeyStream, SleepRecord, SleepSeries,
};
