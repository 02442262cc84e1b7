//! Run configuration: an optional JSON file mirroring the flags, with
//! explicit flags taking precedence over the file, and the file over the
//! built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use keydyn::ingest::{LogFormat, ParseMode};
use keydyn::types::AnalysisConfig;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Jsonl,
}

impl From<FormatArg> for LogFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => LogFormat::Csv,
            FormatArg::Jsonl => LogFormat::Jsonl,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Lenient,
}

impl From<ModeArg> for ParseMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => ParseMode::Strict,
            ModeArg::Lenient => ParseMode::Lenient,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// JSON mirror of the command-line flags. Unknown keys are rejected so
/// typos fail loudly instead of silently using defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub input: Option<Vec<PathBuf>>,
    pub sleep: Option<PathBuf>,
    pub format: Option<LogFormat>,
    pub mode: Option<ParseMode>,
    pub participant_id: Option<String>,
    pub tz_offset_min: Option<i32>,
    pub gap_threshold_ms: Option<u32>,
    pub top_k: Option<usize>,
    pub min_common_bigrams: Option<usize>,
    pub include_diagonal: Option<bool>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub formats: Option<Vec<OutputFormat>>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading config {}", path.display()), e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))
    }
}

/// Shared analysis flags; every value falls back to the config file and
/// then to the documented default.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct AnalysisFlags {
    /// Exclude inter-key gaps above this many milliseconds [default: 1000]
    #[arg(long)]
    pub gap_threshold_ms: Option<u32>,
    /// How many of the most frequent bigrams the ranking analyses use
    /// [default: 200]
    #[arg(long)]
    pub top_k: Option<usize>,
    /// Shared bigrams required before a rank correlation counts
    /// [default: 5]
    #[arg(long)]
    pub min_common_bigrams: Option<usize>,
    /// Include the diagonal in the consistency-matrix average
    #[arg(long)]
    pub include_diagonal: bool,
}

impl AnalysisFlags {
    pub fn resolve(&self, file: &FileConfig) -> Result<AnalysisConfig, CliError> {
        let defaults = AnalysisConfig::default();
        let config = AnalysisConfig {
            gap_threshold_ms: self
                .gap_threshold_ms
                .or(file.gap_threshold_ms)
                .unwrap_or(defaults.gap_threshold_ms),
            top_k: self.top_k.or(file.top_k).unwrap_or(defaults.top_k),
            min_common_bigrams: self
                .min_common_bigrams
                .or(file.min_common_bigrams)
                .unwrap_or(defaults.min_common_bigrams),
            include_diagonal: self.include_diagonal || file.include_diagonal.unwrap_or(false),
        };
        config.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(config)
    }
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct OutputFlags {
    /// Directory the artifacts are written to
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Artifact formats to write [default: json,csv]
    #[arg(long, value_delimiter = ',')]
    pub formats: Option<Vec<OutputFormat>>,
}

impl OutputFlags {
    pub fn out_dir(&self, file: &FileConfig) -> Result<PathBuf, CliError> {
        self.out_dir
            .clone()
            .or_else(|| file.out_dir.clone())
            .ok_or_else(|| CliError::Config("--out-dir is required".to_string()))
    }

    pub fn formats(&self, file: &FileConfig) -> Vec<OutputFormat> {
        self.formats
            .clone()
            .or_else(|| file.formats.clone())
            .unwrap_or_else(|| vec![OutputFormat::Json, OutputFormat::Csv])
    }
}
