//! Result serialization. JSON documents are the machine-readable source
//! of truth; the CSVs are derived, plot-ready views (rank-frequency
//! curve, deviation spread, per-bigram scatter, consistency matrix).
//!
//! Every floating-point value is rounded to 6 significant digits before
//! serialization so identical runs produce byte-identical files.

use std::collections::BTreeSet;
use std::io::{self, Write};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    top_overlap, BandReport, BandingParams, DeviationSpread, ExtractionReport, ProfileScore,
    SleepCorrelation, StatsSummary, NORVIG_TOP_BIGRAMS,
};
use crate::types::{AnalysisConfig, Bigram, BigramObservation, ConsistencyMatrix};

/// Rounds to 6 significant digits via the decimal representation, so the
/// result is identical on every platform.
pub fn round_sig6(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.5e}").parse().expect("scientific notation round-trips")
}

/// 6-significant-digit decimal string: `204.333`, `0.6262`, `85`.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{}", round_sig6(x))
}

/// Pretty JSON with a trailing newline.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("document serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BigramStatsRow {
    pub bigram: String,
    pub count: u64,
    pub mean_ms: f64,
    pub std_ms: Option<f64>,
    pub min_ms: u32,
    pub max_ms: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationRow {
    pub bigram: String,
    pub mean_ms: f64,
    pub deviation_ms: f64,
}

/// Whole-period statistics document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsDoc {
    pub participant_id: String,
    pub config: AnalysisConfig,
    pub total_events: usize,
    pub total_observations: usize,
    pub logged_days: usize,
    pub letter_pairs: usize,
    pub dropped_over_threshold: usize,
    pub dropped_non_positive: usize,
    pub overall_mean_ms: Option<f64>,
    /// min(config.top_k, distinct bigrams observed).
    pub effective_top_k: usize,
    /// Overlap of the participant's top-10 with the English reference
    /// ranking; absent with fewer than 10 distinct bigrams.
    pub reference_overlap_top10: Option<usize>,
    pub fraction_within_75ms: Option<f64>,
    /// Frequency order: descending count, ties lexicographic.
    pub bigrams: Vec<BigramStatsRow>,
    /// Top-K deviations from the overall mean, frequency order.
    pub deviations: Vec<DeviationRow>,
    pub banding: BandingParams,
    /// Top-K bigrams whose latency histogram splits into 2+ bands.
    pub multi_band_bigrams: Vec<BandReport>,
}

#[allow(clippy::too_many_arguments)]
pub fn stats_doc(
    participant_id: &str,
    total_events: usize,
    config: &AnalysisConfig,
    extraction: &ExtractionReport,
    summary: &StatsSummary,
    frequency: &[(Bigram, u64)],
    top_k: &[Bigram],
    logged_days: usize,
    spread: Option<&DeviationSpread>,
    banding: &BandingParams,
    multi_band: Vec<BandReport>,
) -> StatsDoc {
    let ranked: Vec<Bigram> = frequency.iter().map(|(b, _)| *b).collect();
    let reference: Vec<Bigram> = NORVIG_TOP_BIGRAMS
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let reference_overlap_top10 = if ranked.len() >= 10 {
        top_overlap(&ranked, &reference, 10).ok()
    } else {
        None
    };

    let bigrams = frequency
        .iter()
        .map(|(bigram, count)| {
            let s = &summary.per_bigram[bigram];
            BigramStatsRow {
                bigram: bigram.to_string(),
                count: *count,
                mean_ms: round_sig6(s.mean_ms),
                std_ms: s.std_ms.map(round_sig6),
                min_ms: s.min_ms,
                max_ms: s.max_ms,
            }
        })
        .collect();

    let deviations = spread
        .map(|sp| {
            sp.deviations
                .iter()
                .map(|(bigram, dev)| DeviationRow {
                    bigram: bigram.to_string(),
                    mean_ms: round_sig6(sp.overall_mean_ms + dev),
                    deviation_ms: round_sig6(*dev),
                })
                .collect()
        })
        .unwrap_or_default();

    StatsDoc {
        participant_id: participant_id.to_string(),
        config: config.clone(),
        total_events,
        total_observations: summary.total_observations,
        logged_days,
        letter_pairs: extraction.letter_pairs,
        dropped_over_threshold: extraction.dropped_over_threshold,
        dropped_non_positive: extraction.dropped_non_positive,
        overall_mean_ms: summary.overall_mean_ms.map(round_sig6),
        effective_top_k: top_k.len(),
        reference_overlap_top10,
        fraction_within_75ms: spread.map(|sp| round_sig6(sp.fraction_within(75.0))),
        bigrams,
        deviations,
        banding: *banding,
        multi_band_bigrams: multi_band,
    }
}

/// Day-on-day consistency document (matrix plus its average).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyDoc {
    pub participant_id: String,
    pub top_k: usize,
    pub effective_top_k: usize,
    pub min_common_bigrams: usize,
    pub include_diagonal: bool,
    pub days: Vec<NaiveDate>,
    pub average_rho: Option<f64>,
    pub defined_off_diagonal: usize,
    pub matrix: Vec<Vec<Option<f64>>>,
}

pub fn consistency_doc(
    participant_id: &str,
    config: &AnalysisConfig,
    effective_top_k: usize,
    matrix: &ConsistencyMatrix,
) -> ConsistencyDoc {
    ConsistencyDoc {
        participant_id: participant_id.to_string(),
        top_k: config.top_k,
        effective_top_k,
        min_common_bigrams: config.min_common_bigrams,
        include_diagonal: config.include_diagonal,
        days: matrix.days.clone(),
        average_rho: matrix.average.map(round_sig6),
        defined_off_diagonal: matrix.defined_off_diagonal(),
        matrix: matrix
            .rho
            .iter()
            .map(|row| row.iter().map(|v| v.map(round_sig6)).collect())
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SleepCorrRow {
    pub bigram: String,
    pub r: f64,
    pub days: usize,
}

/// Sleep-correlation document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SleepCorrDoc {
    pub participant_id: String,
    pub top_k: usize,
    /// Fixed pairing: a typing day correlates with the score of the
    /// night that began the previous calendar date.
    pub alignment: String,
    pub exclude_imputed: bool,
    pub per_bigram: Vec<SleepCorrRow>,
    pub average_r: Option<f64>,
    pub skipped_insufficient_days: usize,
    pub skipped_zero_variance: usize,
    /// Why the average is undefined, when it is.
    pub note: Option<String>,
}

pub fn sleep_corr_doc(
    participant_id: &str,
    config: &AnalysisConfig,
    exclude_imputed: bool,
    corr: &SleepCorrelation,
) -> SleepCorrDoc {
    let note = if corr.average_r.is_none() {
        Some(format!(
            "no bigram had a defined correlation ({} with too few paired days, {} with zero variance)",
            corr.skipped_insufficient_days, corr.skipped_zero_variance
        ))
    } else {
        None
    };
    SleepCorrDoc {
        participant_id: participant_id.to_string(),
        top_k: config.top_k,
        alignment: "prior_night".to_string(),
        exclude_imputed,
        per_bigram: corr
            .per_bigram
            .iter()
            .map(|(bigram, c)| SleepCorrRow {
                bigram: bigram.to_string(),
                r: round_sig6(c.r),
                days: c.days,
            })
            .collect(),
        average_r: corr.average_r.map(round_sig6),
        skipped_insufficient_days: corr.skipped_insufficient_days,
        skipped_zero_variance: corr.skipped_zero_variance,
        note,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnscoredRow {
    pub participant_id: String,
    pub reason: String,
}

/// Identification outcome. `best` is absent when no enrolled profile
/// could be scored against the session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchDoc {
    pub best: Option<String>,
    pub scores: Vec<ProfileScore>,
    pub unscored: Vec<UnscoredRow>,
    pub note: Option<String>,
}

/// Ground truth emitted next to synthetic datasets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthDoc {
    pub seed: u64,
    pub participant_id: String,
    pub bigram_means: Vec<BigramMeanRow>,
    pub day_offsets: Vec<DayOffsetRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BigramMeanRow {
    pub bigram: String,
    pub mean_ms: f64,
    pub std_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayOffsetRow {
    pub date: NaiveDate,
    pub offset_ms: f64,
}

pub fn write_rank_frequency_csv<W: Write>(
    ranked: &[(Bigram, u64)],
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "rank,bigram,count")?;
    for (i, (bigram, count)) in ranked.iter().enumerate() {
        writeln!(out, "{},{bigram},{count}", i + 1)?;
    }
    Ok(())
}

pub fn write_deviation_csv<W: Write>(spread: &DeviationSpread, mut out: W) -> io::Result<()> {
    writeln!(out, "bigram,mean_ms,deviation_ms")?;
    for (bigram, dev) in &spread.deviations {
        writeln!(
            out,
            "{bigram},{},{}",
            fmt_sig6(spread.overall_mean_ms + dev),
            fmt_sig6(*dev)
        )?;
    }
    Ok(())
}

/// One row per observation of an included bigram: day index counts
/// calendar days from the first included observation, so plotting the
/// scatter left to right reproduces the logging period.
pub fn write_scatter_csv<W: Write>(
    observations: &[BigramObservation],
    include: &BTreeSet<Bigram>,
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "bigram,date,day_index,latency_ms")?;
    let first = observations
        .iter()
        .filter(|o| include.contains(&o.bigram))
        .map(|o| o.day)
        .min();
    let Some(first) = first else {
        return Ok(());
    };
    for obs in observations {
        if !include.contains(&obs.bigram) {
            continue;
        }
        let day_index = obs.day.signed_duration_since(first).num_days();
        writeln!(
            out,
            "{},{},{day_index},{}",
            obs.bigram, obs.day, obs.latency_ms
        )?;
    }
    Ok(())
}

/// Square matrix with date row/column labels; undefined cells are empty.
pub fn write_matrix_csv<W: Write>(matrix: &ConsistencyMatrix, mut out: W) -> io::Result<()> {
    write!(out, "date")?;
    for day in &matrix.days {
        write!(out, ",{day}")?;
    }
    writeln!(out)?;
    for (i, day) in matrix.days.iter().enumerate() {
        write!(out, "{day}")?;
        for j in 0..matrix.days.len() {
            match matrix.rho[i][j] {
                Some(v) => write!(out, ",{}", fmt_sig6(v))?,
                None => write!(out, ",")?,
            }
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_sleep_corr_csv<W: Write>(corr: &SleepCorrelation, mut out: W) -> io::Result<()> {
    writeln!(out, "bigram,r,days")?;
    for (bigram, c) in &corr.per_bigram {
        writeln!(out, "{bigram},{},{}", fmt_sig6(c.r), c.days)?;
    }
    Ok(())
}
