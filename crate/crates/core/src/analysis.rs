//! The analysis suite: bigram extraction and filtering, frequency
//! rankings, per-bigram timing statistics, deviation spread, banding
//! detection, day-on-day consistency, sleep correlation and profile
//! matching.

use std::collections::BTreeMap;

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::local_date;
use crate::stats::{self, spearman, StatsError};
use crate::types::{
    AnalysisConfig, Bigram, BigramObservation, BigramStats, ConsistencyMatrix, KeyStream,
    SleepSeries,
};

/// Top-10 English bigrams from Peter Norvig's Google Books n-gram counts,
/// used as the cross-corpus reference ranking.
pub const NORVIG_TOP_BIGRAMS: [&str; 10] =
    ["TH", "HE", "IN", "ER", "AN", "RE", "ON", "AT", "EN", "ND"];

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("need at least 2 days, got {0}")]
    TooFewDays(usize),
    #[error("bigram {0} from the top-K set has no stats")]
    MissingBigramStats(Bigram),
    #[error("top-K bigram set is empty")]
    EmptyTopK,
    #[error("sleep series does not cover the night before {0}")]
    SleepNotCovering(NaiveDate),
    #[error("k = {k} exceeds a ranking of length {len}")]
    KExceedsLength { k: usize, len: usize },
    #[error("ranking contains duplicate bigram {0}")]
    DuplicateInRanking(Bigram),
    #[error("no profile shares at least {min_common} bigrams with the session")]
    NoProfileScored {
        min_common: usize,
        /// (participant id, reason) per profile that could not be scored.
        unscored: Vec<(String, String)>,
    },
    #[error("no profiles to match against")]
    EmptyProfileList,
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Filtering tallies produced alongside the observations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionReport {
    /// Observations emitted.
    pub observations: usize,
    /// Consecutive pairs where both keys were letters.
    pub letter_pairs: usize,
    /// Letter pairs dropped because the gap exceeded the threshold.
    pub dropped_over_threshold: usize,
    /// Letter pairs dropped because the timestamps collided (gap <= 0).
    pub dropped_non_positive: usize,
}

/// Walks consecutive event pairs and emits one observation per pair of
/// adjacent letters typed within the gap threshold.
///
/// Any non-letter event (digit, punctuation, named key) breaks adjacency.
/// The bound is inclusive: a gap equal to the threshold is kept. A pair
/// dropped for its gap still lets its second event open the next pair.
/// The observation's day is the local date of the pair's first keystroke.
pub fn extract_bigram_observations(
    stream: &KeyStream,
    config: &AnalysisConfig,
) -> (Vec<BigramObservation>, ExtractionReport) {
    let mut observations = Vec::new();
    let mut report = ExtractionReport::default();
    let threshold = i64::from(config.gap_threshold_ms);

    for pair in stream.events.windows(2) {
        let (first, second) = (&pair[0], &pair[1]);
        let (Some(a), Some(b)) = (first.letter(), second.letter()) else {
            continue;
        };
        report.letter_pairs += 1;
        let dt = second.timestamp_ms - first.timestamp_ms;
        if dt <= 0 {
            report.dropped_non_positive += 1;
            continue;
        }
        if dt > threshold {
            report.dropped_over_threshold += 1;
            continue;
        }
        observations.push(BigramObservation {
            bigram: Bigram::new(a, b).expect("letters checked"),
            latency_ms: dt as u32,
            day: local_date(first.timestamp_ms, stream.tz_offset_minutes),
        });
        report.observations += 1;
    }
    (observations, report)
}

/// Descending by count; ties broken lexicographically by bigram.
pub fn rank_bigrams_by_frequency(observations: &[BigramObservation]) -> Vec<(Bigram, u64)> {
    let mut counts: BTreeMap<Bigram, u64> = BTreeMap::new();
    for obs in observations {
        *counts.entry(obs.bigram).or_insert(0) += 1;
    }
    let mut ranked: Vec<(Bigram, u64)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked
}

/// Per-bigram aggregates plus the overall mean across observations.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsSummary {
    pub per_bigram: BTreeMap<Bigram, BigramStats>,
    /// Mean over all observations, not over bigram means. `None` when
    /// there are no observations.
    pub overall_mean_ms: Option<f64>,
    pub total_observations: usize,
}

pub fn compute_bigram_stats(observations: &[BigramObservation]) -> StatsSummary {
    let mut latencies: BTreeMap<Bigram, Vec<u32>> = BTreeMap::new();
    let mut sum = 0.0;
    for obs in observations {
        latencies.entry(obs.bigram).or_default().push(obs.latency_ms);
        sum += f64::from(obs.latency_ms);
    }
    let per_bigram = latencies
        .into_iter()
        .map(|(bigram, vals)| {
            let stats = BigramStats::from_latencies(bigram, &vals).expect("group is non-empty");
            (bigram, stats)
        })
        .collect();
    let overall = if observations.is_empty() {
        None
    } else {
        Some(sum / observations.len() as f64)
    };
    StatsSummary {
        per_bigram,
        overall_mean_ms: overall,
        total_observations: observations.len(),
    }
}

/// How far each top-K bigram's mean sits from the overall mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationSpread {
    pub overall_mean_ms: f64,
    /// (bigram, bigram mean - overall mean), in top-K order.
    pub deviations: Vec<(Bigram, f64)>,
}

impl DeviationSpread {
    /// Share of bigrams within `window_ms` of the overall mean on either
    /// side.
    pub fn fraction_within(&self, window_ms: f64) -> f64 {
        if self.deviations.is_empty() {
            return 0.0;
        }
        let inside = self
            .deviations
            .iter()
            .filter(|(_, d)| d.abs() <= window_ms)
            .count();
        inside as f64 / self.deviations.len() as f64
    }
}

pub fn deviation_spread(
    stats: &BTreeMap<Bigram, BigramStats>,
    overall_mean_ms: f64,
    top_k: &[Bigram],
) -> Result<DeviationSpread, AnalysisError> {
    if top_k.is_empty() {
        return Err(AnalysisError::EmptyTopK);
    }
    let mut deviations = Vec::with_capacity(top_k.len());
    for &bigram in top_k {
        let s = stats
            .get(&bigram)
            .ok_or(AnalysisError::MissingBigramStats(bigram))?;
        deviations.push((bigram, s.mean_ms - overall_mean_ms));
    }
    Ok(DeviationSpread {
        overall_mean_ms,
        deviations,
    })
}

/// Per-day, per-bigram aggregates.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DailyStatsTable {
    days: BTreeMap<NaiveDate, BTreeMap<Bigram, BigramStats>>,
}

impl DailyStatsTable {
    pub fn from_observations(observations: &[BigramObservation]) -> Self {
        let mut grouped: BTreeMap<NaiveDate, BTreeMap<Bigram, Vec<u32>>> = BTreeMap::new();
        for obs in observations {
            grouped
                .entry(obs.day)
                .or_default()
                .entry(obs.bigram)
                .or_default()
                .push(obs.latency_ms);
        }
        let days = grouped
            .into_iter()
            .map(|(day, bigrams)| {
                let stats = bigrams
                    .into_iter()
                    .map(|(bigram, vals)| {
                        (
                            bigram,
                            BigramStats::from_latencies(bigram, &vals).expect("non-empty"),
                        )
                    })
                    .collect();
                (day, stats)
            })
            .collect();
        Self { days }
    }

    pub fn days(&self) -> impl Iterator<Item = (&NaiveDate, &BTreeMap<Bigram, BigramStats>)> {
        self.days.iter()
    }

    pub fn day(&self, date: &NaiveDate) -> Option<&BTreeMap<Bigram, BigramStats>> {
        self.days.get(date)
    }

    pub fn len(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }

    pub fn first_day(&self) -> Option<NaiveDate> {
        self.days.keys().next().copied()
    }

    pub fn last_day(&self) -> Option<NaiveDate> {
        self.days.keys().next_back().copied()
    }
}

/// One day's speed ranking: bigram -> fractional rank by ascending mean
/// latency (rank 1 = fastest). Only bigrams observed that day appear.
pub type DailyRanking = BTreeMap<Bigram, f64>;

/// Ranks each day's observed top-K bigrams by mean speed.
pub fn daily_mean_speed_rankings(
    table: &DailyStatsTable,
    top_k: &[Bigram],
) -> BTreeMap<NaiveDate, DailyRanking> {
    let mut rankings = BTreeMap::new();
    for (day, per_bigram) in table.days() {
        let present: Vec<(Bigram, f64)> = top_k
            .iter()
            .filter_map(|b| per_bigram.get(b).map(|s| (*b, s.mean_ms)))
            .collect();
        let mut ranking = DailyRanking::new();
        if !present.is_empty() {
            let means: Vec<f64> = present.iter().map(|(_, m)| *m).collect();
            let ranks = stats::fractional_ranks(&means).expect("non-empty, finite");
            for ((bigram, _), rank) in present.into_iter().zip(ranks) {
                ranking.insert(bigram, rank);
            }
        }
        rankings.insert(*day, ranking);
    }
    rankings
}

/// Spearman over the bigrams two rankings share, or `None` when they
/// share fewer than `min_common` or the correlation is undefined.
pub fn ranking_correlation(a: &DailyRanking, b: &DailyRanking, min_common: usize) -> Option<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (bigram, rank_a) in a {
        if let Some(rank_b) = b.get(bigram) {
            xs.push(*rank_a);
            ys.push(*rank_b);
        }
    }
    if xs.len() < min_common {
        return None;
    }
    spearman(&xs, &ys).ok()
}

/// Builds the day-on-day consistency matrix from per-day rankings.
///
/// The diagonal is 1 wherever the self-correlation is defined (enough
/// bigrams, non-constant ranks). The average spans defined entries and
/// skips the diagonal unless `config.include_diagonal` is set.
pub fn consistency_matrix(
    rankings: &BTreeMap<NaiveDate, DailyRanking>,
    config: &AnalysisConfig,
) -> Result<ConsistencyMatrix, AnalysisError> {
    if rankings.len() < 2 {
        return Err(AnalysisError::TooFewDays(rankings.len()));
    }
    let days: Vec<NaiveDate> = rankings.keys().copied().collect();
    let ranks: Vec<&DailyRanking> = rankings.values().collect();
    let n = days.len();
    let mut rho = vec![vec![None; n]; n];

    for i in 0..n {
        rho[i][i] = ranking_correlation(ranks[i], ranks[i], config.min_common_bigrams)
            .map(|_| 1.0);
        for j in (i + 1)..n {
            let value = ranking_correlation(ranks[i], ranks[j], config.min_common_bigrams);
            rho[i][j] = value;
            rho[j][i] = value;
        }
    }

    let mut sum = 0.0;
    let mut count = 0usize;
    for (i, row) in rho.iter().enumerate() {
        for (j, value) in row.iter().enumerate() {
            if i == j && !config.include_diagonal {
                continue;
            }
            if let Some(v) = value {
                sum += v;
                count += 1;
            }
        }
    }
    let average = (count > 0).then(|| sum / count as f64);

    Ok(ConsistencyMatrix {
        days,
        k: config.top_k,
        rho,
        average,
    })
}

/// Pearson correlation of one bigram's daily mean latency with the
/// prior-night sleep score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BigramSleepCorr {
    pub r: f64,
    /// Paired days that went into the coefficient.
    pub days: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SleepCorrelation {
    /// Defined coefficients only; bigrams with too few paired days or
    /// zero variance are absent, never coerced to 0.
    pub per_bigram: BTreeMap<Bigram, BigramSleepCorr>,
    /// Mean of the defined coefficients; `None` when none are defined.
    pub average_r: Option<f64>,
    pub skipped_insufficient_days: usize,
    pub skipped_zero_variance: usize,
}

/// Correlates each top-K bigram's daily mean latency with the sleep score
/// of the previous night.
///
/// Sleep records are dated by the evening the night began, so the score
/// paired with typing day `d` is the record dated `d - 1`. The series
/// must cover the night before every typing day; set `exclude_imputed`
/// to drop pairs whose score was filled by imputation.
pub fn correlate_with_sleep(
    table: &DailyStatsTable,
    sleep: &SleepSeries,
    top_k: &[Bigram],
    exclude_imputed: bool,
) -> Result<SleepCorrelation, AnalysisError> {
    if top_k.is_empty() {
        return Err(AnalysisError::EmptyTopK);
    }
    // Coverage first: every typing day needs its prior night on record.
    let mut prior_night: BTreeMap<NaiveDate, &crate::types::SleepRecord> = BTreeMap::new();
    for (day, _) in table.days() {
        let night = day
            .checked_sub_days(Days::new(1))
            .ok_or(AnalysisError::SleepNotCovering(*day))?;
        let record = sleep
            .record_on(night)
            .ok_or(AnalysisError::SleepNotCovering(*day))?;
        prior_night.insert(*day, record);
    }

    let mut result = SleepCorrelation {
        per_bigram: BTreeMap::new(),
        average_r: None,
        skipped_insufficient_days: 0,
        skipped_zero_variance: 0,
    };

    for &bigram in top_k {
        let mut latencies = Vec::new();
        let mut scores = Vec::new();
        for (day, per_bigram) in table.days() {
            let Some(stats) = per_bigram.get(&bigram) else {
                continue;
            };
            let record = prior_night[day];
            if exclude_imputed && record.imputed {
                continue;
            }
            latencies.push(stats.mean_ms);
            scores.push(record.score);
        }
        if latencies.len() < 2 {
            result.skipped_insufficient_days += 1;
            continue;
        }
        match stats::pearson(&latencies, &scores) {
            Ok(r) => {
                result.per_bigram.insert(
                    bigram,
                    BigramSleepCorr {
                        r,
                        days: latencies.len(),
                    },
                );
            }
            Err(StatsError::ZeroVariance) => result.skipped_zero_variance += 1,
            Err(other) => return Err(other.into()),
        }
    }

    let defined: Vec<f64> = result.per_bigram.values().map(|c| c.r).collect();
    result.average_r = stats::mean(&defined);
    Ok(result)
}

/// Size of the intersection of the two top-k prefixes.
pub fn top_overlap(a: &[Bigram], b: &[Bigram], k: usize) -> Result<usize, AnalysisError> {
    if k > a.len() {
        return Err(AnalysisError::KExceedsLength { k, len: a.len() });
    }
    if k > b.len() {
        return Err(AnalysisError::KExceedsLength { k, len: b.len() });
    }
    for list in [a, b] {
        let mut seen = std::collections::BTreeSet::new();
        for &bigram in list {
            if !seen.insert(bigram) {
                return Err(AnalysisError::DuplicateInRanking(bigram));
            }
        }
    }
    let top_a: std::collections::BTreeSet<Bigram> = a[..k].iter().copied().collect();
    Ok(b[..k].iter().filter(|bg| top_a.contains(bg)).count())
}

/// Histogram-valley banding detection parameters. The defaults are the
/// smallest values that recover a clean two-band mixture without
/// fragmenting a unimodal distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct BandingParams {
    pub bin_width_ms: u32,
    /// A run of occupied bins must hold at least this many observations
    /// in total to count as a band.
    pub min_band_count: usize,
    /// A run of at least this many unoccupied bins between two bands is
    /// a gap.
    pub min_gap_bins: usize,
    /// A bin is occupied only with at least this many observations.
    /// Below the floor it counts as empty, so an isolated tail sample
    /// neither extends a band nor interrupts a gap.
    pub min_bin_count: usize,
    /// Histogram domain is (0, gap_threshold_ms].
    pub gap_threshold_ms: u32,
}

impl Default for BandingParams {
    fn default() -> Self {
        Self {
            bin_width_ms: 25,
            min_band_count: 10,
            min_gap_bins: 2,
            min_bin_count: 2,
            gap_threshold_ms: 1000,
        }
    }
}

/// A maximal run of populated latency bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Band {
    /// Exclusive lower edge in ms.
    pub low_ms: u32,
    /// Inclusive upper edge in ms.
    pub high_ms: u32,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandReport {
    pub bigram: Bigram,
    pub bands: Vec<Band>,
    /// Empty stretches between consecutive bands, as (low, high] edges.
    pub gaps: Vec<(u32, u32)>,
}

/// Detects latency bands for one bigram by histogramming its latencies
/// and keeping maximal occupied runs with enough mass. A bin below the
/// occupancy floor counts as empty, so stray tail samples cannot bridge
/// a valley; a gap is the longest empty run between two consecutive
/// bands, when it spans at least `min_gap_bins` bins.
pub fn detect_timing_bands(
    bigram: Bigram,
    latencies: &[u32],
    params: &BandingParams,
) -> BandReport {
    assert!(params.bin_width_ms > 0, "bin width must be positive");
    let width = params.bin_width_ms;
    let bins = params.gap_threshold_ms.div_ceil(width) as usize;
    let mut counts = vec![0usize; bins];
    for &latency in latencies {
        if latency == 0 || latency > params.gap_threshold_ms {
            continue;
        }
        counts[((latency - 1) / width) as usize] += 1;
    }
    let floor = params.min_bin_count.max(1);

    let edge = |bin: usize| -> (u32, u32) {
        let low = bin as u32 * width;
        let high = ((bin as u32 + 1) * width).min(params.gap_threshold_ms);
        (low, high)
    };

    // Maximal occupied runs with enough total mass.
    let mut bands: Vec<(usize, usize, usize)> = Vec::new(); // (first bin, last bin, count)
    let mut run_start: Option<usize> = None;
    for bin in 0..=bins {
        let occupied = bin < bins && counts[bin] >= floor;
        match (occupied, run_start) {
            (true, None) => run_start = Some(bin),
            (false, Some(start)) => {
                let total: usize = counts[start..bin].iter().sum();
                if total >= params.min_band_count {
                    bands.push((start, bin - 1, total));
                }
                run_start = None;
            }
            _ => {}
        }
    }

    let mut gaps = Vec::new();
    for pair in bands.windows(2) {
        let (_, prev_end, _) = pair[0];
        let (next_start, _, _) = pair[1];
        // Longest run of unoccupied bins strictly between the two bands;
        // sub-floor stragglers do not interrupt it.
        let mut best: Option<(usize, usize)> = None;
        let mut consider = |s: usize, e: usize| {
            if best.map_or(0, |(bs, be)| be - bs + 1) < e - s + 1 {
                best = Some((s, e));
            }
        };
        let mut run_start: Option<usize> = None;
        for (offset, count) in counts[(prev_end + 1)..next_start].iter().enumerate() {
            let bin = prev_end + 1 + offset;
            if *count < floor {
                run_start.get_or_insert(bin);
            } else if let Some(s) = run_start.take() {
                consider(s, bin - 1);
            }
        }
        if let Some(s) = run_start {
            consider(s, next_start - 1);
        }
        if let Some((s, e)) = best {
            if e - s + 1 >= params.min_gap_bins {
                gaps.push((edge(s).0, edge(e).1));
            }
        }
    }

    BandReport {
        bigram,
        bands: bands
            .into_iter()
            .map(|(start, end, count)| Band {
                low_ms: edge(start).0,
                high_ms: edge(end).1,
                count,
            })
            .collect(),
        gaps,
    }
}

/// An enrolled participant's timing signature: mean latency for their
/// top-K bigrams and the speed ordering those means induce.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub participant_id: String,
    pub bigram_means: BTreeMap<Bigram, f64>,
}

impl Profile {
    /// Builds a profile from whole-period stats: top-K bigrams by
    /// frequency (ties lexicographic), keyed to their mean latencies.
    pub fn from_stats(
        participant_id: impl Into<String>,
        stats: &BTreeMap<Bigram, BigramStats>,
        k: usize,
    ) -> Self {
        let mut by_count: Vec<&BigramStats> = stats.values().collect();
        by_count.sort_by(|a, b| b.count.cmp(&a.count).then(a.bigram.cmp(&b.bigram)));
        let bigram_means = by_count
            .into_iter()
            .take(k)
            .map(|s| (s.bigram, s.mean_ms))
            .collect();
        Self {
            participant_id: participant_id.into(),
            bigram_means,
        }
    }

    /// Bigrams ordered fastest to slowest (ties lexicographic).
    pub fn speed_ranking(&self) -> Vec<Bigram> {
        let mut order: Vec<(Bigram, f64)> =
            self.bigram_means.iter().map(|(b, m)| (*b, *m)).collect();
        order.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
        order.into_iter().map(|(b, _)| b).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileScore {
    pub participant_id: String,
    /// Spearman between the session's and the profile's mean-latency
    /// orderings over their shared bigrams.
    pub rho: f64,
    pub shared_bigrams: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub best: String,
    /// Scored profiles, best first (ties by participant id).
    pub scores: Vec<ProfileScore>,
    /// Profiles that could not be scored and why.
    pub unscored: Vec<(String, String)>,
}

/// Scores a session against enrolled profiles and picks the best match.
///
/// Profiles sharing fewer than `min_common` bigrams with the session (or
/// whose correlation is undefined) are reported unscored. Errors only
/// when there are no profiles at all or none could be scored.
pub fn match_profile(
    session: &BTreeMap<Bigram, BigramStats>,
    profiles: &[Profile],
    min_common: usize,
) -> Result<MatchResult, AnalysisError> {
    if profiles.is_empty() {
        return Err(AnalysisError::EmptyProfileList);
    }
    let mut scores = Vec::new();
    let mut unscored = Vec::new();

    for profile in profiles {
        let mut session_means = Vec::new();
        let mut profile_means = Vec::new();
        for (bigram, mean) in &profile.bigram_means {
            if let Some(stats) = session.get(bigram) {
                session_means.push(stats.mean_ms);
                profile_means.push(*mean);
            }
        }
        if session_means.len() < min_common {
            unscored.push((
                profile.participant_id.clone(),
                format!(
                    "shares {} bigrams, need {}",
                    session_means.len(),
                    min_common
                ),
            ));
            continue;
        }
        match spearman(&session_means, &profile_means) {
            Ok(rho) => scores.push(ProfileScore {
                participant_id: profile.participant_id.clone(),
                rho,
                shared_bigrams: session_means.len(),
            }),
            Err(_) => unscored.push((
                profile.participant_id.clone(),
                "rank correlation undefined over shared bigrams".to_string(),
            )),
        }
    }

    if scores.is_empty() {
        return Err(AnalysisError::NoProfileScored {
            min_common,
            unscored,
        });
    }
    scores.sort_by(|a, b| {
        b.rho
            .partial_cmp(&a.rho)
            .unwrap()
            .then_with(|| a.participant_id.cmp(&b.participant_id))
    });
    Ok(MatchResult {
        best: scores[0].participant_id.clone(),
        scores,
        unscored,
    })
}
