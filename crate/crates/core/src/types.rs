//! Domain types shared by every stage of the pipeline.

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of distinct letter bigrams: 26 x 26.
pub const BIGRAM_COUNT: usize = 676;

/// One logged keystroke: the key token and when it was pressed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyEvent {
    /// Milliseconds since the Unix epoch (UTC). Never negative.
    pub timestamp_ms: i64,
    /// Either a single character ("t", "!", " ") or an UPPER_SNAKE name
    /// for a special key ("BACKSPACE", "LEFT_ARROW").
    pub key: String,
}

impl KeyEvent {
    pub fn new(timestamp_ms: i64, key: impl Into<String>) -> Self {
        Self {
            timestamp_ms,
            key: key.into(),
        }
    }

    /// The event's letter, uppercased, if the token is a single ASCII
    /// letter. Everything else (digits, punctuation, named keys) is not
    /// part of typing flow and breaks bigram adjacency.
    pub fn letter(&self) -> Option<char> {
        let mut chars = self.key.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_alphabetic() => Some(c.to_ascii_uppercase()),
            _ => None,
        }
    }
}

/// A participant's raw keystroke log, ordered by timestamp.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyStream {
    pub participant_id: String,
    /// Fixed offset from UTC used for day bucketing, in minutes.
    pub tz_offset_minutes: i32,
    pub events: Vec<KeyEvent>,
}

impl KeyStream {
    pub fn new(participant_id: impl Into<String>, tz_offset_minutes: i32) -> Self {
        Self {
            participant_id: participant_id.into(),
            tz_offset_minutes,
            events: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Timestamps must be non-decreasing; equal timestamps are legal.
    pub fn is_time_ordered(&self) -> bool {
        self.events
            .windows(2)
            .all(|w| w[0].timestamp_ms <= w[1].timestamp_ms)
    }
}

/// An ordered pair of adjacently typed letters, case-folded to uppercase.
///
/// There are exactly [`BIGRAM_COUNT`] values. The `Ord` impl is
/// lexicographic ("AA" < "AB" < ... < "ZZ") and is used as the
/// deterministic tie-breaker throughout.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Bigram {
    first: u8,
    second: u8,
}

impl Bigram {
    /// Builds a bigram from two characters, folding case. Returns `None`
    /// unless both are ASCII letters.
    pub fn new(first: char, second: char) -> Option<Self> {
        if first.is_ascii_alphabetic() && second.is_ascii_alphabetic() {
            Some(Self {
                first: first.to_ascii_uppercase() as u8,
                second: second.to_ascii_uppercase() as u8,
            })
        } else {
            None
        }
    }

    pub fn first(&self) -> char {
        self.first as char
    }

    pub fn second(&self) -> char {
        self.second as char
    }

    /// Dense index in `0..676`, row-major by first letter.
    pub fn index(&self) -> usize {
        (self.first - b'A') as usize * 26 + (self.second - b'A') as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        if index < BIGRAM_COUNT {
            Some(Self {
                first: b'A' + (index / 26) as u8,
                second: b'A' + (index % 26) as u8,
            })
        } else {
            None
        }
    }

    /// All 676 bigrams in lexicographic order.
    pub fn all() -> impl Iterator<Item = Bigram> {
        (0..BIGRAM_COUNT).map(|i| Bigram::from_index(i).unwrap())
    }
}

impl fmt::Display for Bigram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.first(), self.second())
    }
}

impl fmt::Debug for Bigram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("not a two-letter bigram: {0:?}")]
pub struct ParseBigramError(pub String);

impl FromStr for Bigram {
    type Err = ParseBigramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next(), chars.next(), chars.next()) {
            (Some(a), Some(b), None) => {
                Bigram::new(a, b).ok_or_else(|| ParseBigramError(s.to_string()))
            }
            _ => Err(ParseBigramError(s.to_string())),
        }
    }
}

impl TryFrom<String> for Bigram {
    type Error = ParseBigramError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Bigram> for String {
    fn from(b: Bigram) -> String {
        b.to_string()
    }
}

/// One measured inter-key latency that survived filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigramObservation {
    pub bigram: Bigram,
    /// Strictly positive and no larger than the configured gap threshold.
    pub latency_ms: u32,
    /// Local calendar date of the pair's first keystroke.
    pub day: NaiveDate,
}

/// Aggregated timing for one bigram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BigramStats {
    pub bigram: Bigram,
    pub count: u64,
    pub mean_ms: f64,
    /// Sample standard deviation (n-1 denominator); absent when count < 2.
    pub std_ms: Option<f64>,
    pub min_ms: u32,
    pub max_ms: u32,
}

impl BigramStats {
    /// Aggregates a non-empty latency list. Returns `None` for empty input.
    pub fn from_latencies(bigram: Bigram, latencies: &[u32]) -> Option<Self> {
        if latencies.is_empty() {
            return None;
        }
        let n = latencies.len() as f64;
        let sum: f64 = latencies.iter().map(|&v| f64::from(v)).sum();
        let mean = sum / n;
        let std = if latencies.len() >= 2 {
            let ss: f64 = latencies
                .iter()
                .map(|&v| {
                    let d = f64::from(v) - mean;
                    d * d
                })
                .sum();
            Some((ss / (n - 1.0)).sqrt())
        } else {
            None
        };
        Some(Self {
            bigram,
            count: latencies.len() as u64,
            mean_ms: mean,
            std_ms: std,
            min_ms: *latencies.iter().min().unwrap(),
            max_ms: *latencies.iter().max().unwrap(),
        })
    }
}

/// Day-on-day rank-correlation matrix over top-K bigram speed rankings.
///
/// `rho[i][j]` correlates the rankings of `days[i]` and `days[j]`;
/// `None` marks an undefined entry (too few common bigrams, or constant
/// ranks). The matrix is symmetric and defined diagonal entries are 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyMatrix {
    pub days: Vec<NaiveDate>,
    /// Top-K size the rankings were built from.
    pub k: usize,
    pub rho: Vec<Vec<Option<f64>>>,
    /// Mean over defined entries; excludes the diagonal unless the matrix
    /// was built with `include_diagonal`. `None` when nothing is defined.
    pub average: Option<f64>,
}

impl ConsistencyMatrix {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.rho[i][j]
    }

    /// Number of defined off-diagonal entries (counting each unordered
    /// pair twice, as stored).
    pub fn defined_off_diagonal(&self) -> usize {
        let mut n = 0;
        for (i, row) in self.rho.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j && v.is_some() {
                    n += 1;
                }
            }
        }
        n
    }
}

/// One night's sleep score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SleepRecord {
    /// Date the night began (the evening of this calendar date).
    pub date: NaiveDate,
    /// Overall score in [0, 100].
    pub score: f64,
    /// True when the value was filled by imputation rather than observed.
    pub imputed: bool,
}

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("sleep series is empty")]
    Empty,
    #[error("sleep series dates must be consecutive: expected {expected}, found {found}")]
    NotContiguous {
        expected: NaiveDate,
        found: NaiveDate,
    },
    #[error("sleep score {score} on {date} is outside [0, 100]")]
    ScoreOutOfRange { date: NaiveDate, score: f64 },
}

/// A gap-free, date-ordered run of sleep records (post-imputation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SleepSeries {
    records: Vec<SleepRecord>,
}

impl SleepSeries {
    /// Validates contiguity, ordering and score range.
    pub fn new(records: Vec<SleepRecord>) -> Result<Self, SeriesError> {
        let first = records.first().ok_or(SeriesError::Empty)?;
        let mut expected = first.date;
        for r in &records {
            if r.date != expected {
                return Err(SeriesError::NotContiguous {
                    expected,
                    found: r.date,
                });
            }
            if !(0.0..=100.0).contains(&r.score) {
                return Err(SeriesError::ScoreOutOfRange {
                    date: r.date,
                    score: r.score,
                });
            }
            expected = r.date.succ_opt().expect("date overflow");
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[SleepRecord] {
        &self.records
    }

    pub fn start_date(&self) -> NaiveDate {
        self.records[0].date
    }

    pub fn end_date(&self) -> NaiveDate {
        self.records[self.records.len() - 1].date
    }

    pub fn record_on(&self, date: NaiveDate) -> Option<&SleepRecord> {
        let offset = date.signed_duration_since(self.start_date()).num_days();
        if offset < 0 {
            return None;
        }
        self.records.get(offset as usize)
    }

    pub fn score_on(&self, date: NaiveDate) -> Option<f64> {
        self.record_on(date).map(|r| r.score)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("gap_threshold_ms must be positive")]
    NonPositiveGapThreshold,
    #[error("top_k must be in 1..=676, got {0}")]
    TopKOutOfRange(usize),
}

/// Tunables for observation extraction and the correlation analyses.
///
/// The correlation coefficients themselves are fixed: Spearman (on
/// fractional ranks) for day-on-day ranking consistency, Pearson for
/// timing-vs-sleep. Keeping them non-configurable keeps every output
/// comparable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisConfig {
    /// Inter-key gaps above this many milliseconds are not typing flow
    /// and are excluded. The bound is inclusive: a latency equal to the
    /// threshold is kept.
    pub gap_threshold_ms: u32,
    /// How many of the most frequent bigrams the ranking analyses use.
    pub top_k: usize,
    /// Minimum shared bigrams before a rank correlation is considered
    /// defined; below this the entry is absent, never fabricated.
    pub min_common_bigrams: usize,
    /// Whether the consistency-matrix average includes the diagonal.
    pub include_diagonal: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            gap_threshold_ms: 1000,
            top_k: 200,
            min_common_bigrams: 5,
            include_diagonal: false,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.gap_threshold_ms == 0 {
            return Err(ConfigError::NonPositiveGapThreshold);
        }
        if self.top_k == 0 || self.top_k > BIGRAM_COUNT {
            return Err(ConfigError::TopKOutOfRange(self.top_k));
        }
        Ok(())
    }
}
