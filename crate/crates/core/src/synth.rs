//! Deterministic synthetic typists. These provide ground truth for the
//! verification suite and desk-scale stand-ins for real logging data.
//!
//! All randomness comes from ChaCha8 seeded with a caller-supplied u64
//! (`ChaCha8Rng::seed_from_u64`), a fixed, portable generator: identical
//! seeds produce identical streams on any platform.

use std::collections::BTreeMap;

use chrono::{Days, NaiveDate};
use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::local_date;
use crate::types::{Bigram, KeyEvent, KeyStream, SleepRecord, SleepSeries};

/// Named keys injected to exercise adjacency breaking.
pub const SPECIAL_KEYS: [&str; 4] = ["BACKSPACE", "ENTER", "LEFT_ARROW", "RIGHT_ARROW"];

/// First keystroke of each generated day, in local milliseconds.
const DAY_START_LOCAL_MS: i64 = 8 * 3_600_000; // 08:00

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("day plan is empty")]
    EmptyDayPlan,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("model has a sleep link but no sleep series was supplied")]
    SleepSeriesRequired,
    #[error("sleep series has no score for the night of {0}")]
    MissingSleepScore(NaiveDate),
    #[error("date range is empty")]
    EmptyRange,
    #[error("{0}: generated events spill past local midnight; lower the keystroke count")]
    DayOverflow(NaiveDate),
}

/// Normal latency law, truncated at 1 ms. Truncation bias is negligible
/// as long as the mean stays at least three standard deviations above
/// zero, which [`TypistModel::sample`] enforces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyModel {
    pub mean_ms: f64,
    pub std_ms: f64,
}

/// Couples the daily latency offset to the prior night's sleep score:
/// offset = slope * score + noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SleepLink {
    pub slope: f64,
    pub noise_std: f64,
}

/// A fully specified synthetic typist.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypistModel {
    pub seed: u64,
    pub participant_id: String,
    pub tz_offset_minutes: i32,
    /// Unigram alphabet (uppercase) and matching draw weights.
    pub letters: Vec<char>,
    pub letter_weights: Vec<f64>,
    /// Timing law per support bigram.
    pub bigram_latency: BTreeMap<Bigram, LatencyModel>,
    /// Timing law for every transition outside the support set
    /// (unsupported letter pairs and anything touching a special key).
    pub background_latency: LatencyModel,
    /// Probability that an event is a special key instead of a letter.
    pub special_key_rate: f64,
    /// (date, target keystroke count) per day, dates strictly ascending.
    pub day_plan: Vec<(NaiveDate, usize)>,
    pub sleep_link: Option<SleepLink>,
}

/// What the generator actually used: the per-bigram true means and the
/// realised per-day latency offsets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub bigram_means: BTreeMap<Bigram, f64>,
    pub bigram_stds: BTreeMap<Bigram, f64>,
    pub day_offsets: BTreeMap<NaiveDate, f64>,
}

/// Knobs for [`TypistModel::sample`]. Latency scales follow what long-run
/// typing logs show: bigram means a couple of hundred milliseconds with
/// spreads of tens of milliseconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Letters drawn from the first `alphabet_size` of A..Z.
    pub alphabet_size: usize,
    /// Distinct bigrams given their own latency law.
    pub support_size: usize,
    /// Support means are drawn uniformly (integer-valued) in this range.
    pub mean_range_ms: (f64, f64),
    /// Support stds are drawn uniformly here, clamped to mean/3.
    pub std_range_ms: (f64, f64),
    pub background_mean_ms: f64,
    pub background_std_ms: f64,
    pub special_key_rate: f64,
    pub keystrokes_per_day: usize,
    pub days: usize,
    pub start_date: NaiveDate,
    pub sleep_link: Option<SleepLink>,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            alphabet_size: 26,
            support_size: 50,
            mean_range_ms: (120.0, 400.0),
            std_range_ms: (20.0, 60.0),
            background_mean_ms: 200.0,
            background_std_ms: 60.0,
            special_key_rate: 0.05,
            keystrokes_per_day: 5000,
            days: 30,
            start_date: NaiveDate::from_ymd_opt(2020, 1, 1).unwrap(),
            sleep_link: None,
        }
    }
}

impl TypistModel {
    /// Draws a model from the parameter ranges, deterministically per
    /// seed: support set, integer-valued means and stds all come from
    /// one ChaCha8 stream.
    pub fn sample(seed: u64, params: &ModelParams) -> Result<Self, SynthError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let support = draw_support(&mut rng, params)?;
        Self::assemble(seed, &mut rng, support, params)
    }

    /// Like [`TypistModel::sample`] but with a fixed support set, so two
    /// independently seeded typists can share bigrams while drawing
    /// unrelated timing laws.
    pub fn sample_with_support(
        seed: u64,
        support: &[Bigram],
        params: &ModelParams,
    ) -> Result<Self, SynthError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::assemble(seed, &mut rng, support.to_vec(), params)
    }

    fn assemble(
        seed: u64,
        rng: &mut ChaCha8Rng,
        support: Vec<Bigram>,
        params: &ModelParams,
    ) -> Result<Self, SynthError> {
        validate_params(params)?;
        let (mean_lo, mean_hi) = params.mean_range_ms;
        let (std_lo, std_hi) = params.std_range_ms;

        let mut bigram_latency = BTreeMap::new();
        for bigram in support {
            // Integer means keep rounded-sample estimates unbiased.
            let mean_ms = rng.gen_range(mean_lo.round() as i64..=mean_hi.round() as i64) as f64;
            let std_ms = rng.gen_range(std_lo..=std_hi).min(mean_ms / 3.0);
            bigram_latency.insert(bigram, LatencyModel { mean_ms, std_ms });
        }

        let letters: Vec<char> = (0..params.alphabet_size)
            .map(|i| (b'A' + i as u8) as char)
            .collect();
        let letter_weights = vec![1.0; letters.len()];
        let day_plan = (0..params.days)
            .map(|i| {
                let date = params
                    .start_date
                    .checked_add_days(Days::new(i as u64))
                    .expect("date overflow");
                (date, params.keystrokes_per_day)
            })
            .collect();

        Ok(Self {
            seed,
            participant_id: format!("synth-{seed}"),
            tz_offset_minutes: 0,
            letters,
            letter_weights,
            bigram_latency,
            background_latency: LatencyModel {
                mean_ms: params.background_mean_ms,
                std_ms: params.background_std_ms,
            },
            special_key_rate: params.special_key_rate,
            day_plan,
            sleep_link: params.sleep_link,
        })
    }

    /// The support set, lexicographic.
    pub fn support(&self) -> Vec<Bigram> {
        self.bigram_latency.keys().copied().collect()
    }

    fn validate(&self) -> Result<(), SynthError> {
        fn valid_law(lm: &LatencyModel) -> bool {
            lm.mean_ms.is_finite() && lm.mean_ms > 0.0 && lm.std_ms.is_finite() && lm.std_ms >= 0.0
        }
        let bad = |msg: String| Err(SynthError::InvalidModel(msg));
        if self.letters.is_empty() {
            return bad("no letters in the unigram alphabet".into());
        }
        if self.letters.iter().any(|c| !c.is_ascii_uppercase()) {
            return bad("unigram alphabet must be uppercase A-Z".into());
        }
        if self.letter_weights.len() != self.letters.len() {
            return bad("letter_weights length must match letters".into());
        }
        if self
            .letter_weights
            .iter()
            .any(|w| !w.is_finite() || *w < 0.0)
        {
            return bad("letter weights must be finite and non-negative".into());
        }
        if self.letter_weights.iter().sum::<f64>() <= 0.0 {
            return bad("letter weights must not all be zero".into());
        }
        for (bigram, lm) in &self.bigram_latency {
            if !valid_law(lm) {
                return bad(format!("bigram {bigram}: mean must be > 0 and std >= 0"));
            }
        }
        if !valid_law(&self.background_latency) {
            return bad("background latency: mean must be > 0 and std >= 0".into());
        }
        if !(0.0..=1.0).contains(&self.special_key_rate) {
            return bad("special_key_rate must be in [0, 1]".into());
        }
        if let Some(link) = &self.sleep_link {
            if !link.noise_std.is_finite() || link.noise_std < 0.0 {
                return bad("sleep link noise_std must be >= 0".into());
            }
        }
        if self.day_plan.windows(2).any(|w| w[1].0 <= w[0].0) {
            return bad("day plan dates must be strictly ascending".into());
        }
        Ok(())
    }
}

fn validate_params(params: &ModelParams) -> Result<(), SynthError> {
    let bad = |msg: &str| Err(SynthError::InvalidModel(msg.to_string()));
    if params.alphabet_size == 0 || params.alphabet_size > 26 {
        return bad("alphabet_size must be in 1..=26");
    }
    if params.support_size > params.alphabet_size * params.alphabet_size {
        return bad("support_size exceeds the bigrams the alphabet can form");
    }
    let (lo, hi) = params.mean_range_ms;
    if !(lo > 0.0 && hi >= lo) {
        return bad("mean_range_ms must be positive and ordered");
    }
    let (slo, shi) = params.std_range_ms;
    if !(slo >= 0.0 && shi >= slo) {
        return bad("std_range_ms must be non-negative and ordered");
    }
    Ok(())
}

fn draw_support(rng: &mut ChaCha8Rng, params: &ModelParams) -> Result<Vec<Bigram>, SynthError> {
    validate_params(params)?;
    let n = params.alphabet_size;
    let mut pairs: Vec<Bigram> = (0..n * n)
        .map(|i| {
            let first = (b'A' + (i / n) as u8) as char;
            let second = (b'A' + (i % n) as u8) as char;
            Bigram::new(first, second).unwrap()
        })
        .collect();
    pairs.shuffle(rng);
    pairs.truncate(params.support_size);
    Ok(pairs)
}

fn day_start_utc_ms(date: NaiveDate, tz_offset_minutes: i32) -> i64 {
    let epoch = NaiveDate::from_ymd_opt(1970, 1, 1).unwrap();
    let days = date.signed_duration_since(epoch).num_days();
    days * 86_400_000 + DAY_START_LOCAL_MS - i64::from(tz_offset_minutes) * 60_000
}

/// Generates the typist's keystroke stream and the ground truth behind
/// it. Letters are drawn from the unigram law, special keys injected at
/// the configured rate, and each inter-key latency comes from the pair's
/// latency law (or the background law) shifted by the day's offset.
///
/// With a sleep link, the day's offset is slope * (prior-night score) +
/// noise, so `sleep` must cover the night before every planned day.
pub fn generate_stream(
    model: &TypistModel,
    sleep: Option<&SleepSeries>,
) -> Result<(KeyStream, GroundTruth), SynthError> {
    model.validate()?;
    if model.day_plan.is_empty() {
        return Err(SynthError::EmptyDayPlan);
    }
    if model.sleep_link.is_some() && sleep.is_none() {
        return Err(SynthError::SleepSeriesRequired);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    let letter_picker =
        WeightedIndex::new(&model.letter_weights).expect("weights validated");
    let mut stream = KeyStream::new(&model.participant_id, model.tz_offset_minutes);
    let mut truth = GroundTruth {
        bigram_means: model
            .bigram_latency
            .iter()
            .map(|(b, lm)| (*b, lm.mean_ms))
            .collect(),
        bigram_stds: model
            .bigram_latency
            .iter()
            .map(|(b, lm)| (*b, lm.std_ms))
            .collect(),
        day_offsets: BTreeMap::new(),
    };

    for &(date, count) in &model.day_plan {
        let offset = match &model.sleep_link {
            Some(link) => {
                let night = date
                    .checked_sub_days(Days::new(1))
                    .ok_or(SynthError::MissingSleepScore(date))?;
                let score = sleep
                    .unwrap()
                    .score_on(night)
                    .ok_or(SynthError::MissingSleepScore(night))?;
                let z: f64 = rng.sample(StandardNormal);
                link.slope * score + link.noise_std * z
            }
            None => 0.0,
        };
        truth.day_offsets.insert(date, offset);
        if count == 0 {
            continue;
        }

        let start = day_start_utc_ms(date, model.tz_offset_minutes);
        if start < 0 {
            return Err(SynthError::InvalidModel(format!(
                "day {date} starts before the epoch"
            )));
        }
        let mut t = start;
        let mut prev_letter: Option<char> = None;
        for i in 0..count {
            let is_special = rng.gen::<f64>() < model.special_key_rate;
            let (key, letter) = if is_special {
                let name = SPECIAL_KEYS[rng.gen_range(0..SPECIAL_KEYS.len())];
                (name.to_string(), None)
            } else {
                let c = model.letters[letter_picker.sample(&mut rng)];
                (c.to_ascii_lowercase().to_string(), Some(c))
            };
            if i > 0 {
                let law = match (prev_letter, letter) {
                    (Some(a), Some(b)) => {
                        let pair = Bigram::new(a, b).expect("alphabet letters");
                        model
                            .bigram_latency
                            .get(&pair)
                            .unwrap_or(&model.background_latency)
                    }
                    _ => &model.background_latency,
                };
                let z: f64 = rng.sample(StandardNormal);
                let latency = (law.mean_ms + offset + law.std_ms * z).round().max(1.0);
                t += latency as i64;
            }
            stream.events.push(KeyEvent::new(t, key));
            prev_letter = letter;
        }
        let last = stream.events.last().unwrap().timestamp_ms;
        if local_date(last, model.tz_offset_minutes) != date {
            return Err(SynthError::DayOverflow(date));
        }
    }

    debug_assert!(stream.is_time_ordered());
    Ok((stream, truth))
}

/// Generates one sleep record per date in `[start, end]`, deterministic
/// per seed: score = round(base + variability * z) clamped to [0, 100],
/// with a `gap_rate` fraction of dates omitted to exercise imputation.
/// If every date would be omitted, the first date is kept as an anchor.
pub fn generate_sleep_series(
    seed: u64,
    start: NaiveDate,
    end: NaiveDate,
    base: f64,
    variability: f64,
    gap_rate: f64,
) -> Result<Vec<SleepRecord>, SynthError> {
    if start > end {
        return Err(SynthError::EmptyRange);
    }
    let bad = |msg: &str| Err(SynthError::InvalidModel(msg.to_string()));
    if !(0.0..=100.0).contains(&base) {
        return bad("base score must be in [0, 100]");
    }
    if !variability.is_finite() || variability < 0.0 {
        return bad("variability must be >= 0");
    }
    if !(0.0..=1.0).contains(&gap_rate) {
        return bad("gap_rate must be in [0, 1]");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first: Option<SleepRecord> = None;
    let mut records = Vec::new();
    for date in start.iter_days().take_while(|d| *d <= end) {
        let z: f64 = rng.sample(StandardNormal);
        let score = (base + variability * z).round().clamp(0.0, 100.0);
        let record = SleepRecord {
            date,
            score,
            imputed: false,
        };
        if first.is_none() {
            first = Some(record.clone());
        }
        if rng.gen::<f64>() >= gap_rate {
            records.push(record);
        }
    }
    if records.is_empty() {
        records.push(first.expect("range is non-empty"));
    }
    Ok(records)
}
