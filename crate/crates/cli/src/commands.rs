//! The subcommands: ingest -> store, the analysis commands over a store,
//! dataset synthesis and the one-shot export. Identical inputs, config
//! and seed always produce byte-identical artifacts.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use chrono::{Days, NaiveDate};
use clap::Args;
use keydyn::analysis::{
    compute_bigram_stats, consistency_matrix, correlate_with_sleep, daily_mean_speed_rankings,
    detect_timing_bands, deviation_spread, extract_bigram_observations, match_profile,
    rank_bigrams_by_frequency, AnalysisError, BandingParams, DailyStatsTable, DeviationSpread,
    ExtractionReport, Profile, ProfileScore, StatsSummary,
};
use keydyn::export::{
    self, consistency_doc, round_sig6, sleep_corr_doc, stats_doc, to_json_pretty,
    write_deviation_csv, write_matrix_csv, write_rank_frequency_csv, write_scatter_csv,
    write_sleep_corr_csv, MatchDoc, SleepCorrDoc, TruthDoc, UnscoredRow,
};
use keydyn::ingest::{
    impute_sleep, merge_streams, parse_keystroke_log, parse_sleep_csv, write_keystroke_jsonl,
    write_sleep_csv, IngestError, ParseReport,
};
use keydyn::synth::{generate_sleep_series, generate_stream, ModelParams, SleepLink, TypistModel};
use keydyn::types::{AnalysisConfig, Bigram, BigramObservation, KeyStream};

use crate::config::{AnalysisFlags, FileConfig, FormatArg, ModeArg, OutputFlags, OutputFormat};
use crate::error::CliError;
use crate::store::{read_store, write_store, StoreMeta};

fn write_artifact(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

fn open_reader(path: &Path) -> Result<BufReader<File>, CliError> {
    let file =
        File::open(path).map_err(|e| CliError::io(format!("opening {}", path.display()), e))?;
    Ok(BufReader::new(file))
}

// ---------------------------------------------------------------- ingest

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Keystroke log(s) to ingest; repeat for multiple files
    #[arg(long)]
    pub input: Vec<PathBuf>,
    /// Input layout
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// strict aborts on the first bad line; lenient skips and repairs
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Participant the events belong to [default: first input's stem]
    #[arg(long)]
    pub participant_id: Option<String>,
    /// Fixed offset from UTC for day bucketing, in minutes [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub tz_offset_min: Option<i32>,
    #[command(flatten)]
    pub out: OutputFlags,
}

pub fn cmd_ingest(args: &IngestArgs, file: &FileConfig) -> Result<(), CliError> {
    let inputs: Vec<PathBuf> = if args.input.is_empty() {
        file.input.clone().unwrap_or_default()
    } else {
        args.input.clone()
    };
    if inputs.is_empty() {
        return Err(CliError::Config("--input is required".to_string()));
    }
    let format = args.format.map(Into::into).or(file.format).unwrap_or(
        keydyn::ingest::LogFormat::Csv,
    );
    let mode = args
        .mode
        .map(Into::into)
        .or(file.mode)
        .unwrap_or(keydyn::ingest::ParseMode::Strict);
    let tz = args.tz_offset_min.or(file.tz_offset_min).unwrap_or(0);
    let participant = args
        .participant_id
        .clone()
        .or_else(|| file.participant_id.clone())
        .unwrap_or_else(|| {
            inputs[0]
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "participant".to_string())
        });
    let out_dir = args.out.out_dir(file)?;

    let mut streams = Vec::new();
    let mut report = ParseReport::default();
    for path in &inputs {
        let reader = open_reader(path)?;
        let (stream, r) = parse_keystroke_log(reader, format, mode, &participant, tz)
            .map_err(|e| match e {
                IngestError::Io(err) => CliError::io(format!("reading {}", path.display()), err),
                other => CliError::Parse(format!("{}: {other}", path.display())),
            })?;
        report.lines_skipped += r.lines_skipped;
        report.reordered |= r.reordered;
        if report.first_error.is_none() {
            report.first_error = r.first_error;
        }
        streams.push(stream);
    }
    // Concatenation across files may itself be out of order; the merge
    // repairs it, so only note it in the report.
    report.reordered |= streams.windows(2).any(|w| {
        match (w[0].events.last(), w[1].events.first()) {
            (Some(a), Some(b)) => a.timestamp_ms > b.timestamp_ms,
            _ => false,
        }
    });
    let merged = merge_streams(streams)?;
    report.events_accepted = merged.len();

    let meta = StoreMeta {
        participant_id: participant,
        tz_offset_minutes: tz,
        events: merged.len(),
        sources: inputs.iter().map(|p| p.display().to_string()).collect(),
        report: report.clone(),
    };
    write_store(&out_dir, &merged, &meta)?;
    println!(
        "ingested {} events from {} file(s) into {} ({} lines skipped{})",
        merged.len(),
        inputs.len(),
        out_dir.display(),
        report.lines_skipped,
        if report.reordered { ", reordered" } else { "" },
    );
    Ok(())
}

// -------------------------------------------------------- shared analysis

struct Analyzed {
    stream: KeyStream,
    config: AnalysisConfig,
    observations: Vec<BigramObservation>,
    extraction: ExtractionReport,
    summary: StatsSummary,
    frequency: Vec<(Bigram, u64)>,
    top_k: Vec<Bigram>,
}

impl Analyzed {
    fn participant(&self) -> &str {
        &self.stream.participant_id
    }

    fn logged_days(&self) -> usize {
        let days: BTreeSet<NaiveDate> = self
            .stream
            .events
            .iter()
            .map(|ev| keydyn::ingest::local_date(ev.timestamp_ms, self.stream.tz_offset_minutes))
            .collect();
        days.len()
    }

    fn spread(&self) -> Option<DeviationSpread> {
        let mean = self.summary.overall_mean_ms?;
        if self.top_k.is_empty() {
            return None;
        }
        Some(
            deviation_spread(&self.summary.per_bigram, mean, &self.top_k)
                .expect("top-K bigrams come from the same stats"),
        )
    }
}

fn analyze(
    store: &Path,
    flags: &AnalysisFlags,
    file: &FileConfig,
) -> Result<Analyzed, CliError> {
    let config = flags.resolve(file)?;
    let (stream, _meta) = read_store(store)?;
    let (observations, extraction) = extract_bigram_observations(&stream, &config);
    let summary = compute_bigram_stats(&observations);
    let frequency = rank_bigrams_by_frequency(&observations);
    let top_k: Vec<Bigram> = frequency
        .iter()
        .take(config.top_k)
        .map(|(b, _)| *b)
        .collect();
    Ok(Analyzed {
        stream,
        config,
        observations,
        extraction,
        summary,
        frequency,
        top_k,
    })
}

fn map_analysis_err(e: AnalysisError) -> CliError {
    CliError::Config(e.to_string())
}

// ----------------------------------------------------------------- stats

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Event store directory produced by `ingest` or `synth`
    #[arg(long)]
    pub store: PathBuf,
    #[command(flatten)]
    pub analysis: AnalysisFlags,
    #[command(flatten)]
    pub out: OutputFlags,
}

fn write_stats_artifacts(
    analyzed: &Analyzed,
    dir: &Path,
    formats: &[OutputFormat],
) -> Result<(), CliError> {
    let banding = BandingParams {
        gap_threshold_ms: analyzed.config.gap_threshold_ms,
        ..BandingParams::default()
    };
    let mut latencies: BTreeMap<Bigram, Vec<u32>> = BTreeMap::new();
    let top_set: BTreeSet<Bigram> = analyzed.top_k.iter().copied().collect();
    for obs in &analyzed.observations {
        if top_set.contains(&obs.bigram) {
            latencies.entry(obs.bigram).or_default().push(obs.latency_ms);
        }
    }
    let multi_band = analyzed
        .top_k
        .iter()
        .filter_map(|bigram| {
            let report = detect_timing_bands(*bigram, &latencies[bigram], &banding);
            (report.bands.len() >= 2).then_some(report)
        })
        .collect();

    let spread = analyzed.spread();
    let doc = stats_doc(
        analyzed.participant(),
        analyzed.stream.len(),
        &analyzed.config,
        &analyzed.extraction,
        &analyzed.summary,
        &analyzed.frequency,
        &analyzed.top_k,
        analyzed.logged_days(),
        spread.as_ref(),
        &banding,
        multi_band,
    );

    if formats.contains(&OutputFormat::Json) {
        write_artifact(dir, "stats.json", to_json_pretty(&doc).as_bytes())?;

        let mut profile =
            Profile::from_stats(analyzed.participant(), &analyzed.summary.per_bigram, analyzed.config.top_k);
        for mean in profile.bigram_means.values_mut() {
            *mean = round_sig6(*mean);
        }
        write_artifact(dir, "profile.json", to_json_pretty(&profile).as_bytes())?;
    }
    if formats.contains(&OutputFormat::Csv) {
        let mut buf = Vec::new();
        write_rank_frequency_csv(&analyzed.frequency, &mut buf)
            .map_err(|e| CliError::io("rank_frequency.csv", e))?;
        write_artifact(dir, "rank_frequency.csv", &buf)?;

        let mut buf = Vec::new();
        match &spread {
            Some(s) => write_deviation_csv(s, &mut buf)
                .map_err(|e| CliError::io("deviation.csv", e))?,
            None => buf.extend_from_slice(b"bigram,mean_ms,deviation_ms\n"),
        }
        write_artifact(dir, "deviation.csv", &buf)?;

        let mut buf = Vec::new();
        write_scatter_csv(&analyzed.observations, &top_set, &mut buf)
            .map_err(|e| CliError::io("scatter.csv", e))?;
        write_artifact(dir, "scatter.csv", &buf)?;
    }

    println!(
        "stats: {} events, {} observations over {} days, {} distinct bigrams, overall mean {}",
        analyzed.stream.len(),
        analyzed.summary.total_observations,
        analyzed.logged_days(),
        analyzed.frequency.len(),
        doc.overall_mean_ms
            .map(|m| format!("{} ms", export::fmt_sig6(m)))
            .unwrap_or_else(|| "n/a".to_string()),
    );
    Ok(())
}

pub fn cmd_stats(args: &StatsArgs, file: &FileConfig) -> Result<(), CliError> {
    let analyzed = analyze(&args.store, &args.analysis, file)?;
    let dir = args.out.out_dir(file)?;
    write_stats_artifacts(&analyzed, &dir, &args.out.formats(file))
}

// ----------------------------------------------------------- consistency

#[derive(Debug, Args)]
pub struct ConsistencyArgs {
    /// Event store directory produced by `ingest` or `synth`
    #[arg(long)]
    pub store: PathBuf,
    #[command(flatten)]
    pub analysis: AnalysisFlags,
    #[command(flatten)]
    pub out: OutputFlags,
}

fn write_consistency_artifacts(
    analyzed: &Analyzed,
    dir: &Path,
    formats: &[OutputFormat],
) -> Result<(), CliError> {
    let table = DailyStatsTable::from_observations(&analyzed.observations);
    let rankings = daily_mean_speed_rankings(&table, &analyzed.top_k);
    let matrix = consistency_matrix(&rankings, &analyzed.config).map_err(map_analysis_err)?;
    let doc = consistency_doc(
        analyzed.participant(),
        &analyzed.config,
        analyzed.top_k.len(),
        &matrix,
    );
    if formats.contains(&OutputFormat::Json) {
        write_artifact(dir, "consistency.json", to_json_pretty(&doc).as_bytes())?;
    }
    if formats.contains(&OutputFormat::Csv) {
        let mut buf = Vec::new();
        write_matrix_csv(&matrix, &mut buf).map_err(|e| CliError::io("matrix.csv", e))?;
        write_artifact(dir, "matrix.csv", &buf)?;
    }
    println!(
        "consistency: {} days, average rho {} over {} defined day pairs",
        matrix.days.len(),
        doc.average_rho
            .map(export::fmt_sig6)
            .unwrap_or_else(|| "undefined".to_string()),
        doc.defined_off_diagonal / 2,
    );
    Ok(())
}

pub fn cmd_consistency(args: &ConsistencyArgs, file: &FileConfig) -> Result<(), CliError> {
    let analyzed = analyze(&args.store, &args.analysis, file)?;
    let dir = args.out.out_dir(file)?;
    write_consistency_artifacts(&analyzed, &dir, &args.out.formats(file))
}

// ------------------------------------------------------------ sleep-corr

#[derive(Debug, Args)]
pub struct SleepCorrArgs {
    /// Event store directory produced by `ingest` or `synth`
    #[arg(long)]
    pub store: PathBuf,
    /// Sleep CSV ("date,score", ISO-8601 dates)
    #[arg(long)]
    pub sleep: Option<PathBuf>,
    /// Drop pairs whose prior-night score was imputed
    #[arg(long)]
    pub exclude_imputed: bool,
    #[command(flatten)]
    pub analysis: AnalysisFlags,
    #[command(flatten)]
    pub out: OutputFlags,
}

fn write_sleep_artifacts(
    analyzed: &Analyzed,
    sleep_path: &Path,
    exclude_imputed: bool,
    dir: &Path,
    formats: &[OutputFormat],
) -> Result<(), CliError> {
    let records = parse_sleep_csv(open_reader(sleep_path)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", sleep_path.display())))?;

    let table = DailyStatsTable::from_observations(&analyzed.observations);
    let doc: SleepCorrDoc = if analyzed.top_k.is_empty() {
        SleepCorrDoc {
            participant_id: analyzed.participant().to_string(),
            top_k: analyzed.config.top_k,
            alignment: "prior_night".to_string(),
            exclude_imputed,
            per_bigram: Vec::new(),
            average_r: None,
            skipped_insufficient_days: 0,
            skipped_zero_variance: 0,
            note: Some("no bigram observations; nothing to correlate".to_string()),
        }
    } else {
        if records.is_empty() {
            return Err(IngestError::NoObservedRecords.into());
        }
        // The series must cover the night before every typing day, so
        // impute over the union of the observed records and that window.
        let needed_start = table
            .first_day()
            .unwrap()
            .checked_sub_days(Days::new(1))
            .expect("date in range");
        let needed_end = table
            .last_day()
            .unwrap()
            .checked_sub_days(Days::new(1))
            .expect("date in range");
        let start = needed_start.min(records.first().unwrap().date);
        let end = needed_end.max(records.last().unwrap().date);
        let series = impute_sleep(&records, start, end)?;
        let corr = correlate_with_sleep(&table, &series, &analyzed.top_k, exclude_imputed)
            .map_err(map_analysis_err)?;

        if formats.contains(&OutputFormat::Csv) {
            let mut buf = Vec::new();
            write_sleep_corr_csv(&corr, &mut buf)
                .map_err(|e| CliError::io("sleep_correlation.csv", e))?;
            write_artifact(dir, "sleep_correlation.csv", &buf)?;
        }
        sleep_corr_doc(analyzed.participant(), &analyzed.config, exclude_imputed, &corr)
    };

    if formats.contains(&OutputFormat::Json) {
        write_artifact(dir, "sleep_correlation.json", to_json_pretty(&doc).as_bytes())?;
    }
    println!(
        "sleep correlation: {} bigrams defined, average r {}",
        doc.per_bigram.len(),
        doc.average_r
            .map(export::fmt_sig6)
            .unwrap_or_else(|| "undefined".to_string()),
    );
    Ok(())
}

pub fn cmd_sleep_corr(args: &SleepCorrArgs, file: &FileConfig) -> Result<(), CliError> {
    let sleep_path = args
        .sleep
        .clone()
        .or_else(|| file.sleep.clone())
        .ok_or_else(|| CliError::Config("--sleep is required".to_string()))?;
    let analyzed = analyze(&args.store, &args.analysis, file)?;
    let dir = args.out.out_dir(file)?;
    write_sleep_artifacts(
        &analyzed,
        &sleep_path,
        args.exclude_imputed,
        &dir,
        &args.out.formats(file),
    )
}

// -------------------------------------------------------------- identify

#[derive(Debug, Args)]
pub struct IdentifyArgs {
    /// Event store holding the session to identify
    #[arg(long)]
    pub store: PathBuf,
    /// Enrolled profile JSON (written by `stats`); repeat per profile
    #[arg(long = "profile")]
    pub profiles: Vec<PathBuf>,
    #[command(flatten)]
    pub analysis: AnalysisFlags,
    #[command(flatten)]
    pub out: OutputFlags,
}

pub fn cmd_identify(args: &IdentifyArgs, file: &FileConfig) -> Result<(), CliError> {
    if args.profiles.is_empty() {
        return Err(CliError::Config(
            "at least one --profile is required".to_string(),
        ));
    }
    let mut profiles = Vec::new();
    for path in &args.profiles {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        let profile: Profile = serde_json::from_str(&text)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        profiles.push(profile);
    }

    let analyzed = analyze(&args.store, &args.analysis, file)?;
    let dir = args.out.out_dir(file)?;

    let doc = match match_profile(
        &analyzed.summary.per_bigram,
        &profiles,
        analyzed.config.min_common_bigrams,
    ) {
        Ok(result) => MatchDoc {
            best: Some(result.best),
            scores: result
                .scores
                .into_iter()
                .map(|s| ProfileScore {
                    rho: round_sig6(s.rho),
                    ..s
                })
                .collect(),
            unscored: result
                .unscored
                .into_iter()
                .map(|(participant_id, reason)| UnscoredRow {
                    participant_id,
                    reason,
                })
                .collect(),
            note: None,
        },
        // An undefined match is a reportable outcome, not a failure.
        Err(AnalysisError::NoProfileScored { min_common, unscored }) => MatchDoc {
            best: None,
            scores: Vec::new(),
            unscored: unscored
                .into_iter()
                .map(|(participant_id, reason)| UnscoredRow {
                    participant_id,
                    reason,
                })
                .collect(),
            note: Some(format!(
                "no profile shares at least {min_common} bigrams with the session"
            )),
        },
        Err(other) => return Err(map_analysis_err(other)),
    };

    write_artifact(&dir, "match.json", to_json_pretty(&doc).as_bytes())?;
    match (&doc.best, doc.scores.first()) {
        (Some(best), Some(top)) => {
            println!("best match: {best} (rho {})", export::fmt_sig6(top.rho))
        }
        _ => println!("no match: {}", doc.note.as_deref().unwrap_or("unscored")),
    }
    Ok(())
}

// ----------------------------------------------------------------- synth

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Generator seed; identical seeds give byte-identical datasets
    #[arg(long)]
    pub seed: Option<u64>,
    /// Logged days to generate [default: 30]
    #[arg(long)]
    pub days: Option<usize>,
    /// Keystrokes per day [default: 5000]
    #[arg(long)]
    pub keystrokes_per_day: Option<usize>,
    /// Letters drawn from the first N of A..Z [default: 26]
    #[arg(long)]
    pub alphabet_size: Option<usize>,
    /// Bigrams given their own latency law [default: 50]
    #[arg(long)]
    pub support_bigrams: Option<usize>,
    /// Probability an event is a special key [default: 0.05]
    #[arg(long)]
    pub special_key_rate: Option<f64>,
    #[arg(long)]
    pub participant_id: Option<String>,
    /// First logged day [default: 2020-01-01]
    #[arg(long)]
    pub start_date: Option<NaiveDate>,
    #[arg(long, allow_hyphen_values = true)]
    pub tz_offset_min: Option<i32>,
    /// Mean of the generated sleep scores [default: 75]
    #[arg(long)]
    pub sleep_base: Option<f64>,
    /// Spread of the generated sleep scores [default: 8]
    #[arg(long)]
    pub sleep_variability: Option<f64>,
    /// Fraction of nights without a score [default: 0.1]
    #[arg(long)]
    pub sleep_gap_rate: Option<f64>,
    /// Couple daily latency offsets to prior-night scores by this slope
    #[arg(long, allow_hyphen_values = true)]
    pub sleep_link_slope: Option<f64>,
    /// Noise added to the sleep-linked offset [default: 0]
    #[arg(long)]
    pub sleep_link_noise: Option<f64>,
    #[command(flatten)]
    pub out: OutputFlags,
}

pub fn cmd_synth(args: &SynthArgs, file: &FileConfig) -> Result<(), CliError> {
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let days = args.days.unwrap_or(30);
    let start_date = args
        .start_date
        .unwrap_or_else(|| NaiveDate::from_ymd_opt(2020, 1, 1).unwrap());
    let sleep_link = args.sleep_link_slope.map(|slope| SleepLink {
        slope,
        noise_std: args.sleep_link_noise.unwrap_or(0.0),
    });
    let params = ModelParams {
        alphabet_size: args.alphabet_size.unwrap_or(26),
        support_size: args.support_bigrams.unwrap_or(50),
        special_key_rate: args.special_key_rate.unwrap_or(0.05),
        keystrokes_per_day: args.keystrokes_per_day.unwrap_or(5000),
        days,
        start_date,
        sleep_link,
        ..ModelParams::default()
    };
    let map_synth = |e: keydyn::synth::SynthError| CliError::Config(e.to_string());

    let mut model = TypistModel::sample(seed, &params).map_err(map_synth)?;
    if let Some(id) = args.participant_id.clone().or_else(|| file.participant_id.clone()) {
        model.participant_id = id;
    }
    if let Some(tz) = args.tz_offset_min.or(file.tz_offset_min) {
        model.tz_offset_minutes = tz;
    }

    // The sleep series starts the night before the first logged day so
    // prior-night pairing is covered; it uses its own derived seed.
    let sleep_start = start_date
        .checked_sub_days(Days::new(1))
        .expect("date in range");
    let sleep_end = start_date
        .checked_add_days(Days::new(days.saturating_sub(1) as u64))
        .expect("date in range");
    let records = generate_sleep_series(
        seed.wrapping_add(1),
        sleep_start,
        sleep_end,
        args.sleep_base.unwrap_or(75.0),
        args.sleep_variability.unwrap_or(8.0),
        args.sleep_gap_rate.unwrap_or(0.1),
    )
    .map_err(map_synth)?;

    let series = if model.sleep_link.is_some() {
        Some(impute_sleep(&records, sleep_start, sleep_end)?)
    } else {
        None
    };
    let (stream, truth) = generate_stream(&model, series.as_ref()).map_err(map_synth)?;

    let out_dir = args.out.out_dir(file)?;
    let meta = StoreMeta {
        participant_id: model.participant_id.clone(),
        tz_offset_minutes: model.tz_offset_minutes,
        events: stream.len(),
        sources: vec![format!("synthetic seed {seed}")],
        report: ParseReport {
            events_accepted: stream.len(),
            ..ParseReport::default()
        },
    };
    write_store(&out_dir, &stream, &meta)?;

    let mut jsonl = Vec::new();
    write_keystroke_jsonl(&stream, &mut jsonl).map_err(|e| CliError::io("events.jsonl", e))?;
    write_artifact(&out_dir, "events.jsonl", &jsonl)?;

    let mut sleep_csv = Vec::new();
    write_sleep_csv(&records, &mut sleep_csv).map_err(|e| CliError::io("sleep.csv", e))?;
    write_artifact(&out_dir, "sleep.csv", &sleep_csv)?;

    let truth_doc = TruthDoc {
        seed,
        participant_id: model.participant_id.clone(),
        bigram_means: truth
            .bigram_means
            .iter()
            .map(|(bigram, mean)| export::BigramMeanRow {
                bigram: bigram.to_string(),
                mean_ms: round_sig6(*mean),
                std_ms: round_sig6(truth.bigram_stds[bigram]),
            })
            .collect(),
        day_offsets: truth
            .day_offsets
            .iter()
            .map(|(date, offset)| export::DayOffsetRow {
                date: *date,
                offset_ms: round_sig6(*offset),
            })
            .collect(),
    };
    write_artifact(&out_dir, "truth.json", to_json_pretty(&truth_doc).as_bytes())?;

    println!(
        "synthesized {} events over {} days ({} support bigrams, seed {seed}) into {}",
        stream.len(),
        days,
        truth.bigram_means.len(),
        out_dir.display(),
    );
    Ok(())
}

// ---------------------------------------------------------------- export

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Event store directory produced by `ingest` or `synth`
    #[arg(long)]
    pub store: PathBuf,
    /// Sleep CSV; enables the sleep-correlation artifacts
    #[arg(long)]
    pub sleep: Option<PathBuf>,
    /// Drop pairs whose prior-night score was imputed
    #[arg(long)]
    pub exclude_imputed: bool,
    #[command(flatten)]
    pub analysis: AnalysisFlags,
    #[command(flatten)]
    pub out: OutputFlags,
}

pub fn cmd_export(args: &ExportArgs, file: &FileConfig) -> Result<(), CliError> {
    let analyzed = analyze(&args.store, &args.analysis, file)?;
    let dir = args.out.out_dir(file)?;
    let formats = args.out.formats(file);

    write_stats_artifacts(&analyzed, &dir, &formats)?;

    let table = DailyStatsTable::from_observations(&analyzed.observations);
    if table.len() >= 2 {
        write_consistency_artifacts(&analyzed, &dir, &formats)?;
    } else {
        println!("consistency: skipped (needs at least 2 logged days)");
    }

    let sleep_path = args.sleep.clone().or_else(|| file.sleep.clone());
    if let Some(sleep_path) = sleep_path {
        write_sleep_artifacts(&analyzed, &sleep_path, args.exclude_imputed, &dir, &formats)?;
    }
    Ok(())
}
