//! Ingestion: keystroke logs and sleep CSVs in, validated domain values
//! out. The canonical formats are defined here; any other capture-tool
//! layout is just another parser behind the same signatures.
//!
//! Canonical keystroke CSV: header `timestamp_ms,key`, one event per
//! line, UTF-8, LF line endings (a trailing CR is tolerated). The key
//! field is everything after the first comma, so a literal `,` key is
//! representable without quoting. Canonical JSONL: one object per line
//! with integer `ts` (milliseconds) and string `key`. Sleep CSV: header
//! `date,score` with ISO-8601 dates. Headers are recognised and skipped
//! when present; headerless fragments parse the same way.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use chrono::{DateTime, NaiveDate};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{KeyEvent, KeyStream, SeriesError, SleepRecord, SleepSeries};

pub const KEYSTROKE_CSV_HEADER: &str = "timestamp_ms,key";
pub const SLEEP_CSV_HEADER: &str = "date,score";

/// Largest accepted timestamp: 9999-12-31T23:59:59.999Z. Keeps all date
/// arithmetic (including timezone offsets) inside chrono's range.
pub const MAX_TIMESTAMP_MS: i64 = 253_402_300_799_999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParseMode {
    /// Abort on the first malformed or out-of-order line.
    Strict,
    /// Skip malformed lines (counting them) and stable-sort out-of-order
    /// input, flagging the repair in the report.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineIssue {
    pub line: usize,
    pub message: String,
}

/// What happened while parsing one source.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParseReport {
    pub events_accepted: usize,
    /// Malformed lines dropped in lenient mode; always 0 in strict mode
    /// (strict aborts instead).
    pub lines_skipped: usize,
    pub first_error: Option<LineIssue>,
    /// True when lenient mode had to re-sort out-of-order events.
    pub reordered: bool,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: timestamp out of order")]
    OutOfOrder { line: usize },
    #[error("duplicate sleep date {0}")]
    DuplicateDate(NaiveDate),
    #[error("sleep record {0} lies outside the imputation range")]
    RecordOutsideRange(NaiveDate),
    #[error("imputation range is empty")]
    EmptyRange,
    #[error("no observed sleep records to impute from")]
    NoObservedRecords,
    #[error("no input streams")]
    NoInput,
    #[error("streams disagree on participant or timezone")]
    MixedStreams,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Serialize, Deserialize)]
struct JsonlEvent {
    ts: i64,
    key: String,
}

fn validate_timestamp(ts: i64) -> Result<(), String> {
    if (0..=MAX_TIMESTAMP_MS).contains(&ts) {
        Ok(())
    } else {
        Err(format!("timestamp {ts} out of range"))
    }
}

/// A key token is a single non-control character or an UPPER_SNAKE name
/// like `BACKSPACE` or `LEFT_ARROW`. Control characters must use a name:
/// raw newlines cannot survive a line-oriented format.
fn validate_key_token(key: &str) -> Result<(), String> {
    if key.is_empty() {
        return Err("empty key token".to_string());
    }
    let mut chars = key.chars();
    let first = chars.next().unwrap();
    if chars.next().is_none() {
        if first.is_control() {
            return Err(format!("control character key token {key:?}; use a named key"));
        }
        return Ok(());
    }
    let named = key.as_bytes()[0].is_ascii_uppercase()
        && key
            .bytes()
            .all(|b| b.is_ascii_uppercase() || b.is_ascii_digit() || b == b'_');
    if named {
        Ok(())
    } else {
        Err(format!(
            "invalid key token {key:?}: expected one character or an UPPER_SNAKE name"
        ))
    }
}

fn parse_csv_event(line: &str) -> Result<KeyEvent, String> {
    let (ts, key) = line
        .split_once(',')
        .ok_or_else(|| "expected 'timestamp_ms,key'".to_string())?;
    let timestamp_ms: i64 = ts
        .parse()
        .map_err(|_| format!("invalid timestamp {ts:?}"))?;
    validate_timestamp(timestamp_ms)?;
    validate_key_token(key)?;
    Ok(KeyEvent {
        timestamp_ms,
        key: key.to_string(),
    })
}

fn parse_jsonl_event(line: &str) -> Result<KeyEvent, String> {
    let ev: JsonlEvent = serde_json::from_str(line).map_err(|e| format!("invalid JSON: {e}"))?;
    validate_timestamp(ev.ts)?;
    validate_key_token(&ev.key)?;
    Ok(KeyEvent {
        timestamp_ms: ev.ts,
        key: ev.key,
    })
}

/// Parses a keystroke log into an ordered [`KeyStream`].
///
/// Strict mode aborts with the offending line number; lenient mode skips
/// malformed lines and repairs ordering, recording both in the report.
pub fn parse_keystroke_log<R: BufRead>(
    source: R,
    format: LogFormat,
    mode: ParseMode,
    participant_id: &str,
    tz_offset_minutes: i32,
) -> Result<(KeyStream, ParseReport), IngestError> {
    let mut report = ParseReport::default();
    let mut rows: Vec<(usize, KeyEvent)> = Vec::new();
    let mut seen_content = false;

    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let raw = line?;
        let text = raw.strip_suffix('\r').unwrap_or(&raw);
        if text.is_empty() {
            continue;
        }
        if !seen_content {
            seen_content = true;
            if format == LogFormat::Csv && text == KEYSTROKE_CSV_HEADER {
                continue;
            }
        }
        let parsed = match format {
            LogFormat::Csv => parse_csv_event(text),
            LogFormat::Jsonl => parse_jsonl_event(text),
        };
        match parsed {
            Ok(ev) => rows.push((line_no, ev)),
            Err(reason) => match mode {
                ParseMode::Strict => return Err(IngestError::Malformed { line: line_no, reason }),
                ParseMode::Lenient => {
                    report.lines_skipped += 1;
                    if report.first_error.is_none() {
                        report.first_error = Some(LineIssue {
                            line: line_no,
                            message: reason,
                        });
                    }
                }
            },
        }
    }

    let disorder = rows
        .windows(2)
        .position(|w| w[1].1.timestamp_ms < w[0].1.timestamp_ms);
    if let Some(i) = disorder {
        match mode {
            ParseMode::Strict => {
                return Err(IngestError::OutOfOrder { line: rows[i + 1].0 });
            }
            ParseMode::Lenient => {
                // Stable sort: equal timestamps keep input order.
                rows.sort_by_key(|(_, ev)| ev.timestamp_ms);
                report.reordered = true;
            }
        }
    }

    report.events_accepted = rows.len();
    let stream = KeyStream {
        participant_id: participant_id.to_string(),
        tz_offset_minutes,
        events: rows.into_iter().map(|(_, ev)| ev).collect(),
    };
    debug_assert!(stream.is_time_ordered());
    Ok((stream, report))
}

pub fn write_keystroke_csv<W: Write>(stream: &KeyStream, mut out: W) -> io::Result<()> {
    writeln!(out, "{KEYSTROKE_CSV_HEADER}")?;
    for ev in &stream.events {
        writeln!(out, "{},{}", ev.timestamp_ms, ev.key)?;
    }
    Ok(())
}

pub fn write_keystroke_jsonl<W: Write>(stream: &KeyStream, mut out: W) -> io::Result<()> {
    for ev in &stream.events {
        let row = JsonlEvent {
            ts: ev.timestamp_ms,
            key: ev.key.clone(),
        };
        writeln!(out, "{}", serde_json::to_string(&row)?)?;
    }
    Ok(())
}

/// Parses a sleep CSV into date-sorted observed records (`imputed` false).
/// Always strict: a malformed row, out-of-range score or duplicate date
/// aborts with its line number.
pub fn parse_sleep_csv<R: BufRead>(source: R) -> Result<Vec<SleepRecord>, IngestError> {
    let mut by_date: BTreeMap<NaiveDate, SleepRecord> = BTreeMap::new();
    let mut seen_content = false;

    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let raw = line?;
        let text = raw.strip_suffix('\r').unwrap_or(&raw);
        if text.is_empty() {
            continue;
        }
        if !seen_content {
            seen_content = true;
            if text == SLEEP_CSV_HEADER {
                continue;
            }
        }
        let (date_str, score_str) = text.split_once(',').ok_or_else(|| IngestError::Malformed {
            line: line_no,
            reason: "expected 'date,score'".to_string(),
        })?;
        let date: NaiveDate = date_str.parse().map_err(|_| IngestError::Malformed {
            line: line_no,
            reason: format!("invalid ISO-8601 date {date_str:?}"),
        })?;
        let score: f64 = score_str.parse().map_err(|_| IngestError::Malformed {
            line: line_no,
            reason: format!("invalid score {score_str:?}"),
        })?;
        if !(0.0..=100.0).contains(&score) {
            return Err(IngestError::Malformed {
                line: line_no,
                reason: format!("score {score} outside [0, 100]"),
            });
        }
        let record = SleepRecord {
            date,
            score,
            imputed: false,
        };
        if by_date.insert(date, record).is_some() {
            return Err(IngestError::DuplicateDate(date));
        }
    }
    Ok(by_date.into_values().collect())
}

pub fn write_sleep_csv<W: Write>(records: &[SleepRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{SLEEP_CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{},{}", r.date, r.score)?;
    }
    Ok(())
}

/// Fills every date in `[start, end]` from the observed records: interior
/// gaps by linear interpolation between the nearest observed neighbours,
/// leading/trailing gaps with the nearest observed value. Observed
/// entries pass through untouched; filled ones are flagged `imputed`.
pub fn impute_sleep(
    records: &[SleepRecord],
    start: NaiveDate,
    end: NaiveDate,
) -> Result<SleepSeries, IngestError> {
    if start > end {
        return Err(IngestError::EmptyRange);
    }
    let mut by_date: BTreeMap<NaiveDate, SleepRecord> = BTreeMap::new();
    for r in records {
        if r.date < start || r.date > end {
            return Err(IngestError::RecordOutsideRange(r.date));
        }
        if by_date.insert(r.date, r.clone()).is_some() {
            return Err(IngestError::DuplicateDate(r.date));
        }
    }
    if by_date.is_empty() {
        return Err(IngestError::NoObservedRecords);
    }

    let mut out = Vec::new();
    for date in start.iter_days().take_while(|d| *d <= end) {
        if let Some(observed) = by_date.get(&date) {
            out.push(observed.clone());
            continue;
        }
        let prev = by_date.range(..date).next_back().map(|(d, r)| (*d, r));
        let next = by_date.range(date..).next().map(|(d, r)| (*d, r));
        let score = match (prev, next) {
            (Some((pd, pr)), Some((nd, nr))) => {
                let span = (nd - pd).num_days() as f64;
                let t = (date - pd).num_days() as f64;
                pr.score + (nr.score - pr.score) * t / span
            }
            (Some((_, pr)), None) => pr.score,
            (None, Some((_, nr))) => nr.score,
            (None, None) => unreachable!("by_date checked non-empty"),
        };
        out.push(SleepRecord {
            date,
            score,
            imputed: true,
        });
    }
    Ok(SleepSeries::new(out)?)
}

/// Local calendar date of a timestamp under a fixed minute offset.
pub fn local_date(timestamp_ms: i64, tz_offset_minutes: i32) -> NaiveDate {
    let local_ms = timestamp_ms + i64::from(tz_offset_minutes) * 60_000;
    DateTime::from_timestamp_millis(local_ms)
        .expect("timestamp validated on ingest")
        .date_naive()
}

/// Splits a stream into per-local-date streams. Every event lands in
/// exactly one segment; relative order is preserved.
pub fn segment_days(stream: &KeyStream) -> BTreeMap<NaiveDate, KeyStream> {
    let mut segments: BTreeMap<NaiveDate, KeyStream> = BTreeMap::new();
    for ev in &stream.events {
        let date = local_date(ev.timestamp_ms, stream.tz_offset_minutes);
        segments
            .entry(date)
            .or_insert_with(|| KeyStream::new(&stream.participant_id, stream.tz_offset_minutes))
            .events
            .push(ev.clone());
    }
    segments
}

/// Merges streams from one participant, deterministically: concatenation
/// in input order, then a stable sort by timestamp.
pub fn merge_streams(streams: Vec<KeyStream>) -> Result<KeyStream, IngestError> {
    let mut iter = streams.into_iter();
    let mut merged = iter.next().ok_or(IngestError::NoInput)?;
    for s in iter {
        if s.participant_id != merged.participant_id
            || s.tz_offset_minutes != merged.tz_offset_minutes
        {
            return Err(IngestError::MixedStreams);
        }
        merged.events.extend(s.events);
    }
    merged.events.sort_by_key(|ev| ev.timestamp_ms);
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse_csv(text: &str, mode: ParseMode) -> Result<(KeyStream, ParseReport), IngestError> {
        parse_keystroke_log(Cursor::new(text), LogFormat::Csv, mode, "p1", 0)
    }

    #[test]
    fn empty_file_gives_empty_stream() {
        let (stream, report) = parse_csv("", ParseMode::Strict).unwrap();
        assert!(stream.is_empty());
        assert_eq!(report.events_accepted, 0);
    }

    #[test]
    fn two_well_formed_lines() {
        let (stream, report) = parse_csv("1000,t\n1120,h\n", ParseMode::Strict).unwrap();
        assert_eq!(report.events_accepted, 2);
        assert_eq!(stream.events[0], KeyEvent::new(1000, "t"));
        assert_eq!(stream.events[1], KeyEvent::new(1120, "h"));
    }

    #[test]
    fn header_is_recognised_and_optional() {
        let with = parse_csv("timestamp_ms,key\n1000,t\n", ParseMode::Strict).unwrap();
        let without = parse_csv("1000,t\n", ParseMode::Strict).unwrap();
        assert_eq!(with.0, without.0);
        assert_eq!(with.1.events_accepted, 1);
    }

    #[test]
    fn malformed_line_lenient_skips_and_counts() {
        let (stream, report) = parse_csv("abc,t\n1000,t\n", ParseMode::Lenient).unwrap();
        assert_eq!(stream.len(), 1);
        assert_eq!(report.lines_skipped, 1);
        let issue = report.first_error.unwrap();
        assert_eq!(issue.line, 1);
        assert!(issue.message.contains("timestamp"));
    }

    #[test]
    fn malformed_line_strict_aborts_with_line_number() {
        let err = parse_csv("1000,t\nabc,t\n", ParseMode::Strict).unwrap_err();
        match err {
            IngestError::Malformed { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn key_token_validation() {
        assert!(parse_csv("0,\n", ParseMode::Strict).is_err()); // empty token
        assert!(parse_csv("0,ab\n", ParseMode::Strict).is_err()); // not a name
        assert!(parse_csv("0,BACKSPACE\n", ParseMode::Strict).is_ok());
        assert!(parse_csv("0,LEFT_ARROW\n", ParseMode::Strict).is_ok());
        assert!(parse_csv("0,F12\n", ParseMode::Strict).is_ok());
        // The key field is everything after the first comma.
        let (s, _) = parse_csv("0,,\n", ParseMode::Strict).unwrap();
        assert_eq!(s.events[0].key, ",");
        let (s, _) = parse_csv("0, \n", ParseMode::Strict).unwrap();
        assert_eq!(s.events[0].key, " ");
    }

    #[test]
    fn timestamps_must_be_in_range() {
        assert!(parse_csv("-5,t\n", ParseMode::Strict).is_err());
        assert!(parse_csv("99999999999999999999,t\n", ParseMode::Strict).is_err());
        let line = format!("{},t\n", MAX_TIMESTAMP_MS + 1);
        assert!(parse_csv(&line, ParseMode::Strict).is_err());
    }

    #[test]
    fn out_of_order_strict_errors_lenient_sorts() {
        let err = parse_csv("2000,a\n1000,b\n", ParseMode::Strict).unwrap_err();
        match err {
            IngestError::OutOfOrder { line } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        let (stream, report) = parse_csv("2000,a\n1000,b\n", ParseMode::Lenient).unwrap();
        assert!(report.reordered);
        assert!(stream.is_time_ordered());
        assert_eq!(stream.events[0].key, "b");
    }

    #[test]
    fn equal_timestamps_are_legal_and_keep_input_order() {
        let (stream, report) = parse_csv("1000,a\n1000,b\n", ParseMode::Strict).unwrap();
        assert!(!report.reordered);
        assert_eq!(stream.events[0].key, "a");
        assert_eq!(stream.events[1].key, "b");
    }

    #[test]
    fn crlf_is_tolerated() {
        let (stream, _) = parse_csv("timestamp_ms,key\r\n1000,t\r\n", ParseMode::Strict).unwrap();
        assert_eq!(stream.len(), 1);
    }

    #[test]
    fn jsonl_parses() {
        let text = "{\"ts\":1000,\"key\":\"t\"}\n{\"ts\":1120,\"key\":\"BACKSPACE\"}\n";
        let (stream, report) =
            parse_keystroke_log(Cursor::new(text), LogFormat::Jsonl, ParseMode::Strict, "p1", 0)
                .unwrap();
        assert_eq!(report.events_accepted, 2);
        assert_eq!(stream.events[1].key, "BACKSPACE");

        let bad = "{\"ts\":\"x\"}\n";
        assert!(parse_keystroke_log(
            Cursor::new(bad),
            LogFormat::Jsonl,
            ParseMode::Strict,
            "p1",
            0
        )
        .is_err());
    }

    #[test]
    fn csv_round_trip_preserves_stream() {
        let text = "timestamp_ms,key\n0,T\n120,h\n920,e\n1000,,\n2000,SPACE_BAR\n";
        let (stream, _) = parse_csv(text, ParseMode::Strict).unwrap();
        let mut buf = Vec::new();
        write_keystroke_csv(&stream, &mut buf).unwrap();
        let (again, _) = parse_csv(std::str::from_utf8(&buf).unwrap(), ParseMode::Strict).unwrap();
        assert_eq!(stream, again);
    }

    #[test]
    fn jsonl_round_trip_preserves_stream() {
        let (stream, _) = parse_csv("0,T\n120,h\n", ParseMode::Strict).unwrap();
        let mut buf = Vec::new();
        write_keystroke_jsonl(&stream, &mut buf).unwrap();
        let (again, _) = parse_keystroke_log(
            Cursor::new(buf.as_slice()),
            LogFormat::Jsonl,
            ParseMode::Strict,
            "p1",
            0,
        )
        .unwrap();
        assert_eq!(stream, again);
    }

    fn date(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    #[test]
    fn sleep_csv_basics() {
        let records = parse_sleep_csv(Cursor::new("date,score\n2020-01-01,85\n")).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].date, date("2020-01-01"));
        assert_eq!(records[0].score, 85.0);
        assert!(!records[0].imputed);

        // Empty body after header.
        assert!(parse_sleep_csv(Cursor::new("date,score\n")).unwrap().is_empty());

        // Score outside [0, 100].
        let err = parse_sleep_csv(Cursor::new("2020-01-01,101\n")).unwrap_err();
        assert!(matches!(err, IngestError::Malformed { line: 1, .. }));

        // Duplicate dates.
        let err =
            parse_sleep_csv(Cursor::new("2020-01-01,85\n2020-01-01,70\n")).unwrap_err();
        assert!(matches!(err, IngestError::DuplicateDate(_)));

        // Output is date-sorted regardless of input order.
        let records =
            parse_sleep_csv(Cursor::new("2020-01-02,70\n2020-01-01,80\n")).unwrap();
        assert_eq!(records[0].date, date("2020-01-01"));
    }

    #[test]
    fn impute_no_gaps_is_identity() {
        let records = vec![
            SleepRecord { date: date("2020-01-01"), score: 70.0, imputed: false },
            SleepRecord { date: date("2020-01-02"), score: 80.0, imputed: false },
        ];
        let series = impute_sleep(&records, date("2020-01-01"), date("2020-01-02")).unwrap();
        assert_eq!(series.records(), records.as_slice());
    }

    #[test]
    fn impute_interior_gap_linear_midpoint() {
        let records = vec![
            SleepRecord { date: date("2020-01-01"), score: 70.0, imputed: false },
            SleepRecord { date: date("2020-01-03"), score: 80.0, imputed: false },
        ];
        let series = impute_sleep(&records, date("2020-01-01"), date("2020-01-03")).unwrap();
        let filled = series.record_on(date("2020-01-02")).unwrap();
        assert_eq!(filled.score, 75.0);
        assert!(filled.imputed);
    }

    #[test]
    fn impute_boundary_fill_uses_nearest_value() {
        let records = vec![SleepRecord { date: date("2020-01-03"), score: 80.0, imputed: false }];
        let series = impute_sleep(&records, date("2020-01-01"), date("2020-01-04")).unwrap();
        for d in ["2020-01-01", "2020-01-02"] {
            let r = series.record_on(date(d)).unwrap();
            assert_eq!(r.score, 80.0);
            assert!(r.imputed);
        }
        let trailing = series.record_on(date("2020-01-04")).unwrap();
        assert_eq!(trailing.score, 80.0);
        assert!(trailing.imputed);
        assert!(!series.record_on(date("2020-01-03")).unwrap().imputed);
    }

    #[test]
    fn impute_error_cases() {
        let r = SleepRecord { date: date("2020-01-05"), score: 80.0, imputed: false };
        assert!(matches!(
            impute_sleep(&[], date("2020-01-01"), date("2020-01-02")),
            Err(IngestError::NoObservedRecords)
        ));
        assert!(matches!(
            impute_sleep(std::slice::from_ref(&r), date("2020-01-02"), date("2020-01-01")),
            Err(IngestError::EmptyRange)
        ));
        assert!(matches!(
            impute_sleep(&[r], date("2020-01-01"), date("2020-01-02")),
            Err(IngestError::RecordOutsideRange(_))
        ));
    }

    #[test]
    fn segment_days_boundary() {
        let day_ms = 86_400_000i64;
        let mut stream = KeyStream::new("p1", 0);
        stream.events.push(KeyEvent::new(day_ms - 500, "a")); // 23:59:59.500
        stream.events.push(KeyEvent::new(day_ms + 500, "b")); // 00:00:00.500
        let segments = segment_days(&stream);
        assert_eq!(segments.len(), 2);
        assert_eq!(segments[&date("1970-01-01")].events[0].key, "a");
        assert_eq!(segments[&date("1970-01-02")].events[0].key, "b");

        assert!(segment_days(&KeyStream::new("p1", 0)).is_empty());
    }

    #[test]
    fn segment_days_respects_tz_offset() {
        let mut stream = KeyStream::new("p1", -120); // UTC-2
        stream.events.push(KeyEvent::new(3_600_000, "a")); // 01:00 UTC = 23:00 prev day local
        let segments = segment_days(&stream);
        assert_eq!(segments.keys().next(), Some(&date("1969-12-31")));
    }

    #[test]
    fn merge_is_deterministic_and_checks_identity() {
        let mut a = KeyStream::new("p1", 0);
        a.events.push(KeyEvent::new(10, "a"));
        a.events.push(KeyEvent::new(30, "c"));
        let mut b = KeyStream::new("p1", 0);
        b.events.push(KeyEvent::new(10, "b"));
        let merged = merge_streams(vec![a.clone(), b]).unwrap();
        assert_eq!(
            merged.events.iter().map(|e| e.key.as_str()).collect::<Vec<_>>(),
            vec!["a", "b", "c"]
        );

        let other = KeyStream::new("p2", 0);
        assert!(matches!(
            merge_streams(vec![a, other]),
            Err(IngestError::MixedStreams)
        ));
        assert!(matches!(merge_streams(vec![]), Err(IngestError::NoInput)));
    }
}
