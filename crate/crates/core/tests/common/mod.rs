//! Shared test support: an independent brute-force pass applying the
//! extraction rules pair by pair. Deliberately written against the rule
//! statement, not the library code, so it can catch pipeline bugs.

use chrono::{Duration, NaiveDate};
use keydyn::KeyStream;

/// (first letter, second letter, latency, local day) per surviving pair.
pub type OraclePair = (char, char, i64, NaiveDate);

fn single_ascii_letter(key: &str) -> Option<char> {
    let bytes = key.as_bytes();
    if bytes.len() == 1 && bytes[0].is_ascii_alphabetic() {
        Some(bytes[0].to_ascii_uppercase() as char)
    } else {
        None
    }
}

fn oracle_local_date(timestamp_ms: i64, tz_offset_minutes: i32) -> NaiveDate {
    let local_ms = timestamp_ms + i64::from(tz_offset_minutes) * 60_000;
    let days = local_ms.div_euclid(86_400_000);
    NaiveDate::from_ymd_opt(1970, 1, 1).unwrap() + Duration::days(days)
}

/// Rules: both keys single letters A-Z after case folding; 0 < gap <=
/// threshold (inclusive); anything else emits nothing; every event may
/// still open the next pair; day = local date of the pair's first key.
pub fn oracle_extract(stream: &KeyStream, gap_threshold_ms: i64) -> Vec<OraclePair> {
    let mut out = Vec::new();
    for i in 1..stream.events.len() {
        let first = &stream.events[i - 1];
        let second = &stream.events[i];
        let (Some(a), Some(b)) = (
            single_ascii_letter(&first.key),
            single_ascii_letter(&second.key),
        ) else {
            continue;
        };
        let dt = second.timestamp_ms - first.timestamp_ms;
        if dt <= 0 || dt > gap_threshold_ms {
            continue;
        }
        out.push((
            a,
            b,
            dt,
            oracle_local_date(first.timestamp_ms, stream.tz_offset_minutes),
        ));
    }
    out
}

/// Maps pipeline observations into the oracle's tuple shape.
pub fn observation_tuples(observations: &[keydyn::BigramObservation]) -> Vec<OraclePair> {
    observations
        .iter()
        .map(|o| {
            (
                o.bigram.first(),
                o.bigram.second(),
                i64::from(o.latency_ms),
                o.day,
            )
        })
        .collect()
}
