//! The normalized event store: a directory holding the canonical
//! `events.csv` plus `meta.json` with the participant identity, timezone
//! and the parse report that produced it. Synthetic datasets use the
//! same layout, so every analysis command reads either interchangeably.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::Path;

use keydyn::ingest::{
    parse_keystroke_log, write_keystroke_csv, LogFormat, ParseMode, ParseReport,
};
use keydyn::KeyStream;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const EVENTS_FILE: &str = "events.csv";
pub const META_FILE: &str = "meta.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StoreMeta {
    pub participant_id: String,
    pub tz_offset_minutes: i32,
    pub events: usize,
    pub sources: Vec<String>,
    pub report: ParseReport,
}

pub fn write_store(dir: &Path, stream: &KeyStream, meta: &StoreMeta) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
    let events_path = dir.join(EVENTS_FILE);
    let file = File::create(&events_path)
        .map_err(|e| CliError::io(format!("creating {}", events_path.display()), e))?;
    write_keystroke_csv(stream, BufWriter::new(file))
        .map_err(|e| CliError::io(format!("writing {}", events_path.display()), e))?;

    let meta_path = dir.join(META_FILE);
    let json = keydyn::export::to_json_pretty(meta);
    fs::write(&meta_path, json)
        .map_err(|e| CliError::io(format!("writing {}", meta_path.display()), e))?;
    Ok(())
}

pub fn read_store(dir: &Path) -> Result<(KeyStream, StoreMeta), CliError> {
    let meta_path = dir.join(META_FILE);
    let text = fs::read_to_string(&meta_path).map_err(|e| {
        CliError::io(
            format!("missing event store: reading {}", meta_path.display()),
            e,
        )
    })?;
    let meta: StoreMeta = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", meta_path.display())))?;

    let events_path = dir.join(EVENTS_FILE);
    let file = File::open(&events_path)
        .map_err(|e| CliError::io(format!("opening {}", events_path.display()), e))?;
    let (stream, _) = parse_keystroke_log(
        BufReader::new(file),
        LogFormat::Csv,
        ParseMode::Strict,
        &meta.participant_id,
        meta.tz_offset_minutes,
    )
    .map_err(|e| CliError::Parse(format!("{}: {e}", events_path.display())))?;
    Ok((stream, meta))
}
