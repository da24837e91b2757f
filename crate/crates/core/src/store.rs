//! Checkpoints and report export.
//!
//! A checkpoint file is a JSON object
//!
//! ```text
//! { "format": "qaseries-checkpoint", "version": 1,
//!   "checksum": "<sha256 hex of the compact JSON of body>", "body": { ... } }
//! ```
//!
//! Writes go to a temporary file in the destination directory which is
//! synced and then renamed over the target, so a reader only ever sees the
//! previous complete checkpoint or the new one.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::composed::{BlockProgress, BlockSchedule, ScheduleDescription};
use crate::error::{Error, Result};
use crate::forms::{enumerate_forms, SignAssignment};
use crate::series::{
    Bounds, ScanOptions, ScanReport, ScanState, Scanner, SeriesLabel, SeriesSigns, ENGINE_VERSION,
};
use crate::sieve::SieveConfig;

pub const CHECKPOINT_FORMAT: &str = "qaseries-checkpoint";
pub const CHECKPOINT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SavedSeries {
    Plain {
        signs: String,
    },
    Composed {
        schedule: ScheduleDescription,
        progress: BlockProgress,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub engine_version: String,
    pub modulus: u64,
    pub series: SavedSeries,
    /// Bounds the scan had been asked to reach when saved.
    pub bounds: Bounds,
    pub options: ScanOptions,
    pub sieve: SieveConfig,
    pub state: ScanState,
    pub prefix: Vec<i128>,
}

#[derive(Serialize)]
struct EnvelopeOut<'a> {
    format: &'a str,
    version: u64,
    checksum: String,
    body: &'a Checkpoint,
}

#[derive(Deserialize)]
struct Header {
    format: String,
    version: u64,
}

#[derive(Deserialize)]
struct EnvelopeIn {
    checksum: String,
    body: Checkpoint,
}

fn checksum(body: &Checkpoint) -> Result<String> {
    let bytes = serde_json::to_vec(body)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl Checkpoint {
    pub fn from_scanner(sc: &Scanner, bounds: &Bounds) -> Checkpoint {
        let series = match sc.signs() {
            SeriesSigns::Plain(a) => SavedSeries::Plain {
                signs: a.sign_string(),
            },
            SeriesSigns::Composed { schedule, progress } => SavedSeries::Composed {
                schedule: schedule.describe(),
                progress: progress.clone(),
            },
        };
        Checkpoint {
            engine_version: ENGINE_VERSION.to_string(),
            modulus: sc.signs().modulus(),
            series,
            bounds: *bounds,
            options: *sc.options(),
            sieve: *sc.sieve_config(),
            state: sc.state().clone(),
            prefix: sc.prefix().to_vec(),
        }
    }

    /// Rebuild the scanner; refuses checkpoints from another engine version.
    pub fn into_scanner(self) -> Result<Scanner> {
        if self.engine_version != ENGINE_VERSION {
            return Err(Error::EngineVersion {
                found: self.engine_version,
                running: ENGINE_VERSION.to_string(),
            });
        }
        let signs = match self.series {
            SavedSeries::Plain { signs } => {
                let form = std::sync::Arc::new(enumerate_forms(self.modulus)?);
                SeriesSigns::Plain(SignAssignment::parse(form, &signs)?)
            }
            SavedSeries::Composed { schedule, progress } => {
                if schedule.modulus != self.modulus {
                    return Err(Error::Checkpoint(
                        "schedule modulus differs from checkpoint modulus".into(),
                    ));
                }
                SeriesSigns::Composed {
                    schedule: BlockSchedule::from_description(&schedule)?,
                    progress,
                }
            }
        };
        Scanner::from_parts(signs, self.state, self.options, self.sieve, self.prefix)
    }
}

/// Write `bytes` to `path` via a synced temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    if let Ok(d) = fs::File::open(dir) {
        // directory fsync is unsupported on some platforms
        let _ = d.sync_all();
    }
    Ok(())
}

pub fn save(checkpoint: &Checkpoint, path: &Path) -> Result<()> {
    let env = EnvelopeOut {
        format: CHECKPOINT_FORMAT,
        version: CHECKPOINT_VERSION,
        checksum: checksum(checkpoint)?,
        body: checkpoint,
    };
    let mut text = serde_json::to_vec_pretty(&env)?;
    text.push(b'\n');
    write_atomic(path, &text)
}

pub fn load(path: &Path) -> Result<Checkpoint> {
    let text = fs::read(path)?;
    let header: Header = serde_json::from_slice(&text)
        .map_err(|e| Error::Checkpoint(format!("unreadable header: {e}")))?;
    if header.format != CHECKPOINT_FORMAT {
        return Err(Error::Checkpoint(format!(
            "unknown format {:?}",
            header.format
        )));
    }
    if header.version != CHECKPOINT_VERSION {
        return Err(Error::Version {
            found: header.version,
            expected: CHECKPOINT_VERSION,
        });
    }
    let env: EnvelopeIn = serde_json::from_slice(&text)
        .map_err(|e| Error::Checkpoint(format!("malformed body: {e}")))?;
    let actual = checksum(&env.body)?;
    if actual != env.checksum {
        return Err(Error::Checkpoint(format!(
            "checksum mismatch: recorded {}, computed {actual}",
            env.checksum
        )));
    }
    Ok(env.body)
}

/// Save a checkpoint of `sc` to `path`.
pub fn save_scanner(sc: &Scanner, bounds: &Bounds, path: &Path) -> Result<()> {
    save(&Checkpoint::from_scanner(sc, bounds), path)
}

/// Continue the checkpointed scan at `path` up to `bounds` (absolute, not
/// relative to the checkpoint). Bounds already reached give the saved state
/// back unchanged.
pub fn resume(path: &Path, bounds: &Bounds) -> Result<ScanReport> {
    let mut sc = load(path)?.into_scanner()?;
    sc.run(bounds)?;
    Ok(sc.report(bounds))
}

/// Run `sc` to `bounds`, saving a checkpoint every `every` terms and once
/// more at the end.
pub fn run_with_checkpoints(
    sc: &mut Scanner,
    bounds: &Bounds,
    path: &Path,
    every: u64,
) -> Result<()> {
    bounds.validate()?;
    if every == 0 {
        return Err(Error::Config("checkpoint interval must be >= 1".into()));
    }
    loop {
        let before = sc.state().terms;
        let mut leg = *bounds;
        let next = before + every;
        leg.max_terms = Some(bounds.max_terms.map_or(next, |n| n.min(next)));
        sc.run(&leg)?;
        let stalled = sc.state().terms == before;
        // a no-op run leaves an existing checkpoint untouched
        if !stalled || !path.exists() {
            save_scanner(sc, bounds, path)?;
        }
        let done = stalled || bounds.max_terms.is_some_and(|n| sc.state().terms >= n);
        if done {
            return Ok(());
        }
    }
}

/// Flat event rows: one per zero and per crossing, in index order.
pub fn write_events_csv<W: Write>(report: &ScanReport, out: W) -> Result<()> {
    let series = match &report.series {
        SeriesLabel::Plain { signs, .. } => signs.clone(),
        SeriesLabel::Composed { schedule } => schedule.cycle.join("|"),
    };
    let mut rows: Vec<(u64, [String; 7])> = Vec::new();
    for z in &report.zeros {
        rows.push((
            z.n,
            [
                "zero".into(),
                report.modulus.to_string(),
                series.clone(),
                z.n.to_string(),
                z.prime.to_string(),
                String::new(),
                "0".into(),
            ],
        ));
    }
    for c in &report.crossings {
        rows.push((
            c.j,
            [
                "crossing".into(),
                report.modulus.to_string(),
                series.clone(),
                c.j.to_string(),
                c.prime.to_string(),
                c.s_j.to_string(),
                c.s_next.to_string(),
            ],
        ));
    }
    rows.sort_by_key(|r| r.0);
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "kind", "modulus", "series", "index", "prime", "s_before", "s_after",
    ])?;
    for (_, r) in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn scanner(e: u64) -> Scanner {
        let a = SignAssignment::canonical(Arc::new(enumerate_forms(e).unwrap())).unwrap();
        Scanner::plain(a).unwrap()
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let mut sc = scanner(6);
        sc.run(&Bounds::terms(100)).unwrap();
        let cp = Checkpoint::from_scanner(&sc, &Bounds::terms(100));
        save(&cp, &path).unwrap();
        assert_eq!(load(&path).unwrap(), cp);
    }

    #[test]
    fn corruption_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let mut sc = scanner(6);
        sc.run(&Bounds::terms(100)).unwrap();
        save_scanner(&sc, &Bounds::terms(100), &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        // bump the stored partial sum by one digit
        let sum = sc.state().sum.to_string();
        let needle = format!("\"sum\": {sum}");
        assert!(text.contains(&needle));
        let tampered = text.replacen(&needle, &format!("\"sum\": {}", sc.state().sum + 2), 1);
        fs::write(&path, tampered).unwrap();
        assert!(matches!(load(&path), Err(Error::Checkpoint(_))));
    }

    #[test]
    fn version_bump_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        save_scanner(&scanner(4), &Bounds::terms(1), &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replacen("\"version\": 1", "\"version\": 2", 1)).unwrap();
        assert!(matches!(
            load(&path),
            Err(Error::Version {
                found: 2,
                expected: 1
            })
        ));
    }

    #[test]
    fn engine_mismatch_is_rejected() {
        let mut cp = Checkpoint::from_scanner(&scanner(4), &Bounds::terms(1));
        cp.engine_version = "999.0.0".into();
        assert!(matches!(
            cp.into_scanner(),
            Err(Error::EngineVersion { .. })
        ));
    }

    #[test]
    fn failed_write_keeps_previous_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        save_scanner(&scanner(4), &Bounds::terms(1), &path).unwrap();
        let before = fs::read(&path).unwrap();
        let missing = dir.path().join("no-such-dir").join("cp.json");
        assert!(save_scanner(&scanner(4), &Bounds::terms(1), &missing).is_err());
        assert_eq!(fs::read(&path).unwrap(), before);
        let leftovers = fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(leftovers, 1);
    }

    #[test]
    fn events_csv() {
        let mut sc = scanner(6);
        sc.run(&Bounds::terms(80)).unwrap();
        let mut buf = Vec::new();
        write_events_csv(&sc.report(&Bounds::terms(80)), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("kind,modulus,series,index,prime,s_before,s_after")
        );
        assert_eq!(lines.next(), Some("crossing,6,-+,1,7,5,-2"));
        assert!(text.contains("zero,6,-+,78,409,,0"));
    }
}
