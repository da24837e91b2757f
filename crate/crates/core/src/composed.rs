//! Block-composed series: consecutive blocks of the prime stream signed by
//! different alternatives.
//!
//! The prime stream itself never restarts; only the active sign assignment
//! changes at block boundaries. In fixed mode blocks have prescribed lengths
//! (cycled). In adaptive mode a new block starts once `window` consecutive
//! terms have passed without a completed sign change of the partial sums.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{enumerate_forms, FormSpec, Sign, SignAssignment};
use crate::series::{Bounds, ScanOptions, ScanReport, Scanner, SeriesSigns, SeriesTerm};
use crate::sieve::SieveConfig;

/// Default drought window for adaptive schedules.
pub const DEFAULT_WINDOW: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ScheduleMode {
    /// Block `k` has length `lengths[k % lengths.len()]`.
    Fixed { lengths: Vec<u64> },
    /// Start a new block after `window` terms without a sign change.
    Adaptive { window: u64 },
}

impl ScheduleMode {
    fn validate(&self) -> Result<()> {
        match self {
            ScheduleMode::Fixed { lengths } => {
                if lengths.is_empty() || lengths.contains(&0) {
                    return Err(Error::Config(
                        "block lengths must be non-empty and >= 1".into(),
                    ));
                }
            }
            ScheduleMode::Adaptive { window } => {
                if *window == 0 {
                    return Err(Error::Config("drought window must be >= 1".into()));
                }
            }
        }
        Ok(())
    }
}

/// Serializable form of a schedule; sign strings identify the cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScheduleDescription {
    pub modulus: u64,
    #[serde(flatten)]
    pub mode: ScheduleMode,
    pub cycle: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct BlockSchedule {
    mode: ScheduleMode,
    cycle: Vec<SignAssignment>,
}

impl BlockSchedule {
    pub fn new(mode: ScheduleMode, cycle: Vec<SignAssignment>) -> Result<Self> {
        mode.validate()?;
        let Some(first) = cycle.first() else {
            return Err(Error::Config("assignment cycle is empty".into()));
        };
        let e = first.modulus();
        if cycle.iter().any(|a| a.modulus() != e) {
            return Err(Error::Config("assignment cycle mixes moduli".into()));
        }
        if cycle.len() > 1 {
            for k in 0..cycle.len() {
                let next = &cycle[(k + 1) % cycle.len()];
                if cycle[k] == *next {
                    return Err(Error::Config(format!(
                        "adjacent cycle entries {} and {} are identical",
                        k,
                        (k + 1) % cycle.len()
                    )));
                }
            }
        }
        Ok(BlockSchedule { mode, cycle })
    }

    /// Alternate between `first` and its negation.
    pub fn flip_pair(mode: ScheduleMode, first: SignAssignment) -> Result<Self> {
        let second = first.negate();
        Self::new(mode, vec![first, second])
    }

    pub fn from_description(desc: &ScheduleDescription) -> Result<Self> {
        let form = Arc::new(enumerate_forms(desc.modulus)?);
        let cycle = desc
            .cycle
            .iter()
            .map(|s| SignAssignment::parse(Arc::clone(&form), s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(desc.mode.clone(), cycle)
    }

    /// Same schedule with every assignment in the cycle negated.
    pub fn negated(&self) -> BlockSchedule {
        BlockSchedule {
            mode: self.mode.clone(),
            cycle: self.cycle.iter().map(SignAssignment::negate).collect(),
        }
    }

    pub fn mode(&self) -> &ScheduleMode {
        &self.mode
    }

    pub fn cycle(&self) -> &[SignAssignment] {
        &self.cycle
    }

    pub fn modulus(&self) -> u64 {
        self.cycle[0].modulus()
    }

    pub fn form(&self) -> &Arc<FormSpec> {
        self.cycle[0].form()
    }

    pub fn describe(&self) -> ScheduleDescription {
        ScheduleDescription {
            modulus: self.modulus(),
            mode: self.mode.clone(),
            cycle: self.cycle.iter().map(SignAssignment::sign_string).collect(),
        }
    }

    /// Advance block bookkeeping for term `index` and return its sign.
    ///
    /// `last_crossing_end` is the term at which the most recent sign change
    /// of the partial sums completed (0 if none).
    pub(crate) fn sign_for(
        &self,
        progress: &mut BlockProgress,
        index: u64,
        residue: u64,
        last_crossing_end: u64,
    ) -> Option<Sign> {
        let done = index - 1;
        if done == 0 {
            *progress = BlockProgress::default();
            progress.open_block(1, self.cycle[0].id());
        } else if self.cycle.len() > 1 {
            let flip = match &self.mode {
                ScheduleMode::Fixed { lengths } => {
                    progress.in_block >= lengths[(progress.block % lengths.len() as u64) as usize]
                }
                ScheduleMode::Adaptive { window } => {
                    progress.anchor = progress.anchor.max(last_crossing_end);
                    done - progress.anchor >= *window
                }
            };
            if flip {
                progress.block += 1;
                progress.in_block = 0;
                progress.anchor = done;
                let id = self.cycle[(progress.block % self.cycle.len() as u64) as usize].id();
                progress.open_block(index, id);
            }
        }
        progress.in_block += 1;
        self.cycle[(progress.block % self.cycle.len() as u64) as usize].sign_of(residue)
    }
}

/// Mutable block state of a composed scan.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockProgress {
    /// Zero-based index of the active block.
    pub block: u64,
    /// Terms consumed in the active block.
    pub in_block: u64,
    /// Start of the current drought: last flip or last completed crossing.
    pub anchor: u64,
    /// First term index of every block, starting with 1.
    pub boundaries: Vec<u64>,
    /// Alternative id active in each block.
    #[serde(with = "crate::arith::id_string::vec")]
    pub block_ids: Vec<u128>,
}

impl BlockProgress {
    fn open_block(&mut self, start: u64, id: u128) {
        self.boundaries.push(start);
        self.block_ids.push(id);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComposedScanReport {
    pub scan: ScanReport,
    pub boundaries: Vec<u64>,
    #[serde(with = "crate::arith::id_string::vec")]
    pub block_ids: Vec<u128>,
}

impl ComposedScanReport {
    /// Term indices after which a flip happened (one before each later
    /// boundary).
    pub fn flip_indices(&self) -> Vec<u64> {
        self.boundaries.iter().skip(1).map(|b| b - 1).collect()
    }
}

pub fn composed_scanner(
    schedule: &BlockSchedule,
    options: ScanOptions,
    config: SieveConfig,
) -> Result<Scanner> {
    Scanner::new(
        SeriesSigns::Composed {
            schedule: schedule.clone(),
            progress: BlockProgress::default(),
        },
        options,
        config,
    )
}

/// Terms of the composed series up to `bounds`.
pub fn compose(schedule: &BlockSchedule, bounds: &Bounds) -> Result<Vec<SeriesTerm>> {
    let mut sc = composed_scanner(
        schedule,
        ScanOptions {
            record_crossings: false,
            dump_prefix: None,
        },
        SieveConfig::default(),
    )?;
    let mut out = Vec::new();
    sc.run_with(bounds, |t| out.push(*t))?;
    Ok(out)
}

pub fn composed_report(sc: &Scanner, bounds: &Bounds) -> ComposedScanReport {
    let (boundaries, block_ids) = match sc.signs() {
        SeriesSigns::Composed { progress, .. } => {
            (progress.boundaries.clone(), progress.block_ids.clone())
        }
        SeriesSigns::Plain(a) => (
            if sc.state().terms > 0 {
                vec![1]
            } else {
                Vec::new()
            },
            if sc.state().terms > 0 {
                vec![a.id()]
            } else {
                Vec::new()
            },
        ),
    };
    ComposedScanReport {
        scan: sc.report(bounds),
        boundaries,
        block_ids,
    }
}

pub fn scan_composed(
    schedule: &BlockSchedule,
    bounds: &Bounds,
    options: ScanOptions,
) -> Result<ComposedScanReport> {
    let mut sc = composed_scanner(schedule, options, SieveConfig::default())?;
    sc.run(bounds)?;
    Ok(composed_report(&sc, bounds))
}
