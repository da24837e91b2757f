//! Run configuration shared by the command line and config files. A TOML
//! file uses the same field names as the long flags, with `_` for `-`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use qaseries::composed::{ScheduleMode, DEFAULT_WINDOW};
use qaseries::series::DEFAULT_TERMS;
use qaseries::{enumerate_forms, Bounds, CyclePlan, SchedulePlan, SignAssignment};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Primes up to --prime-bound
    Primes,
    /// Admissible residues of e
    Forms,
    /// An alternative and its negation
    Negate,
    /// Signed terms with their primes and residues
    Terms,
    /// Balanced sign alternatives of e with canonical ids
    Alternatives,
    /// Full scan report for one alternative
    Scan,
    /// Zero witnesses of one alternative
    Zeros,
    /// Sign changes of the partial sums
    Crossings,
    /// Prime counts per residue
    Census,
    /// Neighbouring terms and partial sum at chosen indices
    Table2,
    /// Composed (block-switching) series scan
    Infscan,
    /// First zero of every alternative of e
    Classify,
    /// Moduli in a range whose composed series has no zero yet
    Candidates,
    /// Rescan a candidate report to deeper limits
    Extend,
    /// Binomial identity checks for power-of-two moduli
    Identities,
    /// Continue a checkpointed scan
    Resume,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Fixed,
    Adaptive,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Command to run (may instead come from the config file)
    #[arg(value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,

    /// Modulus (even, >= 4)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<u64>,

    /// First modulus of a range
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from: Option<u64>,

    /// Last modulus of a range (inclusive)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub to: Option<u64>,

    /// Alternative: canonical id or sign string over ascending residues, e.g. "-+"
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alt: Option<String>,

    /// Number of series terms to scan
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<u64>,

    /// Largest prime to include
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_bound: Option<u64>,

    /// Block schedule for composed series
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,

    /// Block lengths for the fixed schedule, cycled
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<u64>>,

    /// Drought window for the adaptive schedule
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<u64>,

    /// Alternatives a composed series cycles through (ids or sign strings)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<String>>,

    /// Indices for table2
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<Vec<u64>>,

    /// Output format
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,

    /// Write output here instead of stdout
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,

    /// Input report for extend
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,

    /// Checkpoint file; an existing one is resumed
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoint: Option<PathBuf>,

    /// Save the checkpoint every this many terms
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoint_every: Option<u64>,

    /// Worker threads for classify and candidates
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,

    /// Keep the first N partial sums in the report
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dump_prefix: Option<u64>,

    /// Also report the series restarted after every zero
    #[arg(long)]
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub restart: bool,

    /// Most alternatives to enumerate or scan
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,

    /// Largest exponent a for identities (e = 2^a)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amax: Option<u32>,

    /// Also scan negated partners in classify and check they agree
    #[arg(long)]
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub verify_symmetry: bool,
}

pub const DEFAULT_CHECKPOINT_EVERY: u64 = 1 << 20;

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field; } )*
    };
}

impl RunConfig {
    pub fn from_file(path: &Path) -> anyhow::Result<RunConfig> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// `top` wins wherever it sets a value.
    pub fn overlay(mut self, top: RunConfig) -> RunConfig {
        overlay!(self, top; command, e, from, to, alt, terms, prime_bound, mode, lengths, window,
            cycle, at, format, output, input, checkpoint, checkpoint_every, jobs, dump_prefix,
            cap, amax);
        self.restart |= top.restart;
        self.verify_symmetry |= top.verify_symmetry;
        self
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn modulus(&self) -> anyhow::Result<u64> {
        self.e.context("--e is required for this command")
    }

    /// Requested bounds, defaulting to a short term-count scan.
    pub fn bounds(&self) -> Bounds {
        match (self.terms, self.prime_bound) {
            (None, None) => Bounds::terms(DEFAULT_TERMS),
            (t, p) => Bounds {
                max_terms: t,
                prime_bound: p,
            },
        }
    }

    pub fn explicit_bounds(&self) -> Option<Bounds> {
        (self.terms.is_some() || self.prime_bound.is_some()).then(|| self.bounds())
    }

    pub fn schedule_mode(&self) -> anyhow::Result<ScheduleMode> {
        let mode = self.mode.unwrap_or(if self.lengths.is_some() {
            Mode::Fixed
        } else {
            Mode::Adaptive
        });
        Ok(match mode {
            Mode::Fixed => ScheduleMode::Fixed {
                lengths: self
                    .lengths
                    .clone()
                    .context("--mode fixed needs --lengths")?,
            },
            Mode::Adaptive => {
                if self.lengths.is_some() {
                    bail!("--lengths only applies to --mode fixed");
                }
                ScheduleMode::Adaptive {
                    window: self.window.unwrap_or(DEFAULT_WINDOW),
                }
            }
        })
    }

    /// Schedule plan for commands spanning several moduli. Cycle entries
    /// must be sign strings there, since ids depend on the modulus.
    pub fn plan(&self) -> anyhow::Result<SchedulePlan> {
        Ok(SchedulePlan {
            mode: self.schedule_mode()?,
            cycle: match &self.cycle {
                None => CyclePlan::CanonicalPair,
                Some(c) => CyclePlan::Explicit(c.clone()),
            },
        })
    }

    /// Plan for a single modulus; ids in the cycle are turned into strings.
    pub fn plan_for(&self, e: u64) -> anyhow::Result<SchedulePlan> {
        let mut plan = self.plan()?;
        if let CyclePlan::Explicit(entries) = &plan.cycle {
            let strings = entries
                .iter()
                .map(|s| select(e, Some(s)).map(|a| a.sign_string()))
                .collect::<anyhow::Result<Vec<_>>>()?;
            plan.cycle = CyclePlan::Explicit(strings);
        }
        Ok(plan)
    }
}

/// Resolve an alternative selector: `None` is the canonical alternative,
/// all-digit strings are ids, anything else is a sign string.
pub fn select(e: u64, alt: Option<&str>) -> anyhow::Result<SignAssignment> {
    let form = Arc::new(enumerate_forms(e)?);
    let a = match alt.map(str::trim) {
        None => SignAssignment::canonical(form)?,
        Some(s) if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) => {
            let id: u128 = s
                .parse()
                .with_context(|| format!("alternative id {s} is too large"))?;
            SignAssignment::from_id(form, id)?
        }
        Some(s) => SignAssignment::parse(form, s)?,
    };
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_and_flags_merge() {
        let file: RunConfig =
            toml::from_str("command = \"zeros\"\ne = 6\nalt = \"-+\"\nterms = 600\n").unwrap();
        let flags = RunConfig {
            terms: Some(100),
            ..RunConfig::default()
        };
        let cfg = file.overlay(flags);
        assert_eq!(cfg.command, Some(Command::Zeros));
        assert_eq!(cfg.terms, Some(100));
        assert_eq!(cfg.alt.as_deref(), Some("-+"));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<RunConfig>("modulus = 6").is_err());
    }

    #[test]
    fn selectors() {
        assert_eq!(select(4, None).unwrap().sign_string(), "-+");
        assert_eq!(select(4, Some("1")).unwrap().sign_string(), "+-");
        assert_eq!(select(4, Some("-+")).unwrap().id(), 2);
        assert!(select(4, Some("--")).is_err());
        assert!(select(4, Some("3")).is_err());
    }

    #[test]
    fn default_bounds() {
        assert_eq!(RunConfig::default().bounds(), Bounds::terms(DEFAULT_TERMS));
        let cfg = RunConfig {
            prime_bound: Some(100),
            ..RunConfig::default()
        };
        assert_eq!(cfg.bounds(), Bounds::primes(100));
    }
}
