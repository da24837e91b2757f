//! Zero-witness classification of moduli and the refutable candidate set.
//!
//! A verdict only ever states what a bounded scan saw: a zero with its
//! witness, or no zero up to the recorded limit. Membership in the candidate
//! set can be refuted by a deeper scan finding a zero, never confirmed.

use std::sync::Arc;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::composed::{
    composed_report, composed_scanner, BlockSchedule, ScheduleDescription, ScheduleMode,
    DEFAULT_WINDOW,
};
use crate::error::{Error, Result};
use crate::forms::{count_alternatives, enumerate_forms, SignAssignment, DEFAULT_ALTERNATIVE_CAP};
use crate::series::{
    BetaCandidate, Bounds, ScanOptions, Scanner, SeriesSigns, Zero, ENGINE_VERSION,
};
use crate::sieve::{check_modulus, SieveConfig};

pub const DISCLAIMER: &str =
    "membership is refutable only: an entry means no zero was found up to \
the recorded limits for the recorded schedule, not that none exists";

/// Which assignments a composed schedule cycles through, independent of `e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CyclePlan {
    /// The canonical alternative followed by its negation.
    CanonicalPair,
    /// Explicit sign strings; only valid for moduli with matching residues.
    Explicit(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchedulePlan {
    pub mode: ScheduleMode,
    pub cycle: CyclePlan,
}

impl Default for SchedulePlan {
    fn default() -> Self {
        SchedulePlan {
            mode: ScheduleMode::Adaptive {
                window: DEFAULT_WINDOW,
            },
            cycle: CyclePlan::CanonicalPair,
        }
    }
}

impl SchedulePlan {
    pub fn resolve(&self, e: u64) -> Result<BlockSchedule> {
        let form = Arc::new(enumerate_forms(e)?);
        match &self.cycle {
            CyclePlan::CanonicalPair => {
                BlockSchedule::flip_pair(self.mode.clone(), SignAssignment::canonical(form)?)
            }
            CyclePlan::Explicit(strings) => {
                let cycle = strings
                    .iter()
                    .map(|s| SignAssignment::parse(Arc::clone(&form), s))
                    .collect::<Result<Vec<_>>>()?;
                BlockSchedule::new(self.mode.clone(), cycle)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    ZeroFound {
        n: u64,
        prime: u64,
    },
    NoZeroUpToLimit {
        terms: u64,
        last_prime: Option<u64>,
        crossing_count: u64,
        last_crossing: Option<u64>,
        beta_candidate: Option<BetaCandidate>,
    },
}

impl Outcome {
    pub fn zero(&self) -> Option<Zero> {
        match self {
            Outcome::ZeroFound { n, prime } => Some(Zero {
                n: *n,
                prime: *prime,
            }),
            Outcome::NoZeroUpToLimit { .. } => None,
        }
    }
}

/// Scan until the first zero or the bounds, whichever comes first.
fn first_zero_outcome(mut sc: Scanner, bounds: &Bounds) -> Result<(Outcome, Scanner)> {
    let outcome = match sc.run_until_zero(bounds)? {
        Some(z) => Outcome::ZeroFound {
            n: z.n,
            prime: z.prime,
        },
        None => {
            let st = sc.state();
            Outcome::NoZeroUpToLimit {
                terms: st.terms,
                last_prime: st.last_prime,
                crossing_count: st.crossing_count,
                last_crossing: st.last_crossing,
                beta_candidate: st.beta_candidate(),
            }
        }
    };
    Ok((outcome, sc))
}

fn quiet() -> ScanOptions {
    ScanOptions {
        record_crossings: false,
        dump_prefix: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternativeOutcome {
    #[serde(with = "crate::arith::id_string")]
    pub id: u128,
    pub signs: String,
    pub outcome: Outcome,
    /// Copied from the negated partner instead of scanned.
    pub by_symmetry: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregate {
    AllAlternativesZero,
    MixedOrOpen,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComposedOutcome {
    pub schedule: ScheduleDescription,
    pub outcome: Outcome,
    pub blocks: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    pub engine_version: String,
    pub sieve: SieveConfig,
    pub modulus: u64,
    pub limits: Bounds,
    pub alternatives_total: String,
    /// Only a subset of alternatives was scanned.
    pub sampled: bool,
    pub outcomes: Vec<AlternativeOutcome>,
    pub aggregate: Aggregate,
    pub composed: Option<ComposedOutcome>,
    pub complete: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub limits: Bounds,
    pub plan: SchedulePlan,
    /// Alternatives beyond this count are sampled down to it.
    pub cap: u64,
    /// Scan negated partners too and check they agree.
    pub verify_symmetry: bool,
    pub sieve: SieveConfig,
}

impl ClassifyConfig {
    pub fn new(limits: Bounds) -> Self {
        ClassifyConfig {
            limits,
            plan: SchedulePlan::default(),
            cap: DEFAULT_ALTERNATIVE_CAP,
            verify_symmetry: false,
            sieve: SieveConfig::default(),
        }
    }
}

/// Representative ids from the lower half of the canonical order; the
/// upper half are their negations.
fn representatives(half: u128, want: u64) -> (Vec<u128>, bool) {
    let want = want.max(1) as u128;
    if half <= want {
        return ((1..=half).collect(), false);
    }
    let mut picks: Vec<u128> = (0..want)
        .map(|k| 1 + k * (half - 1) / (want - 1).max(1))
        .collect();
    picks.dedup();
    (picks, true)
}

pub fn classify(e: u64, cfg: &ClassifyConfig) -> Result<ClassificationVerdict> {
    check_modulus(e)?;
    cfg.limits.validate()?;
    let form = Arc::new(enumerate_forms(e)?);
    let total = count_alternatives(e)?;
    let total_u128 = total
        .to_u128()
        .ok_or_else(|| Error::Config(format!("e={e} has too many alternatives to address")))?;
    let (reps, sampled) = representatives(total_u128 / 2, cfg.cap / 2);

    let scan_one = |a: &SignAssignment| -> Result<Outcome> {
        let sc = Scanner::new(SeriesSigns::Plain(a.clone()), quiet(), cfg.sieve)?;
        Ok(first_zero_outcome(sc, &cfg.limits)?.0)
    };

    let results: Vec<Result<Vec<AlternativeOutcome>>> = reps
        .par_iter()
        .map(|&id| {
            let a = SignAssignment::from_id(Arc::clone(&form), id)?;
            let neg = a.negate();
            let outcome = scan_one(&a)?;
            let partner = if cfg.verify_symmetry {
                let other = scan_one(&neg)?;
                if other.zero() != outcome.zero() {
                    return Err(Error::Invariant {
                        index: 0,
                        what: format!("negation pair {} / {} disagree on zeros", a.id(), neg.id()),
                    });
                }
                (other, false)
            } else {
                (outcome.clone(), true)
            };
            Ok(vec![
                AlternativeOutcome {
                    id: a.id(),
                    signs: a.sign_string(),
                    outcome,
                    by_symmetry: false,
                },
                AlternativeOutcome {
                    id: neg.id(),
                    signs: neg.sign_string(),
                    outcome: partner.0,
                    by_symmetry: partner.1,
                },
            ])
        })
        .collect();

    let mut outcomes = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(v) => outcomes.extend(v),
            Err(err) => failures.push(err.to_string()),
        }
    }
    outcomes.sort_by_key(|o| o.id);

    let composed = match cfg.plan.resolve(e) {
        Ok(schedule) => {
            let sc = composed_scanner(&schedule, quiet(), cfg.sieve)?;
            match first_zero_outcome(sc, &cfg.limits) {
                Ok((outcome, sc)) => Some(ComposedOutcome {
                    schedule: schedule.describe(),
                    outcome,
                    blocks: composed_report(&sc, &cfg.limits).boundaries.len() as u64,
                }),
                Err(err) => {
                    failures.push(format!("composed: {err}"));
                    None
                }
            }
        }
        Err(err) => {
            failures.push(format!("schedule: {err}"));
            None
        }
    };

    let complete = failures.is_empty();
    let all_zero = complete && !sampled && outcomes.iter().all(|o| o.outcome.zero().is_some());
    Ok(ClassificationVerdict {
        engine_version: ENGINE_VERSION.to_string(),
        sieve: cfg.sieve,
        modulus: e,
        limits: cfg.limits,
        alternatives_total: total.to_string(),
        sampled,
        outcomes,
        aggregate: if all_zero {
            Aggregate::AllAlternativesZero
        } else {
            Aggregate::MixedOrOpen
        },
        composed,
        complete,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateEntry {
    pub modulus: u64,
    pub terms: u64,
    pub last_prime: Option<u64>,
    pub crossing_count: u64,
    pub blocks: u64,
    pub beta_candidate: Option<BetaCandidate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub modulus: u64,
    pub witness: Zero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub engine_version: String,
    pub sieve: SieveConfig,
    pub from: u64,
    pub to: u64,
    pub limits: Bounds,
    pub plan: SchedulePlan,
    pub members: Vec<CandidateEntry>,
    pub excluded: Vec<Exclusion>,
    pub disclaimer: String,
}

impl CandidateReport {
    pub fn moduli(&self) -> Vec<u64> {
        self.members.iter().map(|m| m.modulus).collect()
    }
}

enum Membership {
    Member(CandidateEntry),
    Out(Exclusion),
}

fn composed_membership(
    e: u64,
    limits: &Bounds,
    plan: &SchedulePlan,
    sieve: SieveConfig,
) -> Result<Membership> {
    let schedule = plan.resolve(e)?;
    let sc = composed_scanner(&schedule, quiet(), sieve)?;
    let (outcome, sc) = first_zero_outcome(sc, limits)?;
    Ok(match outcome {
        Outcome::ZeroFound { n, prime } => Membership::Out(Exclusion {
            modulus: e,
            witness: Zero { n, prime },
        }),
        Outcome::NoZeroUpToLimit {
            terms,
            last_prime,
            crossing_count,
            beta_candidate,
            ..
        } => Membership::Member(CandidateEntry {
            modulus: e,
            terms,
            last_prime,
            crossing_count,
            blocks: composed_report(&sc, limits).boundaries.len() as u64,
            beta_candidate,
        }),
    })
}

fn scan_moduli(
    moduli: &[u64],
    limits: &Bounds,
    plan: &SchedulePlan,
    sieve: SieveConfig,
) -> Result<(Vec<CandidateEntry>, Vec<Exclusion>)> {
    let results: Vec<Result<Membership>> = moduli
        .par_iter()
        .map(|&e| composed_membership(e, limits, plan, sieve))
        .collect();
    let mut members = Vec::new();
    let mut excluded = Vec::new();
    for r in results {
        match r? {
            Membership::Member(m) => members.push(m),
            Membership::Out(x) => excluded.push(x),
        }
    }
    Ok((members, excluded))
}

/// Even moduli in `from..=to` whose composed series shows no zero within
/// `limits`.
pub fn candidate_set(
    from: u64,
    to: u64,
    limits: &Bounds,
    plan: &SchedulePlan,
    sieve: SieveConfig,
) -> Result<CandidateReport> {
    limits.validate()?;
    let moduli: Vec<u64> = if from > to {
        Vec::new()
    } else {
        check_modulus(from)?;
        check_modulus(to)?;
        (from..=to).step_by(2).collect()
    };
    let (members, excluded) = scan_moduli(&moduli, limits, plan, sieve)?;
    Ok(CandidateReport {
        engine_version: ENGINE_VERSION.to_string(),
        sieve,
        from,
        to,
        limits: *limits,
        plan: plan.clone(),
        members,
        excluded,
        disclaimer: DISCLAIMER.to_string(),
    })
}

/// Rescan the surviving members to `deeper` limits. Members only ever
/// leave; excluded moduli keep their witness.
pub fn extend(report: &CandidateReport, deeper: &Bounds) -> Result<CandidateReport> {
    if report.engine_version != ENGINE_VERSION {
        return Err(Error::EngineVersion {
            found: report.engine_version.clone(),
            running: ENGINE_VERSION.to_string(),
        });
    }
    if !deeper.strictly_dominates(&report.limits) {
        return Err(Error::Config(format!(
            "new limits ({deeper}) must strictly dominate the recorded ones ({})",
            report.limits
        )));
    }
    let moduli = report.moduli();
    let (members, newly_out) = scan_moduli(&moduli, deeper, &report.plan, report.sieve)?;
    let mut excluded = report.excluded.clone();
    excluded.extend(newly_out);
    excluded.sort_by_key(|x| x.modulus);
    Ok(CandidateReport {
        limits: *deeper,
        members,
        excluded,
        ..report.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representative_selection() {
        assert_eq!(representatives(3, 10), (vec![1, 2, 3], false));
        let (picks, sampled) = representatives(100, 5);
        assert!(sampled);
        assert_eq!(picks.first(), Some(&1));
        assert_eq!(picks.last(), Some(&100));
        assert_eq!(picks.len(), 5);
    }

    #[test]
    fn e6_is_all_zero() {
        let mut cfg = ClassifyConfig::new(Bounds::primes(10_000));
        cfg.verify_symmetry = true;
        let v = classify(6, &cfg).unwrap();
        assert_eq!(v.aggregate, Aggregate::AllAlternativesZero);
        assert_eq!(v.outcomes.len(), 2);
        for o in &v.outcomes {
            assert_eq!(o.outcome.zero(), Some(Zero { n: 78, prime: 409 }));
        }
    }

    #[test]
    fn e4_is_open() {
        let v = classify(4, &ClassifyConfig::new(Bounds::primes(10_000))).unwrap();
        assert_eq!(v.aggregate, Aggregate::MixedOrOpen);
        assert!(v.outcomes.iter().all(|o| o.outcome.zero().is_none()));
        assert!(v.outcomes.iter().any(|o| o.by_symmetry));
        assert!(v.complete);
    }

    #[test]
    fn sampling_is_flagged() {
        let mut cfg = ClassifyConfig::new(Bounds::terms(200));
        cfg.cap = 8;
        let v = classify(16, &cfg).unwrap();
        assert!(v.sampled);
        assert_eq!(v.outcomes.len(), 8);
        assert_eq!(v.aggregate, Aggregate::MixedOrOpen);
    }

    #[test]
    fn candidate_basics() {
        let plan = SchedulePlan::default();
        let sieve = SieveConfig::default();
        let r = candidate_set(6, 6, &Bounds::primes(10_000), &plan, sieve).unwrap();
        assert!(r.members.is_empty());
        assert_eq!(r.excluded[0].witness, Zero { n: 78, prime: 409 });
        let r = candidate_set(4, 4, &Bounds::primes(10_000), &plan, sieve).unwrap();
        assert_eq!(r.moduli(), vec![4]);
        let r = candidate_set(8, 6, &Bounds::primes(100), &plan, sieve).unwrap();
        assert!(r.members.is_empty() && r.excluded.is_empty());
        assert!(candidate_set(5, 9, &Bounds::primes(100), &plan, sieve).is_err());
    }

    #[test]
    fn extend_requires_domination() {
        let plan = SchedulePlan::default();
        let r = candidate_set(4, 8, &Bounds::terms(100), &plan, SieveConfig::default()).unwrap();
        assert!(extend(&r, &Bounds::terms(100)).is_err());
        assert!(extend(&r, &Bounds::terms(50)).is_err());
        let mut stale = r.clone();
        stale.engine_version = "0.0.0-other".into();
        assert!(matches!(
            extend(&stale, &Bounds::terms(200)),
            Err(Error::EngineVersion { .. })
        ));
    }
}
