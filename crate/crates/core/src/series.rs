//! Signed prime series, exact partial sums, zero and crossing detection.
//!
//! A [`Scanner`] pulls primes from a [`PrimeCursor`], signs each one through
//! its [`SeriesSigns`] and folds it into a [`ScanState`]. The running sum is
//! an `i128` with checked addition; overflow aborts the scan.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::composed::{BlockProgress, BlockSchedule, ScheduleDescription};
use crate::error::{Error, Result};
use crate::forms::{Sign, SignAssignment};
use crate::sieve::{PrimeCursor, SieveConfig, MAX_LIMIT};

/// Version string stamped into reports and checkpoints.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Terms between stored `(n, S_n)` snapshots.
pub const SNAPSHOT_INTERVAL: u64 = 1 << 20;

/// Terms between recurrence self-checks.
pub const RECURRENCE_CHECK_INTERVAL: u64 = 10_000;

/// Term count used when no bound is given at all.
pub const DEFAULT_TERMS: u64 = 100_000;

/// Where a scan stops: after `max_terms` terms or at the last prime
/// `<= prime_bound`, whichever comes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    pub max_terms: Option<u64>,
    pub prime_bound: Option<u64>,
}

impl Bounds {
    pub fn terms(n: u64) -> Self {
        Bounds {
            max_terms: Some(n),
            prime_bound: None,
        }
    }

    pub fn primes(limit: u64) -> Self {
        Bounds {
            max_terms: None,
            prime_bound: Some(limit),
        }
    }

    pub fn both(n: u64, limit: u64) -> Self {
        Bounds {
            max_terms: Some(n),
            prime_bound: Some(limit),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms.is_none() && self.prime_bound.is_none() {
            return Err(Error::Config(
                "scan needs a term bound or a prime bound".into(),
            ));
        }
        if self.prime_bound.is_some_and(|b| b > MAX_LIMIT) {
            return Err(Error::Resource(format!("prime bound above {MAX_LIMIT}")));
        }
        Ok(())
    }

    fn prime_limit(&self) -> u64 {
        self.prime_bound.unwrap_or(MAX_LIMIT)
    }

    /// Component-wise `>=`; a missing component is unbounded.
    pub fn covers(&self, other: &Bounds) -> bool {
        fn ge(a: Option<u64>, b: Option<u64>) -> bool {
            match (a, b) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(x), Some(y)) => x >= y,
            }
        }
        ge(self.max_terms, other.max_terms) && ge(self.prime_bound, other.prime_bound)
    }

    /// `self` covers `other` and is larger in at least one component.
    pub fn strictly_dominates(&self, other: &Bounds) -> bool {
        self.covers(other) && self != other
    }
}

impl std::fmt::Display for Bounds {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.max_terms, self.prime_bound) {
            (Some(n), Some(p)) => write!(f, "terms<={n}, primes<={p}"),
            (Some(n), None) => write!(f, "terms<={n}"),
            (None, Some(p)) => write!(f, "primes<={p}"),
            (None, None) => write!(f, "unbounded"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub index: u64,
    pub prime: u64,
    pub residue: u64,
    pub value: i128,
}

/// `S_n = 0`, reached by adding `prime` as term `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Zero {
    pub n: u64,
    pub prime: u64,
}

/// Strict sign change between `S_j` and `S_{j+1}`; `prime` is term `j+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub j: u64,
    pub s_j: i128,
    pub s_next: i128,
    pub prime: u64,
}

impl Crossing {
    pub fn downward(&self) -> bool {
        self.s_j > 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extremum {
    pub value: i128,
    pub index: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub n: u64,
    pub sum: i128,
    pub prime: u64,
}

/// Evidence about a possible final sign-change index: the last crossing
/// seen and how many terms have passed since it completed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaCandidate {
    pub last_crossing: Option<u64>,
    pub drought: u64,
}

/// Running state of one scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanState {
    pub terms: u64,
    pub sum: i128,
    pub last_prime: Option<u64>,
    pub zeros: Vec<Zero>,
    pub crossings: Vec<Crossing>,
    pub crossing_count: u64,
    pub last_crossing: Option<u64>,
    pub census: BTreeMap<u64, u64>,
    pub min: Option<Extremum>,
    pub max: Option<Extremum>,
    pub snapshots: Vec<Snapshot>,
    /// Sum at the last recurrence check and the term sum accumulated since.
    pub check_base: i128,
    pub check_delta: i128,
}

impl ScanState {
    pub fn new(residues: &[u64]) -> Self {
        ScanState {
            terms: 0,
            sum: 0,
            last_prime: None,
            zeros: Vec::new(),
            crossings: Vec::new(),
            crossing_count: 0,
            last_crossing: None,
            census: residues.iter().map(|&o| (o, 0)).collect(),
            min: None,
            max: None,
            snapshots: Vec::new(),
            check_base: 0,
            check_delta: 0,
        }
    }

    /// Term index at which the most recent sign change completed.
    pub fn last_crossing_end(&self) -> u64 {
        self.last_crossing.map_or(0, |j| j + 1)
    }

    fn push(&mut self, term: &SeriesTerm, record_crossings: bool) -> Result<()> {
        let n = term.index;
        let prev = self.sum;
        let sum = prev
            .checked_add(term.value)
            .ok_or(Error::Overflow { index: n })?;
        self.sum = sum;
        self.terms = n;
        self.last_prime = Some(term.prime);
        *self.census.entry(term.residue).or_insert(0) += 1;

        // every term is odd, so S_n has the parity of n
        if (sum - n as i128) & 1 != 0 {
            return Err(Error::Invariant {
                index: n,
                what: format!("S_n = {sum} has the wrong parity"),
            });
        }
        if sum == 0 {
            self.zeros.push(Zero {
                n,
                prime: term.prime,
            });
        }
        if (prev > 0 && sum < 0) || (prev < 0 && sum > 0) {
            self.crossing_count += 1;
            self.last_crossing = Some(n - 1);
            if record_crossings {
                self.crossings.push(Crossing {
                    j: n - 1,
                    s_j: prev,
                    s_next: sum,
                    prime: term.prime,
                });
            }
        }
        if self.min.is_none_or(|m| sum < m.value) {
            self.min = Some(Extremum {
                value: sum,
                index: n,
            });
        }
        if self.max.is_none_or(|m| sum > m.value) {
            self.max = Some(Extremum {
                value: sum,
                index: n,
            });
        }

        self.check_delta += term.value;
        if n.is_multiple_of(RECURRENCE_CHECK_INTERVAL) {
            if self.check_base + self.check_delta != sum {
                return Err(Error::Invariant {
                    index: n,
                    what: "partial sum disagrees with accumulated terms".into(),
                });
            }
            self.check_base = sum;
            self.check_delta = 0;
        }
        if n.is_multiple_of(SNAPSHOT_INTERVAL) {
            self.snapshots.push(Snapshot {
                n,
                sum,
                prime: term.prime,
            });
        }
        Ok(())
    }

    pub fn beta_candidate(&self) -> Option<BetaCandidate> {
        (self.terms > 0).then(|| BetaCandidate {
            last_crossing: self.last_crossing,
            drought: self.terms - self.last_crossing_end(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Keep the full crossing list (the count is always kept).
    pub record_crossings: bool,
    /// Store `S_1..S_k` for the first `k` terms.
    pub dump_prefix: Option<u64>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            record_crossings: true,
            dump_prefix: None,
        }
    }
}

/// How each term gets its sign.
#[derive(Debug, Clone)]
pub enum SeriesSigns {
    Plain(SignAssignment),
    Composed {
        schedule: BlockSchedule,
        progress: BlockProgress,
    },
}

impl SeriesSigns {
    fn sign_for(&mut self, index: u64, residue: u64, state: &ScanState) -> Sign {
        let sign = match self {
            SeriesSigns::Plain(a) => a.sign_of(residue),
            SeriesSigns::Composed { schedule, progress } => {
                schedule.sign_for(progress, index, residue, state.last_crossing_end())
            }
        };
        sign.expect("cursor only emits admissible residues")
    }

    pub fn label(&self) -> SeriesLabel {
        match self {
            SeriesSigns::Plain(a) => SeriesLabel::Plain {
                id: a.id(),
                signs: a.sign_string(),
            },
            SeriesSigns::Composed { schedule, .. } => SeriesLabel::Composed {
                schedule: schedule.describe(),
            },
        }
    }

    pub fn modulus(&self) -> u64 {
        match self {
            SeriesSigns::Plain(a) => a.modulus(),
            SeriesSigns::Composed { schedule, .. } => schedule.modulus(),
        }
    }

    fn residues(&self) -> Vec<u64> {
        match self {
            SeriesSigns::Plain(a) => a.form().residues().to_vec(),
            SeriesSigns::Composed { schedule, .. } => {
                schedule.cycle()[0].form().residues().to_vec()
            }
        }
    }
}

/// What series a report describes. The sign string is authoritative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeriesLabel {
    Plain {
        #[serde(with = "crate::arith::id_string")]
        id: u128,
        signs: String,
    },
    Composed {
        schedule: ScheduleDescription,
    },
}

/// Result of scanning one series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub engine_version: String,
    pub modulus: u64,
    pub series: SeriesLabel,
    pub bounds: Bounds,
    pub sieve: SieveConfig,
    pub terms: u64,
    pub last_prime: Option<u64>,
    pub final_sum: i128,
    pub zeros: Vec<Zero>,
    pub crossing_count: u64,
    pub crossings: Vec<Crossing>,
    pub census: BTreeMap<u64, u64>,
    pub min: Option<Extremum>,
    pub max: Option<Extremum>,
    pub snapshots: Vec<Snapshot>,
    pub beta_candidate: Option<BetaCandidate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix: Option<Vec<i128>>,
}

impl ScanReport {
    /// Lengths of the segments obtained by restarting the series after every
    /// zero; the trailing unfinished segment is included when non-empty.
    pub fn restart_segments(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut start = 0;
        for z in &self.zeros {
            out.push(z.n - start);
            start = z.n;
        }
        if self.terms > start {
            out.push(self.terms - start);
        }
        out
    }
}

/// Sequential scanner over one signed series.
#[derive(Debug, Clone)]
pub struct Scanner {
    signs: SeriesSigns,
    state: ScanState,
    options: ScanOptions,
    config: SieveConfig,
    cursor: PrimeCursor,
    cursor_limit: u64,
    prefix: Vec<i128>,
}

impl Scanner {
    pub fn new(signs: SeriesSigns, options: ScanOptions, config: SieveConfig) -> Result<Self> {
        let state = ScanState::new(&signs.residues());
        Self::from_parts(signs, state, options, config, Vec::new())
    }

    pub fn plain(assignment: SignAssignment) -> Result<Self> {
        Self::new(
            SeriesSigns::Plain(assignment),
            ScanOptions::default(),
            SieveConfig::default(),
        )
    }

    /// Rebuild a scanner from saved state; the cursor restarts after the
    /// state's last prime.
    pub fn from_parts(
        signs: SeriesSigns,
        state: ScanState,
        options: ScanOptions,
        config: SieveConfig,
        prefix: Vec<i128>,
    ) -> Result<Self> {
        let cursor =
            PrimeCursor::resume_after(signs.modulus(), state.last_prime, MAX_LIMIT, &config)?;
        Ok(Scanner {
            signs,
            state,
            options,
            config,
            cursor,
            cursor_limit: MAX_LIMIT,
            prefix,
        })
    }

    pub fn state(&self) -> &ScanState {
        &self.state
    }

    pub fn signs(&self) -> &SeriesSigns {
        &self.signs
    }

    pub fn options(&self) -> &ScanOptions {
        &self.options
    }

    pub fn sieve_config(&self) -> &SieveConfig {
        &self.config
    }

    pub fn prefix(&self) -> &[i128] {
        &self.prefix
    }

    fn retarget(&mut self, prime_limit: u64) -> Result<()> {
        if prime_limit != self.cursor_limit {
            self.cursor = PrimeCursor::resume_after(
                self.signs.modulus(),
                self.state.last_prime,
                prime_limit,
                &self.config,
            )?;
            self.cursor_limit = prime_limit;
        }
        Ok(())
    }

    /// Consume one more prime. `None` once the cursor's prime limit is hit.
    pub fn step(&mut self) -> Result<Option<SeriesTerm>> {
        let Some(rp) = self.cursor.next() else {
            return Ok(None);
        };
        let index = self.state.terms + 1;
        let sign = self.signs.sign_for(index, rp.residue, &self.state);
        let term = SeriesTerm {
            index,
            prime: rp.prime,
            residue: rp.residue,
            value: sign.apply(rp.prime),
        };
        self.state.push(&term, self.options.record_crossings)?;
        if self.options.dump_prefix.is_some_and(|k| index <= k) {
            self.prefix.push(self.state.sum);
        }
        Ok(Some(term))
    }

    /// Advance until `bounds` is reached. Terms already consumed are kept;
    /// bounds at or below the current position are a no-op.
    pub fn run(&mut self, bounds: &Bounds) -> Result<()> {
        self.run_with(bounds, |_| {})
    }

    /// As [`Scanner::run`], calling `visit` with each new term.
    pub fn run_with(&mut self, bounds: &Bounds, mut visit: impl FnMut(&SeriesTerm)) -> Result<()> {
        self.run_while(bounds, |t, _| {
            visit(t);
            true
        })
    }

    /// Advance to `bounds` but stop early at the first new zero, which is
    /// returned.
    pub fn run_until_zero(&mut self, bounds: &Bounds) -> Result<Option<Zero>> {
        let mut hit = None;
        self.run_while(bounds, |t, st| {
            if st.sum == 0 {
                hit = Some(Zero {
                    n: t.index,
                    prime: t.prime,
                });
            }
            hit.is_none()
        })?;
        Ok(hit)
    }

    fn run_while(
        &mut self,
        bounds: &Bounds,
        mut keep_going: impl FnMut(&SeriesTerm, &ScanState) -> bool,
    ) -> Result<()> {
        bounds.validate()?;
        if self.reached(bounds) {
            return Ok(());
        }
        self.retarget(bounds.prime_limit())?;
        while bounds.max_terms.is_none_or(|n| self.state.terms < n) {
            match self.step()? {
                Some(t) => {
                    if !keep_going(&t, &self.state) {
                        break;
                    }
                }
                None => break,
            }
        }
        Ok(())
    }

    fn reached(&self, bounds: &Bounds) -> bool {
        bounds.max_terms.is_some_and(|n| self.state.terms >= n)
            || bounds
                .prime_bound
                .is_some_and(|b| self.state.last_prime.is_some_and(|p| p >= b))
    }

    pub fn report(&self, bounds: &Bounds) -> ScanReport {
        let s = &self.state;
        ScanReport {
            engine_version: ENGINE_VERSION.to_string(),
            modulus: self.signs.modulus(),
            series: self.signs.label(),
            bounds: *bounds,
            sieve: self.config,
            terms: s.terms,
            last_prime: s.last_prime,
            final_sum: s.sum,
            zeros: s.zeros.clone(),
            crossing_count: s.crossing_count,
            crossings: s.crossings.clone(),
            census: s.census.clone(),
            min: s.min,
            max: s.max,
            snapshots: s.snapshots.clone(),
            beta_candidate: s.beta_candidate(),
            prefix: self.options.dump_prefix.map(|_| self.prefix.clone()),
        }
    }
}

/// Scan one plain series to `bounds`.
pub fn scan(
    assignment: &SignAssignment,
    bounds: &Bounds,
    options: ScanOptions,
) -> Result<ScanReport> {
    let mut sc = Scanner::new(
        SeriesSigns::Plain(assignment.clone()),
        options,
        SieveConfig::default(),
    )?;
    sc.run(bounds)?;
    Ok(sc.report(bounds))
}

/// `S_1 ..= S_{n_max}`.
pub fn partial_sums(assignment: &SignAssignment, n_max: u64) -> Result<Vec<i128>> {
    if n_max == 0 {
        return Err(Error::Config("n_max must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(n_max as usize);
    let mut sc = Scanner::plain(assignment.clone())?;
    while (out.len() as u64) < n_max {
        match sc.step()? {
            Some(_) => out.push(sc.state().sum),
            None => break,
        }
    }
    Ok(out)
}

pub fn find_zeros(assignment: &SignAssignment, bounds: &Bounds) -> Result<Vec<Zero>> {
    let opts = ScanOptions {
        record_crossings: false,
        dump_prefix: None,
    };
    Ok(scan(assignment, bounds, opts)?.zeros)
}

pub fn crossings(assignment: &SignAssignment, bounds: &Bounds) -> Result<Vec<Crossing>> {
    Ok(scan(assignment, bounds, ScanOptions::default())?.crossings)
}

/// Count of primes `<= prime_bound` in each admissible residue class of `e`.
pub fn census(e: u64, prime_bound: u64) -> Result<BTreeMap<u64, u64>> {
    let form = crate::forms::enumerate_forms(e)?;
    let mut counts: BTreeMap<u64, u64> = form.residues().iter().map(|&o| (o, 0)).collect();
    for rp in PrimeCursor::new(e, prime_bound, &SieveConfig::default())? {
        *counts.entry(rp.residue).or_insert(0) += 1;
    }
    Ok(counts)
}

/// `(m_{n-1}, m_n, S_{n-1})` for inspecting near misses of `S_{n-1} = -m_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationRow {
    pub n: u64,
    pub previous_term: i128,
    pub term: i128,
    pub previous_sum: i128,
}

pub fn table2_relations(
    assignment: &SignAssignment,
    checkpoints: &[u64],
    bounds: Option<&Bounds>,
) -> Result<Vec<RelationRow>> {
    let Some(&deepest) = checkpoints.iter().max() else {
        return Ok(Vec::new());
    };
    let mut scan_to = Bounds::terms(deepest);
    if let Some(b) = bounds {
        scan_to.prime_bound = b.prime_bound;
        scan_to.max_terms = Some(b.max_terms.map_or(deepest, |n| n.min(deepest)));
    }
    let mut values: Vec<i128> = Vec::new();
    let mut sc = Scanner::plain(assignment.clone())?;
    sc.run_with(&scan_to, |t| values.push(t.value))?;
    let scanned = values.len() as u64;
    checkpoints
        .iter()
        .map(|&n| {
            if n < 2 || n > scanned {
                return Err(Error::OutOfRange { index: n, scanned });
            }
            let i = n as usize;
            Ok(RelationRow {
                n,
                previous_term: values[i - 2],
                term: values[i - 1],
                previous_sum: values[..i - 1].iter().sum(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::enumerate_forms;
    use std::sync::Arc;

    fn canonical(e: u64) -> SignAssignment {
        SignAssignment::canonical(Arc::new(enumerate_forms(e).unwrap())).unwrap()
    }

    #[test]
    fn first_sums() {
        assert_eq!(
            partial_sums(&canonical(4), 9).unwrap(),
            vec![3, -2, 5, 16, 3, -14, 5, 28, -1]
        );
        assert_eq!(
            partial_sums(&canonical(6), 10).unwrap(),
            vec![5, -2, 9, -4, 13, -6, 17, 46, 15, -22]
        );
        assert!(partial_sums(&canonical(4), 0).is_err());
    }

    #[test]
    fn negated_sums() {
        let c = canonical(6);
        let a = partial_sums(&c, 200).unwrap();
        let b = partial_sums(&c.negate(), 200).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| *x == -*y));
    }

    #[test]
    fn e6_crossings_alternate() {
        let xs = crossings(&canonical(6), &Bounds::terms(10)).unwrap();
        let js: Vec<u64> = xs.iter().map(|c| c.j).collect();
        assert_eq!(&js[..6], &[1, 2, 3, 4, 5, 6]);
        for w in xs.windows(2) {
            assert_ne!(w[0].downward(), w[1].downward());
        }
    }

    #[test]
    fn zero_is_not_a_crossing() {
        let rep = scan(&canonical(6), &Bounds::terms(90), ScanOptions::default()).unwrap();
        for z in &rep.zeros {
            assert!(rep.crossings.iter().all(|c| c.j != z.n && c.j + 1 != z.n));
        }
        assert_eq!(rep.zeros.len(), 2);
    }

    #[test]
    fn census_counts() {
        let c4 = census(4, 100).unwrap();
        assert_eq!(c4.into_iter().collect::<Vec<_>>(), vec![(1, 11), (3, 13)]);
        let c6 = census(6, 100).unwrap();
        assert_eq!(c6.into_iter().collect::<Vec<_>>(), vec![(1, 11), (5, 12)]);
    }

    #[test]
    fn relation_rows() {
        let rows = table2_relations(&canonical(4), &[4, 12], None).unwrap();
        assert_eq!(
            (rows[0].previous_term, rows[0].term, rows[0].previous_sum),
            (7, 11, 5)
        );
        assert_eq!(
            (rows[1].previous_term, rows[1].term, rows[1].previous_sum),
            (-37, -41, -7)
        );
        assert!(matches!(
            table2_relations(&canonical(4), &[1], None),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            table2_relations(&canonical(4), &[30], Some(&Bounds::primes(50))),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn prime_bound_stops_scan() {
        let rep = scan(&canonical(4), &Bounds::primes(100), ScanOptions::default()).unwrap();
        assert_eq!(rep.terms, 24);
        assert_eq!(rep.last_prime, Some(97));
        let rep = scan(&canonical(4), &Bounds::both(5, 100), ScanOptions::default()).unwrap();
        assert_eq!(rep.terms, 5);
    }

    #[test]
    fn bounds_required() {
        let empty = Bounds {
            max_terms: None,
            prime_bound: None,
        };
        assert!(scan(&canonical(4), &empty, ScanOptions::default()).is_err());
    }

    #[test]
    fn run_is_incremental() {
        let mut sc = Scanner::plain(canonical(6)).unwrap();
        sc.run(&Bounds::terms(50)).unwrap();
        sc.run(&Bounds::terms(40)).unwrap();
        assert_eq!(sc.state().terms, 50);
        sc.run(&Bounds::terms(100)).unwrap();
        let whole = scan(&canonical(6), &Bounds::terms(100), ScanOptions::default()).unwrap();
        assert_eq!(sc.report(&Bounds::terms(100)), whole);
    }

    #[test]
    fn restart_segments_split_at_zeros() {
        let rep = scan(&canonical(6), &Bounds::terms(600), ScanOptions::default()).unwrap();
        assert_eq!(rep.restart_segments(), vec![78, 6, 444, 72]);
    }

    #[test]
    fn beta_candidate_tracks_drought() {
        let rep = scan(&canonical(6), &Bounds::terms(10), ScanOptions::default()).unwrap();
        let last = rep.crossings.last().unwrap().j;
        let beta = rep.beta_candidate.unwrap();
        assert_eq!(beta.last_crossing, Some(last));
        assert_eq!(beta.drought, 10 - (last + 1));
    }

    #[test]
    fn bounds_ordering() {
        let a = Bounds::terms(10);
        assert!(Bounds::terms(20).strictly_dominates(&a));
        assert!(!a.strictly_dominates(&a));
        assert!(!Bounds::primes(100).covers(&a));
        assert!(Bounds::both(10, 5).covers(&Bounds::both(10, 5)));
        assert!(!Bounds::both(10, 5).covers(&a));
    }
}
