//! Segmented sieve of Eratosthenes and the residue-tagged prime stream.
//!
//! [`PrimeSieve`] yields primes in ascending order from an arbitrary start,
//! sieving one fixed-size window of odd numbers at a time so memory stays
//! bounded regardless of how far a scan runs. Base primes are grown lazily as
//! the window moves past the square of the current base bound.
//!
//! [`PrimeCursor`] wraps the sieve for a fixed even modulus and drops every
//! prime dividing it, tagging the rest with their residue.

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};

/// Default sieve window, in numbers (odd and even) per segment.
pub const DEFAULT_SEGMENT_LEN: u64 = 1 << 20;

/// Default memory budget for sieve buffers and collected prime lists.
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

/// Environment variable that overrides the memory budget, in bytes.
pub const MEMORY_BUDGET_ENV: &str = "QASERIES_SIEVE_BUDGET";

/// Largest prime bound accepted; keeps `p * p` and window arithmetic in `u64`.
pub const MAX_LIMIT: u64 = 1 << 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveConfig {
    pub segment_len: u64,
    pub memory_budget: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_len: DEFAULT_SEGMENT_LEN,
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

impl SieveConfig {
    /// Default configuration with the memory budget taken from
    /// [`MEMORY_BUDGET_ENV`] when it is set to a valid byte count.
    pub fn from_env() -> Result<Self> {
        let mut cfg = SieveConfig::default();
        if let Ok(raw) = std::env::var(MEMORY_BUDGET_ENV) {
            cfg.memory_budget = raw.trim().parse().map_err(|_| {
                Error::Config(format!(
                    "{MEMORY_BUDGET_ENV} must be a byte count, got {raw:?}"
                ))
            })?;
        }
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.segment_len < 64 {
            return Err(Error::Config(format!(
                "segment length must be at least 64, got {}",
                self.segment_len
            )));
        }
        // one byte per odd number in the window
        let window_bytes = self.segment_len / 2;
        if window_bytes > self.memory_budget {
            return Err(Error::Resource(format!(
                "sieve window needs {window_bytes} bytes, budget is {}",
                self.memory_budget
            )));
        }
        Ok(())
    }
}

/// Simple sieve returning all primes `<= n`. Used for base primes only.
fn small_primes(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Ascending prime iterator over `[start, limit]`.
#[derive(Debug, Clone)]
pub struct PrimeSieve {
    limit: u64,
    segment_len: u64,
    /// Next number not yet covered by a sieved window.
    next_lo: u64,
    /// Odd primes usable for crossing off, all `<= base_bound`.
    base: Vec<u64>,
    base_bound: u64,
    window: Vec<bool>,
    window_lo: u64,
    window_pos: usize,
    emit_two: bool,
}

impl PrimeSieve {
    pub fn new(start: u64, limit: u64, config: &SieveConfig) -> Result<Self> {
        config.validate()?;
        if limit > MAX_LIMIT {
            return Err(Error::Resource(format!(
                "prime bound {limit} exceeds supported maximum {MAX_LIMIT}"
            )));
        }
        // windows always begin on an odd number
        let first_odd = if start <= 3 { 3 } else { start | 1 };
        Ok(PrimeSieve {
            limit,
            segment_len: config.segment_len & !1,
            next_lo: first_odd,
            base: Vec::new(),
            base_bound: 0,
            window: Vec::new(),
            window_lo: first_odd,
            window_pos: 0,
            emit_two: start <= 2 && limit >= 2,
        })
    }

    fn ensure_base(&mut self, hi: u64) {
        let need = isqrt(hi);
        if need <= self.base_bound {
            return;
        }
        let bound = need.max(self.base_bound.saturating_mul(2)).max(1 << 10);
        self.base = small_primes(bound)
            .into_iter()
            .filter(|&p| p != 2)
            .collect();
        self.base_bound = bound;
    }

    /// Sieve the next window. Returns false once the limit is exhausted.
    fn refill(&mut self) -> bool {
        if self.next_lo > self.limit {
            return false;
        }
        let lo = self.next_lo;
        // inclusive upper end of this window
        let hi = (lo + self.segment_len - 2).min(self.limit);
        let slots = ((hi - lo) / 2 + 1) as usize;
        self.ensure_base(hi);
        self.window.clear();
        self.window.resize(slots, true);
        for &q in &self.base {
            let sq = q * q;
            if sq > hi {
                break;
            }
            let mut m = if sq >= lo { sq } else { lo.div_ceil(q) * q };
            if m % 2 == 0 {
                m += q;
            }
            let mut idx = ((m - lo) / 2) as usize;
            while idx < slots {
                self.window[idx] = false;
                idx += q as usize;
            }
        }
        self.window_lo = lo;
        self.window_pos = 0;
        self.next_lo = if hi >= self.limit {
            self.limit + 1
        } else {
            hi + 2
        };
        true
    }
}

impl Iterator for PrimeSieve {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.emit_two {
            self.emit_two = false;
            return Some(2);
        }
        loop {
            while self.window_pos < self.window.len() {
                let idx = self.window_pos;
                self.window_pos += 1;
                if self.window[idx] {
                    return Some(self.window_lo + 2 * idx as u64);
                }
            }
            if !self.refill() {
                return None;
            }
        }
    }
}

/// Upper bound on pi(x) (Rosser-Schoenfeld), for sizing collected lists.
fn prime_count_upper(x: u64) -> u64 {
    if x < 17 {
        return 7;
    }
    let xf = x as f64;
    (1.25506 * xf / xf.ln()).ceil() as u64
}

/// All primes `<= limit`, ascending.
pub fn primes_upto(limit: u64, config: &SieveConfig) -> Result<Vec<u64>> {
    let est_bytes = prime_count_upper(limit).saturating_mul(8);
    if est_bytes > config.memory_budget {
        return Err(Error::Resource(format!(
            "listing primes up to {limit} needs about {est_bytes} bytes, budget is {}",
            config.memory_budget
        )));
    }
    Ok(PrimeSieve::new(0, limit, config)?.collect())
}

/// Reject moduli outside the admissible set: even and at least 4.
pub fn check_modulus(e: u64) -> Result<()> {
    if e < 4 || !e.is_multiple_of(2) {
        return Err(Error::InvalidModulus(e));
    }
    Ok(())
}

/// A prime together with its residue modulo the stream's modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResiduePrime {
    pub prime: u64,
    pub residue: u64,
}

/// Single-consumer stream of the primes coprime to an even modulus.
#[derive(Debug, Clone)]
pub struct PrimeCursor {
    modulus: u64,
    sieve: PrimeSieve,
    last_prime: Option<u64>,
}

impl PrimeCursor {
    /// Stream every prime `<= limit` coprime to `modulus`.
    pub fn new(modulus: u64, limit: u64, config: &SieveConfig) -> Result<Self> {
        Self::resume_after(modulus, None, limit, config)
    }

    /// Continue a stream whose last emitted prime was `last_prime`.
    pub fn resume_after(
        modulus: u64,
        last_prime: Option<u64>,
        limit: u64,
        config: &SieveConfig,
    ) -> Result<Self> {
        check_modulus(modulus)?;
        let start = last_prime.map_or(0, |p| p + 1);
        Ok(PrimeCursor {
            modulus,
            sieve: PrimeSieve::new(start, limit, config)?,
            last_prime,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The most recently emitted prime, if any.
    pub fn last_prime(&self) -> Option<u64> {
        self.last_prime
    }
}

impl Iterator for PrimeCursor {
    type Item = ResiduePrime;

    fn next(&mut self) -> Option<ResiduePrime> {
        for p in self.sieve.by_ref() {
            if gcd(p, self.modulus) == 1 {
                self.last_prime = Some(p);
                return Some(ResiduePrime {
                    prime: p,
                    residue: p % self.modulus,
                });
            }
        }
        None
    }
}

/// Stream `(p, p mod e)` for every prime `p <= limit` with `gcd(p, e) = 1`.
pub fn stream(e: u64, limit: u64) -> Result<PrimeCursor> {
    PrimeCursor::new(e, limit, &SieveConfig::default())
}
