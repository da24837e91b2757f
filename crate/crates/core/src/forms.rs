//! Admissible residue forms `e*n + o` and their balanced sign alternatives.
//!
//! An alternative assigns `+` or `-` to every admissible residue of `e` with
//! equally many of each. Alternatives are ordered by reading the sign string
//! over ascending residues as a binary number with `+` = 0 and `-` = 1; the
//! 1-based position in that order is the alternative's id. Ids are computed
//! by combinatorial ranking, so any single alternative can be addressed
//! without enumerating the others.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, binomial_u128, gcd};
use crate::error::{Error, Result};
use crate::sieve::check_modulus;

/// Default cap on materialized alternative lists.
pub const DEFAULT_ALTERNATIVE_CAP: u64 = 1_000_000;

/// Largest residue-class count whose alternative ids fit in `u128`.
pub const MAX_FORMS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn apply(self, p: u64) -> i128 {
        match self {
            Sign::Plus => p as i128,
            Sign::Minus => -(p as i128),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// The odd residues `o` with `gcd(o, e) = 1`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormSpec {
    modulus: u64,
    residues: Vec<u64>,
    /// residue -> position in `residues`, `u32::MAX` when inadmissible
    slot: Vec<u32>,
}

impl FormSpec {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    /// Number of admissible residues, i.e. Euler's phi of the modulus.
    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn position(&self, residue: u64) -> Option<usize> {
        match self.slot.get(residue as usize) {
            Some(&s) if s != u32::MAX => Some(s as usize),
            _ => None,
        }
    }
}

/// Admissible residues for `e`.
pub fn enumerate_forms(e: u64) -> Result<FormSpec> {
    check_modulus(e)?;
    let residues: Vec<u64> = (1..e).step_by(2).filter(|&o| gcd(o, e) == 1).collect();
    let mut slot = vec![u32::MAX; e as usize];
    for (i, &o) in residues.iter().enumerate() {
        slot[o as usize] = i as u32;
    }
    // o <-> e - o pairs the residues, so the count is always even
    debug_assert!(residues.len() >= 2 && residues.len().is_multiple_of(2));
    Ok(FormSpec {
        modulus: e,
        residues,
        slot,
    })
}

/// Number of balanced alternatives for `e`: `C(phi, phi/2)`.
pub fn count_alternatives(e: u64) -> Result<BigUint> {
    let phi = enumerate_forms(e)?.len() as u64;
    Ok(binomial(phi, phi / 2))
}

fn require_rankable(form: &FormSpec) -> Result<()> {
    if form.len() > MAX_FORMS {
        return Err(Error::Config(format!(
            "modulus {} has {} residue classes; alternative ids support at most {MAX_FORMS}",
            form.modulus,
            form.len()
        )));
    }
    Ok(())
}

fn count_u128(phi: usize) -> u128 {
    binomial_u128(phi as u64, phi as u64 / 2).expect("phi <= MAX_FORMS keeps counts in u128")
}

/// 1-based id of a balanced sign vector.
fn rank(signs: &[Sign]) -> u128 {
    let phi = signs.len();
    let mut minus_left = (phi / 2) as u64;
    let mut below: u128 = 0;
    for (idx, s) in signs.iter().enumerate() {
        if *s == Sign::Minus {
            let rest = (phi - 1 - idx) as u64;
            // every balanced completion with '+' here sorts earlier
            below += binomial_u128(rest, minus_left).unwrap_or(0);
            minus_left -= 1;
        }
    }
    below + 1
}

fn unrank(phi: usize, id: u128) -> Vec<Sign> {
    let mut r = id - 1;
    let mut minus_left = (phi / 2) as u64;
    let mut out = Vec::with_capacity(phi);
    for idx in 0..phi {
        let rest = (phi - 1 - idx) as u64;
        let with_plus = binomial_u128(rest, minus_left).unwrap_or(0);
        if minus_left > 0 && r >= with_plus {
            r -= with_plus;
            minus_left -= 1;
            out.push(Sign::Minus);
        } else {
            out.push(Sign::Plus);
        }
    }
    out
}

/// One balanced labeling of the admissible residues with signs.
#[derive(Clone, PartialEq, Eq)]
pub struct SignAssignment {
    form: Arc<FormSpec>,
    signs: Vec<Sign>,
    id: u128,
}

impl fmt::Debug for SignAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SignAssignment(e={}, #{} {})",
            self.form.modulus,
            self.id,
            self.sign_string()
        )
    }
}

impl SignAssignment {
    pub fn from_signs(form: Arc<FormSpec>, signs: Vec<Sign>) -> Result<Self> {
        require_rankable(&form)?;
        if signs.len() != form.len() {
            return Err(Error::InvalidAssignment(format!(
                "expected {} signs for e={}, got {}",
                form.len(),
                form.modulus,
                signs.len()
            )));
        }
        let minus = signs.iter().filter(|s| **s == Sign::Minus).count();
        if minus * 2 != signs.len() {
            return Err(Error::InvalidAssignment(format!(
                "unbalanced: {} minus of {} signs",
                minus,
                signs.len()
            )));
        }
        let id = rank(&signs);
        Ok(SignAssignment { form, signs, id })
    }

    /// Parse a string of `+`/`-` over ascending residues.
    pub fn parse(form: Arc<FormSpec>, text: &str) -> Result<Self> {
        let signs = text
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                other => Err(Error::InvalidAssignment(format!(
                    "unexpected character {other:?} in sign string {text:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_signs(form, signs)
    }

    pub fn from_id(form: Arc<FormSpec>, id: u128) -> Result<Self> {
        require_rankable(&form)?;
        let count = count_u128(form.len());
        if id == 0 || id > count {
            return Err(Error::InvalidAssignment(format!(
                "id {id} outside 1..={count} for e={}",
                form.modulus
            )));
        }
        let signs = unrank(form.len(), id);
        Ok(SignAssignment { form, signs, id })
    }

    /// Minus on the lower half of the residues, plus on the upper half.
    pub fn canonical(form: Arc<FormSpec>) -> Result<Self> {
        let half = form.len() / 2;
        let signs = (0..form.len())
            .map(|i| if i < half { Sign::Minus } else { Sign::Plus })
            .collect();
        Self::from_signs(form, signs)
    }

    pub fn negate(&self) -> SignAssignment {
        let signs: Vec<Sign> = self.signs.iter().map(|s| s.flip()).collect();
        // complementing the bit string reverses the canonical order
        let id = count_u128(self.signs.len()) + 1 - self.id;
        SignAssignment {
            form: Arc::clone(&self.form),
            signs,
            id,
        }
    }

    pub fn form(&self) -> &Arc<FormSpec> {
        &self.form
    }

    pub fn modulus(&self) -> u64 {
        self.form.modulus
    }

    pub fn id(&self) -> u128 {
        self.id
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn sign_string(&self) -> String {
        self.signs.iter().map(|s| s.as_char()).collect()
    }

    /// Sign attached to `residue`, `None` if the residue is not admissible.
    pub fn sign_of(&self, residue: u64) -> Option<Sign> {
        self.form.position(residue).map(|i| self.signs[i])
    }

    /// `(residue, sign)` pairs over ascending residues.
    pub fn pairs(&self) -> impl Iterator<Item = (u64, Sign)> + '_ {
        self.form
            .residues
            .iter()
            .copied()
            .zip(self.signs.iter().copied())
    }
}

/// Every balanced alternative of `e` in canonical order.
pub fn enumerate_alternatives(e: u64, cap: u64) -> Result<Vec<SignAssignment>> {
    let form = Arc::new(enumerate_forms(e)?);
    let count = count_alternatives(e)?;
    match count.to_u64() {
        Some(n) if n <= cap => {
            require_rankable(&form)?;
            (1..=n as u128)
                .map(|id| SignAssignment::from_id(Arc::clone(&form), id))
                .collect()
        }
        _ => Err(Error::TooManyAlternatives {
            count: count.to_string(),
            cap,
        }),
    }
}

/// One row of the power-of-two modulus identity check.
///
/// For `e = 2^a` there are `phi = 2^(a-1)` residues and `half = phi/2`
/// minus signs per alternative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRow {
    pub a: u32,
    pub modulus: u64,
    pub forms: u64,
    pub half: u64,
    /// `C(phi, half)` from the closed form.
    pub max_j: BigUint,
    /// Alternative count obtained by enumeration, when within the cap.
    pub enumerated: Option<u64>,
    /// `sum_k C(half, k)^2`
    pub square_sum: BigUint,
    /// `sum_k C(half, k)`
    pub base_sum: BigUint,
    /// `2^half`
    pub power_of_two: BigUint,
    /// Middle base `C(half, half/2)` and the previous row's `max_j`.
    pub middle_base: Option<(BigUint, BigUint)>,
    pub squares_ok: bool,
    pub base_sum_ok: bool,
    pub middle_ok: bool,
    pub enumeration_ok: bool,
}

impl IdentityRow {
    pub fn passed(&self) -> bool {
        self.squares_ok && self.base_sum_ok && self.middle_ok && self.enumeration_ok
    }

    /// `(e, base sum)` pair relating the modulus to its power-of-two row sum.
    pub fn growth_pair(&self) -> (u64, BigUint) {
        (self.modulus, self.base_sum.clone())
    }
}

/// Identity checks for `e = 2^a`, `a` in `2..=a_max`.
pub fn identity_report(a_max: u32, cap: u64) -> Result<Vec<IdentityRow>> {
    if !(2..=12).contains(&a_max) {
        return Err(Error::Config(format!(
            "a_max must be in 2..=12, got {a_max}"
        )));
    }
    let mut rows: Vec<IdentityRow> = Vec::new();
    for a in 2..=a_max {
        let modulus = 1u64 << a;
        let forms = enumerate_forms(modulus)?.len() as u64;
        let half = forms / 2;
        let max_j = binomial(forms, half);
        let square_sum: BigUint = (0..=half).map(|k| binomial(half, k).pow(2)).sum();
        let base_sum: BigUint = (0..=half).map(|k| binomial(half, k)).sum();
        let power_of_two = BigUint::from(1u8) << half;
        let enumerated = match max_j.to_u64() {
            Some(n) if n <= cap => Some(enumerate_alternatives(modulus, cap)?.len() as u64),
            _ => None,
        };
        let middle_base = rows
            .last()
            .map(|prev| (binomial(half, half / 2), prev.max_j.clone()));
        let middle_ok = middle_base.as_ref().is_none_or(|(m, p)| m == p);
        rows.push(IdentityRow {
            a,
            modulus,
            forms,
            half,
            squares_ok: square_sum == max_j,
            base_sum_ok: base_sum == power_of_two,
            enumeration_ok: enumerated.is_none_or(|n| BigUint::from(n) == max_j),
            max_j,
            enumerated,
            square_sum,
            base_sum,
            power_of_two,
            middle_base,
            middle_ok,
        });
    }
    Ok(rows)
}

/// Vandermonde and row-sum identities for a plain `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialIdentity {
    pub n: u64,
    pub square_sum: BigUint,
    pub central: BigUint,
    pub row_sum: BigUint,
    pub power_of_two: BigUint,
}

impl BinomialIdentity {
    pub fn passed(&self) -> bool {
        self.square_sum == self.central && self.row_sum == self.power_of_two
    }
}

pub fn binomial_identities(n_max: u64) -> Vec<BinomialIdentity> {
    (0..=n_max)
        .map(|n| BinomialIdentity {
            n,
            square_sum: (0..=n).map(|k| binomial(n, k).pow(2)).sum(),
            central: binomial(2 * n, n),
            row_sum: (0..=n).map(|k| binomial(n, k)).sum(),
            power_of_two: BigUint::from(1u8) << n,
        })
        .collect()
}
