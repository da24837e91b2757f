//! Small exact-integer helpers shared by the combinatorics and the sieve.

use num_bigint::BigUint;
use num_traits::One;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact binomial coefficient, `None` on `u128` overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        let num = (n - i) as u128;
        let den = (i + 1) as u128;
        let g = gcd_u128(acc, den);
        let (acc_r, den_r) = (acc / g, den / g);
        let num_r = num / den_r;
        debug_assert_eq!(num % den_r, 0);
        acc = acc_r.checked_mul(num_r)?;
    }
    Some(acc)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact binomial coefficient of arbitrary size.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Serde adapters writing `u128` ids as decimal strings. Ids can exceed the
/// range JSON numbers round-trip reliably, and buffered (tagged) enums do not
/// carry `u128` at all.
pub mod id_string {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(id: &u128, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(id)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }

    pub mod vec {
        use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(ids: &[u128], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(ids.len()))?;
            for id in ids {
                seq.serialize_element(&id.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u128>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| s.parse().map_err(D::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial_u128(4, 2), Some(6));
        assert_eq!(binomial_u128(8, 4), Some(70));
        assert_eq!(binomial_u128(16, 8), Some(12870));
        assert_eq!(binomial_u128(3, 5), Some(0));
        assert_eq!(binomial_u128(0, 0), Some(1));
        assert_eq!(binomial(16, 8), BigUint::from(12870u32));
    }

    #[test]
    fn u128_agrees_with_bigint_until_overflow() {
        for n in [20u64, 64, 100, 128, 130] {
            let exact = binomial(n, n / 2);
            assert_eq!(binomial_u128(n, n / 2).map(BigUint::from), Some(exact));
        }
        assert_eq!(binomial_u128(140, 70), None);
    }

    #[test]
    fn gcd_basics() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(7, 0), 7);
        assert_eq!(gcd(1, 14), 1);
    }
}
