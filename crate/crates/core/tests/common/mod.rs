//! Naive reference implementations used as test oracles. Nothing here calls
//! into the library: primes come from trial division, residues from a
//! direct gcd filter and sums from plain accumulation.

#![allow(dead_code)]

use std::collections::BTreeMap;

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn residues(e: u64) -> Vec<u64> {
    (1..e).filter(|o| o % 2 == 1 && gcd(*o, e) == 1).collect()
}

/// Primes coprime to `e`, first `count` of them, by trial division.
pub fn coprime_primes(e: u64, count: usize) -> Vec<u64> {
    (2..)
        .filter(|&p| is_prime(p) && gcd(p, e) == 1)
        .take(count)
        .collect()
}

/// Sign table from a `+`/`-` string over ascending residues.
pub fn sign_table(e: u64, signs: &str) -> BTreeMap<u64, i128> {
    residues(e)
        .into_iter()
        .zip(signs.chars())
        .map(|(o, c)| (o, if c == '+' { 1 } else { -1 }))
        .collect()
}

/// Direct summation of the signed series.
pub fn partial_sums(e: u64, signs: &str, n: usize) -> Vec<i128> {
    let table = sign_table(e, signs);
    let mut acc = 0i128;
    coprime_primes(e, n)
        .into_iter()
        .map(|p| {
            acc += table[&(p % e)] * p as i128;
            acc
        })
        .collect()
}

/// Every balanced `+`/`-` string of length `len`, by brute force over all
/// `2^len` patterns.
pub fn balanced_strings(len: usize) -> Vec<String> {
    (0u32..1 << len)
        .filter(|m| m.count_ones() as usize == len / 2)
        .map(|m| {
            (0..len)
                .map(|i| {
                    if m >> (len - 1 - i) & 1 == 1 {
                        '-'
                    } else {
                        '+'
                    }
                })
                .collect()
        })
        .collect()
}

/// Composed series by direct summation: block `k` covers terms
/// `k*len + 1 ..= (k+1)*len` and uses `cycle[k % cycle.len()]`.
pub fn composed_sums(e: u64, cycle: &[&str], len: usize, n: usize) -> Vec<i128> {
    let tables: Vec<_> = cycle.iter().map(|s| sign_table(e, s)).collect();
    let mut acc = 0i128;
    coprime_primes(e, n)
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let t = &tables[(i / len) % tables.len()];
            acc += t[&(p % e)] * p as i128;
            acc
        })
        .collect()
}

/// Counts of primes `<= bound` per admissible residue.
pub fn census(e: u64, bound: u64) -> BTreeMap<u64, u64> {
    let mut out: BTreeMap<u64, u64> = residues(e).into_iter().map(|o| (o, 0)).collect();
    for p in (2..=bound).filter(|&p| is_prime(p) && gcd(p, e) == 1) {
        *out.get_mut(&(p % e)).unwrap() += 1;
    }
    out
}
