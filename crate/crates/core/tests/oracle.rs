mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use qaseries::composed::ScheduleMode;
use qaseries::series::RelationRow;
use qaseries::sieve::{PrimeCursor, PrimeSieve};
use qaseries::*;

fn canonical(e: u64) -> SignAssignment {
    SignAssignment::canonical(Arc::new(enumerate_forms(e).unwrap())).unwrap()
}

#[test]
fn sieve_matches_trial_division_to_1e5() {
    let want: Vec<u64> = (0..=100_000).filter(|&n| common::is_prime(n)).collect();
    assert_eq!(primes_upto(100_000, &SieveConfig::default()).unwrap(), want);
    let tiny = SieveConfig {
        segment_len: 1000,
        ..SieveConfig::default()
    };
    assert_eq!(
        PrimeSieve::new(0, 100_000, &tiny)
            .unwrap()
            .collect::<Vec<_>>(),
        want
    );
}

#[test]
fn stream_count_conservation() {
    let pi = |x: u64| (0..=x).filter(|&n| common::is_prime(n)).count();
    for e in [4u64, 6, 10, 12, 14, 30, 210] {
        for x in [1u64, 2, 5, 7, 100, 9_973, 100_000] {
            let dividing = (2..=x.min(e))
                .filter(|&q| common::is_prime(q) && e % q == 0)
                .count();
            let got: Vec<_> = stream(e, x).unwrap().collect();
            assert_eq!(got.len(), pi(x) - dividing, "e={e} x={x}");
            for t in &got {
                assert_eq!(t.prime % e, t.residue);
                assert!(t.residue % 2 == 1 && common::residues(e).contains(&t.residue));
            }
        }
    }
}

#[test]
fn partial_sums_match_direct_summation() {
    for e in (4..=20).step_by(2) {
        for a in enumerate_alternatives(e, 1_000_000).unwrap() {
            let want = common::partial_sums(e, &a.sign_string(), 1000);
            assert_eq!(
                partial_sums(&a, 1000).unwrap(),
                want,
                "e={e} {}",
                a.sign_string()
            );
        }
    }
}

#[test]
fn alternatives_match_brute_force_patterns() {
    for e in (4..=30).step_by(2) {
        let phi = common::residues(e).len();
        let want: BTreeSet<String> = common::balanced_strings(phi).into_iter().collect();
        let got: Vec<String> = enumerate_alternatives(e, 1_000_000)
            .unwrap()
            .iter()
            .map(SignAssignment::sign_string)
            .collect();
        assert_eq!(got.len(), want.len(), "e={e}");
        assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), want, "e={e}");
    }
}

#[test]
fn census_matches_trial_division() {
    for e in [4u64, 6, 8, 12, 14, 30] {
        for bound in [100u64, 10_000] {
            assert_eq!(
                census(e, bound).unwrap(),
                common::census(e, bound),
                "e={e} bound={bound}"
            );
        }
    }
    // frozen from the trial-division oracle
    assert_eq!(
        common::census(4, 100).into_iter().collect::<Vec<_>>(),
        vec![(1, 11), (3, 13)]
    );
    assert_eq!(
        common::census(6, 100).into_iter().collect::<Vec<_>>(),
        vec![(1, 11), (5, 12)]
    );
}

#[test]
fn e6_zeros_agree_with_oracle() {
    let sums = common::partial_sums(6, "-+", 600);
    let primes = common::coprime_primes(6, 600);
    let oracle: Vec<Zero> = sums
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == 0)
        .map(|(i, _)| Zero {
            n: i as u64 + 1,
            prime: primes[i],
        })
        .collect();
    assert_eq!(
        oracle,
        vec![
            Zero { n: 78, prime: 409 },
            Zero { n: 84, prime: 443 },
            Zero {
                n: 528,
                prime: 3821
            }
        ]
    );
    assert_eq!(
        find_zeros(&canonical(6), &Bounds::terms(600)).unwrap(),
        oracle
    );
}

#[test]
fn composed_sum_matches_explicit_sign_table() {
    let x = canonical(4);
    let schedule = BlockSchedule::flip_pair(ScheduleMode::Fixed { lengths: vec![196] }, x).unwrap();
    let want = common::composed_sums(4, &["-+", "+-"], 196, 392);
    let terms = compose(&schedule, &Bounds::terms(392)).unwrap();
    let got: i128 = terms.iter().map(|t| t.value).sum();
    assert_eq!(got, want[391]);
    let rep = scan_composed(&schedule, &Bounds::terms(392), ScanOptions::default()).unwrap();
    assert_eq!(rep.scan.final_sum, want[391]);
    assert_eq!(rep.boundaries, vec![1, 197]);
}

#[test]
fn composed_cycles_of_three() {
    let form = Arc::new(enumerate_forms(8).unwrap());
    let cycle: Vec<SignAssignment> = ["--++", "+-+-", "-++-"]
        .iter()
        .map(|s| SignAssignment::parse(Arc::clone(&form), s).unwrap())
        .collect();
    let schedule = BlockSchedule::new(ScheduleMode::Fixed { lengths: vec![7] }, cycle).unwrap();
    let want = common::composed_sums(8, &["--++", "+-+-", "-++-"], 7, 500);
    let rep = scan_composed(
        &schedule,
        &Bounds::terms(500),
        ScanOptions {
            record_crossings: true,
            dump_prefix: Some(500),
        },
    )
    .unwrap();
    assert_eq!(rep.scan.prefix.unwrap(), want);
}

#[test]
fn relation_rows_match_oracle() {
    let sums = common::partial_sums(4, "-+", 400);
    let table = common::sign_table(4, "-+");
    let primes = common::coprime_primes(4, 400);
    let term = |i: usize| table[&(primes[i - 1] % 4)] * primes[i - 1] as i128;
    let rows = table2_relations(&canonical(4), &[4, 12, 196, 320], None).unwrap();
    for RelationRow {
        n,
        previous_term,
        term: m,
        previous_sum,
    } in rows
    {
        let n = n as usize;
        assert_eq!(
            (previous_term, m, previous_sum),
            (term(n - 1), term(n), sums[n - 2])
        );
    }
}

#[test]
fn cursor_resumes_mid_segment() {
    let tiny = SieveConfig {
        segment_len: 256,
        ..SieveConfig::default()
    };
    let want = common::coprime_primes(30, 2000);
    let mut head = PrimeCursor::new(30, u64::MAX >> 2, &tiny).unwrap();
    let mut got: Vec<u64> = head.by_ref().take(777).map(|t| t.prime).collect();
    let tail = PrimeCursor::resume_after(30, head.last_prime(), u64::MAX >> 2, &tiny).unwrap();
    got.extend(tail.take(2000 - 777).map(|t| t.prime));
    assert_eq!(got, want);
}

#[test]
fn e4_crossings_match_oracle() {
    let sums = common::partial_sums(4, "-+", 14_000);
    let oracle: Vec<(u64, i128, i128)> = sums
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0].signum() * w[1].signum() == -1)
        .map(|(i, w)| (i as u64 + 1, w[0], w[1]))
        .collect();
    let got: Vec<(u64, i128, i128)> = crossings(&canonical(4), &Bounds::terms(14_000))
        .unwrap()
        .iter()
        .map(|c| (c.j, c.s_j, c.s_next))
        .collect();
    assert_eq!(got, oracle);
    // frozen from the oracle
    for pair in [
        (195, 821, -380),
        (1216, -9844, 27),
        (5633, 40979, -14550),
        (9908, -63852, 39851),
        (13675, 76149, -71912),
    ] {
        assert!(got.contains(&pair), "{pair:?}");
    }
}
