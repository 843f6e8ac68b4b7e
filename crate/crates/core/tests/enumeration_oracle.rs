//! Enumeration against a brute-force filter over every subfamily of A.

use ucsets::search::{
    count_union_closed, enumerate_codes, enumerate_union_closed, EnumerationLimit,
};
use ucsets::Family;

/// Counts recorded from an independent script before the library existed.
const GOLDEN: [(usize, u64); 4] = [(1, 1), (2, 6), (3, 60), (4, 2479)];

fn brute_force(n: usize) -> Vec<u64> {
    let sets = (1u64 << n) - 1;
    (1u64..(1 << sets))
        .filter(|&code| {
            let has = |bits: u64| code & (1 << (bits - 1)) != 0;
            (1..=sets).all(|a| !has(a) || (1..=sets).all(|b| !has(b) || has(a | b)))
        })
        .collect()
}

#[test]
fn enumeration_equals_brute_force() {
    for (n, count) in GOLDEN {
        let expected = brute_force(n);
        assert_eq!(expected.len() as u64, count, "oracle count n={n}");
        let got: Vec<u64> = enumerate_union_closed(n)
            .unwrap()
            .map(|f| f.code().unwrap())
            .collect();
        assert_eq!(got, expected, "n={n}");
        assert_eq!(count_union_closed(n).unwrap(), count);
    }
}

#[test]
fn parallel_enumeration_is_identical() {
    for n in 1..=4 {
        let seq = enumerate_codes(n, EnumerationLimit::Standard, 1).unwrap();
        for jobs in [0, 2, 5] {
            assert_eq!(
                enumerate_codes(n, EnumerationLimit::Standard, jobs).unwrap(),
                seq
            );
        }
    }
}

#[test]
fn every_emitted_family_is_union_closed() {
    for f in enumerate_union_closed(4).unwrap() {
        assert!(f.is_union_closed().is_closed(), "{f:?}");
        assert_eq!(Family::from_code(4, f.code().unwrap()).unwrap(), f);
    }
}

#[test]
#[ignore = "long run: n = 5 has 1,385,551 families"]
fn n5_count() {
    let got = ucsets::search::count_union_closed_with(5, EnumerationLimit::LongRun).unwrap();
    assert_eq!(got, 1_385_551);
}
