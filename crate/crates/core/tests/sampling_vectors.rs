//! Sampling outputs pinned to values from an independent SplitMix64
//! implementation, so any platform or dependency drift shows up here.

use ucsets::search::{generators, sample_union_closed};

fn bits(f: &ucsets::Family) -> Vec<u16> {
    f.iter().map(|m| m.bits()).collect()
}

#[test]
fn seed_42_n8() {
    let g: Vec<u16> = generators(8, 20, 42)
        .unwrap()
        .iter()
        .map(|m| m.bits())
        .collect();
    assert_eq!(&g[..5], &[149, 3, 82, 148, 242]);
    let f = sample_union_closed(8, 20, 42).unwrap();
    assert_eq!(f.len(), 62);
    assert_eq!(f.iter().map(|m| u64::from(m.bits())).sum::<u64>(), 10068);
    assert_eq!(&bits(&f)[..10], &[3, 6, 7, 29, 31, 82, 83, 86, 87, 93]);
}

#[test]
fn seed_7_n6() {
    let f = sample_union_closed(6, 5, 7).unwrap();
    assert_eq!(bits(&f), vec![2, 11, 23, 26, 27, 28, 30, 31]);
}

#[test]
fn seed_2024_n10() {
    let g: Vec<u16> = generators(10, 3, 2024)
        .unwrap()
        .iter()
        .map(|m| m.bits())
        .collect();
    assert_eq!(g, vec![213, 722, 383]);
    let f = sample_union_closed(10, 3, 2024).unwrap();
    assert_eq!(bits(&f), vec![213, 383, 511, 722, 727, 1023]);
}

#[test]
fn repeated_calls_agree() {
    for seed in [0, 1, u64::MAX] {
        assert_eq!(
            sample_union_closed(12, 40, seed).unwrap(),
            sample_union_closed(12, 40, seed).unwrap()
        );
    }
}
