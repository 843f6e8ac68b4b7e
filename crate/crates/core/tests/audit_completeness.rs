//! For n <= 3 the audit's per-binding verdicts must equal a direct
//! evaluation of each claim's quantifiers over every binding.

use std::collections::BTreeMap;

use ucsets::audit::recheck::recheck;
use ucsets::audit::{audit_claim, reverify, Binding, ClaimId, Verdict};
use ucsets::search::all_families;
use ucsets::sequences::Strategy;
use ucsets::{Family, SetMask};

fn candidates(claim: ClaimId, n: usize) -> Vec<Binding> {
    let sets: Vec<SetMask> = (1u16..(1 << n)).map(SetMask::from_bits).collect();
    let mut out = vec![Binding::default()];
    match claim {
        ClaimId::L1 | ClaimId::L2 | ClaimId::L3 => out.extend(sets.iter().map(|&s| Binding {
            set: Some(s),
            ..Default::default()
        })),
        ClaimId::L4 | ClaimId::L5 | ClaimId::L6 | ClaimId::T3 | ClaimId::T5 => {
            out.extend((1..=n).map(|i| Binding {
                element: Some(i),
                ..Default::default()
            }))
        }
        ClaimId::T2 => out.extend(Strategy::ALL.map(|s| Binding {
            strategy: Some(s),
            ..Default::default()
        })),
        ClaimId::T4b => {
            for i in 1..=n {
                for &y1 in &sets {
                    for &y2 in &sets {
                        out.push(Binding {
                            element: Some(i),
                            y1: Some(y1),
                            y2: Some(y2),
                            ..Default::default()
                        });
                    }
                }
            }
        }
        ClaimId::T1 | ClaimId::T4a => {}
    }
    out
}

fn key(b: &Binding) -> String {
    serde_json::to_string(b).unwrap()
}

fn compare(claim: ClaimId, f: &Family) {
    let n = f.universe_size();
    let results = audit_claim(claim, f);
    if claim == ClaimId::T4a {
        assert_eq!(results.len(), 1);
        let expected = recheck(claim, n, f.members(), &Binding::default());
        assert_eq!(Some(results[0].verdict), expected, "{claim} {f:?}");
        return;
    }
    let mut got: BTreeMap<String, Verdict> = BTreeMap::new();
    for r in &results {
        assert!(
            got.insert(key(&r.params), r.verdict).is_none(),
            "duplicate binding"
        );
    }
    let expected: BTreeMap<String, Verdict> = candidates(claim, n)
        .iter()
        .filter_map(|b| recheck(claim, n, f.members(), b).map(|v| (key(b), v)))
        .collect();
    assert_eq!(got, expected, "{claim} on {f:?}");
}

#[test]
fn audit_matches_definitions_up_to_n3() {
    for n in 1..=3 {
        for f in all_families(n).unwrap() {
            for claim in ClaimId::ALL {
                compare(claim, &f);
            }
        }
    }
}

#[test]
fn fabricated_failure_is_not_confirmed() {
    let f = Family::new(2, &[vec![1], vec![1, 2]]).unwrap();
    let mut r = audit_claim(ClaimId::L4, &f).remove(0);
    assert!(reverify(&r));
    r.verdict = Verdict::Fails;
    assert!(!reverify(&r));
}

#[test]
fn bindings_outside_the_domain_are_rejected() {
    let f = Family::new(2, &[vec![1], vec![2], vec![1, 2]]).unwrap();
    let not_basis = Binding {
        set: Some(SetMask::full(2)),
        ..Default::default()
    };
    assert_eq!(recheck(ClaimId::L2, 2, f.members(), &not_basis), None);
}

/// At n = 4 the audit decides quasiminimality without the exhaustive
/// fallback, so compare against the definitions on a slice of families
/// small enough for the reachability search.
#[test]
fn audit_matches_definitions_on_n4_slice() {
    let families: Vec<Family> = ucsets::search::enumerate_union_closed(4)
        .unwrap()
        .filter(|f| f.complement().len() <= 8)
        .step_by(7)
        .collect();
    assert!(families.len() > 50);
    for f in &families {
        for claim in ClaimId::ALL {
            compare(claim, f);
        }
    }
}
