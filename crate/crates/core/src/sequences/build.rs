use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::validate::{validate_sequence, SequenceProblem};
use super::{DeletionSequence, SequenceKind};
use crate::basis::basis;
use crate::error::{check_element, Error, Result};
use crate::family::Family;
use crate::mask::SetMask;

/// How to order the deletions of a union-closed sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Delete the least basis set of the current family not in the target.
    Greedy,
    /// Delete the complement in nondecreasing size, ties by bits.
    BySize,
}

impl Strategy {
    pub const ALL: [Strategy; 2] = [Strategy::Greedy, Strategy::BySize];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Greedy => "greedy",
            Strategy::BySize => "by-size",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "greedy" | "greedy-basis" => Ok(Strategy::Greedy),
            "by-size" => Ok(Strategy::BySize),
            _ => Err(format!("unknown strategy `{s}`")),
        }
    }
}

/// Evidence that a construction did not go through.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Refutation {
    /// Greedy found every basis set of the current family inside the target.
    Blocked { deleted: Vec<SetMask> },
    /// The built sequence failed validation.
    Rejected {
        deletions: Vec<SetMask>,
        problems: Vec<SequenceProblem>,
    },
    /// No `(Y, R)` pair with `Y` vincolated to a non-vincolated `R` exists.
    NoTheorem3Pair {
        element: usize,
        pairs_scanned: usize,
    },
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::Blocked { deleted } => {
                write!(f, "greedy construction blocked after {} deletions", deleted.len())
            }
            Refutation::Rejected { problems, .. } => {
                write!(f, "constructed sequence rejected: ")?;
                for (k, p) in problems.iter().enumerate() {
                    if k > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            Refutation::NoTheorem3Pair {
                element,
                pairs_scanned,
            } => write!(
                f,
                "no set avoiding {element} is vincolated to a non-vincolated set containing it ({pairs_scanned} pairs scanned)"
            ),
        }
    }
}

fn require_union_closed(family: &Family) -> Result<()> {
    match family.is_union_closed().violation {
        Some((x, y)) => Err(Error::NotUnionClosed(x, y)),
        None => Ok(()),
    }
}

/// Greedy deletions from `A` to `target`. On a block, returns the
/// deletions made so far.
pub(crate) fn greedy_deletions(target: &Family) -> std::result::Result<Vec<SetMask>, Vec<SetMask>> {
    let n = target.universe_size();
    let mut current = Family::full_universe(n).expect("valid universe");
    let mut deleted = Vec::with_capacity(current.len() - target.len());
    while current.len() > target.len() {
        let pick = basis(&current).iter().find(|&b| !target.contains(b));
        match pick {
            Some(x) => {
                deleted.push(x);
                current = current.without(&[x]);
            }
            None => return Err(deleted),
        }
    }
    Ok(deleted)
}

/// Complement of `target` in nondecreasing size, ties by bits.
pub(crate) fn size_order(target: &Family) -> Vec<SetMask> {
    let mut d: Vec<SetMask> = target.complement().iter().collect();
    d.sort_by_key(|m| m.size_key());
    d
}

/// A union-closed sequence from `A` to a nonempty union-closed `target`.
pub fn build_union_closed_sequence(
    target: &Family,
    strategy: Strategy,
) -> Result<DeletionSequence> {
    if target.is_empty() {
        return Err(Error::EmptyFamily);
    }
    require_union_closed(target)?;
    let deletions = match strategy {
        Strategy::Greedy => {
            greedy_deletions(target).map_err(|partial| Error::ConstructionBlocked {
                deleted: partial.len(),
            })?
        }
        Strategy::BySize => size_order(target),
    };
    DeletionSequence::new(target.clone(), deletions, SequenceKind::UnionClosed)
}

/// Ideal deletions for `i`: a greedy union-closed sequence down to
/// `F ∪ D^i`, then `D^i` in nondecreasing size. `D^i` may be empty here.
pub(crate) fn ideal_deletions(
    target: &Family,
    i: usize,
) -> std::result::Result<Vec<SetMask>, Refutation> {
    let d = target.complement();
    let d_i = d.containing(i).expect("element checked by caller");
    let staging = target.union(&d_i).expect("same universe");
    let mut deletions =
        greedy_deletions(&staging).map_err(|deleted| Refutation::Blocked { deleted })?;
    let mut tail: Vec<SetMask> = d_i.iter().collect();
    tail.sort_by_key(|m| m.size_key());
    deletions.extend(tail);
    Ok(deletions)
}

/// An ideal sequence for `i` from `A` to a union-closed `target` with
/// `D^i ≠ ∅`.
pub fn build_ideal_sequence(target: &Family, i: usize) -> Result<DeletionSequence> {
    check_element(i, target.universe_size())?;
    require_union_closed(target)?;
    if target.complement().frequency(i) == 0 {
        return Err(Error::EmptyDi(i));
    }
    let deletions = ideal_deletions(target, i).map_err(|r| match r {
        Refutation::Blocked { deleted } => Error::ConstructionBlocked {
            deleted: deleted.len(),
        },
        other => Error::PreconditionNotMet(other.to_string()),
    })?;
    DeletionSequence::new(target.clone(), deletions, SequenceKind::Ideal(i))
}

/// A set `y ∈ D - D^i` vincolated to a non-vincolated `r ∈ D^i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem3Witness {
    pub element: usize,
    pub y: SetMask,
    pub r: SetMask,
    pub y_vincolated: bool,
    pub r_not_vincolated: bool,
    pub y_vincolated_to_r: bool,
    /// Found as `y` of maximum size with `r = y ∪ {i}`.
    pub from_construction: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem3Outcome {
    Witness(Theorem3Witness),
    PreconditionNotMet(String),
    Refuted(Refutation),
}

/// Looks for `y ∈ D - D^i` vincolated to a non-vincolated `r ∈ D^i`, given
/// that every set of `D - D^i` is vincolated.
///
/// The maximum-size candidates with `r = y ∪ {i}` are tried first, then
/// every pair with `y` and `r` each by descending size and ascending bits.
pub fn find_theorem3_witness(family: &Family, i: usize) -> Result<Theorem3Outcome> {
    check_element(i, family.universe_size())?;
    if let Some((x, y)) = family.is_union_closed().violation {
        return Ok(Theorem3Outcome::PreconditionNotMet(format!(
            "family is not union-closed: {x} ∪ {y} missing"
        )));
    }
    let d = family.complement();
    let by_desc_size =
        |v: &mut Vec<SetMask>| v.sort_by_key(|m| (std::cmp::Reverse(m.len()), m.bits()));
    let mut avoid: Vec<SetMask> = d.iter().filter(|m| !m.contains(i)).collect();
    let mut with_i: Vec<SetMask> = d.iter().filter(|m| m.contains(i)).collect();
    by_desc_size(&mut avoid);
    by_desc_size(&mut with_i);

    if avoid.is_empty() {
        return Ok(Theorem3Outcome::PreconditionNotMet(format!(
            "every set of the complement contains {i}"
        )));
    }
    if let Some(free) = avoid.iter().find(|&&x| family.closed_after_adding(x)) {
        return Ok(Theorem3Outcome::PreconditionNotMet(format!(
            "{free} avoids {i} and is not vincolated"
        )));
    }

    let r_free: Vec<bool> = with_i
        .iter()
        .map(|&r| family.closed_after_adding(r))
        .collect();
    let closed_with_both = |y: SetMask, r: SetMask| {
        family
            .with(&[y, r])
            .expect("sets within the universe")
            .is_union_closed()
            .is_closed()
    };
    let witness = |y, r, from_construction| {
        Theorem3Outcome::Witness(Theorem3Witness {
            element: i,
            y,
            r,
            y_vincolated: true,
            r_not_vincolated: true,
            y_vincolated_to_r: true,
            from_construction,
        })
    };

    let top = avoid[0].len();
    for &y in avoid.iter().take_while(|y| y.len() == top) {
        let r = y.union(SetMask::singleton(i));
        if let Some(k) = with_i.iter().position(|&c| c == r) {
            if r_free[k] && closed_with_both(y, r) {
                return Ok(witness(y, r, true));
            }
        }
    }

    let mut scanned = 0usize;
    for &y in &avoid {
        for (k, &r) in with_i.iter().enumerate() {
            scanned += 1;
            if r_free[k] && closed_with_both(y, r) {
                return Ok(witness(y, r, false));
            }
        }
    }
    Ok(Theorem3Outcome::Refuted(Refutation::NoTheorem3Pair {
        element: i,
        pairs_scanned: scanned,
    }))
}

/// Which branch of the optimal construction produced the sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum OptimalCase {
    /// Every set avoiding `i` is vincolated; ends with `y` then `r`.
    AllVincolated { y: SetMask, r: SetMask },
    /// `x_star` avoids `i` and is not vincolated; it is deleted second to last.
    FreeSet { x_star: SetMask },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptimalOutcome {
    Built {
        sequence: DeletionSequence,
        case: OptimalCase,
    },
    Refuted(Refutation),
}

/// An optimal sequence for `i` from `A` to a union-closed `target`, with
/// `D^i` neither empty nor all of `D`. The result is validated before it
/// is returned; a failed construction comes back as a refutation.
pub fn build_optimal_sequence(target: &Family, i: usize) -> Result<OptimalOutcome> {
    check_element(i, target.universe_size())?;
    if let Some((x, y)) = target.is_union_closed().violation {
        return Err(Error::PreconditionNotMet(format!(
            "family is not union-closed: {x} ∪ {y} missing"
        )));
    }
    let d = target.complement();
    let d_i = d.frequency(i);
    if d_i == 0 {
        return Err(Error::PreconditionNotMet(format!(
            "no set of the complement contains {i}"
        )));
    }
    if d_i == d.len() {
        return Err(Error::PreconditionNotMet(format!(
            "every set of the complement contains {i}"
        )));
    }

    let free = d
        .iter()
        .find(|&x| !x.contains(i) && target.closed_after_adding(x));
    let (deletions, case) = match free {
        Some(x_star) => {
            let staging = target.with(&[x_star]).expect("same universe");
            let mut deletions = match ideal_deletions(&staging, i) {
                Ok(d) => d,
                Err(r) => return Ok(OptimalOutcome::Refuted(r)),
            };
            // Swap the tail: delete x_star, then the last set containing i.
            let last = deletions.pop().expect("D^i is nonempty");
            deletions.push(x_star);
            deletions.push(last);
            (deletions, OptimalCase::FreeSet { x_star })
        }
        None => {
            let w = match find_theorem3_witness(target, i)? {
                Theorem3Outcome::Witness(w) => w,
                Theorem3Outcome::Refuted(r) => return Ok(OptimalOutcome::Refuted(r)),
                Theorem3Outcome::PreconditionNotMet(why) => {
                    unreachable!("hypotheses were checked above: {why}")
                }
            };
            let staging = target.with(&[w.y, w.r]).expect("same universe");
            let mut deletions = match ideal_deletions(&staging, i) {
                Ok(d) => d,
                Err(r) => return Ok(OptimalOutcome::Refuted(r)),
            };
            deletions.push(w.y);
            deletions.push(w.r);
            (deletions, OptimalCase::AllVincolated { y: w.y, r: w.r })
        }
    };

    let sequence = DeletionSequence::new(target.clone(), deletions, SequenceKind::Optimal(i))?;
    let report = validate_sequence(&sequence);
    if !report.is_valid() {
        return Ok(OptimalOutcome::Refuted(Refutation::Rejected {
            deletions: sequence.deletions().to_vec(),
            problems: report.problems,
        }));
    }
    Ok(OptimalOutcome::Built { sequence, case })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, sets: &[&[usize]]) -> Family {
        Family::new(n, sets).unwrap()
    }

    fn masks(n: usize, sets: &[&[usize]]) -> Vec<SetMask> {
        sets.iter()
            .map(|s| SetMask::from_elements(s, n).unwrap())
            .collect()
    }

    #[test]
    fn greedy_example() {
        let s = build_union_closed_sequence(&fam(2, &[&[1, 2]]), Strategy::Greedy).unwrap();
        assert_eq!(s.deletions(), masks(2, &[&[1], &[2]]).as_slice());
        assert!(validate_sequence(&s).is_valid());
    }

    #[test]
    fn full_universe_needs_no_deletions() {
        for strategy in Strategy::ALL {
            let s =
                build_union_closed_sequence(&Family::full_universe(3).unwrap(), strategy).unwrap();
            assert!(s.deletions().is_empty());
        }
    }

    #[test]
    fn by_size_example() {
        let s = build_union_closed_sequence(&fam(3, &[&[1, 2, 3]]), Strategy::BySize).unwrap();
        assert_eq!(
            s.deletions(),
            masks(3, &[&[1], &[2], &[3], &[1, 2], &[1, 3], &[2, 3]]).as_slice()
        );
        assert!(validate_sequence(&s).is_valid());
    }

    #[test]
    fn builder_preconditions() {
        assert!(matches!(
            build_union_closed_sequence(&fam(2, &[&[1], &[2]]), Strategy::Greedy),
            Err(Error::NotUnionClosed(_, _))
        ));
        assert_eq!(
            build_union_closed_sequence(&Family::empty(2).unwrap(), Strategy::BySize),
            Err(Error::EmptyFamily)
        );
    }

    #[test]
    fn ideal_examples() {
        let s = build_ideal_sequence(&fam(2, &[&[1, 2]]), 1).unwrap();
        assert_eq!(s.deletions(), masks(2, &[&[2], &[1]]).as_slice());
        assert!(validate_sequence(&s).is_valid());

        let s = build_ideal_sequence(&fam(3, &[&[3], &[1, 2, 3]]), 1).unwrap();
        assert_eq!(
            s.deletions(),
            masks(3, &[&[2], &[2, 3], &[1], &[1, 2], &[1, 3]]).as_slice()
        );
        assert!(validate_sequence(&s).is_valid());

        // D^3 is empty when every set containing 3 is kept.
        let f = fam(3, &[&[3], &[1, 3], &[2, 3], &[1, 2, 3]]);
        assert_eq!(build_ideal_sequence(&f, 3), Err(Error::EmptyDi(3)));
    }

    #[test]
    fn theorem3_example_matches_pair_scan() {
        let f = fam(3, &[&[3], &[1, 2, 3]]);
        let outcome = find_theorem3_witness(&f, 3).unwrap();
        // Brute force straight from the definitions: hypothesis first, then the 9 pairs.
        let d = f.complement();
        let closed = |extra: &[SetMask]| f.with(extra).unwrap().is_union_closed().is_closed();
        let avoid: Vec<SetMask> = d.iter().filter(|y| !y.contains(3)).collect();
        let hypothesis = avoid.iter().all(|&y| !closed(&[y]));
        let mut exists = false;
        for &y in &avoid {
            for r in d.iter().filter(|r| r.contains(3)) {
                if !closed(&[y]) && closed(&[r]) && closed(&[y, r]) {
                    exists = true;
                }
            }
        }
        // {1,2} ∪ {3} = {1,2,3} ∈ F, so {1,2} is not vincolated.
        assert!(!hypothesis);
        assert!(closed(&[SetMask::from_elements(&[1, 2], 3).unwrap()]));
        match outcome {
            Theorem3Outcome::PreconditionNotMet(why) => assert!(why.contains("{1,2}"), "{why}"),
            other => panic!("expected unmet hypothesis, got {other:?} (pair exists: {exists})"),
        }
    }

    #[test]
    fn theorem3_outcomes_agree_with_pair_scan() {
        for f in crate::search::enumerate_union_closed(3).unwrap() {
            let d = f.complement();
            let closed = |extra: &[SetMask]| f.with(extra).unwrap().is_union_closed().is_closed();
            for i in 1..=3 {
                let avoid: Vec<SetMask> = d.iter().filter(|y| !y.contains(i)).collect();
                let hypothesis = !avoid.is_empty() && avoid.iter().all(|&y| !closed(&[y]));
                let exists = avoid.iter().any(|&y| {
                    d.iter()
                        .filter(|r| r.contains(i))
                        .any(|r| !closed(&[y]) && closed(&[r]) && closed(&[y, r]))
                });
                match find_theorem3_witness(&f, i).unwrap() {
                    Theorem3Outcome::PreconditionNotMet(_) => assert!(!hypothesis),
                    Theorem3Outcome::Witness(w) => {
                        assert!(hypothesis && exists);
                        assert!(!closed(&[w.y]) && closed(&[w.r]) && closed(&[w.y, w.r]));
                        assert!(!w.y.contains(i) && w.r.contains(i));
                    }
                    Theorem3Outcome::Refuted(_) => assert!(hypothesis && !exists),
                }
            }
        }
    }

    #[test]
    fn theorem3_preconditions() {
        // {2} avoids 1 and F ∪ {{2}} is union-closed.
        let f = fam(2, &[&[1, 2]]);
        assert!(matches!(
            find_theorem3_witness(&f, 1).unwrap(),
            Theorem3Outcome::PreconditionNotMet(_)
        ));
        // D = D^1.
        let f = fam(2, &[&[2]]);
        assert!(matches!(
            find_theorem3_witness(&f, 1).unwrap(),
            Theorem3Outcome::PreconditionNotMet(_)
        ));
    }

    #[test]
    fn optimal_free_set_case() {
        let f = fam(2, &[&[1, 2]]);
        match build_optimal_sequence(&f, 1).unwrap() {
            OptimalOutcome::Built { sequence, case } => {
                assert_eq!(
                    case,
                    OptimalCase::FreeSet {
                        x_star: masks(2, &[&[2]])[0]
                    }
                );
                assert_eq!(sequence.deletions(), masks(2, &[&[2], &[1]]).as_slice());
                assert!(validate_sequence(&sequence).is_valid());
            }
            OptimalOutcome::Refuted(r) => panic!("{r}"),
        }
    }

    #[test]
    fn optimal_preconditions() {
        let f = fam(2, &[&[2]]);
        assert!(matches!(
            build_optimal_sequence(&f, 1),
            Err(Error::PreconditionNotMet(_))
        ));
        let f = fam(2, &[&[1], &[1, 2]]);
        assert!(matches!(
            build_optimal_sequence(&f, 1),
            Err(Error::PreconditionNotMet(_))
        ));
    }
}
