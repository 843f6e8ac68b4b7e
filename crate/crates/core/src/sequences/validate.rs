use std::fmt;

use serde::{Deserialize, Serialize};

use super::{DeletionSequence, SequenceKind};
use crate::family::Family;
use crate::mask::SetMask;

/// Union-closedness of `A_r` after the `step`-th deletion (one-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub step: usize,
    pub deleted: SetMask,
    pub union_closed: bool,
    pub violation: Option<(SetMask, SetMask)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequenceProblem {
    /// `A_step` misses `x ∪ y`.
    NotUnionClosed {
        step: usize,
        x: SetMask,
        y: SetMask,
    },
    /// Deletion at `position` is on the wrong side of the ideal split.
    SplitViolated {
        position: usize,
        set: SetMask,
        contains_element: bool,
    },
    /// An optimal sequence needs at least two deletions.
    TooShort,
    /// Every deleted set contains the element, so no sequence is optimal for it.
    NoSetAvoidsElement,
    LastLacksElement(SetMask),
    PenultimateHasElement(SetMask),
}

impl fmt::Display for SequenceProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceProblem::NotUnionClosed { step, x, y } => {
                write!(f, "A_{step} is not union-closed: {x} ∪ {y} missing")
            }
            SequenceProblem::SplitViolated {
                position,
                set,
                contains_element,
            } => write!(
                f,
                "deletion {position} ({set}) {} the element on the wrong side of the split",
                if *contains_element {
                    "contains"
                } else {
                    "avoids"
                }
            ),
            SequenceProblem::TooShort => f.write_str("fewer than two deletions"),
            SequenceProblem::NoSetAvoidsElement => {
                f.write_str("every deleted set contains the element")
            }
            SequenceProblem::LastLacksElement(x) => {
                write!(f, "last deletion {x} lacks the element")
            }
            SequenceProblem::PenultimateHasElement(x) => {
                write!(f, "second-to-last deletion {x} contains the element")
            }
        }
    }
}

/// Per-step union-closedness plus the kind-specific verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub kind: SequenceKind,
    pub steps: Vec<StepReport>,
    pub problems: Vec<SequenceProblem>,
}

impl SequenceReport {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Ideal split: the first `|D| - |D^i|` deletions avoid `i`, the rest contain it.
fn split_problems(deletions: &[SetMask], i: usize) -> Vec<SequenceProblem> {
    let with_i = deletions.iter().filter(|x| x.contains(i)).count();
    let boundary = deletions.len() - with_i;
    deletions
        .iter()
        .enumerate()
        .filter_map(|(k, &x)| {
            let contains = x.contains(i);
            (contains != (k >= boundary)).then_some(SequenceProblem::SplitViolated {
                position: k + 1,
                set: x,
                contains_element: contains,
            })
        })
        .collect()
}

pub fn validate_sequence(seq: &DeletionSequence) -> SequenceReport {
    let n = seq.universe_size();
    let mut current = Family::full_universe(n).expect("valid universe");
    let mut steps = Vec::with_capacity(seq.deletions().len());
    for (k, &x) in seq.deletions().iter().enumerate() {
        current = current.without(&[x]);
        let check = current.is_union_closed();
        steps.push(StepReport {
            step: k + 1,
            deleted: x,
            union_closed: check.is_closed(),
            violation: check.violation,
        });
    }

    let mut problems = Vec::new();
    let step_problems = |problems: &mut Vec<SequenceProblem>| {
        problems.extend(steps.iter().filter_map(|s| {
            s.violation
                .map(|(x, y)| SequenceProblem::NotUnionClosed { step: s.step, x, y })
        }));
    };
    let deletions = seq.deletions();
    match seq.kind() {
        SequenceKind::Plain => {}
        SequenceKind::UnionClosed => step_problems(&mut problems),
        SequenceKind::Ideal(i) => {
            step_problems(&mut problems);
            problems.extend(split_problems(deletions, i));
        }
        SequenceKind::Optimal(i) => {
            step_problems(&mut problems);
            let t = deletions.len();
            if deletions.iter().all(|x| x.contains(i)) {
                problems.push(SequenceProblem::NoSetAvoidsElement);
            }
            if t < 2 {
                problems.push(SequenceProblem::TooShort);
            } else {
                if !deletions[t - 1].contains(i) {
                    problems.push(SequenceProblem::LastLacksElement(deletions[t - 1]));
                }
                if deletions[t - 2].contains(i) {
                    problems.push(SequenceProblem::PenultimateHasElement(deletions[t - 2]));
                }
                // Prefix is ideal for the same element, ending at F ∪ {X_{t-1}, X_t}.
                problems.extend(split_problems(&deletions[..t - 2], i));
            }
        }
    }
    SequenceReport {
        kind: seq.kind(),
        steps,
        problems,
    }
}
