//! Deletion sequences from the universe `A` down to a target family, their
//! validators, and the constructive procedures that build them.

mod build;
mod validate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_element, Error, Result};
use crate::family::Family;
use crate::mask::SetMask;

pub use build::{
    build_ideal_sequence, build_optimal_sequence, build_union_closed_sequence,
    find_theorem3_witness, OptimalCase, OptimalOutcome, Refutation, Strategy, Theorem3Outcome,
    Theorem3Witness,
};
pub(crate) use build::{greedy_deletions, ideal_deletions, size_order};
pub use validate::{validate_sequence, SequenceProblem, SequenceReport, StepReport};

/// What a sequence claims to be; decides which clauses the validator checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SequenceKind {
    Plain,
    UnionClosed,
    Ideal(usize),
    Optimal(usize),
}

impl SequenceKind {
    pub fn element(self) -> Option<usize> {
        match self {
            SequenceKind::Ideal(i) | SequenceKind::Optimal(i) => Some(i),
            _ => None,
        }
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceKind::Plain => f.write_str("plain"),
            SequenceKind::UnionClosed => f.write_str("uc"),
            SequenceKind::Ideal(i) => write!(f, "ideal:{i}"),
            SequenceKind::Optimal(i) => write!(f, "optimal:{i}"),
        }
    }
}

impl FromStr for SequenceKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parse_i = |rest: &str| {
            rest.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad element in sequence kind `{s}`"))
        };
        match s.trim() {
            "plain" => Ok(SequenceKind::Plain),
            "uc" | "union-closed" => Ok(SequenceKind::UnionClosed),
            other => {
                if let Some(rest) = other.strip_prefix("ideal:") {
                    Ok(SequenceKind::Ideal(parse_i(rest)?))
                } else if let Some(rest) = other.strip_prefix("optimal:") {
                    Ok(SequenceKind::Optimal(parse_i(rest)?))
                } else {
                    Err(format!("unknown sequence kind `{s}`"))
                }
            }
        }
    }
}

/// `A_0 = A, A_r = A_{r-1} - {X_r}`, ending at the target family.
///
/// Construction checks the structure: the deletions are distinct nonempty
/// sets outside the target and together with it they make up all of `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeletionSequence {
    target: Family,
    deletions: Vec<SetMask>,
    kind: SequenceKind,
}

impl DeletionSequence {
    pub fn new(target: Family, deletions: Vec<SetMask>, kind: SequenceKind) -> Result<Self> {
        let n = target.universe_size();
        if let Some(i) = kind.element() {
            check_element(i, n).map_err(|e| Error::MalformedSequence(e.to_string()))?;
        }
        let full = SetMask::full(n);
        let mut seen = std::collections::HashSet::with_capacity(deletions.len());
        for &x in &deletions {
            if x.is_empty() || !x.is_subset(full) {
                return Err(Error::MalformedSequence(format!(
                    "{x} is not a nonempty subset of [{n}]"
                )));
            }
            if target.contains(x) {
                return Err(Error::MalformedSequence(format!(
                    "{x} belongs to the target"
                )));
            }
            if !seen.insert(x) {
                return Err(Error::MalformedSequence(format!("{x} is deleted twice")));
            }
        }
        let expected = (1usize << n) - 1 - target.len();
        if deletions.len() != expected {
            return Err(Error::MalformedSequence(format!(
                "{} deletions do not cover the {} sets outside the target",
                deletions.len(),
                expected
            )));
        }
        Ok(DeletionSequence {
            target,
            deletions,
            kind,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.target.universe_size()
    }

    pub fn target(&self) -> &Family {
        &self.target
    }

    pub fn deletions(&self) -> &[SetMask] {
        &self.deletions
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: SequenceKind) -> Result<Self> {
        if let Some(i) = kind.element() {
            check_element(i, self.universe_size())
                .map_err(|e| Error::MalformedSequence(e.to_string()))?;
        }
        self.kind = kind;
        Ok(self)
    }

    /// `A_0, …, A_t`.
    pub fn states(&self) -> Vec<Family> {
        let mut current = Family::full_universe(self.universe_size()).expect("valid universe");
        let mut out = Vec::with_capacity(self.deletions.len() + 1);
        out.push(current.clone());
        for &x in &self.deletions {
            current = current.without(&[x]);
            out.push(current.clone());
        }
        out
    }

    /// Replays every deletion from `A` and returns the final family.
    pub fn replay(&self) -> Family {
        let n = self.universe_size();
        let all = Family::full_universe(n).expect("valid universe");
        all.without(&self.deletions)
    }
}
