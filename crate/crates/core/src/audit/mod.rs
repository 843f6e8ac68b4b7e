//! Empirical audit of the claims about bases and deletion sequences.
//!
//! Every claim is evaluated once per parameter binding it quantifies over.
//! Bindings whose hypotheses fail get [`Verdict::PreconditionNotMet`] rather
//! than counting as holds. Failures are re-derived by [`recheck`], which
//! works from the definitions on plain vectors and shares no code with the
//! constructions audited here.

pub mod recheck;
mod report;

use std::cell::OnceCell;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::basis::{basis, decompose};
use crate::family::Family;
use crate::mask::SetMask;
use crate::predicates::{minimal_elements, QuasiProbe, QuasiStatus};
use crate::sequences::{
    build_optimal_sequence, find_theorem3_witness, greedy_deletions, ideal_deletions, size_order,
    validate_sequence, DeletionSequence, OptimalOutcome, Refutation, SequenceKind, Strategy,
    Theorem3Outcome,
};

pub use report::{
    audit_all, audit_all_claims, parse_report, render_report, reverify_failures, AuditConfig,
    AuditReport, ClaimSummary, FailureRecord, ReportFormat, DEFAULT_QUASIMINIMAL_BUDGET,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClaimId {
    L1,
    L2,
    L3,
    L4,
    L5,
    L6,
    T1,
    T2,
    T3,
    T4a,
    T4b,
    T5,
}

impl ClaimId {
    pub const ALL: [ClaimId; 12] = [
        ClaimId::L1,
        ClaimId::L2,
        ClaimId::L3,
        ClaimId::L4,
        ClaimId::L5,
        ClaimId::L6,
        ClaimId::T1,
        ClaimId::T2,
        ClaimId::T3,
        ClaimId::T4a,
        ClaimId::T4b,
        ClaimId::T5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::L1 => "L1",
            ClaimId::L2 => "L2",
            ClaimId::L3 => "L3",
            ClaimId::L4 => "L4",
            ClaimId::L5 => "L5",
            ClaimId::L6 => "L6",
            ClaimId::T1 => "T1",
            ClaimId::T2 => "T2",
            ClaimId::T3 => "T3",
            ClaimId::T4a => "T4a",
            ClaimId::T4b => "T4b",
            ClaimId::T5 => "T5",
        }
    }

    /// Claims stated for arbitrary families, not only union-closed ones.
    pub fn accepts_arbitrary(self) -> bool {
        matches!(self, ClaimId::L1 | ClaimId::L3)
    }

    pub fn summary(self) -> &'static str {
        match self {
            ClaimId::L1 => "every member is a union of basis sets",
            ClaimId::L2 => "removing a basis set keeps the family union-closed",
            ClaimId::L3 => "removing a non-basis set keeps every basis set in the basis",
            ClaimId::L4 => "F ∪ D^j is union-closed for every j",
            ClaimId::L5 => "an ideal sequence exists for every i with D^i nonempty",
            ClaimId::L6 => "an optimal sequence exists for every i with D^i not in {∅, D}",
            ClaimId::T1 => "some element lies in at least half of the members",
            ClaimId::T2 => "a union-closed sequence from A to F exists",
            ClaimId::T3 => "some Y avoiding i is vincolated to a non-vincolated R containing i",
            ClaimId::T4a => "some i satisfies the quasiminimal bound for all its pairs",
            ClaimId::T4b => "every quasiminimal (i, Y1, Y2) satisfies the bound",
            ClaimId::T5 => "a minimal element j of D has 2|D^j| <= |D| + 1",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClaimId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown claim `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    PreconditionNotMet,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::PreconditionNotMet => "precondition-not-met",
        })
    }
}

/// Parameters a claim quantifies over; unused fields stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Binding {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<SetMask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y1: Option<SetMask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y2: Option<SetMask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<Strategy>,
}

impl Binding {
    fn element(i: usize) -> Self {
        Binding {
            element: Some(i),
            ..Default::default()
        }
    }

    fn set(x: SetMask) -> Self {
        Binding {
            set: Some(x),
            ..Default::default()
        }
    }
}

/// One element's offending pair in a T4a failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementViolation {
    pub element: usize,
    pub y1: SetMask,
    pub y2: SetMask,
    pub lhs: usize,
    pub rhs: usize,
}

/// Claim-specific evidence attached to a result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Frequencies {
        size: usize,
        frequencies: Vec<usize>,
        identity_checked: bool,
    },
    Decomposition {
        parts: Vec<SetMask>,
    },
    MissingUnion {
        x: SetMask,
        y: SetMask,
    },
    BasisLost {
        lost: Vec<SetMask>,
    },
    Refutation {
        refutation: Refutation,
    },
    Bound {
        lhs: usize,
        rhs: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        deletions: Option<Vec<SetMask>>,
    },
    Violations {
        per_element: Vec<ElementViolation>,
    },
    Note {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimResult {
    pub claim: ClaimId,
    pub family: Family,
    pub params: Binding,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

/// Lazily computed facts about one family.
struct Instance<'a> {
    family: &'a Family,
    closed: OnceCell<Option<(SetMask, SetMask)>>,
    complement: OnceCell<Family>,
    basis: OnceCell<Family>,
}

impl<'a> Instance<'a> {
    fn new(family: &'a Family) -> Self {
        Instance {
            family,
            closed: OnceCell::new(),
            complement: OnceCell::new(),
            basis: OnceCell::new(),
        }
    }

    fn violation(&self) -> Option<(SetMask, SetMask)> {
        *self
            .closed
            .get_or_init(|| self.family.is_union_closed().violation)
    }

    fn d(&self) -> &Family {
        self.complement.get_or_init(|| self.family.complement())
    }

    fn basis(&self) -> &Family {
        self.basis.get_or_init(|| basis(self.family))
    }

    fn n(&self) -> usize {
        self.family.universe_size()
    }
}

struct Collector<'a> {
    family: &'a Family,
    claim: ClaimId,
    out: Vec<ClaimResult>,
}

impl Collector<'_> {
    fn push(&mut self, params: Binding, verdict: Verdict, witness: Option<Witness>) {
        self.out.push(ClaimResult {
            claim: self.claim,
            family: self.family.clone(),
            params,
            verdict,
            witness,
        });
    }

    fn holds(&mut self, params: Binding) {
        self.push(params, Verdict::Holds, None);
    }

    fn fails(&mut self, params: Binding, witness: Witness) {
        self.push(params, Verdict::Fails, Some(witness));
    }

    fn skip(&mut self, params: Binding, reason: impl Into<String>) {
        self.push(
            params,
            Verdict::PreconditionNotMet,
            Some(Witness::Note {
                reason: reason.into(),
            }),
        );
    }

    fn check(&mut self, params: Binding, ok: bool, witness: impl FnOnce() -> Witness) {
        if ok {
            self.holds(params);
        } else {
            self.fails(params, witness());
        }
    }
}

/// Quasiminimal candidate outcome shared by T4a and T4b.
struct QuasiCandidate {
    element: usize,
    y1: SetMask,
    y2: SetMask,
    quasiminimal: bool,
    lhs: usize,
    rhs: usize,
}

struct QuasiScan {
    candidates: Vec<QuasiCandidate>,
    truncated: bool,
}

fn scan_quasiminimal(family: &Family, budget: Option<usize>) -> QuasiScan {
    let mut candidates = Vec::new();
    let mut truncated = false;
    'outer: for i in 1..=family.universe_size() {
        let probe = QuasiProbe::new(family, i);
        let (lhs, rhs) = probe.bound();
        for y1 in family.iter() {
            for y2 in family.iter() {
                if y1 == y2 || !probe.clauses_1_to_3(y1, y2) {
                    continue;
                }
                if budget.is_some_and(|b| candidates.len() >= b) {
                    truncated = true;
                    break 'outer;
                }
                let quasiminimal = probe.decide(y1, y2) == QuasiStatus::Quasiminimal;
                candidates.push(QuasiCandidate {
                    element: i,
                    y1,
                    y2,
                    quasiminimal,
                    lhs,
                    rhs,
                });
            }
        }
    }
    QuasiScan {
        candidates,
        truncated,
    }
}

fn sequence_verdict(
    c: &mut Collector<'_>,
    params: Binding,
    target: &Family,
    deletions: Result<Vec<SetMask>, Refutation>,
    kind: SequenceKind,
) {
    let deletions = match deletions {
        Ok(d) => d,
        Err(refutation) => return c.fails(params, Witness::Refutation { refutation }),
    };
    let seq = DeletionSequence::new(target.clone(), deletions, kind)
        .expect("constructions always cover the complement");
    let report = validate_sequence(&seq);
    if report.is_valid() {
        c.holds(params);
    } else {
        c.fails(
            params,
            Witness::Refutation {
                refutation: Refutation::Rejected {
                    deletions: seq.deletions().to_vec(),
                    problems: report.problems,
                },
            },
        );
    }
}

fn evaluate_claim(
    inst: &Instance<'_>,
    claim: ClaimId,
    quasi: Option<&QuasiScan>,
    out: &mut Vec<ClaimResult>,
) {
    let family = inst.family;
    let n = inst.n();
    let mut c = Collector {
        family,
        claim,
        out: std::mem::take(out),
    };

    if !claim.accepts_arbitrary() {
        if let Some((x, y)) = inst.violation() {
            c.skip(
                Binding::default(),
                format!("family is not union-closed: {x} ∪ {y} missing"),
            );
            *out = c.out;
            return;
        }
    }

    match claim {
        ClaimId::L1 => {
            let b = inst.basis();
            for x in family.iter() {
                let d = decompose(family, x).expect("member");
                let ok = d.union() == x && d.parts.iter().all(|&p| b.contains(p));
                c.check(Binding::set(x), ok, || Witness::Decomposition {
                    parts: d.parts.clone(),
                });
            }
        }
        ClaimId::L2 => {
            for b in inst.basis().iter() {
                let check = family.without(&[b]).is_union_closed();
                c.check(Binding::set(b), check.is_closed(), || {
                    let (x, y) = check.violation.expect("violation");
                    Witness::MissingUnion { x, y }
                });
            }
        }
        ClaimId::L3 => {
            let b = inst.basis();
            for z in family.iter().filter(|&z| !b.contains(z)) {
                let after = basis(&family.without(&[z]));
                let lost: Vec<SetMask> = b.iter().filter(|&t| !after.contains(t)).collect();
                let ok = lost.is_empty();
                c.check(Binding::set(z), ok, || Witness::BasisLost { lost });
            }
        }
        ClaimId::L4 => {
            for j in 1..=n {
                let d_j = inst.d().containing(j).expect("element in range");
                let check = family.union(&d_j).expect("same universe").is_union_closed();
                c.check(Binding::element(j), check.is_closed(), || {
                    let (x, y) = check.violation.expect("violation");
                    Witness::MissingUnion { x, y }
                });
            }
        }
        ClaimId::L5 => {
            for i in 1..=n {
                if inst.d().frequency(i) == 0 {
                    c.skip(Binding::element(i), format!("no set of D contains {i}"));
                    continue;
                }
                sequence_verdict(
                    &mut c,
                    Binding::element(i),
                    family,
                    ideal_deletions(family, i),
                    SequenceKind::Ideal(i),
                );
            }
        }
        ClaimId::L6 => {
            for i in 1..=n {
                match build_optimal_sequence(family, i) {
                    Err(e) => c.skip(Binding::element(i), e.to_string()),
                    Ok(OptimalOutcome::Built { .. }) => c.holds(Binding::element(i)),
                    Ok(OptimalOutcome::Refuted(refutation)) => {
                        c.fails(Binding::element(i), Witness::Refutation { refutation })
                    }
                }
            }
        }
        ClaimId::T1 => match family.check_conjecture() {
            Err(e) => c.skip(Binding::default(), e.to_string()),
            Ok(v) => {
                let ok = v.holds && v.identity_checked;
                c.check(Binding::default(), ok, || Witness::Frequencies {
                    size: family.len(),
                    frequencies: v.frequencies.clone(),
                    identity_checked: v.identity_checked,
                });
            }
        },
        ClaimId::T2 => {
            for strategy in Strategy::ALL {
                let params = Binding {
                    strategy: Some(strategy),
                    ..Default::default()
                };
                let deletions = match strategy {
                    Strategy::Greedy => {
                        greedy_deletions(family).map_err(|deleted| Refutation::Blocked { deleted })
                    }
                    Strategy::BySize => Ok(size_order(family)),
                };
                sequence_verdict(&mut c, params, family, deletions, SequenceKind::UnionClosed);
            }
        }
        ClaimId::T3 => {
            for i in 1..=n {
                match find_theorem3_witness(family, i).expect("element in range") {
                    Theorem3Outcome::Witness(_) => c.holds(Binding::element(i)),
                    Theorem3Outcome::PreconditionNotMet(why) => c.skip(Binding::element(i), why),
                    Theorem3Outcome::Refuted(refutation) => {
                        c.fails(Binding::element(i), Witness::Refutation { refutation })
                    }
                }
            }
        }
        ClaimId::T4a => {
            let scan = quasi.expect("quasiminimal scan computed");
            let mut per_element: Vec<Option<&QuasiCandidate>> = vec![None; n];
            let mut has_witness = vec![false; n];
            for q in scan.candidates.iter().filter(|q| q.quasiminimal) {
                has_witness[q.element - 1] = true;
                if q.lhs > q.rhs && per_element[q.element - 1].is_none() {
                    per_element[q.element - 1] = Some(q);
                }
            }
            let good = (1..=n).find(|&i| has_witness[i - 1] && per_element[i - 1].is_none());
            if let Some(i) = good {
                c.holds(Binding::element(i));
            } else if scan.truncated {
                c.skip(
                    Binding::default(),
                    "candidate budget exhausted before a verdict",
                );
            } else if let Some(i) = (1..=n).find(|&i| !has_witness[i - 1]) {
                c.skip(
                    Binding::default(),
                    format!("no quasiminimal pair for element {i}: implication holds vacuously"),
                );
            } else {
                let per_element = per_element
                    .into_iter()
                    .flatten()
                    .map(|q| ElementViolation {
                        element: q.element,
                        y1: q.y1,
                        y2: q.y2,
                        lhs: q.lhs,
                        rhs: q.rhs,
                    })
                    .collect();
                c.fails(Binding::default(), Witness::Violations { per_element });
            }
        }
        ClaimId::T4b => {
            let scan = quasi.expect("quasiminimal scan computed");
            for q in &scan.candidates {
                let params = Binding {
                    element: Some(q.element),
                    y1: Some(q.y1),
                    y2: Some(q.y2),
                    ..Default::default()
                };
                if !q.quasiminimal {
                    c.skip(params, "no optimal sequence ends by deleting Y1 then Y2");
                } else if q.lhs <= q.rhs {
                    c.holds(params);
                } else {
                    let deletions = QuasiProbe::new(family, q.element)
                        .certificate(q.y1, q.y2)
                        .map(|cert| cert.sequence.deletions().to_vec());
                    c.fails(
                        params,
                        Witness::Bound {
                            lhs: q.lhs,
                            rhs: q.rhs,
                            deletions,
                        },
                    );
                }
            }
        }
        ClaimId::T5 => {
            let d = inst.d();
            if d.len() <= 1 {
                c.skip(
                    Binding::default(),
                    format!("|D| = {} is not above 1", d.len()),
                );
            } else {
                for j in minimal_elements(d) {
                    let lhs = 2 * d.frequency(j);
                    let rhs = d.len() + 1;
                    c.check(Binding::element(j), lhs <= rhs, || Witness::Bound {
                        lhs,
                        rhs,
                        deletions: None,
                    });
                }
            }
        }
    }
    *out = c.out;
}

pub(crate) struct Evaluation {
    pub results: Vec<ClaimResult>,
    pub truncated: bool,
}

/// Results for `claims` on one family, in claim order then binding order.
pub(crate) fn evaluate(family: &Family, claims: &[ClaimId], budget: Option<usize>) -> Evaluation {
    let inst = Instance::new(family);
    let wants_quasi = claims
        .iter()
        .any(|c| matches!(c, ClaimId::T4a | ClaimId::T4b));
    let quasi =
        (wants_quasi && inst.violation().is_none()).then(|| scan_quasiminimal(family, budget));
    let mut results = Vec::new();
    for &claim in claims {
        evaluate_claim(&inst, claim, quasi.as_ref(), &mut results);
    }
    Evaluation {
        results,
        truncated: quasi.is_some_and(|q| q.truncated),
    }
}

/// Default candidate budget for quasiminimal scans: unlimited up to `n = 3`.
pub fn default_budget(n: usize) -> Option<usize> {
    (n > 3).then_some(DEFAULT_QUASIMINIMAL_BUDGET)
}

/// Every binding of `claim` on `family`.
pub fn audit_claim(claim: ClaimId, family: &Family) -> Vec<ClaimResult> {
    evaluate(family, &[claim], default_budget(family.universe_size())).results
}

/// Re-derives the verdict of `result` independently and compares.
pub fn reverify(result: &ClaimResult) -> bool {
    recheck::recheck(
        result.claim,
        result.family.universe_size(),
        result.family.members(),
        &result.params,
    ) == Some(result.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, sets: &[&[usize]]) -> Family {
        Family::new(n, sets).unwrap()
    }

    #[test]
    fn claim_ids_parse() {
        for c in ClaimId::ALL {
            assert_eq!(c.as_str().parse::<ClaimId>().unwrap(), c);
        }
        assert_eq!("t4a".parse::<ClaimId>().unwrap(), ClaimId::T4a);
        assert!("T6".parse::<ClaimId>().is_err());
    }

    #[test]
    fn t5_example() {
        let f = fam(3, &[&[3], &[1, 2, 3]]);
        let r = audit_claim(ClaimId::T5, &f);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].params.element, Some(3));
        assert_eq!(r[0].verdict, Verdict::Holds);
    }

    #[test]
    fn l4_example() {
        let r = audit_claim(ClaimId::L4, &fam(2, &[&[1, 2]]));
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.verdict == Verdict::Holds));
    }

    #[test]
    fn non_union_closed_input_is_skipped() {
        let f = fam(2, &[&[1], &[2]]);
        let r = audit_claim(ClaimId::T1, &f);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].verdict, Verdict::PreconditionNotMet);
        // L1 still runs on it.
        let r = audit_claim(ClaimId::L1, &f);
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.verdict == Verdict::Holds));
    }

    #[test]
    fn t5_small_complement_is_skipped() {
        let r = audit_claim(ClaimId::T5, &fam(2, &[&[2], &[1, 2]]));
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].verdict, Verdict::PreconditionNotMet);
    }

    #[test]
    fn results_reverify_on_n2() {
        for f in crate::search::enumerate_union_closed(2).unwrap() {
            for claim in ClaimId::ALL {
                for r in audit_claim(claim, &f) {
                    assert!(reverify(&r), "{claim} {:?} {:?} {}", f, r.params, r.verdict);
                }
            }
        }
    }
}
