//! Pointwise predicates on a family `F` and its complement `D = A - F`.

use serde::{Deserialize, Serialize};

use crate::error::{check_element, check_universe, Error, Result};
use crate::family::Family;
use crate::mask::SetMask;
use crate::sequences::{ideal_deletions, validate_sequence, DeletionSequence, SequenceKind};

/// `E_X(Y) = {T ∈ A | Y ⊆ T ⊆ Y ∪ X}`, of size `2^{|X - Y|}`.
pub fn extension(y: SetMask, x: SetMask, n: usize) -> Result<Family> {
    check_universe(n)?;
    let full = SetMask::full(n);
    for m in [y, x] {
        if !m.is_subset(full) {
            return Err(Error::ElementOutOfRange {
                element: m.max_element(),
                n,
            });
        }
    }
    if y.is_empty() {
        return Err(Error::EmptySetRejected);
    }
    let free = x.difference(y).bits();
    // Walk every submask of `free`.
    let mut out = Vec::with_capacity(1 << free.count_ones());
    let mut sub = free;
    loop {
        out.push(y.union(SetMask::from_bits(sub)));
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & free;
    }
    Family::from_masks(n, out)
}

/// `y ∈ F` with `x ∪ y ∈ D` and `x ∪ y ≠ x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VincolatedWitness {
    pub x: SetMask,
    pub y: SetMask,
    pub result: SetMask,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vincolation {
    /// `F ∪ {X}` is not union-closed.
    pub vincolated: bool,
    /// Least `Y ∈ F` by bits whose union with `X` is another set of `D`.
    pub witness: Option<VincolatedWitness>,
}

fn require_in_complement(family: &Family, x: SetMask) -> Result<()> {
    let n = family.universe_size();
    if x.is_empty() || !x.is_subset(SetMask::full(n)) || family.contains(x) {
        return Err(Error::NotInComplement(x));
    }
    Ok(())
}

fn least_escape(family: &Family, x: SetMask) -> Option<VincolatedWitness> {
    family.iter().find_map(|y| {
        let u = x.union(y);
        (u != x && !family.contains(u)).then_some(VincolatedWitness { x, y, result: u })
    })
}

/// Whether `X ∈ D` is vincolated: `F ∪ {X}` is not union-closed.
///
/// Checks both characterizations and asserts they agree whenever `F` is
/// union-closed. A `Y ⊆ X` gives `X ∪ Y = X`, which is not a violation, so
/// the pair form requires the union to differ from `X`.
pub fn is_vincolated(family: &Family, x: SetMask) -> Result<Vincolation> {
    require_in_complement(family, x)?;
    let extended = family.with(&[x])?;
    let vincolated = !extended.is_union_closed().is_closed();
    let witness = least_escape(family, x);
    if family.is_union_closed().is_closed() {
        assert_eq!(
            vincolated,
            witness.is_some(),
            "vincolated characterizations disagree for {x} in {family:?}"
        );
    }
    Ok(Vincolation {
        vincolated,
        witness,
    })
}

/// `F ∪ {X}` is not union-closed but `F ∪ {X, Y}` is.
pub fn is_vincolated_to(family: &Family, x: SetMask, y: SetMask) -> Result<bool> {
    require_in_complement(family, x)?;
    require_in_complement(family, y)?;
    if x == y {
        return Err(Error::IdenticalSets(x));
    }
    let with_x = family.with(&[x])?;
    if with_x.is_union_closed().is_closed() {
        return Ok(false);
    }
    Ok(with_x.with(&[y])?.is_union_closed().is_closed())
}

/// Elements `j` with `|D^j| <= |D^k|` for all `k`, ascending.
pub fn minimal_elements(d: &Family) -> Vec<usize> {
    let freq = d.frequencies();
    let least = freq.iter().copied().min().unwrap_or(0);
    (1..=d.universe_size())
        .filter(|&j| freq[j - 1] == least)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiminimalCertificate {
    pub element: usize,
    pub y1: SetMask,
    pub y2: SetMask,
    /// Optimal for `element`, from `A` to `F - {Y1, Y2}`, ending `Y1, Y2`.
    pub sequence: DeletionSequence,
}

/// How far a candidate `(i, Y1, Y2)` gets through the four clauses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum QuasiStatus {
    /// One of: `i ∈ Y2`, `i ∉ Y1`, `i` minimal on `D ∪ {Y1, Y2}`.
    ClausesFail,
    /// Clauses 1–3 hold but no optimal sequence with the required tail.
    NoSequence,
    Quasiminimal,
}

/// Per-`(F, i)` state shared by every `(Y1, Y2)` candidate.
pub(crate) struct QuasiProbe<'a> {
    family: &'a Family,
    element: usize,
    d_freq: Vec<usize>,
    d_len: usize,
    /// Ideal deletions from `A` to `F` that passed validation.
    prefix: Option<Vec<SetMask>>,
}

impl<'a> QuasiProbe<'a> {
    pub(crate) fn new(family: &'a Family, element: usize) -> Self {
        let d = family.complement();
        let prefix = if family.is_union_closed().is_closed() {
            ideal_deletions(family, element).ok().filter(|dels| {
                DeletionSequence::new(family.clone(), dels.clone(), SequenceKind::Ideal(element))
                    .map(|s| validate_sequence(&s).is_valid())
                    .unwrap_or(false)
            })
        } else {
            None
        };
        QuasiProbe {
            family,
            element,
            d_freq: d.frequencies(),
            d_len: d.len(),
            prefix,
        }
    }

    /// Clause 3 on `D ∪ {Y1, Y2}` without materialising the union.
    fn is_minimal_with(&self, y1: SetMask, y2: SetMask) -> bool {
        let n = self.family.universe_size();
        let freq = |j: usize| {
            self.d_freq[j - 1] + usize::from(y1.contains(j)) + usize::from(y2.contains(j))
        };
        let fi = freq(self.element);
        (1..=n).all(|k| fi <= freq(k))
    }

    pub(crate) fn clauses_1_to_3(&self, y1: SetMask, y2: SetMask) -> bool {
        y2.contains(self.element) && !y1.contains(self.element) && self.is_minimal_with(y1, y2)
    }

    pub(crate) fn status(&self, y1: SetMask, y2: SetMask) -> QuasiStatus {
        if !self.clauses_1_to_3(y1, y2) {
            return QuasiStatus::ClausesFail;
        }
        if self.prefix.is_none() {
            return QuasiStatus::NoSequence;
        }
        // The prefix already validated; the two extra steps remain.
        let after_y1 = self.family.without(&[y1]);
        if !after_y1.is_union_closed().is_closed() {
            return QuasiStatus::NoSequence;
        }
        if !after_y1.without(&[y2]).is_union_closed().is_closed() {
            return QuasiStatus::NoSequence;
        }
        QuasiStatus::Quasiminimal
    }

    /// [`status`](Self::status) with the exhaustive fallback for `n <= 3`.
    pub(crate) fn decide(&self, y1: SetMask, y2: SetMask) -> QuasiStatus {
        match self.status(y1, y2) {
            QuasiStatus::NoSequence
                if exhaustive_certificate(self.family, self.element, y1, y2).is_some() =>
            {
                QuasiStatus::Quasiminimal
            }
            s => s,
        }
    }

    /// `2 |(D ∪ Y)^i|` and `|D ∪ Y| + 1`.
    pub(crate) fn bound(&self) -> (usize, usize) {
        (2 * (self.d_freq[self.element - 1] + 1), self.d_len + 2 + 1)
    }

    pub(crate) fn certificate(&self, y1: SetMask, y2: SetMask) -> Option<QuasiminimalCertificate> {
        let mut deletions = self.prefix.clone()?;
        deletions.push(y1);
        deletions.push(y2);
        let target = self.family.without(&[y1, y2]);
        let sequence =
            DeletionSequence::new(target, deletions, SequenceKind::Optimal(self.element)).ok()?;
        validate_sequence(&sequence)
            .is_valid()
            .then_some(QuasiminimalCertificate {
                element: self.element,
                y1,
                y2,
                sequence,
            })
    }
}

/// Least valid optimal sequence (lexicographic in the deletion order) from
/// `A` to `F - {Y1, Y2}` ending with `Y1, Y2`, by depth-first search over
/// orderings of `D`. Only attempted for `n <= 3`.
fn exhaustive_certificate(
    family: &Family,
    i: usize,
    y1: SetMask,
    y2: SetMask,
) -> Option<QuasiminimalCertificate> {
    let n = family.universe_size();
    if n > 3 {
        return None;
    }
    let pool: Vec<SetMask> = family.complement().iter().collect();
    let target = family.without(&[y1, y2]);
    let start = Family::full_universe(n).ok()?;
    let mut order = Vec::with_capacity(pool.len() + 2);
    let mut used = vec![false; pool.len()];

    fn dfs(
        pool: &[SetMask],
        used: &mut [bool],
        current: &Family,
        order: &mut Vec<SetMask>,
        tail: (SetMask, SetMask),
        target: &Family,
        i: usize,
    ) -> Option<DeletionSequence> {
        if order.len() == pool.len() {
            let mut deletions = order.clone();
            deletions.push(tail.0);
            deletions.push(tail.1);
            let seq =
                DeletionSequence::new(target.clone(), deletions, SequenceKind::Optimal(i)).ok()?;
            return validate_sequence(&seq).is_valid().then_some(seq);
        }
        for k in 0..pool.len() {
            if used[k] {
                continue;
            }
            let next = current.without(&[pool[k]]);
            // Every state of a valid sequence is union-closed.
            if !next.is_union_closed().is_closed() {
                continue;
            }
            used[k] = true;
            order.push(pool[k]);
            let found = dfs(pool, used, &next, order, tail, target, i);
            order.pop();
            used[k] = false;
            if found.is_some() {
                return found;
            }
        }
        None
    }

    dfs(&pool, &mut used, &start, &mut order, (y1, y2), &target, i).map(|sequence| {
        QuasiminimalCertificate {
            element: i,
            y1,
            y2,
            sequence,
        }
    })
}

/// Whether `i` is quasiminimal on `D` for `{Y1, Y2} ⊆ F`: `i ∈ Y2`,
/// `i ∉ Y1`, `i` minimal on `D ∪ {Y1, Y2}`, and some optimal sequence for
/// `i` from `A` to `F - {Y1, Y2}` ends by deleting `Y1` then `Y2`.
///
/// The last clause is decided constructively, with an exhaustive search
/// over deletion orders as fallback when `n <= 3`.
pub fn is_quasiminimal(
    family: &Family,
    i: usize,
    y1: SetMask,
    y2: SetMask,
) -> Result<Option<QuasiminimalCertificate>> {
    check_element(i, family.universe_size())?;
    for y in [y1, y2] {
        if !family.contains(y) {
            return Err(Error::NotAMember(y));
        }
    }
    if y1 == y2 {
        return Err(Error::IdenticalSets(y1));
    }
    let probe = QuasiProbe::new(family, i);
    match probe.status(y1, y2) {
        QuasiStatus::ClausesFail => Ok(None),
        QuasiStatus::Quasiminimal => Ok(probe.certificate(y1, y2)),
        QuasiStatus::NoSequence => Ok(exhaustive_certificate(family, i, y1, y2)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, sets: &[&[usize]]) -> Family {
        Family::new(n, sets).unwrap()
    }

    fn m(n: usize, e: &[usize]) -> SetMask {
        SetMask::from_elements(e, n).unwrap()
    }

    #[test]
    fn extension_examples() {
        assert_eq!(
            extension(m(3, &[1]), m(3, &[2, 3]), 3).unwrap(),
            fam(3, &[&[1], &[1, 2], &[1, 3], &[1, 2, 3]])
        );
        assert_eq!(
            extension(m(3, &[1, 2]), m(3, &[1]), 3).unwrap(),
            fam(3, &[&[1, 2]])
        );
        assert_eq!(
            extension(m(3, &[1]), m(3, &[2]), 3).unwrap(),
            fam(3, &[&[1], &[1, 2]])
        );
        assert!(matches!(
            extension(m(4, &[4]), m(3, &[1]), 3),
            Err(Error::ElementOutOfRange { .. })
        ));
    }

    #[test]
    fn vincolated_examples() {
        let f = fam(3, &[&[3], &[1, 2, 3]]);
        let v = is_vincolated(&f, m(3, &[1])).unwrap();
        assert!(v.vincolated);
        assert_eq!(
            v.witness,
            Some(VincolatedWitness {
                x: m(3, &[1]),
                y: m(3, &[3]),
                result: m(3, &[1, 3])
            })
        );

        let v = is_vincolated(&fam(2, &[&[1, 2]]), m(2, &[1])).unwrap();
        assert!(!v.vincolated && v.witness.is_none());

        let a = Family::full_universe(2).unwrap();
        assert_eq!(
            is_vincolated(&a, m(2, &[1])),
            Err(Error::NotInComplement(m(2, &[1])))
        );
    }

    #[test]
    fn subset_partner_is_not_a_witness() {
        // {1} ⊆ {1,2}: the union stays {1,2}, which is not a violation.
        let f = fam(2, &[&[1]]);
        let v = is_vincolated(&f, m(2, &[1, 2])).unwrap();
        assert!(!v.vincolated && v.witness.is_none());
    }

    #[test]
    fn vincolated_to_examples() {
        let f = fam(3, &[&[3], &[1, 2, 3]]);
        assert!(is_vincolated_to(&f, m(3, &[1]), m(3, &[1, 3])).unwrap());
        assert!(!is_vincolated_to(&f, m(3, &[1]), m(3, &[2, 3])).unwrap());
        // X not vincolated: false whatever Y is.
        let g = fam(2, &[&[1, 2]]);
        assert!(!is_vincolated_to(&g, m(2, &[1]), m(2, &[2])).unwrap());
        assert_eq!(
            is_vincolated_to(&f, m(3, &[1]), m(3, &[1])),
            Err(Error::IdenticalSets(m(3, &[1])))
        );
    }

    #[test]
    fn minimal_examples() {
        let d = fam(3, &[&[1], &[2], &[1, 2], &[1, 3], &[2, 3]]);
        assert_eq!(minimal_elements(&d), vec![3]);
        assert_eq!(minimal_elements(&Family::empty(3).unwrap()), vec![1, 2, 3]);
        assert_eq!(minimal_elements(&fam(2, &[&[1]])), vec![2]);
    }

    #[test]
    fn quasiminimal_trivial_rejections() {
        let a = Family::full_universe(3).unwrap();
        let f = a.without(&[m(3, &[1])]);
        // i ∉ Y2.
        assert_eq!(
            is_quasiminimal(&f, 1, m(3, &[2]), m(3, &[3])).unwrap(),
            None
        );
        // Clauses 1-3 hold, but F - {Y1, Y2} keeps {2} and {3} without {2,3}.
        let y1 = m(3, &[2, 3]);
        let y2 = m(3, &[1, 2, 3]);
        assert!(!f.without(&[y1, y2]).is_union_closed().is_closed());
        assert_eq!(is_quasiminimal(&f, 1, y1, y2).unwrap(), None);
        assert_eq!(
            is_quasiminimal(&f, 1, m(3, &[1]), y2),
            Err(Error::NotAMember(m(3, &[1])))
        );
    }

    #[test]
    fn certificate_has_the_required_tail() {
        let f = fam(2, &[&[1], &[2], &[1, 2]]);
        // D = ∅; i = 1 is minimal on {{2}, {1}}: frequencies 1, 1.
        let cert = is_quasiminimal(&f, 1, m(2, &[2]), m(2, &[1]))
            .unwrap()
            .unwrap();
        assert_eq!(cert.sequence.deletions(), &[m(2, &[2]), m(2, &[1])]);
        assert!(validate_sequence(&cert.sequence).is_valid());
    }
}
