//! Families of nonempty subsets of `[n]`.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{check_element, check_universe, Error, Result};
use crate::mask::SetMask;

/// Bitmap over all `2^n` masks, one bit per possible set.
#[derive(Clone)]
struct Membership {
    words: Vec<u64>,
}

impl Membership {
    fn new(n: usize) -> Self {
        let slots = 1usize << n;
        Membership {
            words: vec![0; slots.div_ceil(64)],
        }
    }

    #[inline]
    fn get(&self, m: SetMask) -> bool {
        let b = m.bits() as usize;
        self.words[b / 64] >> (b % 64) & 1 == 1
    }

    /// Returns true when the bit was newly set.
    #[inline]
    fn insert(&mut self, m: SetMask) -> bool {
        let b = m.bits() as usize;
        let w = &mut self.words[b / 64];
        let bit = 1u64 << (b % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }
}

/// A finite family of distinct nonempty subsets of `[n]`, `1 <= n <= 16`.
///
/// Members are kept sorted ascending by bits; two families are equal iff
/// they share the universe size and the member list.
#[derive(Clone)]
pub struct Family {
    n: usize,
    members: Vec<SetMask>,
    table: Membership,
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.members == other.members
    }
}

impl Eq for Family {}

impl Hash for Family {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.members.hash(state);
    }
}

impl PartialOrd for Family {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Family {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, &self.members).cmp(&(other.n, &other.members))
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family(n={}, ", self.n)?;
        f.debug_set().entries(self.members.iter()).finish()?;
        f.write_str(")")
    }
}

/// Outcome of a union-closedness check. `violation` holds the least pair
/// `(X, Y)` (ordered by `(bits(X), bits(Y))`) whose union is missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnionCheck {
    pub violation: Option<(SetMask, SetMask)>,
}

impl UnionCheck {
    pub fn is_closed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Result of testing the union-closed sets conjecture on one family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureVerdict {
    pub holds: bool,
    /// Elements `i` with `2 |F^i| >= |F|`, ascending.
    pub abundant_elements: Vec<usize>,
    /// True iff for every `i`: `|F| = 2 |A^i| - 1 - |D|` and
    /// `|F^i| = |A^i| - |D^i|`, with `D` counted independently.
    pub identity_checked: bool,
    /// `|F^i|` for `i = 1..=n`.
    pub frequencies: Vec<usize>,
}

impl Family {
    /// Builds a family from one-based element lists. Duplicates collapse,
    /// the empty set is rejected.
    pub fn new<S: AsRef<[usize]>>(n: usize, sets: &[S]) -> Result<Self> {
        check_universe(n)?;
        let masks = sets
            .iter()
            .map(|s| SetMask::nonempty(s.as_ref(), n))
            .collect::<Result<Vec<_>>>()?;
        Self::from_masks(n, masks)
    }

    /// Builds a family from masks, deduplicating and sorting them.
    pub fn from_masks<I: IntoIterator<Item = SetMask>>(n: usize, masks: I) -> Result<Self> {
        check_universe(n)?;
        let mut table = Membership::new(n);
        let mut members = Vec::new();
        let full = SetMask::full(n);
        for m in masks {
            if m.is_empty() {
                return Err(Error::EmptySetRejected);
            }
            if !m.is_subset(full) {
                return Err(Error::ElementOutOfRange {
                    element: m.max_element(),
                    n,
                });
            }
            if table.insert(m) {
                members.push(m);
            }
        }
        members.sort_unstable();
        Ok(Family { n, members, table })
    }

    /// Internal constructor for masks already known to be valid.
    fn from_valid(n: usize, masks: impl IntoIterator<Item = SetMask>) -> Self {
        let mut table = Membership::new(n);
        let mut members: Vec<SetMask> = masks.into_iter().filter(|&m| table.insert(m)).collect();
        members.sort_unstable();
        Family { n, members, table }
    }

    pub fn empty(n: usize) -> Result<Self> {
        check_universe(n)?;
        Ok(Self::from_valid(n, std::iter::empty()))
    }

    /// The universe `A`: every nonempty subset of `[n]`, `|A| = 2^n - 1`.
    pub fn full_universe(n: usize) -> Result<Self> {
        check_universe(n)?;
        let top = 1u32 << n;
        let mut table = Membership::new(n);
        let members = (1..top)
            .map(|b| {
                let m = SetMask::from_bits(b as u16);
                table.insert(m);
                m
            })
            .collect();
        Ok(Family { n, members, table })
    }

    /// Decodes a family from its membership code: bit `b - 1` of `code` is
    /// set iff the set with bits `b` is a member. Needs `n <= 6`.
    pub fn from_code(n: usize, code: u64) -> Result<Self> {
        check_universe(n)?;
        if n > 6 || (n < 6 && code >> ((1u32 << n) - 1) != 0) {
            return Err(Error::UniverseTooLarge(n));
        }
        Ok(Self::from_valid(
            n,
            (0..63u32)
                .filter(|k| code >> k & 1 == 1)
                .map(|k| SetMask::from_bits(k as u16 + 1)),
        ))
    }

    /// Inverse of [`Family::from_code`]; `None` when `n > 6`.
    pub fn code(&self) -> Option<u64> {
        if self.n > 6 {
            return None;
        }
        Some(
            self.members
                .iter()
                .fold(0u64, |acc, m| acc | 1 << (m.bits() - 1)),
        )
    }

    pub fn universe_size(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[SetMask] {
        &self.members
    }

    pub fn iter(&self) -> std::iter::Copied<std::slice::Iter<'_, SetMask>> {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn contains(&self, m: SetMask) -> bool {
        !m.is_empty() && m.is_subset(SetMask::full(self.n)) && self.table.get(m)
    }

    /// Member lists as one-based element vectors.
    pub fn to_element_lists(&self) -> Vec<Vec<usize>> {
        self.members
            .iter()
            .map(|m| m.elements().collect())
            .collect()
    }

    /// Pairwise union check with the least violating pair on failure.
    pub fn is_union_closed(&self) -> UnionCheck {
        for (k, &x) in self.members.iter().enumerate() {
            for &y in &self.members[k + 1..] {
                if !self.table.get(x.union(y)) {
                    return UnionCheck {
                        violation: Some((x, y)),
                    };
                }
            }
        }
        UnionCheck { violation: None }
    }

    /// Whether `self ∪ {x}` is union-closed, assuming `self` already is.
    pub(crate) fn closed_after_adding(&self, x: SetMask) -> bool {
        self.members.iter().all(|&y| {
            let u = x.union(y);
            u == x || self.table.get(u)
        })
    }

    /// Smallest union-closed family containing `self`.
    pub fn union_closure(&self) -> Family {
        let mut table = Membership::new(self.n);
        let mut members: Vec<SetMask> = Vec::with_capacity(self.members.len());
        for &g in &self.members {
            if table.get(g) {
                continue;
            }
            // Closed so far: new sets are exactly g and c ∪ g.
            let current = members.len();
            for k in 0..current {
                let u = members[k].union(g);
                if table.insert(u) {
                    members.push(u);
                }
            }
            if table.insert(g) {
                members.push(g);
            }
        }
        members.sort_unstable();
        Family {
            n: self.n,
            members,
            table,
        }
    }

    /// `F^i`: the members containing element `i`.
    pub fn containing(&self, i: usize) -> Result<Family> {
        check_element(i, self.n)?;
        Ok(Self::from_valid(
            self.n,
            self.iter().filter(|m| m.contains(i)),
        ))
    }

    /// Members avoiding element `i`.
    pub fn avoiding(&self, i: usize) -> Result<Family> {
        check_element(i, self.n)?;
        Ok(Self::from_valid(
            self.n,
            self.iter().filter(|m| !m.contains(i)),
        ))
    }

    /// `|F^i|`.
    pub fn frequency(&self, i: usize) -> usize {
        self.members.iter().filter(|m| m.contains(i)).count()
    }

    /// `|F^i|` for every `i = 1..=n`.
    pub fn frequencies(&self) -> Vec<usize> {
        let mut freq = vec![0usize; self.n];
        for m in &self.members {
            for e in m.elements() {
                freq[e - 1] += 1;
            }
        }
        freq
    }

    /// `D = A - F`.
    pub fn complement(&self) -> Family {
        let top = 1u32 << self.n;
        Self::from_valid(
            self.n,
            (1..top)
                .map(|b| SetMask::from_bits(b as u16))
                .filter(|&m| !self.table.get(m)),
        )
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        if self.n != other.n {
            return Err(Error::UniverseMismatch(self.n, other.n));
        }
        Ok(Self::from_valid(self.n, self.iter().chain(other.iter())))
    }

    pub fn difference(&self, other: &Family) -> Result<Family> {
        if self.n != other.n {
            return Err(Error::UniverseMismatch(self.n, other.n));
        }
        Ok(Self::from_valid(
            self.n,
            self.iter().filter(|&m| !other.contains(m)),
        ))
    }

    /// `self ∪ extra`; the extra masks must lie in the universe.
    pub fn with(&self, extra: &[SetMask]) -> Result<Family> {
        Self::from_masks(self.n, self.iter().chain(extra.iter().copied()))
    }

    /// `self - removed`.
    pub fn without(&self, removed: &[SetMask]) -> Family {
        Self::from_valid(self.n, self.iter().filter(|m| !removed.contains(m)))
    }

    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        self.n == other.n && self.iter().all(|m| other.contains(m))
    }

    /// Frequency test of the union-closed sets conjecture together with the
    /// counting identity `|F| = |A| - |D| = 2 |A^i| - 1 - |D|`.
    pub fn check_conjecture(&self) -> Result<ConjectureVerdict> {
        if self.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let frequencies = self.frequencies();
        let size = self.len();
        let abundant_elements: Vec<usize> = (1..=self.n)
            .filter(|&i| 2 * frequencies[i - 1] >= size)
            .collect();

        let d = self.complement();
        let half = 1usize << (self.n - 1);
        let identity_checked = (1..=self.n).all(|i| {
            let d_i = d.frequency(i);
            size + 1 + d.len() == 2 * half && frequencies[i - 1] + d_i == half
        });

        Ok(ConjectureVerdict {
            holds: !abundant_elements.is_empty(),
            abundant_elements,
            identity_checked,
            frequencies,
        })
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = SetMask;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, SetMask>>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
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
    fn make_family_examples() {
        let f = fam(2, &[&[1], &[2], &[1, 2]]);
        assert_eq!(f.to_element_lists(), vec![vec![1], vec![2], vec![1, 2]]);
        assert_eq!(fam(2, &[&[1], &[1]]).len(), 1);
        assert_eq!(
            Family::new(2, &[Vec::<usize>::new()]),
            Err(Error::EmptySetRejected)
        );
        assert_eq!(Family::new(17, &[[1]]), Err(Error::UniverseTooLarge(17)));
        assert_eq!(
            Family::new(2, &[[3]]),
            Err(Error::ElementOutOfRange { element: 3, n: 2 })
        );
    }

    #[test]
    fn full_universe_counts() {
        let a = Family::full_universe(3).unwrap();
        assert_eq!(a.len(), 7);
        assert_eq!(a.containing(1).unwrap().len(), 4);
        assert_eq!(
            Family::full_universe(1).unwrap().to_element_lists(),
            vec![vec![1]]
        );
        assert_eq!(Family::full_universe(0), Err(Error::UniverseTooLarge(0)));
        assert_eq!(Family::full_universe(16).unwrap().len(), 65535);
    }

    #[test]
    fn union_closed_examples() {
        assert!(fam(2, &[&[1], &[2], &[1, 2]]).is_union_closed().is_closed());
        let check = fam(2, &[&[1], &[2]]).is_union_closed();
        assert_eq!(check.violation, Some((m(2, &[1]), m(2, &[2]))));
        assert!(fam(3, &[&[3], &[1, 2, 3]]).is_union_closed().is_closed());
        assert!(Family::empty(3).unwrap().is_union_closed().is_closed());
    }

    #[test]
    fn least_violating_pair() {
        // {1}∪{2} and {1}∪{4} both missing; pair with the least first set, then second.
        let f = fam(3, &[&[1], &[2], &[3], &[1, 2]]);
        assert_eq!(
            f.is_union_closed().violation,
            Some((m(3, &[1]), m(3, &[3])))
        );
    }

    #[test]
    fn closure_examples() {
        assert_eq!(
            fam(2, &[&[1], &[2]]).union_closure(),
            fam(2, &[&[1], &[2], &[1, 2]])
        );
        assert_eq!(
            fam(3, &[&[1], &[2], &[3]]).union_closure(),
            Family::full_universe(3).unwrap()
        );
        let f = fam(3, &[&[3], &[1, 2, 3]]);
        assert_eq!(f.union_closure(), f);
    }

    #[test]
    fn subfamily_and_complement_examples() {
        let f = fam(3, &[&[3], &[1, 2, 3]]);
        assert_eq!(f.containing(3).unwrap(), f);
        assert_eq!(f.containing(1).unwrap(), fam(3, &[&[1, 2, 3]]));
        assert_eq!(
            f.containing(4),
            Err(Error::ElementOutOfRange { element: 4, n: 3 })
        );
        assert_eq!(
            Family::full_universe(3)
                .unwrap()
                .containing(2)
                .unwrap()
                .len(),
            4
        );

        let d = f.complement();
        assert_eq!(d, fam(3, &[&[1], &[2], &[1, 2], &[1, 3], &[2, 3]]));
        assert!(Family::full_universe(3).unwrap().complement().is_empty());
        assert_eq!(fam(2, &[&[1, 2]]).complement(), fam(2, &[&[1], &[2]]));
    }

    #[test]
    fn conjecture_examples() {
        let v = fam(2, &[&[1], &[1, 2]]).check_conjecture().unwrap();
        assert!(v.holds && v.identity_checked);
        assert_eq!(v.abundant_elements, vec![1, 2]);

        let v = fam(3, &[&[3], &[1, 2, 3]]).check_conjecture().unwrap();
        assert!(v.holds && v.abundant_elements.contains(&3));
        assert_eq!(v.frequencies, vec![1, 1, 2]);

        assert_eq!(
            Family::empty(2).unwrap().check_conjecture(),
            Err(Error::EmptyFamily)
        );
    }

    #[test]
    fn conjecture_can_fail_off_union_closed_families() {
        let v = fam(3, &[&[1], &[2], &[3]]).check_conjecture().unwrap();
        assert!(!v.holds && v.abundant_elements.is_empty());
    }

    #[test]
    fn codes_round_trip() {
        let f = fam(2, &[&[2], &[1, 2]]);
        assert_eq!(f.code(), Some(0b110));
        assert_eq!(Family::from_code(2, 0b110).unwrap(), f);
        assert!(Family::from_code(2, 0b1000).is_err());
    }

    #[test]
    fn closed_after_adding_matches_full_check() {
        let f = fam(3, &[&[3], &[1, 2, 3]]);
        for x in f.complement().iter() {
            let direct = f.with(&[x]).unwrap().is_union_closed().is_closed();
            assert_eq!(f.closed_after_adding(x), direct, "{x}");
        }
    }
}
