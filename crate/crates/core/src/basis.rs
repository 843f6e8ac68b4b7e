//! The basis of a family: members that are not the union of two other
//! members. Every member decomposes into a union of basis sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::mask::SetMask;

/// A member written as a union of basis sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDecomposition {
    pub target: SetMask,
    /// Distinct basis sets, ascending by bits.
    pub parts: Vec<SetMask>,
}

impl BasisDecomposition {
    pub fn union(&self) -> SetMask {
        self.parts
            .iter()
            .fold(SetMask::EMPTY, |acc, &p| acc.union(p))
    }
}

/// `B(F) = {X ∈ F | ∀ Y, Z ∈ F - {X}: X ≠ Y ∪ Z}`.
///
/// `Y = Z` is allowed by the quantifier but never matters: `Y ∪ Y = Y ≠ X`.
pub fn basis(family: &Family) -> Family {
    let members = family.members();
    let mut reducible = vec![false; members.len()];
    for (a, &y) in members.iter().enumerate() {
        for &z in &members[a + 1..] {
            let u = y.union(z);
            // u == z means y ⊂ z, and z may not be its own witness.
            if u != z && family.contains(u) {
                let k = members.binary_search(&u).expect("member present");
                reducible[k] = true;
            }
        }
    }
    let kept: Vec<SetMask> = members
        .iter()
        .zip(&reducible)
        .filter(|(_, &r)| !r)
        .map(|(&m, _)| m)
        .collect();
    Family::from_masks(family.universe_size(), kept).expect("subfamily of a valid family")
}

/// Least pair `(Y, Z)` by `(bits(Y), bits(Z))` with `Y, Z ∈ F - {X}` and
/// `Y ∪ Z = X`.
pub fn least_split(family: &Family, x: SetMask) -> Option<(SetMask, SetMask)> {
    // Both halves are proper subsets of x, hence numerically below it.
    let below: Vec<SetMask> = family
        .iter()
        .take_while(|&m| m < x)
        .filter(|m| m.is_subset(x))
        .collect();
    for (a, &y) in below.iter().enumerate() {
        for &z in &below[a + 1..] {
            if y.union(z) == x {
                return Some((y, z));
            }
        }
    }
    None
}

/// Writes `x ∈ F` as a union of basis sets by recursive splitting on the
/// least available pair. Works for any family, union-closed or not.
pub fn decompose(family: &Family, x: SetMask) -> Result<BasisDecomposition> {
    if !family.contains(x) {
        return Err(Error::NotAMember(x));
    }
    let mut parts = Vec::new();
    // Explicit stack of (set, depth); each split strictly shrinks the set.
    let mut stack = vec![(x, 0usize)];
    while let Some((current, depth)) = stack.pop() {
        assert!(
            depth <= family.universe_size(),
            "decomposition deeper than the universe size"
        );
        match least_split(family, current) {
            None => parts.push(current),
            Some((y, z)) => {
                stack.push((z, depth + 1));
                stack.push((y, depth + 1));
            }
        }
    }
    parts.sort_unstable();
    parts.dedup();
    Ok(BasisDecomposition { target: x, parts })
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

    // Definition evaluated literally, with Y = Z allowed.
    fn basis_by_definition(f: &Family) -> Vec<SetMask> {
        f.iter()
            .filter(|&x| {
                let others: Vec<_> = f.iter().filter(|&o| o != x).collect();
                !others
                    .iter()
                    .any(|&y| others.iter().any(|&z| y.union(z) == x))
            })
            .collect()
    }

    #[test]
    fn basis_examples() {
        let a2 = Family::full_universe(2).unwrap();
        assert_eq!(basis(&a2), fam(2, &[&[1], &[2]]));
        let f = fam(2, &[&[1], &[1, 2]]);
        assert_eq!(basis(&f), f);
        let single = fam(3, &[&[1, 3]]);
        assert_eq!(basis(&single), single);
        assert_eq!(
            basis(&Family::full_universe(3).unwrap()),
            fam(3, &[&[1], &[2], &[3]])
        );
    }

    #[test]
    fn basis_matches_definition_on_all_small_families() {
        for n in 1..=3 {
            let size = (1u64 << n) - 1;
            for code in 1..(1u64 << size) {
                let f = Family::from_code(n, code).unwrap();
                assert_eq!(
                    basis(&f).members(),
                    basis_by_definition(&f).as_slice(),
                    "{f:?}"
                );
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let a2 = Family::full_universe(2).unwrap();
        let d = decompose(&a2, m(2, &[1, 2])).unwrap();
        assert_eq!(d.parts, vec![m(2, &[1]), m(2, &[2])]);

        let d = decompose(&a2, m(2, &[1])).unwrap();
        assert_eq!(d.parts, vec![m(2, &[1])]);

        let a3 = Family::full_universe(3).unwrap();
        let d = decompose(&a3, SetMask::full(3)).unwrap();
        assert_eq!(d.union(), SetMask::full(3));
        let b = basis(&a3);
        assert!(d.parts.iter().all(|&p| b.contains(p)));

        assert_eq!(
            decompose(&a2, m(3, &[3])),
            Err(Error::NotAMember(m(3, &[3])))
        );
    }

    #[test]
    fn split_prefers_least_pair() {
        // {1,2,3} = {1}∪{2,3} = {1,2}∪{3} = {1,2}∪{1,3} ...; least first set is {1}.
        let f = fam(3, &[&[1], &[3], &[1, 2], &[2, 3], &[1, 2, 3]]);
        assert_eq!(
            least_split(&f, SetMask::full(3)),
            Some((m(3, &[1]), m(3, &[2, 3])))
        );
    }
}
