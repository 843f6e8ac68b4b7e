use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_element, Error, Result};

/// A subset of `[n] = {1, …, n}` stored as a bitmask: bit `i - 1` is set
/// iff element `i` belongs to the set.
///
/// The numeric order of the bits is the canonical order used for sorting
/// family members and for every tie-break in the crate. A proper subset
/// always compares below its supersets.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SetMask(u16);

impl SetMask {
    pub const EMPTY: SetMask = SetMask(0);

    pub const fn from_bits(bits: u16) -> Self {
        SetMask(bits)
    }

    pub const fn bits(self) -> u16 {
        self.0
    }

    /// Builds a mask from one-based element indices.
    pub fn from_elements(elements: &[usize], n: usize) -> Result<Self> {
        let mut bits = 0u16;
        for &e in elements {
            check_element(e, n)?;
            bits |= 1 << (e - 1);
        }
        Ok(SetMask(bits))
    }

    /// Builds a nonempty mask, rejecting `∅`.
    pub fn nonempty(elements: &[usize], n: usize) -> Result<Self> {
        let m = Self::from_elements(elements, n)?;
        if m.is_empty() {
            return Err(Error::EmptySetRejected);
        }
        Ok(m)
    }

    /// All of `[n]`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 16);
        SetMask(((1u32 << n) - 1) as u16)
    }

    pub fn singleton(element: usize) -> Self {
        debug_assert!((1..=16).contains(&element));
        SetMask(1 << (element - 1))
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, element: usize) -> bool {
        (1..=16).contains(&element) && self.0 >> (element - 1) & 1 == 1
    }

    pub const fn union(self, other: SetMask) -> SetMask {
        SetMask(self.0 | other.0)
    }

    pub const fn difference(self, other: SetMask) -> SetMask {
        SetMask(self.0 & !other.0)
    }

    pub const fn is_subset(self, other: SetMask) -> bool {
        self.0 & !other.0 == 0
    }

    /// Largest element index present, 0 for the empty set.
    pub const fn max_element(self) -> usize {
        16 - self.0.leading_zeros() as usize
    }

    /// One-based elements in ascending order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (1..=16).filter(move |&e| bits >> (e - 1) & 1 == 1)
    }

    /// Orders sets by size first, then by bits. This is the deletion order of
    /// the size-ordered sequences.
    pub fn size_key(self) -> (u32, u16) {
        (self.len(), self.0)
    }
}

impl fmt::Display for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.elements().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Sets travel through JSON as lists of one-based elements.
impl Serialize for SetMask {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.elements())
    }
}

impl<'de> Deserialize<'de> for SetMask {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let elements = Vec::<usize>::deserialize(deserializer)?;
        SetMask::from_elements(&elements, 16).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elements_are_one_based() {
        let m = SetMask::from_elements(&[1, 3], 3).unwrap();
        assert_eq!(m.bits(), 0b101);
        assert_eq!(m.elements().collect::<Vec<_>>(), vec![1, 3]);
        assert!(m.contains(3) && !m.contains(2));
        assert_eq!(m.to_string(), "{1,3}");
        assert_eq!(m.max_element(), 3);
    }

    #[test]
    fn out_of_range_element() {
        assert_eq!(
            SetMask::from_elements(&[4], 3),
            Err(Error::ElementOutOfRange { element: 4, n: 3 })
        );
        assert_eq!(
            SetMask::from_elements(&[0], 3),
            Err(Error::ElementOutOfRange { element: 0, n: 3 })
        );
        assert_eq!(SetMask::nonempty(&[], 3), Err(Error::EmptySetRejected));
    }

    #[test]
    fn subset_order_respects_numeric_order() {
        let a = SetMask::from_bits(0b0101);
        let b = SetMask::from_bits(0b1101);
        assert!(a.is_subset(b) && a < b);
        assert_eq!(SetMask::full(16).bits(), u16::MAX);
    }

    #[test]
    fn json_form() {
        let m = SetMask::from_bits(0b110);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[2,3]");
        assert_eq!(serde_json::from_str::<SetMask>(&s).unwrap(), m);
    }
}
