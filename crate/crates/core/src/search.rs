//! Instance supply: exhaustive enumeration of union-closed families for
//! small universes, and seeded sampling for larger ones.
//!
//! Families are enumerated in ascending order of their membership code
//! (bit `b - 1` set iff the set with bits `b` is a member). The walk decides
//! sets from the largest mask down; including a set is legal exactly when
//! its union with every set already included is itself included, so every
//! leaf is a union-closed family and no branch is a dead end.
//!
//! Sampling draws generator sets from SplitMix64 (state initialised to the
//! seed, the reference `splitmix64.c` update) by masking each 64-bit output
//! to its low `n` bits and rejecting zero, then returns the union closure.
//! The resulting distribution over families is not uniform.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{check_universe, Error, Result};
use crate::family::Family;
use crate::mask::SetMask;
use crate::par::map_ordered;

/// Largest `n` enumerated without an explicit opt-in.
pub const STANDARD_LIMIT: usize = 4;
/// Largest `n` enumerated at all.
pub const LONG_RUN_LIMIT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnumerationLimit {
    #[default]
    Standard,
    /// Also allows `n = 5` (1,385,551 families).
    LongRun,
}

impl EnumerationLimit {
    fn max(self) -> usize {
        match self {
            EnumerationLimit::Standard => STANDARD_LIMIT,
            EnumerationLimit::LongRun => LONG_RUN_LIMIT,
        }
    }

    pub fn check(self, n: usize) -> Result<()> {
        check_universe(n)?;
        if n > self.max() {
            return Err(Error::EnumerationTooLarge { n, max: self.max() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    /// Number of masks already decided, from the top.
    depth: u32,
    code: u64,
}

/// Resumable depth-first walk over union-closed subfamilies of `A`.
///
/// Yields each nonempty union-closed family exactly once, in ascending
/// code order.
#[derive(Debug, Clone)]
pub struct EnumerationCursor {
    n: usize,
    total: u32,
    stack: Vec<Frame>,
    /// Stop descending at this depth and emit partial frames instead.
    cut: u32,
    emitted: u64,
}

impl EnumerationCursor {
    fn from_frame(n: usize, frame: Frame, cut: Option<u32>) -> Self {
        let total = (1u32 << n) - 1;
        EnumerationCursor {
            n,
            total,
            stack: vec![frame],
            cut: cut.unwrap_or(total),
            emitted: 0,
        }
    }

    pub fn universe_size(&self) -> usize {
        self.n
    }

    /// Families yielded so far.
    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    fn can_include(code: u64, mask: u32) -> bool {
        let mut rest = code;
        while rest != 0 {
            let k = rest.trailing_zeros();
            rest &= rest - 1;
            let y = k + 1;
            if code >> ((y | mask) - 1) & 1 == 0 {
                return false;
            }
        }
        true
    }

    /// Next frame at the cut depth, i.e. the next family code when the cut
    /// is the full depth. Includes the empty family.
    fn next_frame(&mut self) -> Option<Frame> {
        while let Some(frame) = self.stack.pop() {
            if frame.depth == self.cut {
                return Some(frame);
            }
            let mask = self.total - frame.depth;
            let depth = frame.depth + 1;
            if Self::can_include(frame.code, mask) {
                self.stack.push(Frame {
                    depth,
                    code: frame.code | 1 << (mask - 1),
                });
            }
            // Popped first: exclusion before inclusion keeps codes ascending.
            self.stack.push(Frame {
                depth,
                code: frame.code,
            });
        }
        None
    }

    /// Next nonempty family code.
    pub fn next_code(&mut self) -> Option<u64> {
        loop {
            let frame = self.next_frame()?;
            if frame.code != 0 {
                self.emitted += 1;
                return Some(frame.code);
            }
        }
    }
}

impl Iterator for EnumerationCursor {
    type Item = Family;

    fn next(&mut self) -> Option<Family> {
        let code = self.next_code()?;
        Some(Family::from_code(self.n, code).expect("code within universe"))
    }
}

/// Every nonempty union-closed subfamily of `A`, `1 <= n <= 4`.
pub fn enumerate_union_closed(n: usize) -> Result<EnumerationCursor> {
    enumerate_union_closed_with(n, EnumerationLimit::Standard)
}

pub fn enumerate_union_closed_with(n: usize, limit: EnumerationLimit) -> Result<EnumerationCursor> {
    limit.check(n)?;
    Ok(EnumerationCursor::from_frame(
        n,
        Frame { depth: 0, code: 0 },
        None,
    ))
}

/// Number of decisions fixed before the walk splits into parallel parts.
fn split_depth(n: usize) -> u32 {
    ((1u32 << n) - 1).min(8)
}

/// Enumeration codes computed on `jobs` workers: the first decisions are
/// fixed to split the walk into independent parts, which are concatenated
/// back in order. Output equals the sequential cursor's.
pub fn enumerate_codes(n: usize, limit: EnumerationLimit, jobs: usize) -> Result<Vec<u64>> {
    limit.check(n)?;
    let cut = split_depth(n);
    let mut splitter = EnumerationCursor::from_frame(n, Frame { depth: 0, code: 0 }, Some(cut));
    let mut prefixes = Vec::new();
    while let Some(frame) = splitter.next_frame() {
        prefixes.push(frame);
    }
    let parts = map_ordered(&prefixes, jobs, |&frame| {
        let mut cursor = EnumerationCursor::from_frame(n, frame, None);
        let mut codes = Vec::new();
        while let Some(code) = cursor.next_code() {
            codes.push(code);
        }
        codes
    });
    Ok(parts.concat())
}

/// Families in enumeration order, computed on `jobs` workers.
pub fn enumerate_parallel(n: usize, limit: EnumerationLimit, jobs: usize) -> Result<Vec<Family>> {
    let codes = enumerate_codes(n, limit, jobs)?;
    Ok(codes
        .into_iter()
        .map(|c| Family::from_code(n, c).expect("code within universe"))
        .collect())
}

pub fn count_union_closed(n: usize) -> Result<u64> {
    count_union_closed_with(n, EnumerationLimit::Standard)
}

pub fn count_union_closed_with(n: usize, limit: EnumerationLimit) -> Result<u64> {
    let mut cursor = enumerate_union_closed_with(n, limit)?;
    while cursor.next_code().is_some() {}
    Ok(cursor.emitted())
}

/// Every nonempty subfamily of `A`, union-closed or not, in code order.
/// Needs `n <= 3` (127 families at `n = 3`).
pub fn all_families(n: usize) -> Result<impl Iterator<Item = Family>> {
    check_universe(n)?;
    if n > 3 {
        return Err(Error::EnumerationTooLarge { n, max: 3 });
    }
    let count = 1u64 << ((1u32 << n) - 1);
    Ok((1..count).map(move |code| Family::from_code(n, code).expect("code within universe")))
}

/// `count` generator sets drawn uniformly from the nonempty subsets of `[n]`.
pub fn generators(n: usize, count: usize, seed: u64) -> Result<Vec<SetMask>> {
    check_universe(n)?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let low = (1u64 << n) - 1;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let bits = rng.next_u64() & low;
        if bits != 0 {
            out.push(SetMask::from_bits(bits as u16));
        }
    }
    Ok(out)
}

/// Union closure of `count` seeded random generators.
pub fn sample_union_closed(n: usize, count: usize, seed: u64) -> Result<Family> {
    Ok(sample_family(n, count, seed)?.union_closure())
}

/// The seeded generators themselves, as an arbitrary (usually not
/// union-closed) family.
pub fn sample_family(n: usize, count: usize, seed: u64) -> Result<Family> {
    Family::from_masks(n, generators(n, count, seed)?)
}
