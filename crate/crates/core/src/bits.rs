//! Small helpers for `u64` argument masks.
//!
//! Bit `i` of a mask stands for the `i`-th argument of a framework in
//! lexicographic name order, so comparing masks bit-wise is the same as
//! comparing the sorted member lists.

use std::cmp::Ordering;

pub(crate) type Mask = u64;

pub(crate) const MAX_BITS: usize = 64;

#[inline]
pub(crate) fn bit(i: usize) -> Mask {
    1u64 << i
}

#[inline]
pub(crate) fn full(n: usize) -> Mask {
    if n >= MAX_BITS {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub(crate) fn contains(m: Mask, i: usize) -> bool {
    m & bit(i) != 0
}

#[inline]
pub(crate) fn is_subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

pub(crate) fn iter(m: Mask) -> BitIter {
    BitIter(m)
}

pub(crate) struct BitIter(Mask);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let i = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(i)
        }
    }
}

/// Cardinality first, then lexicographic order of the member lists.
pub(crate) fn canonical_cmp(a: Mask, b: Mask) -> Ordering {
    a.count_ones().cmp(&b.count_ones()).then_with(|| lex_cmp(a, b))
}

/// Lexicographic order of sorted member lists for masks of equal size.
///
/// The set holding the lowest differing element sorts first.
pub(crate) fn lex_cmp(a: Mask, b: Mask) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        return Ordering::Equal;
    }
    let low = diff & diff.wrapping_neg();
    if a & low != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}
