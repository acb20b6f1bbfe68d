//! Vertex sets as single machine words.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, BitXor, BitXorAssign, Sub};

/// A set of vertex ids drawn from `0..64`, packed into a single `u64`.
///
/// Word-parallel union/intersection/symmetric-difference plus popcount are
/// the inner loop of every search in this crate, which is why graph order is
/// capped at 64. The derived `Ord` compares raw words, so sorting vertex sets
/// sorts them "ascending as integers".
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);
    pub const MAX_VERTICES: usize = 64;

    #[inline]
    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < Self::MAX_VERTICES);
        VertexSet(1 << v)
    }

    /// The full set `{0, .., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= Self::MAX_VERTICES);
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        debug_assert!(v < Self::MAX_VERTICES);
        self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < Self::MAX_VERTICES);
        self.0 |= 1 << v;
    }

    #[inline]
    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1 << v)
    }

    #[inline]
    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1 << v))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Parity of the cardinality.
    #[inline]
    pub fn len_is_odd(self) -> bool {
        self.0.count_ones() & 1 == 1
    }

    #[inline]
    pub fn is_subset_of(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest vertex id, if any.
    #[inline]
    pub fn min(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Complement inside the ambient set `{0, .., n-1}`.
    #[inline]
    pub fn complement_within(self, n: usize) -> VertexSet {
        VertexSet(!self.0) & VertexSet::full(n)
    }

    pub fn iter(self) -> BitIter {
        BitIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = BitIter;
    fn into_iter(self) -> BitIter {
        self.iter()
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 | rhs.0)
    }
}

impl BitOrAssign for VertexSet {
    fn bitor_assign(&mut self, rhs: VertexSet) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & rhs.0)
    }
}

impl BitAndAssign for VertexSet {
    fn bitand_assign(&mut self, rhs: VertexSet) {
        self.0 &= rhs.0;
    }
}

impl BitXor for VertexSet {
    type Output = VertexSet;
    fn bitxor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 ^ rhs.0)
    }
}

impl BitXorAssign for VertexSet {
    fn bitxor_assign(&mut self, rhs: VertexSet) {
        self.0 ^= rhs.0;
    }
}

/// Set difference.
impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & !rhs.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Iterator over the vertex ids of a set, ascending.
pub struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let v = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(v)
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for BitIter {}

/// Iterates every subset of `universe` in ascending numeric order,
/// starting with the empty set.
///
/// Uses the carry trick `next = (cur - universe) & universe`, which steps
/// through submasks in increasing word value.
pub struct Subsets {
    universe: u64,
    next: u64,
    exhausted: bool,
}

pub fn subsets_of(universe: VertexSet) -> Subsets {
    Subsets {
        universe: universe.bits(),
        next: 0,
        exhausted: false,
    }
}

impl Iterator for Subsets {
    type Item = VertexSet;
    fn next(&mut self) -> Option<VertexSet> {
        if self.exhausted {
            return None;
        }
        let cur = self.next;
        self.next = cur.wrapping_sub(self.universe) & self.universe;
        if self.next == 0 {
            self.exhausted = true;
        }
        Some(VertexSet(cur))
    }
}

/// Lexicographic enumeration of the k-element subsets of `{0, .., n-1}`,
/// compared as sorted tuples: `{0,1,2} < {0,1,3} < .. < {0,2,3} < ..`.
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

pub fn combinations(n: usize, k: usize) -> Combinations {
    Combinations {
        n,
        idx: (0..k).collect(),
        done: k > n,
    }
}

impl Iterator for Combinations {
    type Item = VertexSet;
    fn next(&mut self) -> Option<VertexSet> {
        if self.done {
            return None;
        }
        let out: VertexSet = self.idx.iter().copied().collect();
        let k = self.idx.len();
        if k == 0 {
            self.done = true;
            return Some(out);
        }
        // standard successor: bump the rightmost index that can still grow
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - (k - i) {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_ascending() {
        let u = VertexSet::from_bits(0b101);
        let got: Vec<u64> = subsets_of(u).map(|s| s.bits()).collect();
        assert_eq!(got, vec![0b000, 0b001, 0b100, 0b101]);
    }

    #[test]
    fn subsets_of_empty() {
        let got: Vec<VertexSet> = subsets_of(VertexSet::EMPTY).collect();
        assert_eq!(got, vec![VertexSet::EMPTY]);
    }

    #[test]
    fn combinations_lex_order() {
        let got: Vec<Vec<usize>> = combinations(4, 2).map(|s| s.to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(13, 4).count(), 715);
        assert_eq!(combinations(3, 0).count(), 1);
        assert_eq!(combinations(2, 3).count(), 0);
    }

    #[test]
    fn set_ops() {
        let a: VertexSet = [0, 1, 4].into_iter().collect();
        let b: VertexSet = [1, 2].into_iter().collect();
        assert_eq!((a | b).to_vec(), vec![0, 1, 2, 4]);
        assert_eq!((a & b).to_vec(), vec![1]);
        assert_eq!((a ^ b).to_vec(), vec![0, 2, 4]);
        assert_eq!((a - b).to_vec(), vec![0, 4]);
        assert!(VertexSet::singleton(1).is_subset_of(a));
        assert_eq!(a.complement_within(5).to_vec(), vec![2, 3]);
        assert_eq!(format!("{a}"), "{0,1,4}");
        assert_eq!(VertexSet::full(64).len(), 64);
    }
}
