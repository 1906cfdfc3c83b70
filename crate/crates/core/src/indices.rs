//! Small sets of cover-set indices.
//!
//! A cover of the `d`-simplex has `d + 1` sets and `d` is capped at
//! [`MAX_DIM`](crate::geometry::MAX_DIM), so an index set always fits in a
//! byte. Indices are 0-based throughout the crate; the wire formats of the
//! companion crate shift them to 1-based.

use core::fmt;

/// A set of cover-set indices in `0..=7`, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet(u8);

impl IndexSet {
    /// The empty index set.
    pub const EMPTY: IndexSet = IndexSet(0);

    /// The set `{0, 1, .., count-1}`.
    pub fn full(count: usize) -> Self {
        debug_assert!(count <= 8);
        IndexSet(if count >= 8 { u8::MAX } else { (1u8 << count) - 1 })
    }

    /// The singleton `{index}`.
    pub fn singleton(index: usize) -> Self {
        let mut s = IndexSet::EMPTY;
        s.insert(index);
        s
    }

    pub fn insert(&mut self, index: usize) {
        debug_assert!(index < 8);
        self.0 |= 1 << index;
    }

    pub fn remove(&mut self, index: usize) {
        debug_assert!(index < 8);
        self.0 &= !(1 << index);
    }

    pub fn contains(&self, index: usize) -> bool {
        index < 8 && self.0 & (1 << index) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & other.0)
    }

    /// Iterates the contained indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mask = self.0;
        (0..8).filter(move |i| mask & (1 << i) != 0)
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = IndexSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
