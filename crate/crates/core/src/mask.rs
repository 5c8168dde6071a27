//! Coordinate index sets stored as word-packed bitsets.

use smallvec::SmallVec;
use std::fmt;

const WORD: usize = 64;

/// A subset of the coordinate indices `0..d`.
///
/// Indices are zero-based. Up to 128 coordinates are stored inline.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    words: SmallVec<[u64; 2]>,
    dim: usize,
}

impl IndexSet {
    pub fn empty(dim: usize) -> Self {
        IndexSet {
            words: SmallVec::from_elem(0, dim.div_ceil(WORD)),
            dim,
        }
    }

    pub fn full(dim: usize) -> Self {
        let mut s = Self::empty(dim);
        for (w, word) in s.words.iter_mut().enumerate() {
            let lo = w * WORD;
            let bits = (dim - lo).min(WORD);
            *word = if bits == WORD { u64::MAX } else { (1u64 << bits) - 1 };
        }
        s
    }

    /// Panics if an index is out of range.
    pub fn from_indices(dim: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(dim);
        for i in indices {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.dim && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.dim, "index {i} out of range for dimension {}", self.dim);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.dim {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    /// Number of indices in the set.
    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.len() == self.dim
    }

    #[inline]
    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    #[inline]
    pub fn intersects(&self, other: &IndexSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        self.zip_with(other, |a, b| a & !b)
    }

    /// Indices of `[d]` not in the set.
    pub fn complement(&self) -> IndexSet {
        IndexSet::full(self.dim).difference(self)
    }

    fn zip_with(&self, other: &IndexSet, f: impl Fn(u64, u64) -> u64) -> IndexSet {
        debug_assert_eq!(self.dim, other.dim);
        IndexSet {
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
            dim: self.dim,
        }
    }

    /// Ascending iterator over the members.
    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            word_index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Ascending members of `self ∩ a ∩ b`, without allocating.
    #[inline]
    pub(crate) fn for_each_common(a: &IndexSet, b: &IndexSet, c: &IndexSet, mut f: impl FnMut(usize)) {
        for (w, ((x, y), z)) in a.words.iter().zip(&b.words).zip(&c.words).enumerate() {
            let mut bits = x & y & z;
            while bits != 0 {
                let tz = bits.trailing_zeros() as usize;
                f(w * WORD + tz);
                bits &= bits - 1;
            }
        }
    }

    #[inline]
    pub(crate) fn for_each_common2(a: &IndexSet, b: &IndexSet, mut f: impl FnMut(usize)) {
        for (w, (x, y)) in a.words.iter().zip(&b.words).enumerate() {
            let mut bits = x & y;
            while bits != 0 {
                let tz = bits.trailing_zeros() as usize;
                f(w * WORD + tz);
                bits &= bits - 1;
            }
        }
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    word_index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let tz = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_index * WORD + tz);
            }
            self.word_index += 1;
            self.current = *self.words.get(self.word_index)?;
        }
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_empty() {
        for dim in [0, 1, 5, 63, 64, 65, 130] {
            assert_eq!(IndexSet::full(dim).len(), dim);
            assert!(IndexSet::empty(dim).is_empty());
            assert!(IndexSet::empty(dim).is_subset(&IndexSet::full(dim)));
        }
    }

    #[test]
    fn set_algebra() {
        let a = IndexSet::from_indices(70, [0, 3, 66]);
        let b = IndexSet::from_indices(70, [3, 66, 69]);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![3, 66]);
        assert_eq!(a.union(&b).len(), 4);
        assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), vec![0]);
        assert!(a.intersects(&b));
        assert!(!a.is_subset(&b));
        assert!(a.intersection(&b).is_subset(&a));
        assert_eq!(a.complement().len(), 67);
        assert!(!a.complement().contains(66));
    }

    #[test]
    fn insert_remove() {
        let mut s = IndexSet::empty(10);
        s.insert(9);
        s.insert(2);
        assert!(s.contains(9) && s.contains(2) && !s.contains(3));
        s.remove(9);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![2]);
        assert!(!s.contains(100));
    }
}
