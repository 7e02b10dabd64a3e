//! Dense vertex sets over `0..n`, stored as little-endian 64-bit words.

use std::fmt;

use smallvec::SmallVec;

type Words = SmallVec<[u64; 2]>;

/// A set of vertices of a graph with `n` vertices.
///
/// All sets that take part in one binary operation must share the same `n`;
/// this is checked in debug builds only.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    n: usize,
    words: Words,
}

#[inline]
fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        Self { n, words: smallvec::smallvec![0; word_count(n)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            let hi = (lo + 64).min(n);
            *w = if hi - lo == 64 { u64::MAX } else { (1u64 << (hi - lo)) - 1 };
        }
        s
    }

    /// Builds a set from vertex indices. Panics if a vertex is out of range.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(n: usize, vertices: I) -> Self {
        let mut s = Self::empty(n);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    /// Builds a set on at most 64 vertices from a raw mask.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= 64, "from_mask needs n <= 64");
        let mut s = Self::empty(n);
        if n > 0 {
            s.words[0] = mask;
            s.trim();
        }
        s
    }

    /// The low word; exact for `n <= 64`.
    pub fn low_mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        let rem = self.n % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Size of the ground set.
    #[inline]
    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.n, "vertex {v} out of range 0..{}", self.n);
        let was = self.contains(v);
        self.words[v / 64] |= 1u64 << (v % 64);
        !was
    }

    #[inline]
    pub fn remove(&mut self, v: usize) -> bool {
        let was = self.contains(v);
        if was {
            self.words[v / 64] &= !(1u64 << (v % 64));
        }
        was
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    /// `self ∖ other` has exactly the returned number of elements.
    pub fn difference_len(&self, other: &Self) -> usize {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).map(|(a, b)| (a & !b).count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &Self) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> Self {
        Self::full(self.n).difference(self)
    }

    /// Smallest element, if any.
    pub fn first(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Elements in increasing order.
    pub fn iter(&self) -> Iter<'_> {
        Iter { words: &self.words, idx: 0, cur: self.words.first().copied().unwrap_or(0) }
    }

    /// Elements of `self ∩ other` in increasing order, without allocating.
    pub fn iter_intersection<'a>(&'a self, other: &'a Self) -> impl Iterator<Item = usize> + 'a {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(other.words.iter()).enumerate().flat_map(|(i, (&a, &b))| {
            let mut w = a & b;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + tz)
            })
        })
    }

    /// Whether `self ∖ other` is nonempty.
    pub fn has_outside(&self, other: &Self) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).any(|(a, b)| a & !b != 0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + tz);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
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

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_trims_last_word() {
        for n in [0, 1, 63, 64, 65, 130] {
            let s = VertexSet::full(n);
            assert_eq!(s.len(), n);
            assert!(s.complement().is_empty());
        }
    }

    #[test]
    fn multiword_insert_and_iterate() {
        let s = VertexSet::from_vertices(200, [0, 63, 64, 128, 199]);
        assert_eq!(s.to_vec(), vec![0, 63, 64, 128, 199]);
        assert_eq!(s.first(), Some(0));
        assert!(s.contains(128) && !s.contains(127));
    }

    proptest! {
        #[test]
        fn set_algebra_matches_vec_model(
            n in 1usize..150,
            a in proptest::collection::vec(0usize..150, 0..40),
            b in proptest::collection::vec(0usize..150, 0..40),
        ) {
            let a: Vec<usize> = a.into_iter().filter(|&v| v < n).collect();
            let b: Vec<usize> = b.into_iter().filter(|&v| v < n).collect();
            let sa = VertexSet::from_vertices(n, a.iter().copied());
            let sb = VertexSet::from_vertices(n, b.iter().copied());
            let inter: Vec<usize> = (0..n).filter(|v| a.contains(v) && b.contains(v)).collect();
            let diff: Vec<usize> = (0..n).filter(|v| a.contains(v) && !b.contains(v)).collect();
            prop_assert_eq!(sa.intersection(&sb).to_vec(), inter.clone());
            prop_assert_eq!(sa.intersection_len(&sb), inter.len());
            prop_assert_eq!(sa.iter_intersection(&sb).collect::<Vec<_>>(), inter.clone());
            prop_assert_eq!(sa.difference(&sb).to_vec(), diff.clone());
            prop_assert_eq!(sa.difference_len(&sb), diff.len());
            prop_assert_eq!(sa.is_subset(&sb), diff.is_empty());
            prop_assert_eq!(sa.union(&sb).len() + inter.len(), sa.len() + sb.len());
        }
    }
}
