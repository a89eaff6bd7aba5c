use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

#[inline]
pub(crate) fn popcount_and(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

#[inline]
pub(crate) fn popcount(a: &[u64]) -> usize {
    a.iter().map(|x| x.count_ones() as usize).sum()
}

/// Iterates the set bits of a word slice in increasing order.
pub(crate) struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> Ones<'a> {
    pub(crate) fn new(words: &'a [u64]) -> Self {
        let cur = words.first().copied().unwrap_or(0);
        Self { words, idx: 0, cur }
    }
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + tz);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// A subset of the vertex universe `[0, n)`, stored as a bitset.
///
/// Bits at positions `>= n` are always clear.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    bits: Vec<u64>,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            bits: vec![0; words_for(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self {
            n,
            bits: vec![u64::MAX; words_for(n)],
        };
        s.trim();
        s
    }

    /// Builds a set from vertex ids; ids `>= n` are rejected.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(n: usize, it: I) -> crate::Result<Self> {
        let mut s = Self::new(n);
        for v in it {
            if v >= n {
                return Err(crate::Error::InvalidParameter(format!(
                    "vertex {v} outside universe of size {n}"
                )));
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub(crate) fn from_words(n: usize, bits: Vec<u64>) -> Self {
        debug_assert_eq!(bits.len(), words_for(n));
        let mut s = Self { n, bits };
        s.trim();
        s
    }

    fn trim(&mut self) {
        let rem = self.n % WORD;
        if rem != 0 {
            if let Some(last) = self.bits.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Size of the universe, not of the set.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        popcount(&self.bits)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && (self.bits[v / WORD] >> (v % WORD)) & 1 == 1
    }

    /// # Panics
    /// Panics if `v` is outside the universe.
    #[inline]
    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex {v} outside universe of size {}", self.n);
        self.bits[v / WORD] |= 1u64 << (v % WORD);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        if v < self.n {
            self.bits[v / WORD] &= !(1u64 << (v % WORD));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        Ones::new(&self.bits)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.bits
    }

    fn check_universe(&self, other: &Self) {
        assert_eq!(self.n, other.n, "vertex sets over different universes");
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.check_universe(other);
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        Self { n: self.n, bits }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.check_universe(other);
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect();
        Self { n: self.n, bits }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.check_universe(other);
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & !b).collect();
        Self { n: self.n, bits }
    }

    pub fn complement(&self) -> Self {
        let mut s = Self {
            n: self.n,
            bits: self.bits.iter().map(|w| !w).collect(),
        };
        s.trim();
        s
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.check_universe(other);
        popcount_and(&self.bits, &other.bits)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & b == 0)
    }

    /// Maps the members through `map` into a universe of size `n`.
    pub fn map_into(&self, n: usize, map: &[usize]) -> Self {
        let mut out = Self::new(n);
        for v in self.iter() {
            out.insert(map[v]);
        }
        out
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct VertexSetRepr {
    n: usize,
    vertices: Vec<usize>,
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        VertexSetRepr {
            n: self.n,
            vertices: self.to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = VertexSetRepr::deserialize(d)?;
        VertexSet::from_vertices(repr.n, repr.vertices).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_set_has_no_stray_bits() {
        for n in [0, 1, 63, 64, 65, 130] {
            let s = VertexSet::full(n);
            assert_eq!(s.len(), n);
            assert_eq!(s.complement().len(), 0);
        }
    }

    #[test]
    fn set_algebra() {
        let a = VertexSet::from_vertices(100, [1, 5, 70, 99]).unwrap();
        let b = VertexSet::from_vertices(100, [5, 70, 3]).unwrap();
        assert_eq!(a.intersection(&b).to_vec(), vec![5, 70]);
        assert_eq!(a.union(&b).len(), 5);
        assert_eq!(a.difference(&b).to_vec(), vec![1, 99]);
        assert_eq!(a.intersection_len(&b), 2);
        assert!(a.intersection(&b).is_subset(&a));
        assert!(!a.is_disjoint(&b));
        assert_eq!(a.complement().len(), 96);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(VertexSet::from_vertices(4, [4]).is_err());
    }

    #[test]
    fn serde_roundtrip() {
        let a = VertexSet::from_vertices(10, [0, 9, 4]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"n":10,"vertices":[0,4,9]}"#);
        let b: VertexSet = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
