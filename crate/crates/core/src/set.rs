//! Fixed-width bit sets over a dense universe `0..n`.

use std::cmp::Ordering;
use std::fmt;

use smallvec::{smallvec, SmallVec};

/// Dense element id. Ids follow the construction order of the universe.
pub type ElementId = usize;

const WORD: usize = 64;

/// A subset of a universe `0..n`, stored as a bit vector.
///
/// Two sets compare equal only if they belong to universes of the same size.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    universe: usize,
    words: SmallVec<[u64; 2]>,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        let len = universe.div_ceil(WORD).max(1);
        ElementSet {
            universe,
            words: smallvec![0; len],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * WORD;
            let hi = (lo + WORD).min(universe);
            if hi > lo {
                let bits = hi - lo;
                *w = if bits == WORD { u64::MAX } else { (1u64 << bits) - 1 };
            }
        }
        s
    }

    pub fn singleton(universe: usize, x: ElementId) -> Self {
        let mut s = Self::empty(universe);
        s.insert(x);
        s
    }

    pub fn from_ids<I: IntoIterator<Item = ElementId>>(universe: usize, ids: I) -> Self {
        let mut s = Self::empty(universe);
        for x in ids {
            s.insert(x);
        }
        s
    }

    /// Builds a set from the low `universe` bits of `mask`. Requires `universe <= 64`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= WORD, "mask conversion needs a universe of at most 64");
        let keep = if universe == WORD { u64::MAX } else { (1u64 << universe) - 1 };
        let mut s = Self::empty(universe);
        s.words[0] = mask & keep;
        s
    }

    /// The set as a single word. Requires `universe <= 64`.
    pub fn to_mask(&self) -> u64 {
        assert!(self.universe <= WORD, "mask conversion needs a universe of at most 64");
        self.words[0]
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, x: ElementId) -> bool {
        x < self.universe && self.words[x / WORD] >> (x % WORD) & 1 == 1
    }

    pub fn insert(&mut self, x: ElementId) -> bool {
        assert!(x < self.universe, "element {x} outside universe of size {}", self.universe);
        let w = &mut self.words[x / WORD];
        let bit = 1u64 << (x % WORD);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub fn remove(&mut self, x: ElementId) -> bool {
        if x >= self.universe {
            return false;
        }
        let w = &mut self.words[x / WORD];
        let bit = 1u64 << (x % WORD);
        let had = *w & bit != 0;
        *w &= !bit;
        had
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    /// Members in ascending id order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words[0],
        }
    }

    pub fn first(&self) -> Option<ElementId> {
        self.iter().next()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!(self.universe, other.universe, "universe mismatch");
        ElementSet {
            universe: self.universe,
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        Self::full(self.universe).difference(self)
    }

    pub fn union_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= b;
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &Self) -> bool {
        other.is_subset(self)
    }

    pub fn is_proper_subset(&self, other: &Self) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .any(|(&a, &b)| a & b != 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        !self.intersects(other)
    }

    /// Lexicographic order on the ascending member sequences; a proper prefix sorts first.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }

    /// Cardinality first, then [`lex_cmp`](Self::lex_cmp). This is the order families are listed in.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.lex_cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = ElementId;

    fn next(&mut self) -> Option<ElementId> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = ElementId;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// Bits of a single-word mask in ascending order.
pub(crate) fn mask_bits(mut mask: u64) -> impl Iterator<Item = ElementId> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= WORD {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = ElementSet::from_ids(5, [0, 2]);
        let b = ElementSet::from_ids(5, [2, 3]);
        assert_eq!(a.union(&b), ElementSet::from_ids(5, [0, 2, 3]));
        assert_eq!(a.intersection(&b), ElementSet::singleton(5, 2));
        assert_eq!(a.difference(&b), ElementSet::singleton(5, 0));
        assert_eq!(a.complement(), ElementSet::from_ids(5, [1, 3, 4]));
        assert!(ElementSet::empty(5).is_subset(&a));
        assert!(!a.is_subset(&b));
        assert_eq!(ElementSet::full(5).len(), 5);
    }

    #[test]
    fn wide_universe() {
        let mut s = ElementSet::empty(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(ElementSet::full(130).len(), 130);
        assert_eq!(s.complement().len(), 127);
    }

    #[test]
    fn lexicographic_order() {
        let abc = ElementSet::from_ids(5, [0, 1, 2]);
        let abf = ElementSet::from_ids(5, [0, 1, 4]);
        assert_eq!(abc.lex_cmp(&abf), Ordering::Less);
        let a = ElementSet::singleton(5, 0);
        assert_eq!(a.lex_cmp(&abc), Ordering::Less);
        assert_eq!(a.canonical_cmp(&ElementSet::empty(5)), Ordering::Greater);
    }

    #[test]
    fn masks_round_trip() {
        let s = ElementSet::from_mask(6, 0b101101);
        assert_eq!(s.to_mask(), 0b101101);
        assert_eq!(mask_bits(0b101101).collect::<Vec<_>>(), vec![0, 2, 3, 5]);
    }
}
