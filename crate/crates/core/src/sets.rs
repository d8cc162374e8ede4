//! Bit-indexed sets over point/hyperplane indices, and intersection spectra.

use std::collections::BTreeMap;

use serde::ser::{Serialize, SerializeSeq, Serializer};

/// A fixed-universe bitset; the workhorse of the counting kernels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseBitSet {
    universe: usize,
    words: Vec<u64>,
}

impl DenseBitSet {
    pub fn new(universe: usize) -> DenseBitSet {
        DenseBitSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, iter: I) -> DenseBitSet {
        let mut set = DenseBitSet::new(universe);
        for i in iter {
            set.insert(i);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.universe);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.universe);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// |self ∩ other| without materializing the intersection.
    pub fn intersection_len(&self, other: &DenseBitSet) -> usize {
        debug_assert_eq!(self.universe, other.universe);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// |self ∩ words|, where `words` is a raw row of the same width.
    pub fn intersection_len_words(&self, words: &[u64]) -> usize {
        debug_assert_eq!(self.words.len(), words.len());
        self.words
            .iter()
            .zip(words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn union_with(&mut self, other: &DenseBitSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &DenseBitSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Indices of set bits, ascending.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + tz)
                }
            })
        })
    }
}

macro_rules! index_set {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq)]
        pub struct $name {
            bits: DenseBitSet,
        }

        impl $name {
            pub fn new(universe: usize) -> $name {
                $name { bits: DenseBitSet::new(universe) }
            }

            pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, iter: I) -> $name {
                $name { bits: DenseBitSet::from_indices(universe, iter) }
            }

            pub fn from_bits(bits: DenseBitSet) -> $name {
                $name { bits }
            }

            pub fn universe(&self) -> usize {
                self.bits.universe()
            }

            pub fn len(&self) -> usize {
                self.bits.len()
            }

            pub fn is_empty(&self) -> bool {
                self.bits.is_empty()
            }

            pub fn contains(&self, i: usize) -> bool {
                self.bits.contains(i)
            }

            pub fn insert(&mut self, i: usize) {
                self.bits.insert(i)
            }

            pub fn remove(&mut self, i: usize) {
                self.bits.remove(i)
            }

            pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
                self.bits.iter()
            }

            pub fn bits(&self) -> &DenseBitSet {
                &self.bits
            }
        }
    };
}

index_set! {
    /// A set of projective points, stored by point index.
    PointSet
}

index_set! {
    /// A family of hyperplanes, stored by hyperplane index.
    HyperplaneFamily
}

/// Multiset of counts: maps an observed size to its multiplicity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpectrumReport {
    counts: BTreeMap<u64, u64>,
    total: u64,
}

impl SpectrumReport {
    pub fn new() -> SpectrumReport {
        SpectrumReport::default()
    }

    pub fn record(&mut self, size: u64) {
        *self.counts.entry(size).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn record_many(&mut self, size: u64, multiplicity: u64) {
        if multiplicity > 0 {
            *self.counts.entry(size).or_insert(0) += multiplicity;
            self.total += multiplicity;
        }
    }

    /// Number of objects scanned.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn multiplicity(&self, size: u64) -> u64 {
        self.counts.get(&size).copied().unwrap_or(0)
    }

    /// Observed sizes, ascending.
    pub fn support(&self) -> Vec<u64> {
        self.counts.keys().copied().collect()
    }

    pub fn support_within(&self, allowed: &[u64]) -> bool {
        self.counts.keys().all(|size| allowed.contains(size))
    }

    /// (size, multiplicity) pairs sorted by size.
    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&s, &m)| (s, m))
    }
}

impl FromIterator<(u64, u64)> for SpectrumReport {
    fn from_iter<T: IntoIterator<Item = (u64, u64)>>(iter: T) -> SpectrumReport {
        let mut report = SpectrumReport::new();
        for (size, mult) in iter {
            report.record_many(size, mult);
        }
        report
    }
}

impl Serialize for SpectrumReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.counts.len()))?;
        for pair in self.counts.iter() {
            seq.serialize_element(&pair)?;
        }
        seq.end()
    }
}
