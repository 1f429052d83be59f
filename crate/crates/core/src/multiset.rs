//! Prefix/suffix composition multisets and mixtures of them.

use crate::bits::{BinaryString, Composition};
use crate::error::{Error, Result};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;

/// Multiset of compositions, iterated by ascending length then ones.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CompositionMultiset {
    entries: BTreeMap<Composition, usize>,
}

impl CompositionMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, c: Composition) {
        self.insert_many(c, 1);
    }

    pub fn insert_many(&mut self, c: Composition, count: usize) {
        if count > 0 {
            *self.entries.entry(c).or_insert(0) += count;
        }
    }

    /// Removes one copy; returns false when `c` was absent.
    pub fn remove(&mut self, c: Composition) -> bool {
        match self.entries.get_mut(&c) {
            Some(m) if *m > 1 => {
                *m -= 1;
                true
            }
            Some(_) => {
                self.entries.remove(&c);
                true
            }
            None => false,
        }
    }

    pub fn multiplicity(&self, c: Composition) -> usize {
        self.entries.get(&c).copied().unwrap_or(0)
    }

    /// Total number of entries, counting multiplicity.
    pub fn len(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct compositions with their multiplicities, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (Composition, usize)> + '_ {
        self.entries.iter().map(|(&c, &m)| (c, m))
    }

    /// Every entry repeated by multiplicity, in canonical order.
    pub fn iter_flat(&self) -> impl Iterator<Item = Composition> + '_ {
        self.iter().flat_map(|(c, m)| core::iter::repeat_n(c, m))
    }

    /// Entries of one substring length.
    pub fn of_length(&self, len: usize) -> impl Iterator<Item = (Composition, usize)> + '_ {
        let lo = Composition::with_len(len.max(1), 0).expect("ones <= len");
        let hi = Composition::with_len(len.max(1), len.max(1)).expect("ones <= len");
        self.entries
            .range(lo..=hi)
            .filter(move |(c, _)| c.len() == len)
            .map(|(&c, &m)| (c, m))
    }

    pub fn count_of_length(&self, len: usize) -> usize {
        self.of_length(len).map(|(_, m)| m).sum()
    }

    pub fn max_len(&self) -> usize {
        self.entries.keys().next_back().map_or(0, |c| c.len())
    }

    pub fn union(&self, other: &CompositionMultiset) -> CompositionMultiset {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    pub fn extend_from(&mut self, other: &CompositionMultiset) {
        for (c, m) in other.iter() {
            self.insert_many(c, m);
        }
    }
}

impl FromIterator<Composition> for CompositionMultiset {
    fn from_iter<I: IntoIterator<Item = Composition>>(iter: I) -> Self {
        let mut out = CompositionMultiset::new();
        for c in iter {
            out.insert(c);
        }
        out
    }
}

pub fn prefix_multiset(s: &BinaryString) -> Result<CompositionMultiset> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut ones = 0;
    let mut out = CompositionMultiset::new();
    for (i, &b) in s.bits().iter().enumerate() {
        ones += b as usize;
        out.insert(Composition::with_len(i + 1, ones)?);
    }
    Ok(out)
}

/// Suffixes of every length `1..=n`; the whole string counts as a suffix.
pub fn suffix_multiset(s: &BinaryString) -> Result<CompositionMultiset> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut ones = 0;
    let mut out = CompositionMultiset::new();
    for (i, &b) in s.bits().iter().rev().enumerate() {
        ones += b as usize;
        out.insert(Composition::with_len(i + 1, ones)?);
    }
    Ok(out)
}

pub fn full_multiset(s: &BinaryString) -> Result<CompositionMultiset> {
    Ok(prefix_multiset(s)?.union(&suffix_multiset(s)?))
}

/// The readout of a mixture: the union of the full multisets of its strings.
///
/// Construction checks only that every composition fits the codeword length;
/// the per-length count structure is checked by [`separate_prefixes`], so
/// that a damaged readout can still be loaded and diagnosed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MixtureDocument {
    n_total: usize,
    hmax: usize,
    entries: CompositionMultiset,
}

impl MixtureDocument {
    pub fn new(n_total: usize, hmax: usize, entries: CompositionMultiset) -> Result<Self> {
        if n_total == 0 {
            return Err(Error::InvalidParameter("codeword length must be positive".into()));
        }
        if hmax == 0 {
            return Err(Error::InvalidParameter("hmax must be at least 1".into()));
        }
        if entries.max_len() > n_total {
            return Err(Error::MalformedMixture(format!(
                "composition of length {} exceeds codeword length {n_total}",
                entries.max_len()
            )));
        }
        Ok(MixtureDocument {
            n_total,
            hmax,
            entries,
        })
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn hmax(&self) -> usize {
        self.hmax
    }

    pub fn entries(&self) -> &CompositionMultiset {
        &self.entries
    }
}

/// Multiset union of `full_multiset` over a set of equal-length strings.
pub fn mix(collection: &[BinaryString], hmax: usize) -> Result<MixtureDocument> {
    let first = collection.first().ok_or(Error::EmptyInput)?;
    if collection.len() > hmax {
        return Err(Error::TooManyStrings {
            count: collection.len(),
            hmax,
        });
    }
    if let Some(s) = collection.iter().find(|s| s.len() != first.len()) {
        return Err(Error::LengthMismatch {
            expected: first.len(),
            found: s.len(),
        });
    }
    if collection.iter().collect::<BTreeSet<_>>().len() != collection.len() {
        return Err(Error::NotASet);
    }
    let mut entries = CompositionMultiset::new();
    for s in collection {
        entries.extend_from(&full_multiset(s)?);
    }
    MixtureDocument::new(first.len(), hmax, entries)
}

/// Prefix and suffix halves of a Dyck mixture.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Separated {
    pub prefixes: CompositionMultiset,
    pub suffixes: CompositionMultiset,
    pub h_bar: usize,
}

/// Splits a mixture of Dyck paths into its prefix and suffix multisets.
///
/// A proper prefix of a Dyck path holds strictly more ones than zeros and a
/// proper suffix strictly fewer, so each length `i < N` splits by comparing
/// `ones` with `i/2`. The length-`N` entries are all `0^{N/2}1^{N/2}` and go
/// half to each side. The mixture size is inferred from the length-1 count.
pub fn separate_prefixes(doc: &MixtureDocument) -> Result<Separated> {
    let big_n = doc.n_total();
    let entries = doc.entries();
    let first = entries.count_of_length(1);
    if first == 0 || first % 2 == 1 {
        return Err(Error::MalformedMixture(format!(
            "{first} compositions of length 1; expected a positive even count"
        )));
    }
    let h_bar = first / 2;
    if h_bar > doc.hmax() {
        return Err(Error::MalformedMixture(format!(
            "mixture holds {h_bar} strings, more than hmax = {}",
            doc.hmax()
        )));
    }

    let mut prefixes = CompositionMultiset::new();
    let mut suffixes = CompositionMultiset::new();
    for len in 1..=big_n {
        let (mut pre, mut suf) = (0, 0);
        for (c, m) in entries.of_length(len) {
            let twice_ones = 2 * c.ones() as usize;
            if len == big_n {
                if twice_ones != big_n {
                    return Err(Error::NotDyckMixture { len });
                }
                let half = h_bar.min(m);
                prefixes.insert_many(c, half);
                suffixes.insert_many(c, m - half);
                pre += half;
                suf += m - half;
            } else if twice_ones > len {
                prefixes.insert_many(c, m);
                pre += m;
            } else if twice_ones < len {
                suffixes.insert_many(c, m);
                suf += m;
            } else {
                return Err(Error::NotDyckMixture { len });
            }
        }
        if pre < h_bar {
            return Err(Error::IncompletePrefix {
                len,
                found: pre,
                expected: h_bar,
            });
        }
        if pre != h_bar || suf != h_bar {
            return Err(Error::MalformedMixture(format!(
                "length {len}: {pre} prefix and {suf} suffix compositions, expected {h_bar} each"
            )));
        }
    }
    Ok(Separated {
        prefixes,
        suffixes,
        h_bar,
    })
}
