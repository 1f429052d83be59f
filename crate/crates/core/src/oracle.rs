//! Brute-force ground truth: confusability of string sets, the h-MC
//! property, and exhaustive search for maximum h-MC codes at tiny lengths.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::bits::BinaryString;
use crate::error::{Error, Result};
use crate::multiset::{full_multiset, prefix_multiset, CompositionMultiset};
use crate::sidon::{for_each_combination, guard};

/// Cap on the subsets [`is_h_mc_code`] enumerates.
pub const MC_LIMIT: u128 = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Flavor {
    /// Prefix and suffix compositions.
    Full,
    PrefixOnly,
}

impl Flavor {
    fn readout(self, s: &BinaryString) -> Result<CompositionMultiset> {
        match self {
            Flavor::Full => full_multiset(s),
            Flavor::PrefixOnly => prefix_multiset(s),
        }
    }
}

/// Two distinct string sets whose readouts coincide.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConfusabilityWitness {
    pub set_a: Vec<BinaryString>,
    pub set_b: Vec<BinaryString>,
    pub flavor: Flavor,
}

fn union_of(set: &[BinaryString], flavor: Flavor) -> Result<CompositionMultiset> {
    let mut out = CompositionMultiset::new();
    for s in set {
        out.extend_from(&flavor.readout(s)?);
    }
    Ok(out)
}

fn check_lengths<'a, I: IntoIterator<Item = &'a BinaryString>>(strings: I) -> Result<()> {
    let mut it = strings.into_iter();
    let Some(first) = it.next() else {
        return Err(Error::EmptyInput);
    };
    match it.find(|s| s.len() != first.len()) {
        Some(s) => Err(Error::LengthMismatch {
            expected: first.len(),
            found: s.len(),
        }),
        None => Ok(()),
    }
}

/// Whether the readout unions of two string sets are identical.
pub fn confusable(set_a: &[BinaryString], set_b: &[BinaryString], flavor: Flavor) -> Result<bool> {
    if set_a.is_empty() || set_b.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_lengths(set_a.iter().chain(set_b))?;
    Ok(union_of(set_a, flavor)? == union_of(set_b, flavor)?)
}

/// `None` when the full readouts of all subsets of size `1..=h` are pairwise
/// distinct, otherwise the first colliding pair in enumeration order.
pub fn is_h_mc_code(strings: &[BinaryString], h: usize) -> Result<Option<ConfusabilityWitness>> {
    is_h_code(strings, h, Flavor::Full, MC_LIMIT)
}

/// Same check under either readout flavor and an explicit subset cap.
pub fn is_h_code(
    strings: &[BinaryString],
    h: usize,
    flavor: Flavor,
    limit: u128,
) -> Result<Option<ConfusabilityWitness>> {
    check_lengths(strings)?;
    let mut sorted = strings.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != strings.len() {
        return Err(Error::NotASet);
    }
    guard(sorted.len(), h, limit)?;
    let readouts = sorted
        .iter()
        .map(|s| flavor.readout(s))
        .collect::<Result<Vec<_>>>()?;

    let mut seen: BTreeMap<CompositionMultiset, Vec<usize>> = BTreeMap::new();
    let mut witness = None;
    for k in 1..=h.min(sorted.len()) {
        for_each_combination(sorted.len(), k, |combo| {
            let mut union = CompositionMultiset::new();
            for &i in combo {
                union.extend_from(&readouts[i]);
            }
            if let Some(earlier) = seen.get(&union) {
                witness = Some((earlier.clone(), combo.to_vec()));
                return false;
            }
            seen.insert(union, combo.to_vec());
            true
        });
        if let Some((a, b)) = witness {
            let pick = |c: Vec<usize>| c.into_iter().map(|i| sorted[i].clone()).collect();
            return Ok(Some(ConfusabilityWitness {
                set_a: pick(a),
                set_b: pick(b),
                flavor,
            }));
        }
    }
    Ok(None)
}

/// Largest code length accepted by [`max_mc_code_size`].
pub const MAX_SEARCH_LEN: usize = 10;
pub const MAX_SEARCH_H: usize = 3;

/// Readout union as a dense count table indexed by `(len, ones)`.
type Signature = Vec<u8>;

struct SearchState {
    h: usize,
    readouts: Vec<Signature>,
    chosen: Vec<usize>,
    // readout unions of every subset of `chosen` of size <= h, with the size
    unions: Vec<(Signature, usize)>,
    seen: BTreeSet<Signature>,
    best: Vec<usize>,
}

impl SearchState {
    fn signature(n: usize, s: &BinaryString) -> Signature {
        let mut sig = alloc::vec![0u8; (n + 1) * (n + 1)];
        for c in full_multiset(s).expect("non-empty").iter_flat() {
            sig[c.len() * (n + 1) + c.ones() as usize] += 1;
        }
        sig
    }

    fn add(a: &Signature, b: &Signature) -> Signature {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    /// New unions created by adding candidate `x`, or `None` on a collision.
    fn extension(&self, x: usize) -> Option<Vec<Signature>> {
        let own = &self.readouts[x];
        let mut fresh = Vec::new();
        if self.seen.contains(own) {
            return None;
        }
        fresh.push(own.clone());
        for (sig, size) in &self.unions {
            if *size < self.h {
                let u = Self::add(sig, own);
                if self.seen.contains(&u) {
                    return None;
                }
                fresh.push(u);
            }
        }
        Some(fresh)
    }

    fn push(&mut self, x: usize, fresh: Vec<Signature>) {
        let base = self.unions.len();
        // sizes: the singleton, then one more than each extended union
        let mut sizes = Vec::with_capacity(fresh.len());
        sizes.push(1);
        sizes.extend(
            self.unions[..base]
                .iter()
                .filter(|(_, s)| *s < self.h)
                .map(|(_, s)| s + 1),
        );
        for (sig, size) in fresh.into_iter().zip(sizes) {
            self.seen.insert(sig.clone());
            self.unions.push((sig, size));
        }
        self.chosen.push(x);
    }

    fn pop(&mut self, base: usize) {
        for (sig, _) in self.unions.drain(base..) {
            self.seen.remove(&sig);
        }
        self.chosen.pop();
    }

    fn search(&mut self, candidates: &[usize]) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        for (i, &x) in candidates.iter().enumerate() {
            if self.chosen.len() + candidates.len() - i <= self.best.len() {
                return;
            }
            let Some(fresh) = self.extension(x) else {
                continue;
            };
            let base = self.unions.len();
            self.push(x, fresh);
            let rest: Vec<usize> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&y| self.extension(y).is_some())
                .collect();
            self.search(&rest);
            self.pop(base);
        }
    }
}

/// Size of a largest h-MC code in `{0,1}^n`, with the lexicographically
/// smallest maximizer.
///
/// Depth-first over strings in increasing order, so each candidate set is
/// visited once, smallest string first. A string that collides with the
/// current set collides with every superset of it, so only strings still
/// compatible are carried down, and their count bounds the branch.
pub fn max_mc_code_size(n: usize, h: usize) -> Result<(usize, Vec<BinaryString>)> {
    if n == 0 || n > MAX_SEARCH_LEN || h == 0 || h > MAX_SEARCH_H {
        return Err(Error::InvalidParameter(alloc::format!(
            "exhaustive search needs 1 <= n <= {MAX_SEARCH_LEN} and 1 <= h <= {MAX_SEARCH_H}"
        )));
    }
    let strings: Vec<BinaryString> = (0..1u64 << n).map(|x| BinaryString::from_uint(x, n)).collect();
    let mut state = SearchState {
        h,
        readouts: strings.iter().map(|s| SearchState::signature(n, s)).collect(),
        chosen: Vec::new(),
        unions: Vec::new(),
        seen: BTreeSet::new(),
        best: Vec::new(),
    };
    let all: Vec<usize> = (0..strings.len()).collect();
    state.search(&all);
    let best: Vec<BinaryString> = state.best.iter().map(|&i| strings[i].clone()).collect();
    Ok((best.len(), best))
}
