//! Binary B_h sets from BCH parity-check columns, and their brute-force check.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::bits::BinaryString;
use crate::error::{Error, Result};
use crate::gf::Field;

/// Default cap on the number of subsets a brute-force check will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

/// Distinct equal-length strings whose subset sums (subsets of size at most
/// `h`, integer addition per coordinate) are pairwise distinct.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SidonSet {
    h: usize,
    n: usize,
    strings: Vec<BinaryString>,
}

impl SidonSet {
    /// Checks distinctness and lengths only; run [`verify_bh`] for the sum property.
    pub fn new(h: usize, strings: Vec<BinaryString>) -> Result<SidonSet> {
        if h < 1 {
            return Err(Error::InvalidParameter("h must be at least 1".into()));
        }
        let n = strings.first().map_or(0, BinaryString::len);
        if let Some(s) = strings.iter().find(|s| s.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                found: s.len(),
            });
        }
        if strings.iter().collect::<BTreeSet<_>>().len() != strings.len() {
            return Err(Error::NotASet);
        }
        Ok(SidonSet { h, n, strings })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn strings(&self) -> &[BinaryString] {
        &self.strings
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    /// `log2(|S|) / n`.
    pub fn rate(&self) -> f64 {
        libm::log2(self.len() as f64) / self.n as f64
    }
}

/// BCH parity-check columns over GF(2^m): column `i` is the concatenation of
/// the `m`-bit forms of α^i, α^{3i}, ..., α^{(2h-1)i}, for `i = 0..2^m - 1`.
///
/// Any `2h` such columns are linearly independent over GF(2), so subsets of
/// size at most `h` have distinct XORs and hence distinct integer sums.
pub fn build_bh_codebook(m: u32, h: usize) -> Result<SidonSet> {
    if h < 2 {
        return Err(Error::InvalidParameter("h must be at least 2".into()));
    }
    let field = Field::new(m)?;
    SidonSet::new(h, bch_columns(&field, h))
}

pub(crate) fn bch_columns(field: &Field, h: usize) -> Vec<BinaryString> {
    (0..field.order())
        .map(|i| {
            let parts: Vec<BinaryString> = (0..h)
                .map(|k| field.to_bits(field.alpha_pow((2 * k + 1) * i)))
                .collect();
            BinaryString::concat(&parts.iter().collect::<Vec<_>>())
        })
        .collect()
}

/// Smallest `r^2 >= n` with `r` even.
pub fn padded_len(n: usize) -> usize {
    let mut r = 2;
    while r * r < n {
        r += 2;
    }
    r * r
}

/// Right-pads every string with zeros up to the next square with an even root.
pub fn pad_to_square(codebook: &SidonSet) -> SidonSet {
    let target = padded_len(codebook.n);
    let extra = target - codebook.n;
    SidonSet {
        h: codebook.h,
        n: target,
        strings: codebook.strings.iter().map(|s| s.padded(extra, 0)).collect(),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BhVerdict {
    Ok,
    /// Two distinct subsets with equal sums.
    Witness(Vec<BinaryString>, Vec<BinaryString>),
}

impl BhVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, BhVerdict::Ok)
    }
}

pub(crate) fn subset_count(len: usize, h: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for k in 1..=h.min(len) {
        binom = binom * (len - k + 1) as u128 / k as u128;
        total += binom;
    }
    total
}

pub(crate) fn guard(len: usize, h: usize, limit: u128) -> Result<()> {
    let required = subset_count(len, h);
    if required > limit {
        return Err(Error::TooLarge { required, limit });
    }
    Ok(())
}

/// Visits all `k`-subsets of `0..len` in lexicographic order.
pub(crate) fn for_each_combination<F: FnMut(&[usize]) -> bool>(len: usize, k: usize, mut f: F) {
    if k > len {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == len - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Integer subset sums over subsets of size `1..=h` must be pairwise distinct.
///
/// The strings are sorted first. Collisions between subsets of the same size
/// are reported before collisions across sizes; a same-size witness lists the
/// earlier subset first, a cross-size witness the larger subset first.
pub fn verify_bh(strings: &[BinaryString], h: usize) -> Result<BhVerdict> {
    verify_bh_with_limit(strings, h, BRUTE_FORCE_LIMIT)
}

pub fn verify_bh_with_limit(strings: &[BinaryString], h: usize, limit: u128) -> Result<BhVerdict> {
    find_collision(strings, h, limit, |sorted, combo| {
        let mut sum = alloc::vec![0u16; sorted[0].len()];
        for &i in combo {
            for (acc, &b) in sum.iter_mut().zip(sorted[i].bits()) {
                *acc += b as u16;
            }
        }
        sum
    })
}

/// Same enumeration with XOR in place of integer addition.
pub fn verify_bh_xor(strings: &[BinaryString], h: usize) -> Result<BhVerdict> {
    find_collision(strings, h, BRUTE_FORCE_LIMIT, |sorted, combo| {
        let mut acc = alloc::vec![0u64; sorted[0].len().div_ceil(64)];
        for &i in combo {
            for (a, w) in acc.iter_mut().zip(sorted[i].packed()) {
                *a ^= w;
            }
        }
        acc
    })
}

/// Subsets of one size in enumeration order, and each key's position.
type SizeClass<K> = (Vec<Vec<usize>>, BTreeMap<K, usize>);

fn find_collision<K, F>(strings: &[BinaryString], h: usize, limit: u128, key: F) -> Result<BhVerdict>
where
    K: Ord,
    F: Fn(&[BinaryString], &[usize]) -> K,
{
    if strings.is_empty() {
        return Ok(BhVerdict::Ok);
    }
    let n = strings[0].len();
    if let Some(s) = strings.iter().find(|s| s.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            found: s.len(),
        });
    }
    let mut sorted = strings.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != strings.len() {
        return Err(Error::NotASet);
    }
    guard(sorted.len(), h, limit)?;

    let pick = |combo: &[usize]| combo.iter().map(|&i| sorted[i].clone()).collect::<Vec<_>>();

    // Per size: subsets in enumeration order, plus key -> position.
    let mut by_size: Vec<SizeClass<K>> = Vec::new();
    for k in 1..=h.min(sorted.len()) {
        let mut combos = Vec::new();
        let mut keys = BTreeMap::new();
        let mut witness = None;
        for_each_combination(sorted.len(), k, |combo| {
            let sum = key(&sorted, combo);
            if let Some(&earlier) = keys.get(&sum) {
                witness = Some((earlier, combo.to_vec()));
                return false;
            }
            keys.insert(sum, combos.len());
            combos.push(combo.to_vec());
            true
        });
        if let Some((earlier, combo)) = witness {
            return Ok(BhVerdict::Witness(pick(&combos[earlier]), pick(&combo)));
        }
        by_size.push((combos, keys));
    }

    for large in 1..by_size.len() {
        for combo in &by_size[large].0 {
            let sum = key(&sorted, combo);
            for (combos, keys) in &by_size[..large] {
                if let Some(&at) = keys.get(&sum) {
                    return Ok(BhVerdict::Witness(pick(combo), pick(&combos[at])));
                }
            }
        }
    }
    Ok(BhVerdict::Ok)
}
