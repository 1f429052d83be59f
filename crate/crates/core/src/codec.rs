//! Encoder and mixture decoder.
//!
//! Decoding runs in stages: split the readout into prefix and suffix halves,
//! turn the prefix half into the coordinate-wise integer sum of the
//! codewords, cut that sum into lead run, flag segment, balanced segment and
//! tail, fold the flag parities back into the balanced segment to get the XOR
//! of the original B_h strings, find the unique column subset with that XOR,
//! and finally re-mix the answer and compare it against the readout.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::balance::{
    assemble_v, balance, finalize_dyck, layout, unbalance_sum, BalanceResult, LayoutParams,
};
use crate::bits::{rds_profile, BinaryString, RdsProfile};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::multiset::{mix, separate_prefixes, CompositionMultiset, MixtureDocument};
use crate::sidon::{
    bch_columns, for_each_combination, guard, pad_to_square, subset_count, SidonSet, BRUTE_FORCE_LIMIT,
};

/// Largest number of column subsets for which [`Codebook`] precomputes its XOR table.
pub const XOR_TABLE_LIMIT: u128 = 200_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Stage {
    SeparatePrefixes,
    RecoverSum,
    SplitSegments,
    UnbalanceSum,
    SubsetSearch,
    Verify,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::SeparatePrefixes,
        Stage::RecoverSum,
        Stage::SplitSegments,
        Stage::UnbalanceSum,
        Stage::SubsetSearch,
        Stage::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::SeparatePrefixes => "separate_prefixes",
            Stage::RecoverSum => "recover_sum",
            Stage::SplitSegments => "split_segments",
            Stage::UnbalanceSum => "unbalance_sum",
            Stage::SubsetSearch => "subset_search",
            Stage::Verify => "verify",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How the decoder finds the column subset behind an XOR.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum SubsetSearch {
    /// Table lookup when the codebook has one, syndrome decoding otherwise.
    #[default]
    Auto,
    Table,
    /// Enumerate all subsets of the right size.
    BruteForce,
    /// Berlekamp-Massey on the BCH syndromes plus a Chien search.
    Syndrome,
}

#[derive(Clone, Debug)]
enum XorHit {
    Unique(Box<[usize]>),
    Ambiguous,
}

/// Coordinate-wise integer sum `t_1..t_N` of the strings in a mixture.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegerSumVector {
    pub values: Vec<u32>,
    pub h_bar: usize,
}

impl IntegerSumVector {
    pub fn total(&self) -> u64 {
        self.values.iter().map(|&v| v as u64).sum()
    }
}

/// Intermediate strings of one encoding, for inspection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Anatomy {
    pub padded: BinaryString,
    pub balanced: BalanceResult,
    pub v: BinaryString,
    pub codeword: BinaryString,
}

impl Anatomy {
    pub fn u_rds(&self) -> RdsProfile {
        rds_profile(&self.balanced.u).expect("u is non-empty")
    }

    pub fn v_rds(&self) -> RdsProfile {
        rds_profile(&self.v).expect("v is non-empty")
    }
}

/// An h-MC codebook: BCH columns over GF(2^m), padded, balanced and wrapped
/// into Dyck paths. Codeword `i` comes from column `i` (α^i).
#[derive(Clone, Debug)]
pub struct Codebook {
    m: u32,
    h: usize,
    field: Field,
    raw: SidonSet,
    sidon: SidonSet,
    layout: LayoutParams,
    codewords: Vec<BinaryString>,
    index: BTreeMap<BinaryString, usize>,
    // tables[k - 1]: XOR of every k-subset of raw columns -> the subset
    tables: Option<Vec<BTreeMap<Vec<u64>, XorHit>>>,
}

pub fn build_codebook(m: u32, h: usize) -> Result<Codebook> {
    Codebook::build(m, h, XOR_TABLE_LIMIT)
}

impl Codebook {
    /// Builds the codebook, precomputing XOR tables when they hold at most
    /// `table_limit` subsets.
    pub fn build(m: u32, h: usize, table_limit: u128) -> Result<Codebook> {
        if h < 2 {
            return Err(Error::InvalidParameter("h must be at least 2".into()));
        }
        let field = Field::new(m)?;
        let raw = SidonSet::new(h, bch_columns(&field, h))?;
        let sidon = pad_to_square(&raw);
        let layout = layout(sidon.n())?;
        let codewords = sidon
            .strings()
            .iter()
            .map(|s| wrap(s, &layout))
            .collect::<Result<Vec<_>>>()?;
        let index: BTreeMap<BinaryString, usize> = codewords
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect();
        if index.len() != codewords.len() {
            return Err(Error::AmbiguousSubset);
        }
        let tables = (subset_count(raw.len(), h) <= table_limit).then(|| xor_tables(&raw, h));
        Ok(Codebook {
            m,
            h,
            field,
            raw,
            sidon,
            layout,
            codewords,
            index,
            tables,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The B_h columns before padding, length `h * m`.
    pub fn raw(&self) -> &SidonSet {
        &self.raw
    }

    /// The padded B_h set the balancer works on.
    pub fn sidon(&self) -> &SidonSet {
        &self.sidon
    }

    pub fn layout(&self) -> &LayoutParams {
        &self.layout
    }

    pub fn codewords(&self) -> &[BinaryString] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn index_of(&self, codeword: &BinaryString) -> Option<usize> {
        self.index.get(codeword).copied()
    }

    pub fn has_xor_table(&self) -> bool {
        self.tables.is_some()
    }

    /// `log2 |C| / N`.
    pub fn rate(&self) -> f64 {
        libm::log2(self.len() as f64) / self.layout.big_n as f64
    }

    pub fn anatomy(&self, index: usize) -> Result<Anatomy> {
        let padded = self
            .sidon
            .strings()
            .get(index)
            .ok_or(Error::IndexOutOfRange {
                index,
                size: self.len(),
            })?
            .clone();
        let balanced = balance(&padded, &self.layout)?;
        let v = assemble_v(&balanced, &self.layout)?;
        let codeword = finalize_dyck(&v, &self.layout)?;
        Ok(Anatomy {
            padded,
            balanced,
            v,
            codeword,
        })
    }
}

fn wrap(s: &BinaryString, layout: &LayoutParams) -> Result<BinaryString> {
    finalize_dyck(&assemble_v(&balance(s, layout)?, layout)?, layout)
}

fn xor_tables(raw: &SidonSet, h: usize) -> Vec<BTreeMap<Vec<u64>, XorHit>> {
    let packed: Vec<Vec<u64>> = raw.strings().iter().map(BinaryString::packed).collect();
    (1..=h)
        .map(|k| {
            let mut table = BTreeMap::new();
            for_each_combination(packed.len(), k, |combo| {
                let key = xor_packed(&packed, combo);
                table
                    .entry(key)
                    .and_modify(|hit| *hit = XorHit::Ambiguous)
                    .or_insert_with(|| XorHit::Unique(combo.into()));
                true
            });
            table
        })
        .collect()
}

fn xor_packed(packed: &[Vec<u64>], combo: &[usize]) -> Vec<u64> {
    let mut acc = alloc::vec![0u64; packed[0].len()];
    for &i in combo {
        for (a, w) in acc.iter_mut().zip(&packed[i]) {
            *a ^= w;
        }
    }
    acc
}

pub fn encode(codebook: &Codebook, column_index: usize) -> Result<BinaryString> {
    codebook
        .codewords
        .get(column_index)
        .cloned()
        .ok_or(Error::IndexOutOfRange {
            index: column_index,
            size: codebook.len(),
        })
}

/// Integer sum of the strings behind a prefix multiset.
///
/// With `c_i` the total number of ones over the length-`i` compositions,
/// `t_i = c_i - c_{i-1}` and `c_0 = 0`. The number of strings is read off
/// the length-1 count.
pub fn recover_sum(prefixes: &CompositionMultiset, big_n: usize) -> Result<IntegerSumVector> {
    if prefixes.max_len() > big_n {
        return Err(Error::MalformedMixture(format!(
            "prefix of length {} exceeds N = {big_n}",
            prefixes.max_len()
        )));
    }
    let h_bar = prefixes.count_of_length(1);
    if h_bar == 0 {
        return Err(Error::IncompletePrefix {
            len: 1,
            found: 0,
            expected: 1,
        });
    }
    let mut values = Vec::with_capacity(big_n);
    let mut previous = 0i64;
    for len in 1..=big_n {
        let (mut count, mut ones) = (0usize, 0i64);
        for (c, m) in prefixes.of_length(len) {
            count += m;
            ones += (c.ones() as usize * m) as i64;
        }
        if count < h_bar {
            return Err(Error::IncompletePrefix {
                len,
                found: count,
                expected: h_bar,
            });
        }
        if count > h_bar {
            return Err(Error::MalformedMixture(format!(
                "{count} prefixes of length {len}, expected {h_bar}"
            )));
        }
        let t = ones - previous;
        if t < 0 || t > h_bar as i64 {
            return Err(Error::InconsistentMultiset {
                position: len,
                value: t,
                h_bar,
            });
        }
        values.push(t as u32);
        previous = ones;
    }
    Ok(IntegerSumVector { values, h_bar })
}

/// The unique `h_bar`-subset of `sidon` whose XOR is `xor`, by enumeration.
pub fn recover_subset_from_xor(
    xor: &BinaryString,
    sidon: &SidonSet,
    h_bar: usize,
) -> Result<Vec<BinaryString>> {
    recover_indices_brute_force(xor, sidon, h_bar)
        .map(|idx| idx.iter().map(|&i| sidon.strings()[i].clone()).collect())
}

fn recover_indices_brute_force(xor: &BinaryString, sidon: &SidonSet, h_bar: usize) -> Result<Vec<usize>> {
    if xor.len() != sidon.n() {
        return Err(Error::LengthMismatch {
            expected: sidon.n(),
            found: xor.len(),
        });
    }
    if h_bar == 0 || h_bar > sidon.len() {
        return Err(Error::NoSubset);
    }
    guard(sidon.len(), h_bar, BRUTE_FORCE_LIMIT)?;
    let packed: Vec<Vec<u64>> = sidon.strings().iter().map(BinaryString::packed).collect();
    let target = xor.packed();
    let mut found: Option<Vec<usize>> = None;
    let mut ambiguous = false;
    for_each_combination(packed.len(), h_bar, |combo| {
        if xor_packed(&packed, combo) == target {
            if found.is_some() {
                ambiguous = true;
                return false;
            }
            found = Some(combo.to_vec());
        }
        true
    });
    if ambiguous {
        return Err(Error::AmbiguousSubset);
    }
    found.ok_or(Error::NoSubset)
}

impl Codebook {
    fn recover_indices(
        &self,
        xor_raw: &BinaryString,
        h_bar: usize,
        search: SubsetSearch,
    ) -> Result<Vec<usize>> {
        let search = match search {
            SubsetSearch::Auto if self.tables.is_some() => SubsetSearch::Table,
            SubsetSearch::Auto => SubsetSearch::Syndrome,
            s => s,
        };
        match search {
            SubsetSearch::Table => {
                let tables = self.tables.as_ref().ok_or_else(|| {
                    Error::InvalidParameter("codebook was built without an XOR table".into())
                })?;
                let table = tables.get(h_bar.wrapping_sub(1)).ok_or(Error::NoSubset)?;
                match table.get(&xor_raw.packed()) {
                    Some(XorHit::Unique(idx)) => Ok(idx.to_vec()),
                    Some(XorHit::Ambiguous) => Err(Error::AmbiguousSubset),
                    None => Err(Error::NoSubset),
                }
            }
            SubsetSearch::BruteForce => recover_indices_brute_force(xor_raw, &self.raw, h_bar),
            SubsetSearch::Syndrome | SubsetSearch::Auto => self.syndrome_decode(xor_raw, h_bar),
        }
    }

    /// Reads the XOR as the odd syndromes S_1, S_3, ..., S_{2h-1} of an error
    /// pattern over the column positions and locates the errors.
    fn syndrome_decode(&self, xor_raw: &BinaryString, h_bar: usize) -> Result<Vec<usize>> {
        let f = &self.field;
        let m = self.m as usize;
        let mut syndromes = alloc::vec![FieldElement::ZERO; 2 * self.h];
        for k in 0..self.h {
            syndromes[2 * k] = f.from_bits(&xor_raw.bits()[k * m..(k + 1) * m])?;
        }
        // S_{2j} = S_j^2 over GF(2^m)
        for j in 1..=self.h {
            let s = syndromes[j - 1];
            syndromes[2 * j - 1] = f.mul(s, s);
        }
        let locator = berlekamp_massey(f, &syndromes);
        let degree = locator.len() - 1;
        if degree != h_bar {
            return Err(Error::NoSubset);
        }
        // Roots of the locator are α^{-i} for the error positions i.
        let order = f.order();
        let positions: Vec<usize> = (0..order)
            .filter(|&i| poly_eval(f, &locator, f.alpha_pow(order - i)).is_zero())
            .collect();
        if positions.len() != degree {
            return Err(Error::NoSubset);
        }
        let packed: Vec<Vec<u64>> = positions
            .iter()
            .map(|&i| self.raw.strings()[i].packed())
            .collect();
        let all: Vec<usize> = (0..packed.len()).collect();
        if xor_packed(&packed, &all) != xor_raw.packed() {
            return Err(Error::NoSubset);
        }
        Ok(positions)
    }
}

/// Connection polynomial of the shortest LFSR generating `s`, lowest degree
/// first, trimmed to its length `L`.
fn berlekamp_massey(f: &Field, s: &[FieldElement]) -> Vec<FieldElement> {
    let mut c = alloc::vec![FieldElement::ZERO; s.len() + 1];
    let mut b = c.clone();
    c[0] = FieldElement::ONE;
    b[0] = FieldElement::ONE;
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last = FieldElement::ONE;
    for n in 0..s.len() {
        let mut d = s[n];
        for i in 1..=l {
            d += f.mul(c[i], s[n - i]);
        }
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let coef = f.mul(d, f.inv(last).expect("discrepancy base is nonzero"));
        let previous = c.clone();
        for i in 0..b.len() - shift {
            let term = f.mul(coef, b[i]);
            c[i + shift] += term;
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = previous;
            last = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.truncate(l + 1);
    c
}

fn poly_eval(f: &Field, poly: &[FieldElement], x: FieldElement) -> FieldElement {
    poly.iter()
        .rev()
        .fold(FieldElement::ZERO, |acc, &c| f.mul(acc, x) + c)
}

/// A decoded mixture: column indices in ascending order and their codewords.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decoded {
    pub h_bar: usize,
    pub indices: Vec<usize>,
    pub codewords: Vec<BinaryString>,
}

pub fn decode(codebook: &Codebook, doc: &MixtureDocument) -> Result<Decoded> {
    decode_with(codebook, doc, SubsetSearch::Auto, |_| {})
}

/// [`decode`] with an explicit subset search and a callback run after each
/// completed stage.
pub fn decode_with<F: FnMut(Stage)>(
    codebook: &Codebook,
    doc: &MixtureDocument,
    search: SubsetSearch,
    mut on_stage: F,
) -> Result<Decoded> {
    let lay = codebook.layout;
    let big_n = lay.big_n;

    let stage = Stage::SeparatePrefixes;
    if doc.n_total() != big_n {
        return Err(Error::MalformedMixture(format!(
            "mixture length N = {} does not match codebook N = {big_n}",
            doc.n_total()
        ))
        .at(stage));
    }
    let separated = separate_prefixes(doc).map_err(|e| e.at(stage))?;
    let h_bar = separated.h_bar;
    if h_bar > codebook.h {
        return Err(Error::MalformedMixture(format!(
            "mixture holds {h_bar} strings, codebook supports at most {}",
            codebook.h
        ))
        .at(stage));
    }
    on_stage(stage);

    let stage = Stage::RecoverSum;
    let t = recover_sum(&separated.prefixes, big_n).map_err(|e| e.at(stage))?;
    if t.h_bar != h_bar {
        return Err(Error::MalformedMixture("prefix and mixture sizes disagree".into()).at(stage));
    }
    on_stage(stage);

    let stage = Stage::SplitSegments;
    let values = &t.values;
    if let Some(i) = values[..lay.lead_run].iter().position(|&x| x as usize != h_bar) {
        return Err(Error::MalformedMixture(format!(
            "lead-run coordinate {} is {}, expected {h_bar}",
            i + 1,
            values[i]
        ))
        .at(stage));
    }
    let tail = &values[lay.tail_range()];
    if tail.windows(2).any(|w| w[1] > w[0]) || tail.last().is_some_and(|&x| x != 0) {
        return Err(
            Error::MalformedMixture("tail is not a union of 1-runs followed by 0-runs".into()).at(stage),
        );
    }
    if t.total() != (h_bar * big_n / 2) as u64 {
        return Err(Error::MalformedMixture(format!(
            "total weight {} differs from h_bar * N/2 = {}",
            t.total(),
            h_bar * big_n / 2
        ))
        .at(stage));
    }
    let parity = |range: core::ops::Range<usize>| {
        BinaryString::from_bits(values[range].iter().map(|&x| (x % 2) as u8).collect())
    };
    let r_parity = parity(lay.r_range()).map_err(|e| e.at(stage))?;
    let u_parity = parity(lay.u_range()).map_err(|e| e.at(stage))?;
    on_stage(stage);

    let stage = Stage::UnbalanceSum;
    let xor = unbalance_sum(&u_parity, &r_parity, &lay).map_err(|e| e.at(stage))?;
    let raw_n = codebook.raw.n();
    if xor.bits()[raw_n..].contains(&1) {
        return Err(Error::NoSubset.at(stage));
    }
    let xor_raw = xor.slice(0, raw_n);
    on_stage(stage);

    let stage = Stage::SubsetSearch;
    let mut indices = codebook
        .recover_indices(&xor_raw, h_bar, search)
        .map_err(|e| e.at(stage))?;
    indices.sort_unstable();
    on_stage(stage);

    let stage = Stage::Verify;
    let codewords: Vec<BinaryString> = indices.iter().map(|&i| codebook.codewords[i].clone()).collect();
    let remixed = mix(&codewords, doc.hmax()).map_err(|e| e.at(stage))?;
    if remixed.entries() != doc.entries() {
        return Err(
            Error::MalformedMixture("decoded codewords do not reproduce the readout".into()).at(stage),
        );
    }
    on_stage(stage);

    Ok(Decoded {
        h_bar,
        indices,
        codewords,
    })
}
