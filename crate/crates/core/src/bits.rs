//! Bit strings, compositions and running digital sums.
//!
//! Index 1 of a string (slice index 0) is the leftmost, first synthesized
//! symbol; every prefix operation reads from there.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// A fixed-length sequence of bits, one byte per bit (each 0 or 1).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BinaryString {
    bits: Vec<u8>,
}

impl BinaryString {
    /// Builds a string from 0/1 values. Any other byte is rejected.
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Parse {
                what: "bit",
                detail: alloc::format!("value {b}"),
            });
        }
        Ok(BinaryString { bits })
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        BinaryString {
            bits: bits.into_iter().map(u8::from).collect(),
        }
    }

    pub fn zeros(len: usize) -> Self {
        BinaryString {
            bits: alloc::vec![0; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        BinaryString {
            bits: alloc::vec![1; len],
        }
    }

    /// The `width` low bits of `value`, most significant first.
    pub fn from_uint(value: u64, width: usize) -> Self {
        BinaryString {
            bits: (0..width)
                .rev()
                .map(|k| if k < 64 { ((value >> k) & 1) as u8 } else { 0 })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn bit(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn slice(&self, start: usize, end: usize) -> BinaryString {
        BinaryString {
            bits: self.bits[start..end].to_vec(),
        }
    }

    pub fn concat(parts: &[&BinaryString]) -> BinaryString {
        BinaryString {
            bits: parts.iter().flat_map(|p| p.bits.iter().copied()).collect(),
        }
    }

    /// Bitwise XOR; both strings must have the same length.
    pub fn xor(&self, other: &BinaryString) -> Result<BinaryString> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(BinaryString {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        })
    }

    /// Appends `count` copies of `bit` on the right.
    pub fn padded(&self, count: usize, bit: u8) -> BinaryString {
        let mut bits = self.bits.clone();
        bits.resize(self.len() + count, bit & 1);
        BinaryString { bits }
    }

    /// Packs the bits into 64-bit words, first bit in the high end of word 0.
    pub fn packed(&self) -> Vec<u64> {
        self.bits
            .chunks(64)
            .map(|c| c.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64) << (64 - c.len()))
            .collect()
    }
}

impl fmt::Display for BinaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BinaryString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse {
                    what: "bit string",
                    detail: alloc::format!("unexpected character {other:?} in {s:?}"),
                }),
            })
            .collect::<Result<Vec<u8>>>()
            .map(|bits| BinaryString { bits })
    }
}

/// The unordered content `0^zeros 1^ones` of a non-empty substring.
///
/// Ordered by total length, then by number of ones.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Composition {
    zeros: u32,
    ones: u32,
}

impl Composition {
    pub fn new(zeros: u32, ones: u32) -> Result<Self> {
        if zeros + ones == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(Composition { zeros, ones })
    }

    /// Composition of a substring of length `len` holding `ones` ones.
    pub fn with_len(len: usize, ones: usize) -> Result<Self> {
        if ones > len {
            return Err(Error::Parse {
                what: "composition",
                detail: alloc::format!("{ones} ones in a length-{len} substring"),
            });
        }
        Composition::new((len - ones) as u32, ones as u32)
    }

    pub fn zeros(self) -> u32 {
        self.zeros
    }

    pub fn ones(self) -> u32 {
        self.ones
    }

    pub fn len(self) -> usize {
        (self.zeros + self.ones) as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }
}

impl Ord for Composition {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.len(), self.ones).cmp(&(other.len(), other.ones))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zeros > 0 {
            write!(f, "0^{}", self.zeros)?;
        }
        if self.ones > 0 {
            write!(f, "1^{}", self.ones)?;
        }
        Ok(())
    }
}

impl FromStr for Composition {
    type Err = Error;

    /// Parses `0^a1^b`, `0^a` or `1^b`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "composition",
            detail: s.to_string(),
        };
        let exponent = |digits: &str| -> Result<u32> {
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            digits.parse().map_err(|_| bad())
        };
        let carets: Vec<usize> = s.match_indices('^').map(|(i, _)| i).collect();
        let (zeros, ones) = match carets.as_slice() {
            [1] if s.starts_with('0') => (exponent(&s[2..])?, 0),
            [1] if s.starts_with('1') => (0, exponent(&s[2..])?),
            // "0^" digits "1^" digits: the symbol before the second caret is the '1'.
            [1, second] if s.starts_with('0') && *second >= 4 && &s[second - 1..*second] == "1" => {
                (exponent(&s[2..second - 1])?, exponent(&s[second + 1..])?)
            }
            _ => return Err(bad()),
        };
        Composition::new(zeros, ones).map_err(|_| bad())
    }
}

/// Running digital sums `R(s)_i = 2 wt(s_1..s_i) - i` for `i = 1..=n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RdsProfile {
    values: Vec<i64>,
}

impl RdsProfile {
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn last(&self) -> i64 {
        *self.values.last().expect("profile of a non-empty string")
    }

    /// Largest `|R_i|` over the profile.
    pub fn max_abs(&self) -> i64 {
        self.values.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn min(&self) -> i64 {
        self.values.iter().copied().min().unwrap_or(0)
    }

    pub fn max(&self) -> i64 {
        self.values.iter().copied().max().unwrap_or(0)
    }
}

pub fn weight(s: &BinaryString) -> usize {
    s.bits.iter().filter(|&&b| b == 1).count()
}

pub fn rds_profile(s: &BinaryString) -> Result<RdsProfile> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let values = s
        .bits
        .iter()
        .scan(0i64, |acc, &b| {
            *acc += if b == 1 { 1 } else { -1 };
            Some(*acc)
        })
        .collect();
    Ok(RdsProfile { values })
}

/// Even length, weight exactly half, and every proper prefix strictly
/// dominated by ones.
pub fn is_dyck(s: &BinaryString) -> bool {
    let n = s.len();
    if n == 0 || n % 2 == 1 {
        return false;
    }
    let mut rds = 0i64;
    for (i, &b) in s.bits.iter().enumerate() {
        rds += if b == 1 { 1 } else { -1 };
        if i + 1 < n && rds <= 0 {
            return false;
        }
    }
    rds == 0
}

pub fn composition_of(s: &BinaryString) -> Result<Composition> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    Composition::with_len(s.len(), weight(s))
}

pub fn complement(s: &BinaryString) -> BinaryString {
    BinaryString {
        bits: s.bits.iter().map(|b| 1 - b).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BinaryString {
        s.parse().unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(weight(&bs("0000")), 0);
        assert_eq!(weight(&bs("01101")), 3);
        for k in 0..20 {
            assert_eq!(weight(&BinaryString::ones(k)), k);
        }
    }

    // Independent route: R_i from explicit prefix weights.
    fn rds_by_prefix_weight(s: &BinaryString) -> Vec<i64> {
        (1..=s.len())
            .map(|i| 2 * weight(&s.slice(0, i)) as i64 - i as i64)
            .collect()
    }

    #[test]
    fn rds_examples() {
        assert_eq!(rds_profile(&bs("1100")).unwrap().values(), &[1, 2, 1, 0]);
        assert_eq!(rds_profile(&bs("0")).unwrap().values(), &[-1]);
        let s = bs("01101");
        let expected = rds_by_prefix_weight(&s);
        assert_eq!(expected, [-1, 0, 1, 0, 1]);
        assert_eq!(rds_profile(&s).unwrap().values(), expected.as_slice());
        assert_eq!(rds_profile(&BinaryString::default()), Err(Error::EmptyInput));
    }

    #[test]
    fn dyck_examples() {
        assert!(is_dyck(&bs("1100")));
        assert!(!is_dyck(&bs("1010")));
        let s = bs("110100");
        let interior = &rds_by_prefix_weight(&s)[..5];
        assert!(interior.iter().all(|&v| v > 0));
        assert!(is_dyck(&s));
        assert!(!is_dyck(&bs("110")));
        assert!(!is_dyck(&BinaryString::default()));
    }

    // Weight form: wt(s) = N/2 and wt(s_1..s_i) >= floor(i/2) + 1 for i in [N-1].
    fn dyck_by_weight(s: &BinaryString) -> bool {
        let n = s.len();
        if n % 2 == 1 || weight(s) * 2 != n {
            return false;
        }
        (1..n).all(|i| weight(&s.slice(0, i)) > i / 2)
    }

    // RDS form: R_N = 0 and min over i in [N-1] of R_i > 0.
    fn dyck_by_rds(s: &BinaryString) -> bool {
        if s.is_empty() {
            return false;
        }
        let r = rds_profile(s).unwrap();
        let v = r.values();
        s.len().is_multiple_of(2) && r.last() == 0 && v[..v.len() - 1].iter().all(|&x| x > 0)
    }

    #[test]
    fn dyck_forms_agree_exhaustively() {
        for len in 1..=16usize {
            for x in 0u64..(1 << len) {
                let s = BinaryString::from_uint(x, len);
                let w = dyck_by_weight(&s);
                assert_eq!(w, dyck_by_rds(&s), "{s}");
                assert_eq!(w, is_dyck(&s), "{s}");
            }
        }
    }

    #[test]
    fn compositions() {
        assert_eq!(
            composition_of(&bs("001")).unwrap(),
            Composition::new(2, 1).unwrap()
        );
        assert_eq!(composition_of(&bs("1")).unwrap(), Composition::new(0, 1).unwrap());
        assert_eq!(
            composition_of(&bs("01101")).unwrap(),
            Composition::new(2, 3).unwrap()
        );
        assert_eq!(composition_of(&BinaryString::default()), Err(Error::EmptyInput));
        assert_eq!(Composition::new(0, 0), Err(Error::EmptyInput));
    }

    #[test]
    fn composition_text() {
        for (c, text) in [
            ((2, 1), "0^21^1"),
            ((0, 3), "1^3"),
            ((4, 0), "0^4"),
            ((11, 12), "0^111^12"),
            ((1, 1), "0^11^1"),
        ] {
            let c = Composition::new(c.0, c.1).unwrap();
            assert_eq!(c.to_string(), text);
            assert_eq!(text.parse::<Composition>().unwrap(), c);
        }
        for bad in ["", "0", "0^", "1^2 0^1", "0^x", "1^21^1", "0^0", "2^1"] {
            assert!(bad.parse::<Composition>().is_err(), "{bad}");
        }
    }

    #[test]
    fn complements() {
        assert_eq!(complement(&bs("0000")), bs("1111"));
        assert_eq!(complement(&bs("01101")), bs("10010"));
    }

    #[test]
    fn from_uint_is_msb_first() {
        assert_eq!(BinaryString::from_uint(0b011, 3), bs("011"));
        assert_eq!(BinaryString::from_uint(1, 4), bs("0001"));
    }

    #[test]
    fn packing() {
        let s = bs("1011");
        assert_eq!(s.packed(), [0b1011u64 << 60]);
        assert_eq!(BinaryString::ones(65).packed(), [u64::MAX, 1 << 63]);
    }

    fn arb_string(max: usize) -> impl Strategy<Value = BinaryString> {
        prop::collection::vec(any::<bool>(), 1..=max).prop_map(BinaryString::from_bools)
    }

    proptest! {
        #[test]
        fn last_rds_is_weight_balance(s in arb_string(80)) {
            let r = rds_profile(&s).unwrap();
            prop_assert_eq!(r.last(), 2 * weight(&s) as i64 - s.len() as i64);
            let expected = rds_by_prefix_weight(&s);
            prop_assert_eq!(r.values(), expected.as_slice());
            for (i, v) in r.values().iter().enumerate() {
                prop_assert_eq!(v.rem_euclid(2), ((i + 1) % 2) as i64);
            }
        }

        #[test]
        fn complement_is_involution(s in arb_string(80)) {
            prop_assert_eq!(complement(&complement(&s)), s.clone());
            prop_assert_eq!(weight(&complement(&s)), s.len() - weight(&s));
        }

        #[test]
        fn composition_ignores_order(
            (s, perm) in arb_string(40).prop_flat_map(|s| {
                let n = s.len();
                (Just(s), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            })
        ) {
            let shuffled = BinaryString::from_bits(perm.iter().map(|&i| s.bit(i)).collect()).unwrap();
            prop_assert_eq!(composition_of(&shuffled).unwrap(), composition_of(&s).unwrap());
        }

        #[test]
        fn text_round_trip(s in arb_string(100)) {
            prop_assert_eq!(s.to_string().parse::<BinaryString>().unwrap(), s);
        }
    }
}
