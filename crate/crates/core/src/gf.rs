//! Arithmetic in GF(2^m), 2 <= m <= 16.
//!
//! Elements are polynomials over GF(2) reduced modulo a fixed primitive
//! polynomial, stored as `m`-bit integers (bit k = coefficient of x^k).
//! The generator α is the residue class of x.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::BinaryString;
use crate::error::{Error, Result};

/// Primitive polynomials by degree, bit k = coefficient of x^k.
pub const PRIMITIVE_POLYS: [(u32, u32); 15] = [
    (2, 0x7),      // x^2 + x + 1
    (3, 0xB),      // x^3 + x + 1
    (4, 0x13),     // x^4 + x + 1
    (5, 0x25),     // x^5 + x^2 + 1
    (6, 0x43),     // x^6 + x + 1
    (7, 0x83),     // x^7 + x + 1
    (8, 0x11D),    // x^8 + x^4 + x^3 + x^2 + 1
    (9, 0x211),    // x^9 + x^4 + 1
    (10, 0x409),   // x^10 + x^3 + 1
    (11, 0x805),   // x^11 + x^2 + 1
    (12, 0x1053),  // x^12 + x^6 + x^4 + x + 1
    (13, 0x201B),  // x^13 + x^4 + x^3 + x + 1
    (14, 0x4443),  // x^14 + x^10 + x^6 + x + 1
    (15, 0x8003),  // x^15 + x + 1
    (16, 0x1100B), // x^16 + x^12 + x^3 + x + 1
];

pub fn primitive_poly(m: u32) -> Result<u32> {
    PRIMITIVE_POLYS
        .iter()
        .find(|&&(d, _)| d == m)
        .map(|&(_, p)| p)
        .ok_or(Error::UnsupportedFieldDegree(m))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

// Addition in characteristic 2 is XOR.
#[allow(clippy::suspicious_arithmetic_impl)]
impl core::ops::Add for FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl core::ops::AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

/// GF(2^m) with log/antilog tables.
#[derive(Clone, Debug)]
pub struct Field {
    m: u32,
    poly: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Field {
    pub fn new(m: u32) -> Result<Field> {
        let poly = primitive_poly(m)?;
        let order = (1usize << m) - 1;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![0u32; order + 1];
        let mut x = 1u32;
        for (i, slot) in exp[..order].iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x <<= 1;
            if x >> m != 0 {
                x ^= poly;
            }
        }
        debug_assert_eq!(x, 1, "polynomial {poly:#x} is not primitive");
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Field { m, poly, exp, log })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Multiplicative order of α, `2^m - 1`.
    pub fn order(&self) -> usize {
        (1usize << self.m) - 1
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value >> self.m != 0 {
            return Err(Error::InvalidParameter(alloc::format!(
                "{value:#x} is not an element of GF(2^{})",
                self.m
            )));
        }
        Ok(FieldElement(value))
    }

    pub fn alpha_pow(&self, e: usize) -> FieldElement {
        FieldElement(self.exp[e % self.order()])
    }

    /// Discrete log base α; `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<usize> {
        (!a.is_zero()).then(|| self.log[a.0 as usize] as usize)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        FieldElement(self.exp[self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        let l = self.log(a)?;
        Some(self.alpha_pow(self.order() - l))
    }

    pub fn pow(&self, a: FieldElement, e: usize) -> FieldElement {
        match self.log(a) {
            None if e == 0 => FieldElement::ONE,
            None => FieldElement::ZERO,
            Some(l) => self.alpha_pow(l * (e % self.order())),
        }
    }

    /// `m`-bit representation, coefficient of x^{m-1} first.
    pub fn to_bits(&self, a: FieldElement) -> BinaryString {
        BinaryString::from_uint(a.0 as u64, self.m as usize)
    }

    pub fn from_bits(&self, bits: &[u8]) -> Result<FieldElement> {
        if bits.len() != self.m as usize {
            return Err(Error::LengthMismatch {
                expected: self.m as usize,
                found: bits.len(),
            });
        }
        Ok(FieldElement(bits.iter().fold(0, |acc, &b| (acc << 1) | b as u32)))
    }

    /// Primitive polynomial as an `m + 1` bit string, x^m coefficient first.
    pub fn poly_bits(&self) -> BinaryString {
        BinaryString::from_uint(self.poly as u64, self.m as usize + 1)
    }
}
