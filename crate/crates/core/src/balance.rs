//! Block balancing and Dyck-path wrapping of B_h strings.
//!
//! A padded string `s` of length `n = b^2` (b even) is cut into `b` blocks of
//! `b` bits. Blocks after the first are complemented whenever that pulls the
//! running digital sum back towards zero; the flip flags form `r`. The
//! codeword is
//!
//! ```text
//! 1^lead_run  r  u  1^(N/2 - w)  0^(N/2 - (|v| - w))
//! \________ v ________/
//! ```
//!
//! where `w = wt(v)`. A lead run of `(5/2)b + 1` ones keeps every prefix of
//! `v` positive, and the two trailing runs close it into a Dyck path of
//! length `N = n + (17/2)b + 2`. When that `N` is odd the lead run gets one
//! extra 1.

use alloc::format;

use crate::bits::{rds_profile, weight, BinaryString};
use crate::error::{Error, Result};

/// Derived lengths of the codeword anatomy for a given padded `n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct LayoutParams {
    pub n: usize,
    pub block_len: usize,
    pub num_blocks: usize,
    pub lead_run: usize,
    pub v_len: usize,
    /// Final codeword length `N`.
    pub big_n: usize,
    pub parity_fix: bool,
}

impl LayoutParams {
    /// Range of the `r` segment inside a codeword.
    pub fn r_range(&self) -> core::ops::Range<usize> {
        self.lead_run..self.lead_run + self.num_blocks
    }

    /// Range of the `u` segment inside a codeword.
    pub fn u_range(&self) -> core::ops::Range<usize> {
        let start = self.lead_run + self.num_blocks;
        start..start + self.n
    }

    /// Range of the two trailing runs.
    pub fn tail_range(&self) -> core::ops::Range<usize> {
        self.v_len..self.big_n
    }
}

pub fn layout(n: usize) -> Result<LayoutParams> {
    let root = (0..=n).find(|r| r * r >= n).unwrap_or(0);
    if root * root != n || root % 2 == 1 || root == 0 {
        return Err(Error::NotEvenSquare(n));
    }
    let half = root / 2;
    let mut lead_run = 5 * half + 1;
    let mut v_len = n + 7 * half + 1;
    let mut big_n = n + 17 * half + 2;
    let parity_fix = big_n % 2 == 1;
    if parity_fix {
        lead_run += 1;
        v_len += 1;
        big_n += 1;
    }
    Ok(LayoutParams {
        n,
        block_len: root,
        num_blocks: root,
        lead_run,
        v_len,
        big_n,
        parity_fix,
    })
}

/// Balanced string `u` and flip flags `r` (`r_j = 1` iff block `j` was complemented).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BalanceResult {
    pub u: BinaryString,
    pub r: BinaryString,
}

fn block_rds(block: &[u8]) -> i64 {
    block.iter().map(|&b| if b == 1 { 1 } else { -1 }).sum()
}

/// Keeps block `j` when its RDS has the opposite sign to the RDS of the
/// balanced prefix (zero counts as non-negative on both sides), complements
/// it otherwise. The first block is never complemented.
pub fn balance(s: &BinaryString, layout: &LayoutParams) -> Result<BalanceResult> {
    if s.len() != layout.n {
        return Err(Error::LengthMismatch {
            expected: layout.n,
            found: s.len(),
        });
    }
    let b = layout.block_len;
    let mut u = alloc::vec::Vec::with_capacity(layout.n);
    let mut r = alloc::vec::Vec::with_capacity(layout.num_blocks);
    let mut prefix_rds = 0i64;
    for (j, block) in s.bits().chunks(b).enumerate() {
        let block_sum = block_rds(block);
        let flip = j > 0 && ((prefix_rds < 0) == (block_sum < 0));
        if flip {
            u.extend(block.iter().map(|&x| 1 - x));
            prefix_rds -= block_sum;
        } else {
            u.extend_from_slice(block);
            prefix_rds += block_sum;
        }
        r.push(u8::from(flip));
    }
    Ok(BalanceResult {
        u: BinaryString::from_bits(u)?,
        r: BinaryString::from_bits(r)?,
    })
}

/// Undoes [`balance`]: complements every block of `u` whose flag is set.
pub fn unbalance(result: &BalanceResult, layout: &LayoutParams) -> Result<BinaryString> {
    unbalance_sum(&result.u, &result.r, layout)
}

/// `v = 1^lead_run ‖ r ‖ u`.
pub fn assemble_v(result: &BalanceResult, layout: &LayoutParams) -> Result<BinaryString> {
    if result.u.len() != layout.n {
        return Err(Error::LengthMismatch {
            expected: layout.n,
            found: result.u.len(),
        });
    }
    if result.r.len() != layout.num_blocks {
        return Err(Error::LengthMismatch {
            expected: layout.num_blocks,
            found: result.r.len(),
        });
    }
    let lead = BinaryString::ones(layout.lead_run);
    Ok(BinaryString::concat(&[&lead, &result.r, &result.u]))
}

/// `v 1^(N/2 - w) 0^(N/2 - (|v| - w))` with `w = wt(v)`.
pub fn finalize_dyck(v: &BinaryString, layout: &LayoutParams) -> Result<BinaryString> {
    let half = layout.big_n / 2;
    let w = weight(v);
    let zeros = v.len() - w;
    if v.len() > layout.big_n || w > half || zeros > half {
        return Err(Error::OutsideEnvelope(format!(
            "|v| = {}, wt(v) = {w}, N/2 = {half}",
            v.len()
        )));
    }
    if let Some(i) = rds_profile(v)?.values().iter().position(|&x| x <= 0) {
        return Err(Error::OutsideEnvelope(format!("R(v)_{} <= 0", i + 1)));
    }
    let ones = BinaryString::ones(half - w);
    let tail = BinaryString::zeros(half - zeros);
    Ok(BinaryString::concat(&[v, &ones, &tail]))
}

/// Complements block `j` of `u_sum_mod2` wherever `r_sum_mod2[j] = 1`.
///
/// Fed with the XOR of the `u` segments and the parity of the flag counts of
/// several codewords, this yields the XOR of their original B_h strings.
pub fn unbalance_sum(
    u_sum_mod2: &BinaryString,
    r_sum_mod2: &BinaryString,
    layout: &LayoutParams,
) -> Result<BinaryString> {
    if u_sum_mod2.len() != layout.n {
        return Err(Error::LengthMismatch {
            expected: layout.n,
            found: u_sum_mod2.len(),
        });
    }
    if r_sum_mod2.len() != layout.num_blocks {
        return Err(Error::LengthMismatch {
            expected: layout.num_blocks,
            found: r_sum_mod2.len(),
        });
    }
    let bits = u_sum_mod2
        .bits()
        .chunks(layout.block_len)
        .zip(r_sum_mod2.bits())
        .flat_map(|(block, &flag)| block.iter().map(move |&x| x ^ flag))
        .collect();
    BinaryString::from_bits(bits)
}
