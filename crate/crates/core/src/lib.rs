//! Multicomposition (h-MC) codes.
//!
//! A codeword set is built from the columns of a binary BCH parity-check
//! matrix (a B_h set), each column is block-balanced and wrapped into a Dyck
//! path, and the union of prefix and suffix composition multisets of up to
//! `h` codewords is decoded back to the exact codeword set.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! anything touching the clock live in the `multicomp` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod balance;
pub mod bits;
pub mod codec;
pub mod error;
pub mod gf;
pub mod multiset;
pub mod oracle;
pub mod sidon;

pub use balance::{assemble_v, balance, finalize_dyck, layout, unbalance_sum, BalanceResult, LayoutParams};
pub use bits::{
    complement, composition_of, is_dyck, rds_profile, weight, BinaryString, Composition, RdsProfile,
};
pub use codec::{
    build_codebook, decode, decode_with, encode, recover_subset_from_xor, recover_sum, Codebook, Decoded,
    IntegerSumVector, Stage, SubsetSearch,
};
pub use error::{Error, Result};
pub use multiset::{
    full_multiset, mix, prefix_multiset, separate_prefixes, suffix_multiset, CompositionMultiset,
    MixtureDocument, Separated,
};
pub use oracle::{
    confusable, is_h_code, is_h_mc_code, max_mc_code_size, ConfusabilityWitness, Flavor, MC_LIMIT,
};
pub use sidon::{
    build_bh_codebook, pad_to_square, padded_len, verify_bh, verify_bh_with_limit, BhVerdict, SidonSet,
    BRUTE_FORCE_LIMIT,
};
