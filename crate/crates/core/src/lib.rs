//! Exact arithmetic for Kloosterman sums over GF(2^r), the orthogonal groups
//! SO⁺(2,q), O⁺(2,q), SO⁺(4,q), the binary codes built from their matrix
//! traces, and recursive formulas for power moments of Kloosterman sums.
//!
//! Everything here is integer-exact. Small bounded quantities (field
//! elements, single Kloosterman sums, group orders up to 2^64) use machine
//! integers; anything that grows with a moment order or a code length is a
//! [`num_bigint::BigInt`].
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod combin;
pub mod codes;
mod error;
pub mod expsum;
pub mod gf2r;
pub mod moments;
pub mod ogroup;

pub use error::{Error, Result};
pub use gf2r::{FieldCtx, FieldElement};
