use alloc::string::String;

/// Errors raised by the core crate.
///
/// Variants are grouped so a caller can map them onto distinct exit codes:
/// malformed input (`InvalidDegree`, `ModulusDegree`, `ReducibleModulus`,
/// `Domain`, `Precondition`), work that exceeds a declared budget
/// (`Resource`) and internal identities that failed to hold (`Consistency`).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("field degree r = {0} is outside 1..=16")]
    InvalidDegree(u32),
    #[error("modulus {modulus:#x} has degree {found}, expected {expected}")]
    ModulusDegree { modulus: u32, expected: u32, found: u32 },
    #[error("modulus {modulus:#x} is reducible: divisible by {factor:#x}")]
    ReducibleModulus { modulus: u32, factor: u32 },
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("resource budget exceeded for {what}: cost {cost} > budget {budget}")]
    Resource { what: &'static str, cost: u128, budget: u128 },
    #[error("consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_budget(what: &'static str, cost: u128, budget: u128) -> Result<()> {
    if cost > budget {
        Err(Error::Resource { what, cost, budget })
    } else {
        Ok(())
    }
}
