//! Closed forms: group orders, trace histograms and Gauss sums.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::{GroupKind, Variant};
use crate::combin::{gl_order, nonsingular_symmetric_count, pow_big, q_binomial};
use crate::error::{Error, Result};
use crate::expsum::{kloosterman_gl_scaled, kloosterman_table, GlMethod, KloostermanTable};
use crate::gf2r::{FieldCtx, FieldElement};

/// Largest `n` accepted by [`gauss_sum_formula`].
pub const GAUSS_FORMULA_MAX_N: u32 = 4;

/// `2q^{n²−n}(q^n − 1) Π_{j=1}^{n−1}(q^{2j} − 1)` for O⁺(2n,q); half of it
/// for SO⁺(2n,q).
pub fn group_order_formula(q: u64, n: u32, variant: Variant) -> BigUint {
    let n = n as u64;
    let mut acc = pow_big(q, n * n - n) * 2u32 * (pow_big(q, n) - 1u32);
    for j in 1..n {
        acc *= pow_big(q, 2 * j) - 1u32;
    }
    match variant {
        Variant::O => acc,
        Variant::SO => acc / 2u32,
    }
}

/// The same order as a sum over Bruhat cells, `Σ_r |P⁺|·|A_r⁺\P⁺|`.
pub fn group_order_bruhat(q: u64, n: u32, variant: Variant) -> BigUint {
    let params = GaussFormulaParams::new(q, n);
    (0..=n)
        .filter(|r| variant == Variant::O || r % 2 == 0)
        .map(|r| params.parabolic_order() * params.coset_count(r))
        .sum()
}

/// Tables of `g_k`, `s_k` and `[n r]_q` for one `(q, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussFormulaParams {
    pub n: u32,
    pub q: u64,
    /// `g_k = |GL(k,q)|`, `k = 0..=n`.
    pub gl_orders: Vec<BigUint>,
    /// `s_k`, `k = 0..=n`.
    pub symmetric_counts: Vec<BigUint>,
    /// `[n r]_q`, `r = 0..=n`.
    pub q_binomials: Vec<BigUint>,
}

impl GaussFormulaParams {
    pub fn new(q: u64, n: u32) -> Self {
        let k = 0..=n as u64;
        GaussFormulaParams {
            n,
            q,
            gl_orders: k.clone().map(|k| gl_order(k, q)).collect(),
            symmetric_counts: k.clone().map(|k| nonsingular_symmetric_count(k, q)).collect(),
            q_binomials: k.map(|r| q_binomial(n as u64, r, q)).collect(),
        }
    }

    /// `|P⁺(2n,q)| = q^{C(n,2)} g_n`.
    pub fn parabolic_order(&self) -> BigUint {
        let n = self.n as u64;
        pow_big(self.q, n * n.saturating_sub(1) / 2) * &self.gl_orders[self.n as usize]
    }

    /// `|A_r⁺| = g_r g_{n−r} q^{C(n,2)} q^{r(2n−3r+1)/2}`.
    pub fn stabilizer_order(&self, r: u32) -> BigUint {
        let (n, r64) = (self.n as i64, r as i64);
        let e = n * (n - 1) / 2 + r64 * (2 * n - 3 * r64 + 1) / 2;
        &self.gl_orders[r as usize] * &self.gl_orders[(self.n - r) as usize] * pow_big(self.q, e as u64)
    }

    /// `|A_r⁺\P⁺| = [n r]_q q^{C(r,2)}`.
    pub fn coset_count(&self, r: u32) -> BigUint {
        let r64 = r as u64;
        &self.q_binomials[r as usize] * pow_big(self.q, r64 * r64.saturating_sub(1) / 2)
    }
}

/// `Σ_{w∈G} λ(a·Tr w)` for G = O⁺(2n,q) or SO⁺(2n,q) via the Bruhat-cell
/// expansion into `K_{GL(n−r,q)}`.
pub fn gauss_sum_formula(ctx: &FieldCtx, n: u32, variant: Variant, a: FieldElement) -> Result<BigInt> {
    if n == 0 || n > GAUSS_FORMULA_MAX_N {
        return Err(Error::Precondition(format!(
            "Gauss sum formula evaluated for n in 1..={GAUSS_FORMULA_MAX_N}, got {n}"
        )));
    }
    if a.is_zero() {
        return Err(Error::Domain("Gauss sum needs a nontrivial character (a ≠ 0)"));
    }
    let q = ctx.q() as u64;
    let params = GaussFormulaParams::new(q, n);
    let (n64, lead) = (n as u64, pow_big(q, n as u64 * (n as u64 - 1) / 2));
    let mut total = BigInt::zero();
    for r in (0..=n).filter(|r| variant == Variant::O || r % 2 == 0) {
        let r64 = r as u64;
        let weight = &lead
            * &params.q_binomials[r as usize]
            * pow_big(q, (2 * r64 * n64 - r64 * r64 - r64) / 2)
            * &params.symmetric_counts[r as usize];
        let gl = kloosterman_gl_scaled(ctx, n - r, FieldElement::ONE, a, GlMethod::Recursive)?;
        total += BigInt::from(weight) * gl;
    }
    Ok(total)
}

fn histogram_overflow() -> Error {
    Error::Precondition("trace histogram count exceeds u64".into())
}

/// `N_G(β)` from the case formulas, indexed by the bits of β.
pub fn trace_histogram_formula(ctx: &FieldCtx, kind: GroupKind) -> Result<Vec<u64>> {
    match kind {
        GroupKind::So4 => trace_histogram_formula_with(ctx, kind, &kloosterman_table(ctx)),
        _ => trace_histogram_n1(ctx, kind),
    }
}

/// As [`trace_histogram_formula`], reusing a precomputed Kloosterman table.
pub fn trace_histogram_formula_with(
    ctx: &FieldCtx,
    kind: GroupKind,
    table: &KloostermanTable,
) -> Result<Vec<u64>> {
    if kind != GroupKind::So4 {
        return trace_histogram_n1(ctx, kind);
    }
    if table.q() != ctx.q() {
        return Err(Error::Precondition(format!(
            "Kloosterman table over GF({}) used for GF({})",
            table.q(),
            ctx.q()
        )));
    }
    let q = ctx.q() as i128;
    let q2 = q * q;
    let mut out = Vec::with_capacity(ctx.q() as usize);
    for beta in ctx.elements() {
        let v = if beta.is_zero() {
            q2 * q * (2 * q2 - q - 2)
        } else {
            let k = table.value(ctx.inv_nonzero(beta)) as i128;
            q2 * (q * (q + 1) * (q - 2) + k)
        };
        out.push(u64::try_from(v).map_err(|_| histogram_overflow())?);
    }
    Ok(out)
}

fn trace_histogram_n1(ctx: &FieldCtx, kind: GroupKind) -> Result<Vec<u64>> {
    let at_zero = match kind {
        GroupKind::So2 => 1,
        GroupKind::O2 => ctx.q() as u64,
        _ => {
            return Err(Error::Precondition(format!(
                "no closed-form trace histogram for {}",
                kind.name()
            )))
        }
    };
    Ok(ctx
        .elements()
        .map(|beta| {
            if beta.is_zero() {
                at_zero
            } else if ctx.trace(ctx.inv_nonzero(beta)) == 0 {
                2
            } else {
                0
            }
        })
        .collect())
}
