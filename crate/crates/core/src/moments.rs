//! Power moments `MK_m^h = Σ_{a≠0} K_m(λ; a)^h`: direct evaluation, the
//! Pless power-moment engine, and the recursions driven by the weight
//! distributions of the three codes.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::codes::WeightDistribution;
use crate::combin::{binomial, factorial, pow_big, StirlingTable};
use crate::error::{Error, Result};
use crate::expsum::{kloosterman_m_table, kloosterman_table, salie_counts};
use crate::gf2r::FieldCtx;

pub const MOMENT_BRUTE_MAX_H: u32 = 64;
pub const DEFAULT_H_MAX: u32 = 29;

/// Which recursion drives [`mk_recursive`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MomentVariant {
    /// `MK^h` from the code of SO⁺(2,q).
    A,
    /// `MK^h` from the code of O⁺(2,q).
    B,
    /// `MK_2^h` from the code of SO⁺(4,q).
    C2,
    /// `MK^{2h}` from the code of SO⁺(4,q).
    CK,
}

impl MomentVariant {
    pub const ALL: [MomentVariant; 4] = [MomentVariant::A, MomentVariant::B, MomentVariant::C2, MomentVariant::CK];

    pub fn slug(self) -> &'static str {
        match self {
            MomentVariant::A => "a",
            MomentVariant::B => "b",
            MomentVariant::C2 => "c2",
            MomentVariant::CK => "cK",
        }
    }

    pub fn from_slug(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.slug().eq_ignore_ascii_case(s))
    }

    /// Index of the code whose weights feed the recursion.
    pub fn code_index(self) -> u8 {
        match self {
            MomentVariant::A => 1,
            MomentVariant::B => 2,
            MomentVariant::C2 | MomentVariant::CK => 3,
        }
    }

    pub fn min_r(self) -> u32 {
        match self {
            MomentVariant::A | MomentVariant::B => 3,
            MomentVariant::C2 | MomentVariant::CK => 2,
        }
    }

    /// Kloosterman dimension of the resulting series.
    pub fn m(self) -> u32 {
        if self == MomentVariant::C2 {
            2
        } else {
            1
        }
    }

    /// `values[h]` is the moment of order `stride·h`.
    pub fn stride(self) -> u32 {
        if self == MomentVariant::CK {
            2
        } else {
            1
        }
    }

    /// Code length `N_i` over GF(q).
    pub fn code_length(self, q: u64) -> u64 {
        match self {
            MomentVariant::A => q - 1,
            MomentVariant::B => 2 * (q - 1),
            MomentVariant::C2 | MomentVariant::CK => q * q * (q * q - 1) * (q * q - 1),
        }
    }

    /// The shift `X` with `w(c(a)) = ½·scale·(X − moment term)`.
    fn shift(self, q: i64) -> BigInt {
        let q = BigInt::from(q);
        let (q2, q3, q4) = (&q * &q, &q * &q * &q, &q * &q * &q * &q);
        match self {
            MomentVariant::A | MomentVariant::B => q - 1,
            MomentVariant::C2 => q4 - q3 - q2 * 2 + 1,
            MomentVariant::CK => q4 - q3 - q2 * 2 + q + 1,
        }
    }
}

/// `values[h] = MK_m^{stride·h}` for `h = 0..=h_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSeries {
    pub q: u32,
    pub m: u32,
    pub stride: u32,
    pub values: Vec<BigInt>,
}

impl MomentSeries {
    pub fn h_max(&self) -> u32 {
        self.values.len() as u32 - 1
    }

    /// The sub-series of even orders, `MK^{2h}`.
    pub fn even_orders(&self) -> MomentSeries {
        MomentSeries {
            q: self.q,
            m: self.m,
            stride: 2 * self.stride,
            values: self.values.iter().step_by(2).cloned().collect(),
        }
    }
}

fn power_sums(values: &[i64], h_max: u32) -> Vec<BigInt> {
    let mut counts: alloc::collections::BTreeMap<i64, u64> = Default::default();
    for &v in values {
        *counts.entry(v).or_default() += 1;
    }
    let mut out = alloc::vec![BigInt::zero(); h_max as usize + 1];
    for (&v, &c) in &counts {
        let base = BigInt::from(v);
        let mut p = BigInt::from(c);
        for slot in out.iter_mut() {
            *slot += &p;
            p *= &base;
        }
    }
    out
}

/// `Σ_{a≠0} K_m(λ; a)^h`, `m ∈ {1, 2}`, evaluated directly.
pub fn moments_bruteforce(ctx: &FieldCtx, m: u32, h_max: u32) -> Result<MomentSeries> {
    if h_max > MOMENT_BRUTE_MAX_H {
        return Err(Error::Precondition(format!("moment order {h_max} above {MOMENT_BRUTE_MAX_H}")));
    }
    let values = match m {
        1 => kloosterman_table(ctx).values().to_vec(),
        2 => kloosterman_m_table(ctx, 2)?,
        _ => return Err(Error::Precondition(format!("moments are for m = 1 or 2, got {m}"))),
    };
    Ok(MomentSeries { q: ctx.q(), m, stride: 1, values: power_sums(&values[1..], h_max) })
}

/// Stirling numbers and factorials shared by the Pless sums.
#[derive(Debug, Clone)]
pub struct PlessInputs {
    stirling: StirlingTable,
    factorials: Vec<BigUint>,
}

impl PlessInputs {
    pub fn new(h_max: u32) -> Self {
        PlessInputs {
            stirling: StirlingTable::new(h_max as usize),
            factorials: (0..=h_max as u64).map(factorial).collect(),
        }
    }

    pub fn h_max(&self) -> u32 {
        self.stirling.h_max() as u32
    }

    /// `Σ_{j ≤ min(N,h)} (−1)^j C_j Σ_{t=j}^h t!·S(h,t)·2^{e−t}·C(N−j, N−t)`.
    fn weighted_sum(&self, dist: &WeightDistribution, h: u32, e: u32) -> BigInt {
        let n = dist.length();
        let top = n.min(h as u64);
        let mut total = BigInt::zero();
        for j in 0..=top {
            let c = dist.get(j);
            if c.is_zero() {
                continue;
            }
            let mut inner = BigUint::zero();
            for t in j..=(h as u64).min(n) {
                let s = self.stirling.get(h as usize, t as usize);
                if s.is_zero() {
                    continue;
                }
                let term = &self.factorials[t as usize] * s * binomial(n - j, t - j);
                inner += term << (e as u64 - t);
            }
            let v = BigInt::from(c * inner);
            if j % 2 == 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        total
    }
}

fn check_truncation(dist: &WeightDistribution, h: u32) -> Result<()> {
    let need = dist.length().min(h as u64);
    if dist.max_weight() < need {
        return Err(Error::Precondition(format!(
            "weight distribution truncated at {} but order {h} needs weights up to {need}",
            dist.max_weight()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlessReport {
    pub h: u32,
    /// `2^h · Σ_{c∈C^⊥} w(c)^h`.
    pub lhs: BigInt,
    /// The Pless right-hand side, also scaled by `2^h`.
    pub rhs: BigInt,
}

impl PlessReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// The Pless identity for the dual code `{c(a)}` of F_2-dimension
/// `dual_dimension`, with `dual_weights[a] = w(c(a))` over all `a ∈ F_q`.
pub fn pless_check(
    inputs: &PlessInputs,
    dual_weights: &[BigUint],
    dist: &WeightDistribution,
    dual_dimension: u32,
    h: u32,
) -> Result<PlessReport> {
    check_truncation(dist, h)?;
    if h > inputs.h_max() {
        return Err(Error::Precondition(format!("Stirling table built to {}, order {h} requested", inputs.h_max())));
    }
    // each dual codeword occurs q / 2^k times among the c(a)
    let power_sum: BigUint = dual_weights.iter().map(|w| num_traits::pow(w.clone(), h as usize)).sum();
    let scaled = BigInt::from(power_sum << (dual_dimension + h) as u64);
    let (lhs, rem) = scaled.div_rem(&BigInt::from(dual_weights.len()));
    if !rem.is_zero() {
        return Err(Error::Consistency(format!("dual weight power sum at h = {h} is not divisible by q")));
    }
    let rhs = inputs.weighted_sum(dist, h, dual_dimension + h);
    Ok(PlessReport { h, lhs, rhs })
}

/// The recursion of the chosen variant, from `MK^0 = q − 1` up to `h_max`.
pub fn mk_recursive(ctx: &FieldCtx, variant: MomentVariant, h_max: u32, dist: &WeightDistribution) -> Result<MomentSeries> {
    if ctx.r() < variant.min_r() {
        return Err(Error::Precondition(format!(
            "variant {} needs r >= {}, got r = {}",
            variant.slug(),
            variant.min_r(),
            ctx.r()
        )));
    }
    let q = ctx.q() as u64;
    let n = variant.code_length(q);
    if dist.length() != n {
        return Err(Error::Precondition(format!(
            "variant {} needs the length-{n} code, got length {}",
            variant.slug(),
            dist.length()
        )));
    }
    check_truncation(dist, h_max)?;
    let inputs = PlessInputs::new(h_max);
    let shift = variant.shift(q as i64);
    let qb = BigInt::from(q);
    let mut values: Vec<BigInt> = Vec::with_capacity(h_max as usize + 1);
    values.push(BigInt::from(q - 1));
    for h in 1..=h_max {
        let mut acc = BigInt::zero();
        let mut shift_pow = BigInt::one();
        // Σ_{l<h} (−1)^{h+l+1} C(h,l) X^{h−l} MK^l, from l = h−1 down
        for l in (0..h).rev() {
            shift_pow *= &shift;
            let term = BigInt::from(binomial(h as u64, l as u64)) * &shift_pow * &values[l as usize];
            if (h + l + 1) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let mut code_term = &qb * inputs.weighted_sum(dist, h, h);
        if h % 2 == 1 {
            code_term = -code_term;
        }
        if matches!(variant, MomentVariant::C2 | MomentVariant::CK) {
            let den = BigInt::from(pow_big(q, 2 * h as u64));
            let (quot, rem) = code_term.div_rem(&den);
            if !rem.is_zero() {
                return Err(Error::Consistency(format!("q^(1-2h) term at h = {h} is not an integer")));
            }
            code_term = quot;
        }
        values.push(acc + code_term);
    }
    Ok(MomentSeries { q: ctx.q(), m: variant.m(), stride: variant.stride(), values })
}

/// `MK^{2h} = Σ_l C(h,l) q^{h−l} MK_2^l`, from `K² = K_2 + q`.
pub fn carlitz_expand(mk2: &MomentSeries) -> Result<MomentSeries> {
    if mk2.m != 2 || mk2.stride != 1 {
        return Err(Error::Precondition("Carlitz expansion takes the MK_2^h series".into()));
    }
    let q = mk2.q as u64;
    let values = (0..=mk2.h_max() as u64)
        .map(|h| {
            (0..=h)
                .map(|l| BigInt::from(binomial(h, l) * pow_big(q, h - l)) * &mk2.values[l as usize])
                .sum()
        })
        .collect();
    Ok(MomentSeries { q: mk2.q, m: 1, stride: 2, values })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SalieRow {
    pub h: u32,
    pub moment: BigInt,
    /// `q²M_{h−1} − (q−1)^{h−1} + 2(−1)^{h−1}`.
    pub via_m: BigInt,
    /// `q²A_h/(q−1) − (q−1)^{h−1} + 2(−1)^{h−1}`.
    pub via_a: BigInt,
}

impl SalieRow {
    pub fn holds(&self) -> bool {
        self.moment == self.via_m && self.moment == self.via_a
    }
}

/// Both Salié forms of `MK^h` against direct evaluation, `h = 1..=h_max`.
pub fn salie_identity_check(ctx: &FieldCtx, h_max: u32) -> Result<Vec<SalieRow>> {
    let direct = moments_bruteforce(ctx, 1, h_max)?;
    let q = BigInt::from(ctx.q());
    let q2 = &q * &q;
    let mut rows = Vec::with_capacity(h_max as usize);
    for h in 1..=h_max {
        let counts = salie_counts(ctx, h)?;
        let sign = BigInt::from(if h % 2 == 1 { 2 } else { -2 });
        let tail = sign - num_traits::pow::<BigInt>(&q - 1, (h - 1) as usize);
        let via_m = &q2 * BigInt::from(counts.m_prev) + &tail;
        let (quot, rem) = (&q2 * BigInt::from(counts.a_h)).div_rem(&(&q - 1));
        if !rem.is_zero() {
            return Err(Error::Consistency(format!("q²A_{h} is not divisible by q − 1")));
        }
        rows.push(SalieRow { h, moment: direct.values[h as usize].clone(), via_m, via_a: quot + tail });
    }
    Ok(rows)
}

/// `MK^1 = 1` and `MK^2 = q² − q − 1`; `None` when the series is too short.
pub fn low_order_check(series: &MomentSeries) -> Option<bool> {
    if series.m != 1 || series.stride != 1 || series.values.len() < 3 {
        return None;
    }
    let q = BigInt::from(series.q);
    let want2 = &q * &q - &q - 1;
    Some(series.values[1].is_one() && series.values[2] == want2 && !series.values[0].is_negative())
}
