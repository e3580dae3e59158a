//! Kloosterman sums over GF(2^r) and the identities they satisfy.
//!
//! Three flavours are provided:
//!
//! * `K(ψ; a) = Σ_{α≠0} ψ(α + a α^{-1})` with `ψ(x) = λ(s·x)`;
//! * the m-dimensional sum `K_m(λ; a)`, summed either directly from its
//!   definition or by peeling one variable off at a time,
//!   `K_m(a) = Σ_{α≠0} λ(α) K_{m−1}(a/α)` with `K_0(b) = λ(b)`;
//! * the matrix sum `K_{GL(t,q)}(ψ; a) = Σ_{w∈GL(t,q)} ψ(Tr w + a Tr w^{-1})`,
//!   by recursion on `t`, by its closed form, or by enumerating `GL(t,q)`.
//!
//! Single sums are bounded by `(m+1) q^{m/2}` and are returned as `i64`;
//! matrix sums grow with `t` and are big integers.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combin::pow_big;
use crate::error::{check_budget, Error, Result};
use crate::gf2r::{FieldCtx, FieldElement};

/// Largest `m·(q−1)²` accepted by the peeled `K_m` evaluation.
pub const KM_TABLE_BUDGET: u128 = 1 << 30;
/// Largest `(q−1)^m` accepted by the definitional `K_m` sum.
pub const KM_DIRECT_BUDGET: u128 = 1 << 28;
/// Largest `|GL(t,q)|` accepted by the enumerating `K_GL` route.
pub const GL_BRUTEFORCE_BUDGET: u128 = 10_000_000;
/// Largest `h·q²·(q−1)` accepted by [`salie_counts`].
pub const SALIE_BUDGET: u128 = 1 << 31;

/// `K(ψ; a)` with `ψ(x) = λ(scale·x)`.
pub fn kloosterman(ctx: &FieldCtx, a: FieldElement, scale: FieldElement) -> Result<i64> {
    if a.is_zero() {
        return Err(Error::Domain("Kloosterman sum needs a nonzero argument"));
    }
    if scale.is_zero() {
        return Err(Error::Domain("trivial additive character"));
    }
    Ok(ctx
        .nonzero()
        .map(|al| {
            let x = ctx.add(al, ctx.div_nonzero(a, al));
            ctx.lambda(ctx.mul(scale, x)) as i64
        })
        .sum())
}

/// `K(λ; a)`.
pub fn kloosterman_canonical(ctx: &FieldCtx, a: FieldElement) -> Result<i64> {
    kloosterman(ctx, a, FieldElement::ONE)
}

/// All `K(λ; a)` for `a ≠ 0` together with the sorted value multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KloostermanTable {
    q: u32,
    values: Vec<i64>,
    summary: Vec<(i64, u64)>,
}

impl KloostermanTable {
    /// Wraps precomputed values indexed by element bits; index 0 is ignored.
    pub fn from_values(q: u32, mut values: Vec<i64>) -> Result<Self> {
        if values.len() != q as usize {
            return Err(Error::Precondition(alloc::format!(
                "expected {q} table slots, got {}",
                values.len()
            )));
        }
        values[0] = 0;
        let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
        for &v in &values[1..] {
            *counts.entry(v).or_default() += 1;
        }
        Ok(KloostermanTable { q, values, summary: counts.into_iter().collect() })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// `K(λ; a)`; `a` must be nonzero.
    pub fn value(&self, a: FieldElement) -> i64 {
        debug_assert!(!a.is_zero());
        self.values[a.index()]
    }

    /// Raw slots, index = element bits, slot 0 unused.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// `(t, multiplicity)` in ascending `t`.
    pub fn summary(&self) -> &[(i64, u64)] {
        &self.summary
    }

    /// Whether every value obeys `|t| < 2√q`, i.e. `t² < 4q`.
    pub fn within_weil_bound(&self) -> bool {
        self.summary.iter().all(|&(t, _)| (t * t) < 4 * self.q as i64)
    }
}

/// Tabulates `K(λ; a)` over `F_q^*`.
pub fn kloosterman_table(ctx: &FieldCtx) -> KloostermanTable {
    let mut values = vec![0i64; ctx.q() as usize];
    for a in ctx.nonzero() {
        values[a.index()] = kloosterman_row(ctx, a);
    }
    KloostermanTable::from_values(ctx.q(), values).expect("table has q slots")
}

/// `K(λ; a)` for one nonzero `a`, shared with parallel table builders.
pub fn kloosterman_row(ctx: &FieldCtx, a: FieldElement) -> i64 {
    let mut s = 0i64;
    for al in ctx.nonzero() {
        s += ctx.lambda(ctx.add(al, ctx.div_nonzero(a, al))) as i64;
    }
    s
}

/// `[K_m(λ; a)]_a`, index = element bits, slot 0 unused.
///
/// Built by peeling: `K_m(a) = Σ_{α≠0} λ(α) K_{m−1}(a/α)`, `K_0(b) = λ(b)`.
pub fn kloosterman_m_table(ctx: &FieldCtx, m: u32) -> Result<Vec<i64>> {
    if m == 0 {
        return Err(Error::Precondition("K_m needs m >= 1".into()));
    }
    let n = (ctx.q() - 1) as u128;
    check_budget("K_m table", m as u128 * n * n, KM_TABLE_BUDGET)?;
    let mut prev: Vec<i64> = ctx.elements().map(|b| ctx.lambda(b) as i64).collect();
    prev[0] = 0;
    for _ in 0..m {
        let mut next = vec![0i64; ctx.q() as usize];
        for a in ctx.nonzero() {
            let mut s = 0i64;
            for al in ctx.nonzero() {
                s += ctx.lambda(al) as i64 * prev[ctx.div_nonzero(a, al).index()];
            }
            next[a.index()] = s;
        }
        prev = next;
    }
    Ok(prev)
}

/// `K_m(λ; a)` by the peeled evaluation.
pub fn kloosterman_m(ctx: &FieldCtx, m: u32, a: FieldElement) -> Result<i64> {
    if a.is_zero() {
        return Err(Error::Domain("Kloosterman sum needs a nonzero argument"));
    }
    if m == 1 {
        return kloosterman_canonical(ctx, a);
    }
    Ok(kloosterman_m_table(ctx, m)?[a.index()])
}

/// `K_m(λ; a)` summed term by term over `(F_q^*)^m`.
pub fn kloosterman_m_direct(ctx: &FieldCtx, m: u32, a: FieldElement) -> Result<i64> {
    if a.is_zero() {
        return Err(Error::Domain("Kloosterman sum needs a nonzero argument"));
    }
    if m == 0 {
        return Err(Error::Precondition("K_m needs m >= 1".into()));
    }
    let n = (ctx.q() - 1) as u128;
    check_budget("direct K_m", n.saturating_pow(m), KM_DIRECT_BUDGET)?;
    // odometer over discrete logs of (α_1, …, α_m)
    let order = ctx.q() - 1;
    let mut logs = vec![0u32; m as usize];
    let mut total = 0i64;
    loop {
        let mut sum = FieldElement::ZERO;
        let mut log_prod = 0u64;
        for &l in &logs {
            sum = ctx.add(sum, ctx.exp(l));
            log_prod += l as u64;
        }
        let inv_prod = ctx.exp(((order as u64 - log_prod % order as u64) % order as u64) as u32);
        total += ctx.lambda(ctx.add(sum, ctx.mul(a, inv_prod))) as i64;
        let mut i = 0;
        loop {
            if i == logs.len() {
                return Ok(total);
            }
            logs[i] += 1;
            if logs[i] < order {
                break;
            }
            logs[i] = 0;
            i += 1;
        }
    }
}

/// Evaluation route for [`kloosterman_gl`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlMethod {
    Recursive,
    Explicit,
    BruteForce,
}

/// `K_{GL(t,q)}(λ; a)`.
pub fn kloosterman_gl(ctx: &FieldCtx, t: u32, a: FieldElement, method: GlMethod) -> Result<BigInt> {
    kloosterman_gl_scaled(ctx, t, a, FieldElement::ONE, method)
}

/// `K_{GL(t,q)}(ψ; a)` with `ψ(x) = λ(scale·x)`.
pub fn kloosterman_gl_scaled(
    ctx: &FieldCtx,
    t: u32,
    a: FieldElement,
    scale: FieldElement,
    method: GlMethod,
) -> Result<BigInt> {
    let q = ctx.q() as u64;
    match method {
        GlMethod::Recursive => Ok(gl_recursive(q, t, kloosterman(ctx, a, scale)?)),
        GlMethod::Explicit => Ok(gl_explicit(q, t, kloosterman(ctx, a, scale)?)),
        GlMethod::BruteForce => gl_bruteforce(ctx, t, a, scale),
    }
}

/// The three-term recursion in `t`, seeded with `K_GL(0) = 1`, `K_GL(1) = K`.
pub fn gl_recursive(q: u64, t: u32, k: i64) -> BigInt {
    let k = BigInt::from(k);
    let mut prev = BigInt::one();
    if t == 0 {
        return prev;
    }
    let mut cur = k.clone();
    for s in 2..=t as u64 {
        let qs1 = BigInt::from(pow_big(q, s - 1));
        let next = &qs1 * &cur * &k + BigInt::from(pow_big(q, 2 * s - 2)) * (&qs1 - 1) * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Closed form in powers of `K`:
/// `q^{(t−2)(t+1)/2} Σ_{l=1}^{⌊(t+2)/2⌋} q^l K^{t+2−2l} Σ Π_{ν<l} (q^{j_ν−2ν} − 1)`
/// over `2l−1 <= j_{l−1} <= … <= j_1 <= t+1`.
pub fn gl_explicit(q: u64, t: u32, k: i64) -> BigInt {
    if t == 0 {
        return BigInt::one();
    }
    let t = t as i64;
    let k = BigInt::from(k);
    let mut total = BigInt::zero();
    for l in 1..=(t + 2) / 2 {
        let inner = nested_product_sum(q, t, l);
        // (t−2)(t+1)/2 + l >= 0 for every t >= 1, l >= 1
        let e = ((t - 2) * (t + 1) / 2 + l) as u64;
        total += BigInt::from(pow_big(q, e)) * num_traits::pow(k.clone(), (t + 2 - 2 * l) as usize) * inner;
    }
    total
}

/// `Σ Π_{ν=1}^{l−1} (q^{j_ν − 2ν} − 1)` over non-increasing chains
/// `t+1 >= j_1 >= … >= j_{l−1} >= 2l−1`; 1 when `l = 1`.
fn nested_product_sum(q: u64, t: i64, l: i64) -> BigInt {
    let lo = 2 * l - 1;
    let hi = t + 1;
    if l == 1 {
        return BigInt::one();
    }
    if lo > hi {
        return BigInt::zero();
    }
    // acc[j] = weighted count of chains whose latest entry is j
    let width = (hi - lo + 1) as usize;
    let mut acc = vec![BigInt::zero(); width];
    for nu in 1..l {
        let mut next = vec![BigInt::zero(); width];
        let mut suffix = BigInt::zero();
        for idx in (0..width).rev() {
            let j = lo + idx as i64;
            if nu == 1 {
                suffix = BigInt::one();
            } else {
                suffix += &acc[idx];
            }
            let factor = BigInt::from(pow_big(q, (j - 2 * nu) as u64)) - 1;
            next[idx] = &suffix * factor;
        }
        acc = next;
    }
    acc.into_iter().sum()
}

/// Enumerates `GL(t,q)` and sums `ψ(Tr w + a Tr w^{-1})`.
fn gl_bruteforce(ctx: &FieldCtx, t: u32, a: FieldElement, scale: FieldElement) -> Result<BigInt> {
    if a.is_zero() || scale.is_zero() {
        return Err(Error::Domain("K_GL needs nonzero a and a nontrivial character"));
    }
    if t == 0 {
        return Ok(BigInt::one());
    }
    let q = ctx.q() as u64;
    let order = crate::combin::gl_order(t as u64, q);
    let order_u128: u128 = order.try_into().unwrap_or(u128::MAX);
    check_budget("GL(t,q) enumeration", order_u128, GL_BRUTEFORCE_BUDGET)?;
    let n = (t * t) as usize;
    let mut digits = vec![0u32; n];
    let mut m = vec![FieldElement::ZERO; n];
    let mut total = 0i64;
    loop {
        for (slot, &d) in m.iter_mut().zip(&digits) {
            *slot = FieldElement(d as u16);
        }
        if let Some(inv_trace) = inverse_trace(ctx, &m, t as usize) {
            let tr = (0..t as usize).fold(FieldElement::ZERO, |s, i| ctx.add(s, m[i * t as usize + i]));
            total += ctx.lambda(ctx.mul(scale, ctx.add(tr, ctx.mul(a, inv_trace)))) as i64;
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(BigInt::from(total));
            }
            digits[i] += 1;
            if digits[i] < ctx.q() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Trace of the inverse of a `t × t` row-major matrix, or `None` if singular.
fn inverse_trace(ctx: &FieldCtx, m: &[FieldElement], t: usize) -> Option<FieldElement> {
    let w = 2 * t;
    let mut aug = vec![FieldElement::ZERO; t * w];
    for i in 0..t {
        aug[i * w..i * w + t].copy_from_slice(&m[i * t..i * t + t]);
        aug[i * w + t + i] = FieldElement::ONE;
    }
    for col in 0..t {
        let pivot = (col..t).find(|&r| !aug[r * w + col].is_zero())?;
        if pivot != col {
            for c in 0..w {
                aug.swap(pivot * w + c, col * w + c);
            }
        }
        let inv = ctx.inv_nonzero(aug[col * w + col]);
        for c in 0..w {
            aug[col * w + c] = ctx.mul(aug[col * w + c], inv);
        }
        for r in 0..t {
            let f = aug[r * w + col];
            if r != col && !f.is_zero() {
                for c in 0..w {
                    let v = ctx.mul(f, aug[col * w + c]);
                    aug[r * w + c] = ctx.add(aug[r * w + c], v);
                }
            }
        }
    }
    Some((0..t).fold(FieldElement::ZERO, |s, i| ctx.add(s, aug[i * w + t + i])))
}

/// Kronecker class number `H(d)`: the number of reduced positive-definite
/// forms `ax² + bxy + cy²` of discriminant `d`, primitive or not.
pub fn class_number_kronecker(d: i64) -> Result<u64> {
    if d >= 0 {
        return Err(Error::Domain("class number needs a negative discriminant"));
    }
    if d.rem_euclid(4) > 1 {
        return Err(Error::Domain("discriminant must be 0 or 1 mod 4"));
    }
    let n = -d;
    let mut count = 0u64;
    let mut a = 1i64;
    // reduced forms satisfy 3a² <= |d|
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    Ok(count)
}

/// Multiplicity of one attained (or predicted) Kloosterman value `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueSetRow {
    pub t: i64,
    pub multiplicity: u64,
    /// `H(t² − 4q)`.
    pub class_number_4q: u64,
    /// `H(t² − q)` when `t² − q` is a valid negative discriminant.
    pub class_number_q: Option<u64>,
}

/// Value set `{t : |t| < 2√q, t ≡ −1 mod 4}` for `q = 2^r`.
pub fn predicted_value_set(q: u32) -> Vec<i64> {
    let q = q as i64;
    (-2 * q..=2 * q).filter(|&t| t * t < 4 * q && t.rem_euclid(4) == 3).collect()
}

/// Tabulates empirical multiplicities alongside both class-number readings.
pub fn value_set_report(table: &KloostermanTable) -> Vec<ValueSetRow> {
    let q = table.q() as i64;
    let mut ts: Vec<i64> = predicted_value_set(table.q());
    for &(t, _) in table.summary() {
        if !ts.contains(&t) {
            ts.push(t);
        }
    }
    ts.sort_unstable();
    ts.into_iter()
        .map(|t| {
            let multiplicity = table.summary().iter().find(|p| p.0 == t).map_or(0, |p| p.1);
            ValueSetRow {
                t,
                multiplicity,
                class_number_4q: class_number_kronecker(t * t - 4 * q).unwrap_or(0),
                class_number_q: class_number_kronecker(t * t - q).ok(),
            }
        })
        .collect()
}

/// Counts for the Salié identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SalieCounts {
    pub h: u32,
    /// `#{α ∈ (F_q^*)^h : Σα = 1 = Σα^{-1}}`.
    pub m_h: u128,
    /// `#{α ∈ (F_q^*)^h : Σα = 0 = Σα^{-1}}`.
    pub a_h: u128,
    /// `m_{h−1}`, with `m_0 = 0`.
    pub m_prev: u128,
}

/// `M_h`, `A_h` (and `M_{h−1}`) by a dynamic program over the pair
/// `(Σα, Σα^{-1})`.
pub fn salie_counts(ctx: &FieldCtx, h: u32) -> Result<SalieCounts> {
    if h == 0 {
        return Err(Error::Precondition("Salié counts need h >= 1".into()));
    }
    let q = ctx.q() as usize;
    check_budget("Salié counts", h as u128 * (q * q * (q - 1)) as u128, SALIE_BUDGET)?;
    let overflow = || Error::Resource { what: "Salié count width", cost: u128::MAX, budget: u128::MAX };
    let mut dp = vec![0u128; q * q];
    dp[0] = 1;
    let mut m_prev = 0u128;
    for step in 0..h {
        if step > 0 {
            m_prev = dp[q + 1];
        }
        let mut next = vec![0u128; q * q];
        for (state, &count) in dp.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let (s, t) = (state / q, state % q);
            for al in ctx.nonzero() {
                let ns = s ^ al.index();
                let nt = t ^ ctx.inv_nonzero(al).index();
                let slot = &mut next[ns * q + nt];
                *slot = slot.checked_add(count).ok_or_else(overflow)?;
            }
        }
        dp = next;
    }
    Ok(SalieCounts { h, m_h: dp[q + 1], a_h: dp[0], m_prev })
}

/// `Σ_{a≠0} λ(−aβ) K_m(λ; a)` given a `K_m` table.
pub fn twisted_sum(ctx: &FieldCtx, km: &[i64], beta: FieldElement) -> i64 {
    ctx.nonzero().map(|a| ctx.lambda(ctx.mul(a, beta)) as i64 * km[a.index()]).sum()
}

/// Right-hand side `q K_{m−1}(β^{-1}) + (−1)^{m+1}` (or `(−1)^{m+1}` at β = 0),
/// with `K_0(x) = λ(x)`; `km_prev` is the `K_{m−1}` table, ignored for `m = 1`.
pub fn twisted_sum_closed_form(ctx: &FieldCtx, m: u32, km_prev: &[i64], beta: FieldElement) -> i64 {
    let sign = if m % 2 == 1 { 1 } else { -1 };
    if beta.is_zero() {
        return sign;
    }
    let bi = ctx.inv_nonzero(beta);
    let prev = if m == 1 { ctx.lambda(bi) as i64 } else { km_prev[bi.index()] };
    ctx.q() as i64 * prev + sign
}

/// `Σ_{α ∉ {0,1}} λ(β / (α² + α))`.
pub fn artin_schreier_sum(ctx: &FieldCtx, beta: FieldElement) -> i64 {
    ctx.elements()
        .filter(|&al| al.0 > 1)
        .map(|al| ctx.lambda(ctx.div_nonzero(beta, ctx.add(ctx.square(al), al))) as i64)
        .sum()
}

/// `Σ_α λ(β / (α² + α + c))`; `c` must lie outside the Artin–Schreier image.
pub fn irreducible_quadratic_sum(ctx: &FieldCtx, beta: FieldElement, c: FieldElement) -> Result<i64> {
    if ctx.trace(c) == 0 {
        return Err(Error::Precondition("x² + x + c must be irreducible (tr(c) = 1)".into()));
    }
    Ok(ctx
        .elements()
        .map(|al| ctx.lambda(ctx.div_nonzero(beta, ctx.add(ctx.add(ctx.square(al), al), c))) as i64)
        .sum())
}
