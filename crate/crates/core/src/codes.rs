//! The binary codes `C(G) = {u ∈ F_2^N : Σ_j u_j·Tr(g_j) = 0}` for
//! G = SO⁺(2,q), O⁺(2,q), SO⁺(4,q), their duals `{c(a)}`, and three
//! independent routes to the weight distribution.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::combin::binomial_row;
use crate::error::{check_budget, Error, Result};
use crate::expsum::{kloosterman, kloosterman_table, KloostermanTable};
use crate::gf2r::{FieldCtx, FieldElement};
use crate::ogroup::{
    o_plus_2_elements, so_plus_2_elements, trace_histogram, trace_histogram_formula_with, GroupCensus, GroupKind,
};

/// Work budget for the partial-sum dynamic program.
pub const DP_BUDGET: u128 = 1 << 31;
pub const MACWILLIAMS_MAX_LENGTH: u64 = 10_000;
/// Each half of the meet-in-the-middle enumeration has at most `2^27` subsets.
pub const BRUTE_HALF_BITS: u64 = 27;
pub const EXPLICIT_CODEWORDS_MAX_LENGTH: u64 = 24;
pub const KERNEL_BASIS_MAX_LENGTH: u64 = 1 << 14;

/// Dense vector over F_2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        let bit = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `Σ x_i y_i mod 2`.
    pub fn dot(&self, other: &BitVector) -> u8 {
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        (ones % 2) as u8
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

/// One of the three codes, described by its coordinate traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    kind: GroupKind,
    q: u32,
    r: u32,
    length: u64,
    histogram: Vec<u64>,
    coordinates: Option<Vec<u16>>,
}

impl CodeSpec {
    /// 1, 2 or 3.
    pub fn which(&self) -> u8 {
        self.kind.code_index().expect("code groups only")
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    /// `n_i(β)`, indexed by the bits of β.
    pub fn histogram(&self) -> &[u64] {
        &self.histogram
    }

    /// `(Tr g_1, …, Tr g_N)` in canonical order, when known.
    pub fn coordinates(&self) -> Option<&[u16]> {
        self.coordinates.as_deref()
    }

    fn coordinates_or_expand(&self) -> Result<Vec<u16>> {
        if let Some(c) = &self.coordinates {
            return Ok(c.clone());
        }
        check_budget("coordinate expansion", self.length as u128, 1 << 26)?;
        Ok(self
            .histogram
            .iter()
            .enumerate()
            .flat_map(|(b, &n)| core::iter::repeat_n(b as u16, n as usize))
            .collect())
    }
}

fn which_kind(which: u8) -> Result<GroupKind> {
    GroupKind::from_code_index(which)
        .ok_or_else(|| Error::Precondition(format!("code index must be 1, 2 or 3, got {which}")))
}

/// Coordinates from the census, for codes 1 and 2; the closed-form
/// histogram (no coordinates) for code 3.
pub fn build_code_spec(ctx: &FieldCtx, which: u8) -> Result<CodeSpec> {
    match which_kind(which)? {
        GroupKind::So2 => code_spec_from_census(ctx, &so_plus_2_elements(ctx)),
        GroupKind::O2 => code_spec_from_census(ctx, &o_plus_2_elements(ctx)),
        kind => {
            let histogram = trace_histogram_formula_with(ctx, kind, &kloosterman_table(ctx))?;
            Ok(CodeSpec {
                kind,
                q: ctx.q(),
                r: ctx.r(),
                length: histogram.iter().sum(),
                histogram,
                coordinates: None,
            })
        }
    }
}

/// Code 3 with known histogram, avoiding a second Kloosterman table.
pub fn build_code_spec_with_table(ctx: &FieldCtx, which: u8, table: &KloostermanTable) -> Result<CodeSpec> {
    let kind = which_kind(which)?;
    if kind != GroupKind::So4 {
        return build_code_spec(ctx, which);
    }
    let histogram = trace_histogram_formula_with(ctx, kind, table)?;
    Ok(CodeSpec { kind, q: ctx.q(), r: ctx.r(), length: histogram.iter().sum(), histogram, coordinates: None })
}

/// Coordinates in canonical census order; the histogram is checked
/// against the closed form.
pub fn code_spec_from_census(ctx: &FieldCtx, census: &GroupCensus) -> Result<CodeSpec> {
    let kind = census.kind();
    if kind.code_index().is_none() {
        return Err(Error::Precondition(format!("{} does not define one of the codes", kind.name())));
    }
    let traces = census
        .traces()
        .ok_or_else(|| Error::Precondition("census was built without stored elements".into()))?;
    let histogram = trace_histogram(census);
    let expected = match kind {
        GroupKind::So4 => trace_histogram_formula_with(ctx, kind, &kloosterman_table(ctx))?,
        _ => crate::ogroup::trace_histogram_formula(ctx, kind)?,
    };
    if histogram != expected {
        return Err(Error::Consistency(format!("{} trace histogram differs from the closed form", kind.name())));
    }
    Ok(CodeSpec {
        kind,
        q: ctx.q(),
        r: ctx.r(),
        length: census.order(),
        histogram,
        coordinates: Some(traces.to_vec()),
    })
}

/// `c(a) = (tr(a·Tr g_1), …, tr(a·Tr g_N))`.
pub fn dual_codeword(ctx: &FieldCtx, spec: &CodeSpec, a: FieldElement) -> Result<BitVector> {
    let coords = spec
        .coordinates()
        .ok_or_else(|| Error::Precondition("dual codewords need the coordinate ordering".into()))?;
    let mut v = BitVector::zeros(coords.len());
    for (i, &t) in coords.iter().enumerate() {
        if ctx.trace(ctx.mul(a, FieldElement(t))) == 1 {
            v.set(i, true);
        }
    }
    Ok(v)
}

/// `w(c(a))` from the Kloosterman sum: `(q−1−K)/2` for codes 1 and 2,
/// `q²(q⁴−q³−2q²+q+1−K²)/2` for code 3.
pub fn dual_weight(ctx: &FieldCtx, spec: &CodeSpec, a: FieldElement) -> Result<BigUint> {
    if a.is_zero() {
        return Err(Error::Domain("dual weight formula needs a ≠ 0"));
    }
    let k = kloosterman(ctx, a, FieldElement::ONE)?;
    dual_weight_from_kloosterman(spec, k)
}

fn dual_weight_from_kloosterman(spec: &CodeSpec, k: i64) -> Result<BigUint> {
    let q = BigInt::from(spec.q);
    let k = BigInt::from(k);
    let twice: BigInt = match spec.kind {
        GroupKind::So2 | GroupKind::O2 => &q - 1 - k,
        _ => {
            let q2 = &q * &q;
            &q2 * (&q2 * &q2 - &q2 * &q - &q2 * 2 + &q + 1 - &k * &k)
        }
    };
    let (w, rem) = twice.div_rem(&BigInt::from(2));
    if !rem.is_zero() || w.is_negative() {
        return Err(Error::Consistency(format!("dual weight 2w = {twice} is not a nonnegative even integer")));
    }
    Ok(w.to_biguint().expect("nonnegative"))
}

/// `w(c(a))` for every `a`, indexed by bits, with `w(c(0)) = 0`.
pub fn dual_weights(ctx: &FieldCtx, spec: &CodeSpec) -> Result<Vec<BigUint>> {
    dual_weights_with_table(spec, &kloosterman_table(ctx))
}

pub fn dual_weights_with_table(spec: &CodeSpec, table: &KloostermanTable) -> Result<Vec<BigUint>> {
    let mut out = Vec::with_capacity(spec.q as usize);
    out.push(BigUint::zero());
    for a in 1..spec.q {
        out.push(dual_weight_from_kloosterman(spec, table.value(FieldElement(a as u16)))?);
    }
    Ok(out)
}

/// `Σ_{β : tr(aβ) = 1} n(β)`.
pub fn dual_weight_from_histogram(ctx: &FieldCtx, spec: &CodeSpec, a: FieldElement) -> u64 {
    ctx.elements()
        .zip(&spec.histogram)
        .filter(|(beta, _)| ctx.trace(ctx.mul(a, *beta)) == 1)
        .map(|(_, &n)| n)
        .sum()
}

/// `C_0, …, C_M` with `M = N` when complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    length: u64,
    freqs: Vec<BigUint>,
}

impl WeightDistribution {
    pub fn new(length: u64, freqs: Vec<BigUint>) -> Result<Self> {
        if freqs.is_empty() || freqs.len() as u64 > length + 1 {
            return Err(Error::Precondition(format!(
                "{} frequencies for a code of length {length}",
                freqs.len()
            )));
        }
        Ok(WeightDistribution { length, freqs })
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn max_weight(&self) -> u64 {
        self.freqs.len() as u64 - 1
    }

    pub fn is_complete(&self) -> bool {
        self.max_weight() == self.length
    }

    pub fn freqs(&self) -> &[BigUint] {
        &self.freqs
    }

    /// `C_j`; zero beyond `N`. Panics on a truncated entry.
    pub fn get(&self, j: u64) -> BigUint {
        if j > self.length {
            return BigUint::zero();
        }
        assert!(j <= self.max_weight(), "C_{j} lies beyond the truncation at {}", self.max_weight());
        self.freqs[j as usize].clone()
    }

    pub fn total(&self) -> BigUint {
        self.freqs.iter().sum()
    }

    /// `C_j = C_{N−j}`; `None` for truncated distributions.
    pub fn is_symmetric(&self) -> Option<bool> {
        self.is_complete().then(|| self.freqs.iter().eq(self.freqs.iter().rev()))
    }

    pub fn truncated(&self, max_weight: u64) -> WeightDistribution {
        let keep = (max_weight.min(self.max_weight()) + 1) as usize;
        WeightDistribution { length: self.length, freqs: self.freqs[..keep].to_vec() }
    }

    /// Nonzero `(j, C_j)` pairs.
    pub fn nonzero(&self) -> impl Iterator<Item = (u64, &BigUint)> {
        self.freqs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j as u64, c))
    }
}

fn cap_for(length: u64, max_weight: Option<u64>) -> u64 {
    max_weight.map_or(length, |h| h.min(length))
}

/// Even and odd parts of `(1+x)^n`, truncated at degree `cap`.
fn parity_parts(n: u64, cap: u64) -> (Vec<BigUint>, Vec<BigUint>) {
    let row = binomial_row(n, cap as usize);
    let mut even = vec![BigUint::zero(); row.len()];
    let mut odd = vec![BigUint::zero(); row.len()];
    for (k, c) in row.into_iter().enumerate() {
        if k % 2 == 0 {
            even[k] = c;
        } else {
            odd[k] = c;
        }
    }
    (even, odd)
}

fn mul_trunc(acc: &mut [BigUint], a: &[BigUint], b: &[BigUint]) {
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().take(acc.len().saturating_sub(i)) {
            if !y.is_zero() {
                acc[i + j] += x * y;
            }
        }
    }
}

/// Weight distribution by the partial-sum dynamic program over the
/// coordinate histogram. Truncated at `max_weight` when given.
pub fn weight_distribution_dp(spec: &CodeSpec, max_weight: Option<u64>) -> Result<WeightDistribution> {
    let n_total = spec.length;
    let cap = cap_for(n_total, max_weight);
    let q = spec.q as usize;
    let width = cap as u128 + 1;
    let cost: u128 = spec
        .histogram
        .iter()
        .skip(1)
        .map(|&n| q as u128 * width * (n as u128).min(2 * width))
        .sum::<u128>()
        + q as u128 * width;
    check_budget("weight distribution DP", cost, DP_BUDGET)?;
    let len = cap as usize + 1;
    // dp[s][j]: words supported on processed coordinates with trace sum s
    let mut dp: Vec<Vec<BigUint>> = vec![Vec::new(); q];
    dp[0] = vec![BigUint::zero(); len];
    dp[0][0] = BigUint::one();
    for (beta, &n) in spec.histogram.iter().enumerate().skip(1) {
        if n == 0 {
            continue;
        }
        let parts = (n > 2 * width as u64).then(|| parity_parts(n, cap));
        for s in 0..q {
            let t = s ^ beta;
            if t < s || (dp[s].is_empty() && dp[t].is_empty()) {
                continue;
            }
            let mut a = core::mem::take(&mut dp[s]);
            let mut b = core::mem::take(&mut dp[t]);
            a.resize(len, BigUint::zero());
            b.resize(len, BigUint::zero());
            match &parts {
                None => {
                    let last = |p: &[BigUint]| p.iter().rposition(|x| !x.is_zero()).unwrap_or(0);
                    let mut top = last(&a).max(last(&b));
                    for _ in 0..n {
                        top = (top + 1).min(cap as usize);
                        for i in (1..=top).rev() {
                            let (lo_a, lo_b) = (a[i - 1].clone(), b[i - 1].clone());
                            a[i] += lo_b;
                            b[i] += lo_a;
                        }
                    }
                }
                Some((even, odd)) => {
                    let mut na = vec![BigUint::zero(); len];
                    let mut nb = vec![BigUint::zero(); len];
                    mul_trunc(&mut na, &a, even);
                    mul_trunc(&mut na, &b, odd);
                    mul_trunc(&mut nb, &b, even);
                    mul_trunc(&mut nb, &a, odd);
                    a = na;
                    b = nb;
                }
            }
            dp[s] = a;
            dp[t] = b;
        }
    }
    let mut out = core::mem::take(&mut dp[0]);
    let n0 = spec.histogram[0];
    if n0 > 0 {
        let row = binomial_row(n0, cap as usize);
        let mut acc = vec![BigUint::zero(); len];
        mul_trunc(&mut acc, &out, &row);
        out = acc;
    }
    WeightDistribution::new(n_total, out)
}

/// Krawtchouk values `K_j(w) = Σ_k (−1)^k C(w,k) C(N−w, j−k)`, `j ≤ cap`.
pub fn krawtchouk_row(n: u64, w: u64, cap: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(cap as usize + 1);
    row.push(BigInt::one());
    if cap >= 1 {
        row.push(BigInt::from(n as i128 - 2 * w as i128));
    }
    for j in 1..cap {
        // (j+1) K_{j+1} = (N − 2w) K_j − (N − j + 1) K_{j−1}
        let num = BigInt::from(n as i128 - 2 * w as i128) * &row[j as usize]
            - BigInt::from(n - j + 1) * &row[j as usize - 1];
        row.push(num / BigInt::from(j + 1));
    }
    row
}

/// MacWilliams transform of the dual `{c(a)}`:
/// `C_j = (1/q) Σ_a K_j(w(c(a)))`, with exactness and sign checks.
pub fn weight_distribution_macwilliams(
    ctx: &FieldCtx,
    spec: &CodeSpec,
    max_weight: Option<u64>,
) -> Result<WeightDistribution> {
    let weights = dual_weights(ctx, spec)?;
    macwilliams_from_dual_weights(spec.length, &weights, max_weight)
}

/// MacWilliams transform from a list of dual weights indexed by `a`.
pub fn macwilliams_from_dual_weights(
    length: u64,
    weights: &[BigUint],
    max_weight: Option<u64>,
) -> Result<WeightDistribution> {
    if length > MACWILLIAMS_MAX_LENGTH {
        return Err(Error::Resource {
            what: "MacWilliams transform length",
            cost: length as u128,
            budget: MACWILLIAMS_MAX_LENGTH as u128,
        });
    }
    let cap = cap_for(length, max_weight);
    let mut multiplicity: BTreeMap<u64, u64> = BTreeMap::new();
    for w in weights {
        let w = w.to_u64().filter(|&w| w <= length).ok_or_else(|| {
            Error::Consistency(format!("dual weight {w} exceeds the code length {length}"))
        })?;
        *multiplicity.entry(w).or_default() += 1;
    }
    let mut acc = vec![BigInt::zero(); cap as usize + 1];
    for (&w, &m) in &multiplicity {
        for (slot, k) in acc.iter_mut().zip(krawtchouk_row(length, w, cap)) {
            *slot += k * m;
        }
    }
    let q = BigInt::from(weights.len());
    let mut freqs = Vec::with_capacity(acc.len());
    for (j, v) in acc.into_iter().enumerate() {
        let (c, rem) = v.div_rem(&q);
        if !rem.is_zero() || c.is_negative() {
            return Err(Error::Consistency(format!("MacWilliams sum for C_{j} is {v}, not a nonnegative multiple of {q}")));
        }
        freqs.push(c.to_biguint().expect("nonnegative"));
    }
    WeightDistribution::new(length, freqs)
}

/// Gray-code walk over subsets of `coords`: counts by (trace sum, weight).
fn half_counts(coords: &[u16], q: usize) -> Vec<u64> {
    let width = coords.len() + 1;
    let mut counts = vec![0u64; q * width];
    let (mut s, mut w) = (0usize, 0usize);
    let mut mask = 0u64;
    counts[0] = 1;
    for i in 1..1u64 << coords.len() {
        let bit = i.trailing_zeros() as usize;
        mask ^= 1 << bit;
        s ^= coords[bit] as usize;
        if mask >> bit & 1 == 1 {
            w += 1;
        } else {
            w -= 1;
        }
        counts[s * width + w] += 1;
    }
    counts
}

/// Weight distribution by enumerating `F_2^N` (meet in the middle).
pub fn weight_distribution_bruteforce(spec: &CodeSpec) -> Result<WeightDistribution> {
    let n = spec.length;
    let half = n.div_ceil(2);
    if half > BRUTE_HALF_BITS {
        return Err(Error::Resource {
            what: "brute-force codeword enumeration",
            cost: 1u128 << n.min(127),
            budget: 1u128 << (2 * BRUTE_HALF_BITS),
        });
    }
    let coords = spec.coordinates_or_expand()?;
    let q = spec.q as usize;
    let (left, right) = coords.split_at(coords.len() / 2);
    let lc = half_counts(left, q);
    let rc = half_counts(right, q);
    let (lw, rw) = (left.len() + 1, right.len() + 1);
    let mut freqs = vec![0u128; n as usize + 1];
    for s in 0..q {
        for i in 0..lw {
            let x = lc[s * lw + i];
            if x == 0 {
                continue;
            }
            for j in 0..rw {
                freqs[i + j] += x as u128 * rc[s * rw + j] as u128;
            }
        }
    }
    WeightDistribution::new(n, freqs.into_iter().map(BigUint::from).collect())
}

/// Every codeword, for tiny lengths.
pub fn codewords_explicit(spec: &CodeSpec) -> Result<Vec<BitVector>> {
    if spec.length > EXPLICIT_CODEWORDS_MAX_LENGTH {
        return Err(Error::Resource {
            what: "explicit codeword list",
            cost: 1u128 << spec.length.min(127),
            budget: 1u128 << EXPLICIT_CODEWORDS_MAX_LENGTH,
        });
    }
    let coords = spec.coordinates_or_expand()?;
    let n = coords.len();
    let mut out = Vec::new();
    for u in 0..1u64 << n {
        let s = (0..n).filter(|&i| u >> i & 1 == 1).fold(0u16, |s, i| s ^ coords[i]);
        if s == 0 {
            let mut v = BitVector::zeros(n);
            for i in (0..n).filter(|&i| u >> i & 1 == 1) {
                v.set(i, true);
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// A basis of `C(G)` as the F_2-kernel of the `r × N` matrix whose
/// columns are the bit vectors of the coordinates.
pub fn code_kernel_basis(spec: &CodeSpec) -> Result<Vec<BitVector>> {
    if spec.length > KERNEL_BASIS_MAX_LENGTH {
        return Err(Error::Resource {
            what: "kernel basis length",
            cost: spec.length as u128,
            budget: KERNEL_BASIS_MAX_LENGTH as u128,
        });
    }
    let coords = spec.coordinates_or_expand()?;
    let n = coords.len();
    let mut rows: Vec<BitVector> = (0..spec.r as usize)
        .map(|b| {
            let mut v = BitVector::zeros(n);
            for (j, &c) in coords.iter().enumerate() {
                v.set(j, c >> b & 1 == 1);
            }
            v
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i].get(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let mut basis = Vec::with_capacity(n - rank);
    let mut pivot_iter = pivots.iter().peekable();
    for free in 0..n {
        if pivot_iter.peek() == Some(&&free) {
            pivot_iter.next();
            continue;
        }
        let mut v = BitVector::zeros(n);
        v.set(free, true);
        for (i, &p) in pivots.iter().enumerate() {
            if rows[i].get(free) {
                v.set(p, true);
            }
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Every `c(a)` is orthogonal to a basis of `C(G)`.
pub fn delsarte_check(ctx: &FieldCtx, spec: &CodeSpec) -> Result<bool> {
    let basis = code_kernel_basis(spec)?;
    for a in ctx.elements() {
        let c = dual_codeword(ctx, spec, a)?;
        if basis.iter().any(|u| u.dot(&c) != 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelReport {
    pub injective: bool,
    /// `#{a : c(a) = 0}`, including `a = 0`.
    pub kernel_size: u64,
}

impl KernelReport {
    /// F_2-dimension of the dual `{c(a)}`.
    pub fn dual_dimension(&self, r: u32) -> u32 {
        r - self.kernel_size.trailing_zeros()
    }
}

/// Kernel of `a ↦ c(a)`: those `a` with `tr(aβ) = 0` on every occurring trace.
pub fn dual_kernel_check(ctx: &FieldCtx, spec: &CodeSpec) -> KernelReport {
    let support: Vec<FieldElement> =
        ctx.elements().zip(&spec.histogram).filter(|(_, &n)| n > 0).map(|(b, _)| b).collect();
    let kernel_size =
        ctx.elements().filter(|&a| support.iter().all(|&b| ctx.trace(ctx.mul(a, b)) == 0)).count() as u64;
    KernelReport { injective: kernel_size == 1, kernel_size }
}
