//! Dense `2n × 2n` matrices (`n ∈ {1, 2}`) over GF(2^r), the two
//! membership tests for O⁺(2n,q), and the Dickson invariant.
//!
//! Block convention: `w = [[A, B], [C, D]]` with `n × n` blocks. A matrix
//! is in O⁺(2n,q) iff `ᵗA·C` and `ᵗB·D` are alternating (zero diagonal,
//! symmetric) and `ᵗA·D + ᵗC·B = 1`, equivalently iff it preserves the
//! hyperbolic form `θ⁺(x) = Σ_{i<n} x_i x_{n+i}`.

use core::fmt;

use crate::error::{Error, Result};
use crate::gf2r::{FieldCtx, FieldElement};

const MAX_DIM: usize = 4;

/// A `2n × 2n` matrix, row-major. Ordering is lexicographic on entries,
/// which is also the order of the packed encodings.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    n: u8,
    entries: [FieldElement; MAX_DIM * MAX_DIM],
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dim();
        write!(f, "[")?;
        for i in 0..d {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..d {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:x}", self.get(i, j).0)?;
            }
        }
        write!(f, "]")
    }
}

/// Bits per packed entry: 4 up to GF(16), 8 up to GF(256), else 16.
pub fn packing_width(q: u32) -> u32 {
    match q {
        0..=16 => 4,
        17..=256 => 8,
        _ => 16,
    }
}

impl GroupElement {
    fn check_n(n: usize) -> Result<()> {
        if n == 1 || n == 2 {
            Ok(())
        } else {
            Err(Error::Precondition(alloc::format!("block size n = {n}, expected 1 or 2")))
        }
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::check_n(n)?;
        Ok(GroupElement { n: n as u8, entries: [FieldElement::ZERO; 16] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zero(n)?;
        for i in 0..2 * n {
            m.set(i, i, FieldElement::ONE);
        }
        Ok(m)
    }

    /// From `(2n)²` row-major entries.
    pub fn from_entries(n: usize, entries: &[FieldElement]) -> Result<Self> {
        let mut m = Self::zero(n)?;
        let d = 2 * n;
        if entries.len() != d * d {
            return Err(Error::Precondition(alloc::format!(
                "expected {} entries for a {d}×{d} matrix, got {}",
                d * d,
                entries.len()
            )));
        }
        for (k, &e) in entries.iter().enumerate() {
            m.set(k / d, k % d, e);
        }
        Ok(m)
    }

    /// Builds `[[A, B], [C, D]]` from four `n × n` row-major blocks.
    pub fn from_blocks(
        n: usize,
        a: &[FieldElement],
        b: &[FieldElement],
        c: &[FieldElement],
        d: &[FieldElement],
    ) -> Result<Self> {
        let mut m = Self::zero(n)?;
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, a[i * n + j]);
                m.set(i, n + j, b[i * n + j]);
                m.set(n + i, j, c[i * n + j]);
                m.set(n + i, n + j, d[i * n + j]);
            }
        }
        Ok(m)
    }

    /// `σ_r⁺`: swaps `e_i ↔ e_{n+i}` for `i < r`, fixes the rest.
    pub fn sigma(n: usize, r: usize) -> Result<Self> {
        let mut m = Self::identity(n)?;
        for i in 0..r.min(n) {
            m.set(i, i, FieldElement::ZERO);
            m.set(n + i, n + i, FieldElement::ZERO);
            m.set(i, n + i, FieldElement::ONE);
            m.set(n + i, i, FieldElement::ONE);
        }
        Ok(m)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn dim(&self) -> usize {
        2 * self.n as usize
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * MAX_DIM + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * MAX_DIM + j] = v;
    }

    pub fn mul(&self, ctx: &FieldCtx, rhs: &GroupElement) -> GroupElement {
        debug_assert_eq!(self.n, rhs.n);
        let d = self.dim();
        let mut out = GroupElement { n: self.n, entries: [FieldElement::ZERO; 16] };
        for i in 0..d {
            for j in 0..d {
                let mut acc = FieldElement::ZERO;
                for k in 0..d {
                    acc = ctx.add(acc, ctx.mul(self.get(i, k), rhs.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn trace(&self, ctx: &FieldCtx) -> FieldElement {
        (0..self.dim()).fold(FieldElement::ZERO, |s, i| ctx.add(s, self.get(i, i)))
    }

    /// `w·e_j`.
    pub fn column(&self, j: usize) -> [FieldElement; MAX_DIM] {
        let mut col = [FieldElement::ZERO; MAX_DIM];
        for (i, slot) in col.iter_mut().enumerate().take(self.dim()) {
            *slot = self.get(i, j);
        }
        col
    }

    /// Packs entries row-major, first entry in the most significant slot.
    pub fn pack(&self, width: u32) -> Result<u64> {
        let d = self.dim();
        if (d * d) as u32 * width > 64 {
            return Err(Error::Precondition(alloc::format!(
                "{d}×{d} matrix does not fit in 64 bits at {width} bits per entry"
            )));
        }
        let mut bits = 0u64;
        for i in 0..d {
            for j in 0..d {
                bits = (bits << width) | self.get(i, j).0 as u64;
            }
        }
        Ok(bits)
    }

    pub fn unpack(n: usize, width: u32, bits: u64) -> Result<Self> {
        let mut m = Self::zero(n)?;
        let d = m.dim();
        let mask = (1u64 << width) - 1;
        for k in 0..d * d {
            let shift = (d * d - 1 - k) as u32 * width;
            m.set(k / d, k % d, FieldElement(((bits >> shift) & mask) as u16));
        }
        Ok(m)
    }
}

/// `(ᵗX·Y)_{ij}` for the blocks in column strips `x0`, `y0` and row strips
/// `rx`, `ry` of `w`.
fn block_gram(
    ctx: &FieldCtx,
    w: &GroupElement,
    (rx, x0): (usize, usize),
    (ry, y0): (usize, usize),
    i: usize,
    j: usize,
) -> FieldElement {
    let n = w.n();
    (0..n).fold(FieldElement::ZERO, |s, k| {
        ctx.add(s, ctx.mul(w.get(rx + k, x0 + i), w.get(ry + k, y0 + j)))
    })
}

fn is_alternating_gram(ctx: &FieldCtx, w: &GroupElement, x: (usize, usize), y: (usize, usize)) -> bool {
    let n = w.n();
    for i in 0..n {
        if !block_gram(ctx, w, x, y, i, i).is_zero() {
            return false;
        }
        for j in i + 1..n {
            if block_gram(ctx, w, x, y, i, j) != block_gram(ctx, w, x, y, j, i) {
                return false;
            }
        }
    }
    true
}

/// Block-condition membership test for O⁺(2n,q).
pub fn is_o_plus_member(ctx: &FieldCtx, w: &GroupElement) -> bool {
    let n = w.n();
    let a = (0, 0);
    let b = (0, n);
    let c = (n, 0);
    let d = (n, n);
    if !is_alternating_gram(ctx, w, a, c) || !is_alternating_gram(ctx, w, b, d) {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            let v = ctx.add(block_gram(ctx, w, a, d, i, j), block_gram(ctx, w, c, b, i, j));
            let want = if i == j { FieldElement::ONE } else { FieldElement::ZERO };
            if v != want {
                return false;
            }
        }
    }
    true
}

/// `θ⁺(x) = Σ_{i<n} x_i x_{n+i}`.
pub fn theta_plus(ctx: &FieldCtx, x: &[FieldElement], n: usize) -> Result<FieldElement> {
    if x.len() != 2 * n {
        return Err(Error::Precondition(alloc::format!(
            "vector of length {} for a form on dimension {}",
            x.len(),
            2 * n
        )));
    }
    Ok((0..n).fold(FieldElement::ZERO, |s, i| ctx.add(s, ctx.mul(x[i], x[n + i]))))
}

/// Polar form `θ⁺(x+y) + θ⁺(x) + θ⁺(y) = Σ x_i y_{n+i} + x_{n+i} y_i`.
fn polar(ctx: &FieldCtx, x: &[FieldElement], y: &[FieldElement], n: usize) -> FieldElement {
    (0..n).fold(FieldElement::ZERO, |s, i| {
        ctx.add(s, ctx.add(ctx.mul(x[i], y[n + i]), ctx.mul(x[n + i], y[i])))
    })
}

/// Membership by preservation of `θ⁺` on the standard basis and of its
/// polar form on basis pairs.
pub fn membership_via_form(ctx: &FieldCtx, w: &GroupElement) -> bool {
    let n = w.n();
    let d = w.dim();
    let cols: [[FieldElement; MAX_DIM]; MAX_DIM] = core::array::from_fn(|j| w.column(j));
    for col in cols.iter().take(d) {
        // θ⁺(e_i) = 0 for every basis vector
        if !theta_plus(ctx, &col[..d], n).expect("dimension matches").is_zero() {
            return false;
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            let want = if j == i + n { FieldElement::ONE } else { FieldElement::ZERO };
            if polar(ctx, &cols[i][..d], &cols[j][..d], n) != want {
                return false;
            }
        }
    }
    true
}

/// `Tr(B·ᵗC)` as a field element.
pub fn dickson_value(ctx: &FieldCtx, w: &GroupElement) -> FieldElement {
    let n = w.n();
    let mut acc = FieldElement::ZERO;
    for i in 0..n {
        for k in 0..n {
            acc = ctx.add(acc, ctx.mul(w.get(i, n + k), w.get(n + i, k)));
        }
    }
    acc
}

/// Dickson invariant `δ⁺(w) = Tr(B·ᵗC) ∈ F_2`.
pub fn dickson(ctx: &FieldCtx, w: &GroupElement) -> Result<u8> {
    if !is_o_plus_member(ctx, w) {
        return Err(Error::Domain("Dickson invariant of a non-member of O⁺(2n,q)"));
    }
    match dickson_value(ctx, w).0 {
        0 => Ok(0),
        1 => Ok(1),
        v => Err(Error::Consistency(alloc::format!(
            "Tr(B·ᵗC) = {v:#x} is not in F_2 for {w:?}"
        ))),
    }
}

/// `rank(1 + w) mod 2`, the classical characteristic-2 Dickson invariant.
pub fn rank_parity(ctx: &FieldCtx, w: &GroupElement) -> u8 {
    let d = w.dim();
    let mut m = [[FieldElement::ZERO; MAX_DIM]; MAX_DIM];
    for (i, row) in m.iter_mut().enumerate().take(d) {
        for (j, slot) in row.iter_mut().enumerate().take(d) {
            let one = if i == j { FieldElement::ONE } else { FieldElement::ZERO };
            *slot = ctx.add(w.get(i, j), one);
        }
    }
    let mut rank = 0;
    for col in 0..d {
        let Some(p) = (rank..d).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(p, rank);
        let inv = ctx.inv_nonzero(m[rank][col]);
        for r in 0..d {
            if r != rank && !m[r][col].is_zero() {
                let f = ctx.mul(m[r][col], inv);
                for c in 0..d {
                    let v = ctx.mul(f, m[rank][c]);
                    m[r][c] = ctx.add(m[r][c], v);
                }
            }
        }
        rank += 1;
    }
    (rank % 2) as u8
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn fe(v: u16) -> FieldElement {
        FieldElement(v)
    }

    fn random_matrices(ctx: &FieldCtx, n: usize, count: usize, seed: u64) -> Vec<GroupElement> {
        let mut s = seed;
        let d = 2 * n;
        (0..count)
            .map(|_| {
                let e: Vec<FieldElement> = (0..d * d)
                    .map(|_| {
                        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        fe(((s >> 33) % ctx.q() as u64) as u16)
                    })
                    .collect();
                GroupElement::from_entries(n, &e).unwrap()
            })
            .collect()
    }

    #[test]
    fn identity_and_sigma() {
        let f = FieldCtx::new(2).unwrap();
        for n in 1..=2 {
            let id = GroupElement::identity(n).unwrap();
            assert!(is_o_plus_member(&f, &id));
            assert!(membership_via_form(&f, &id));
            assert_eq!(dickson(&f, &id).unwrap(), 0);
            for r in 0..=n {
                let s = GroupElement::sigma(n, r).unwrap();
                assert!(is_o_plus_member(&f, &s));
                assert_eq!(dickson(&f, &s).unwrap() as usize, r % 2);
                assert_eq!(rank_parity(&f, &s) as usize, r % 2);
            }
        }
    }

    #[test]
    fn antidiagonal_has_odd_dickson() {
        let f = FieldCtx::new(3).unwrap();
        for b in f.nonzero() {
            let w = GroupElement::from_entries(1, &[fe(0), b, f.inv_nonzero(b), fe(0)]).unwrap();
            assert!(is_o_plus_member(&f, &w));
            assert_eq!(dickson(&f, &w).unwrap(), 1);
        }
    }

    #[test]
    fn theta_examples() {
        let f = FieldCtx::new(4).unwrap();
        let e1 = [fe(1), fe(0), fe(0), fe(0)];
        assert_eq!(theta_plus(&f, &e1, 2).unwrap(), fe(0));
        let e1_e3 = [fe(1), fe(0), fe(1), fe(0)];
        assert_eq!(theta_plus(&f, &e1_e3, 2).unwrap(), fe(1));
        assert!(theta_plus(&f, &e1, 1).is_err());
    }

    #[test]
    fn non_member_dickson_is_domain_error() {
        let f = FieldCtx::new(2).unwrap();
        let w = GroupElement::from_entries(1, &[fe(1), fe(1), fe(0), fe(1)]).unwrap();
        assert!(!is_o_plus_member(&f, &w));
        assert!(matches!(dickson(&f, &w), Err(Error::Domain(_))));
    }

    #[test]
    fn predicates_agree_exhaustively_n1() {
        for r in 1..=3 {
            let f = FieldCtx::new(r).unwrap();
            let q = f.q() as u16;
            let mut members = 0;
            for code in 0..(q as u32).pow(4) {
                let e = [
                    fe((code % q as u32) as u16),
                    fe((code / q as u32 % q as u32) as u16),
                    fe((code / (q as u32).pow(2) % q as u32) as u16),
                    fe((code / (q as u32).pow(3)) as u16),
                ];
                let w = GroupElement::from_entries(1, &e).unwrap();
                let m = is_o_plus_member(&f, &w);
                assert_eq!(m, membership_via_form(&f, &w));
                if m {
                    members += 1;
                    assert_eq!(dickson(&f, &w).unwrap(), rank_parity(&f, &w));
                }
            }
            assert_eq!(members, 2 * (q as u32 - 1));
        }
    }

    #[test]
    fn predicates_agree_on_random_n2() {
        let f = FieldCtx::new(2).unwrap();
        for w in random_matrices(&f, 2, 20000, 7) {
            assert_eq!(is_o_plus_member(&f, &w), membership_via_form(&f, &w));
        }
    }

    #[test]
    fn packing_roundtrip_and_order() {
        let f = FieldCtx::new(4).unwrap();
        let ms = random_matrices(&f, 2, 200, 11);
        for m in &ms {
            let p = m.pack(4).unwrap();
            assert_eq!(GroupElement::unpack(2, 4, p).unwrap(), *m);
        }
        for pair in ms.windows(2) {
            assert_eq!(pair[0].cmp(&pair[1]), pair[0].pack(4).unwrap().cmp(&pair[1].pack(4).unwrap()));
        }
        assert!(ms[0].pack(8).is_err());
        assert_eq!(packing_width(16), 4);
        assert_eq!(packing_width(32), 8);
        assert_eq!(packing_width(512), 16);
    }
}
