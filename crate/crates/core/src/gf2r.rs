//! Arithmetic in GF(2^r) for `1 <= r <= 16`.
//!
//! Elements are bitmasks in the polynomial basis `1, x, …, x^{r−1}` over a
//! validated irreducible modulus. Multiplication and inversion go through
//! exp/log tables built from a generator of the multiplicative group; a
//! carry-less reduce-as-you-go product and an extended-Euclid inverse are
//! kept alongside as independent routes.
//!
//! The absolute trace `tr: GF(2^r) → GF(2)` is GF(2)-linear, so it is stored
//! as a mask: `tr(x) = parity(x & trace_mask)`, where bit `i` of the mask is
//! `tr(x^i)` computed by direct Frobenius summation.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 16;

/// An element of GF(2^r) in the polynomial basis.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn bits(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

fn degree(p: u32) -> u32 {
    31 - p.leading_zeros()
}

/// Remainder of `a` modulo `b` as GF(2) polynomials.
fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Carry-less product of two field elements reduced by `modulus`.
pub fn clmul_mod(a: u32, b: u32, modulus: u32) -> u32 {
    let r = degree(modulus);
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> r & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

/// Smallest factor of degree `1..=deg/2` dividing `p`, if any.
pub fn find_factor(p: u32) -> Option<u32> {
    let d = degree(p);
    for fd in 1..=d / 2 {
        for f in (1u32 << fd)..(1u32 << (fd + 1)) {
            if poly_rem(p, f) == 0 {
                return Some(f);
            }
        }
    }
    None
}

pub fn is_irreducible(p: u32) -> bool {
    p > 1 && find_factor(p).is_none()
}

/// Lexicographically smallest irreducible polynomial of degree `r` with
/// nonzero constant term.
pub fn default_modulus(r: u32) -> Result<u32> {
    if !(1..=MAX_DEGREE).contains(&r) {
        return Err(Error::InvalidDegree(r));
    }
    ((1u32 << r) + 1..(1u32 << (r + 1)))
        .step_by(2)
        .find(|&p| is_irreducible(p))
        .ok_or(Error::InvalidDegree(r))
}

/// A concrete GF(2^r). Immutable once built; cheap to share by reference.
#[derive(Clone)]
pub struct FieldCtx {
    r: u32,
    q: u32,
    modulus: u32,
    generator: u16,
    trace_mask: u16,
    exp: Vec<u16>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("r", &self.r)
            .field("q", &self.q)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// GF(2^r) over the default modulus.
    pub fn new(r: u32) -> Result<Self> {
        let m = default_modulus(r)?;
        Self::with_modulus(r, m)
    }

    /// GF(2^r) over `modulus`, rejecting wrong degrees and reducible
    /// polynomials.
    pub fn with_modulus(r: u32, modulus: u32) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&r) {
            return Err(Error::InvalidDegree(r));
        }
        let found = if modulus == 0 { 0 } else { degree(modulus) };
        if modulus == 0 || found != r {
            return Err(Error::ModulusDegree { modulus, expected: r, found });
        }
        if let Some(factor) = find_factor(modulus) {
            return Err(Error::ReducibleModulus { modulus, factor });
        }
        let q = 1u32 << r;
        let order = q - 1;
        let generator = find_generator(q, modulus)?;
        let mut exp = vec![0u16; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i as usize] = x as u16;
            exp[(i + order) as usize] = x as u16;
            log[x as usize] = i;
            x = clmul_mod(x, generator as u32, modulus);
        }
        if x != 1 {
            return Err(Error::Consistency(alloc::format!(
                "generator {generator:#x} does not cycle back to 1"
            )));
        }
        let mut trace_mask = 0u16;
        for i in 0..r {
            if trace_direct(1 << i, r, modulus) == 1 {
                trace_mask |= 1 << i;
            }
        }
        Ok(FieldCtx { r, q, modulus, generator, trace_mask, exp, log })
    }

    #[inline]
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Field order `2^r`.
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Generator of the cyclic group of nonzero elements.
    pub fn generator(&self) -> FieldElement {
        FieldElement(self.generator)
    }

    pub fn element(&self, bits: u32) -> Result<FieldElement> {
        if bits < self.q {
            Ok(FieldElement(bits as u16))
        } else {
            Err(Error::Domain("element bits out of range for this field"))
        }
    }

    /// All `q` elements in ascending bit order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone + '_ {
        (0..self.q).map(|b| FieldElement(b as u16))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> + Clone + '_ {
        (1..self.q).map(|b| FieldElement(b as u16))
    }

    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(x.0 ^ y.0)
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.0 == 0 || y.0 == 0 {
            return FieldElement::ZERO;
        }
        let l = self.log[x.index()] + self.log[y.index()];
        FieldElement(self.exp[l as usize])
    }

    /// Product by shift-and-reduce, independent of the log tables.
    pub fn mul_clmul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(clmul_mod(x.0 as u32, y.0 as u32, self.modulus) as u16)
    }

    #[inline]
    pub fn square(&self, x: FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.0 == 0 {
            return Err(Error::Domain("inverse of zero"));
        }
        Ok(self.inv_nonzero(x))
    }

    /// Inverse of an element known to be nonzero.
    #[inline]
    pub fn inv_nonzero(&self, x: FieldElement) -> FieldElement {
        debug_assert!(x.0 != 0);
        let order = self.q - 1;
        let l = self.log[x.index()];
        FieldElement(self.exp[((order - l) % order) as usize])
    }

    /// Inverse by the extended Euclidean algorithm over GF(2)[x].
    pub fn inv_euclid(&self, x: FieldElement) -> Result<FieldElement> {
        if x.0 == 0 {
            return Err(Error::Domain("inverse of zero"));
        }
        // invariant: g_u·x ≡ u and g_v·x ≡ v (mod modulus)
        let (mut u, mut v) = (x.0 as u32, self.modulus);
        let (mut g_u, mut g_v) = (1u32, 0u32);
        while u != 1 {
            let mut shift = degree(u) as i32 - degree(v) as i32;
            if shift < 0 {
                core::mem::swap(&mut u, &mut v);
                core::mem::swap(&mut g_u, &mut g_v);
                shift = -shift;
            }
            u ^= v << shift;
            g_u ^= g_v << shift;
        }
        Ok(FieldElement(poly_rem(g_u, self.modulus) as u16))
    }

    /// `x / y` for nonzero `y`.
    #[inline]
    pub fn div_nonzero(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.0 == 0 {
            return FieldElement::ZERO;
        }
        let order = self.q - 1;
        let l = self.log[x.index()] + order - self.log[y.index()];
        FieldElement(self.exp[l as usize])
    }

    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if x.0 == 0 {
            return FieldElement::ZERO;
        }
        let order = (self.q - 1) as u64;
        let l = (self.log[x.index()] as u64 * (e % order)) % order;
        FieldElement(self.exp[l as usize])
    }

    /// Discrete logarithm base [`generator`](Self::generator).
    pub fn log(&self, x: FieldElement) -> Result<u32> {
        if x.0 == 0 {
            return Err(Error::Domain("logarithm of zero"));
        }
        Ok(self.log[x.index()])
    }

    /// `g^k` for the table generator `g`.
    #[inline]
    pub fn exp(&self, k: u32) -> FieldElement {
        FieldElement(self.exp[(k % (self.q - 1)) as usize])
    }

    /// Absolute trace to GF(2), as 0 or 1.
    #[inline]
    pub fn trace(&self, x: FieldElement) -> u8 {
        ((x.0 & self.trace_mask).count_ones() & 1) as u8
    }

    /// `x + x^2 + … + x^{2^{r−1}}` summed directly.
    pub fn trace_by_frobenius(&self, x: FieldElement) -> FieldElement {
        let mut acc = 0u16;
        let mut y = x;
        for _ in 0..self.r {
            acc ^= y.0;
            y = self.mul_clmul(y, y);
        }
        FieldElement(acc)
    }

    /// Canonical additive character `λ(x) = (−1)^{tr(x)}`.
    #[inline]
    pub fn lambda(&self, x: FieldElement) -> i32 {
        1 - 2 * self.trace(x) as i32
    }

    /// The image `{α² + α}` of the Artin–Schreier map, sorted.
    pub fn artin_schreier_image(&self) -> Vec<FieldElement> {
        let mut hit = vec![false; self.q as usize];
        for a in self.elements() {
            hit[self.add(self.square(a), a).index()] = true;
        }
        self.elements().filter(|x| hit[x.index()]).collect()
    }

    /// Number of elements with trace zero.
    pub fn trace_zero_count(&self) -> u32 {
        self.elements().filter(|&x| self.trace(x) == 0).count() as u32
    }
}

fn trace_direct(x: u32, r: u32, modulus: u32) -> u32 {
    let mut acc = 0u32;
    let mut y = x;
    for _ in 0..r {
        acc ^= y;
        y = clmul_mod(y, y, modulus);
    }
    acc
}

fn find_generator(q: u32, modulus: u32) -> Result<u16> {
    let order = q - 1;
    if order == 1 {
        return Ok(1);
    }
    let primes = prime_factors(order);
    'cand: for g in 2..q {
        for &p in &primes {
            if pow_clmul(g, order / p, modulus) == 1 {
                continue 'cand;
            }
        }
        return Ok(g as u16);
    }
    Err(Error::Consistency(alloc::string::String::from(
        "no element of full multiplicative order",
    )))
}

fn pow_clmul(mut base: u32, mut e: u32, modulus: u32) -> u32 {
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = clmul_mod(acc, base, modulus);
        }
        base = clmul_mod(base, base, modulus);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
