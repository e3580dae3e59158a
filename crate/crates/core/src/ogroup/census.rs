//! Element censuses of SO⁺(2,q), O⁺(2,q), SO⁺(4,q) and O⁺(4,q).
//!
//! The 4×4 groups are built by right-multiplication closure of the
//! parabolic P⁺ under generators of P⁺ together with a Weyl element
//! (σ_2⁺ for SO⁺, σ_1⁺ for O⁺). Elements are stored packed, ascending.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::hash::{BuildHasherDefault, Hasher};

use hashbrown::HashSet;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::formula::group_order_formula;
use super::matrix::{dickson, is_o_plus_member, membership_via_form, packing_width, GroupElement};
use super::GroupKind;
use crate::error::{Error, Result};
use crate::gf2r::{FieldCtx, FieldElement};

/// Largest q for which the 4×4 closure is run.
pub const CLOSURE_MAX_Q: u32 = 16;

/// Frontier discipline for the closure; every choice yields the same set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Traversal {
    #[default]
    BreadthFirst,
    DepthFirst,
    /// Breadth-first with the generator list reversed.
    ReversedGenerators,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupCensus {
    kind: GroupKind,
    q: u32,
    modulus: u32,
    width: u32,
    order: u64,
    elements: Option<Vec<u64>>,
    traces: Option<Vec<u16>>,
    histogram: Vec<u64>,
}

impl GroupCensus {
    /// Builds a census from packed elements; sorts and deduplicates them.
    pub fn from_packed(ctx: &FieldCtx, kind: GroupKind, mut elements: Vec<u64>, store: bool) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        let width = packing_width(ctx.q());
        let traces: Vec<u16> = elements.iter().map(|&p| packed_trace(p, kind.n(), width)).collect();
        let mut histogram = vec![0u64; ctx.q() as usize];
        for &t in &traces {
            let slot = histogram
                .get_mut(t as usize)
                .ok_or_else(|| Error::Precondition(format!("entry {t:#x} is not in GF({})", ctx.q())))?;
            *slot += 1;
        }
        Ok(GroupCensus {
            kind,
            q: ctx.q(),
            modulus: ctx.modulus(),
            width,
            order: elements.len() as u64,
            elements: store.then_some(elements),
            traces: store.then_some(traces),
            histogram,
        })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Bits per entry in the packed encoding.
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Sorted packed elements, if retained.
    pub fn packed(&self) -> Option<&[u64]> {
        self.elements.as_deref()
    }

    /// Per-element traces aligned with [`GroupCensus::packed`].
    pub fn traces(&self) -> Option<&[u16]> {
        self.traces.as_deref()
    }

    /// `N_G(β)` indexed by the bits of β.
    pub fn histogram(&self) -> &[u64] {
        &self.histogram
    }

    /// The i-th element `g_{i+1}` in canonical order.
    pub fn element(&self, i: usize) -> Option<GroupElement> {
        let p = *self.elements.as_ref()?.get(i)?;
        GroupElement::unpack(self.kind.n(), self.width, p).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let (n, w) = (self.kind.n(), self.width);
        self.elements
            .iter()
            .flatten()
            .map(move |&p| GroupElement::unpack(n, w, p).expect("packed census entry"))
    }

    /// Checks order, histogram total, both membership predicates on every
    /// `stride`-th element, and the Dickson invariant on SO⁺ censuses.
    pub fn verify(&self, ctx: &FieldCtx, stride: usize) -> Result<()> {
        let expected = group_order_formula(self.q as u64, self.kind.n() as u32, self.kind.variant());
        if expected.to_u64() != Some(self.order) {
            return Err(Error::Consistency(format!(
                "{} over GF({}) has {} elements, formula gives {expected}",
                self.kind.name(),
                self.q,
                self.order
            )));
        }
        if self.histogram.iter().sum::<u64>() != self.order {
            return Err(Error::Consistency("trace histogram does not sum to the order".into()));
        }
        let special = self.kind.variant() == super::Variant::SO;
        for w in self.iter().step_by(stride.max(1)) {
            let block = is_o_plus_member(ctx, &w);
            if block != membership_via_form(ctx, &w) {
                return Err(Error::Consistency(format!("membership predicates disagree on {w:?}")));
            }
            if !block {
                return Err(Error::Consistency(format!("{w:?} is not in O⁺")));
            }
            if special && dickson(ctx, &w)? != 0 {
                return Err(Error::Consistency(format!("{w:?} has Dickson invariant 1")));
            }
        }
        Ok(())
    }
}

/// Trace of a packed matrix: XOR of the diagonal entries.
pub fn packed_trace(p: u64, n: usize, width: u32) -> u16 {
    let d = 2 * n;
    let mask = (1u64 << width) - 1;
    (0..d).fold(0u16, |acc, i| {
        let k = i * d + i;
        let shift = (d * d - 1 - k) as u32 * width;
        acc ^ ((p >> shift) & mask) as u16
    })
}

/// `N_G(β)` recounted from the stored elements, or the stored histogram
/// when elements were not kept.
pub fn trace_histogram(census: &GroupCensus) -> Vec<u64> {
    match census.packed() {
        Some(elements) => {
            let mut h = vec![0u64; census.q() as usize];
            for &p in elements {
                h[packed_trace(p, census.kind().n(), census.width()) as usize] += 1;
            }
            h
        }
        None => census.histogram().to_vec(),
    }
}

/// `Σ_{w∈G} λ(a·Tr w)`, element by element when the census holds elements.
pub fn gauss_sum_enumerated(ctx: &FieldCtx, census: &GroupCensus, a: FieldElement) -> Result<BigInt> {
    if a.is_zero() {
        return Err(Error::Domain("Gauss sum needs a nontrivial character (a ≠ 0)"));
    }
    let sum: i64 = match census.traces() {
        Some(traces) => traces.iter().map(|&t| ctx.lambda(ctx.mul(a, FieldElement(t))) as i64).sum(),
        None => return Ok(gauss_sum_from_histogram(ctx, census.histogram(), a)),
    };
    Ok(BigInt::from(sum))
}

/// `Σ_β N(β)·λ(aβ)`.
pub fn gauss_sum_from_histogram(ctx: &FieldCtx, histogram: &[u64], a: FieldElement) -> BigInt {
    ctx.elements()
        .zip(histogram)
        .map(|(beta, &n)| BigInt::from(n) * ctx.lambda(ctx.mul(a, beta)))
        .sum()
}

fn diag2(ctx: &FieldCtx, a: FieldElement) -> GroupElement {
    GroupElement::from_entries(1, &[a, FieldElement::ZERO, FieldElement::ZERO, ctx.inv_nonzero(a)])
        .expect("2×2")
}

fn antidiag2(ctx: &FieldCtx, b: FieldElement) -> GroupElement {
    GroupElement::from_entries(1, &[FieldElement::ZERO, b, ctx.inv_nonzero(b), FieldElement::ZERO])
        .expect("2×2")
}

/// SO⁺(2,q) = `{diag(a, a⁻¹) : a ≠ 0}`.
pub fn so_plus_2_elements(ctx: &FieldCtx) -> GroupCensus {
    let w = packing_width(ctx.q());
    let packed = ctx.nonzero().map(|a| diag2(ctx, a).pack(w).expect("fits")).collect();
    GroupCensus::from_packed(ctx, GroupKind::So2, packed, true).expect("entries lie in the field")
}

/// O⁺(2,q) = SO⁺(2,q) ∪ `{antidiag(b, b⁻¹) : b ≠ 0}`.
pub fn o_plus_2_elements(ctx: &FieldCtx) -> GroupCensus {
    let w = packing_width(ctx.q());
    let packed = ctx
        .nonzero()
        .flat_map(|a| [diag2(ctx, a), antidiag2(ctx, a)])
        .map(|m| m.pack(w).expect("fits"))
        .collect();
    GroupCensus::from_packed(ctx, GroupKind::O2, packed, true).expect("entries lie in the field")
}

pub fn enumerate_so_plus_4(ctx: &FieldCtx, store_elements: bool) -> Result<GroupCensus> {
    enumerate_closure(ctx, GroupKind::So4, store_elements, Traversal::BreadthFirst)
}

pub fn enumerate_o_plus_4(ctx: &FieldCtx, store_elements: bool) -> Result<GroupCensus> {
    enumerate_closure(ctx, GroupKind::O4, store_elements, Traversal::BreadthFirst)
}

fn fe(v: u16) -> FieldElement {
    FieldElement(v)
}

/// P⁺(4,q) = `{[[A, AB], [0, ᵗA⁻¹]] : A ∈ GL(2,q), B = [[0,b],[b,0]]}`.
pub fn parabolic_4(ctx: &FieldCtx) -> Vec<GroupElement> {
    let q = ctx.q() as u16;
    let mut out = Vec::new();
    for code in 0..(q as u32).pow(4) {
        let a = [0, 1, 2, 3].map(|k| fe((code / (q as u32).pow(k) % q as u32) as u16));
        let det = ctx.add(ctx.mul(a[0], a[3]), ctx.mul(a[1], a[2]));
        if det.is_zero() {
            continue;
        }
        let di = ctx.inv_nonzero(det);
        let inv_t = [a[3], a[2], a[1], a[0]].map(|x| ctx.mul(di, x));
        for b in ctx.elements() {
            let ab = [ctx.mul(a[1], b), ctx.mul(a[0], b), ctx.mul(a[3], b), ctx.mul(a[2], b)];
            let zero = [FieldElement::ZERO; 4];
            out.push(GroupElement::from_blocks(2, &a, &ab, &zero, &inv_t).expect("4×4"));
        }
    }
    out
}

/// Right-multiplication generators: P⁺ generators plus the Weyl element.
fn closure_generators(ctx: &FieldCtx, kind: GroupKind) -> Vec<GroupElement> {
    let (one, zero) = (FieldElement::ONE, FieldElement::ZERO);
    let g = ctx.generator();
    let levi = |a: [FieldElement; 4]| {
        let det = ctx.add(ctx.mul(a[0], a[3]), ctx.mul(a[1], a[2]));
        let di = ctx.inv_nonzero(det);
        let inv_t = [a[3], a[2], a[1], a[0]].map(|x| ctx.mul(di, x));
        GroupElement::from_blocks(2, &a, &[zero; 4], &[zero; 4], &inv_t).expect("4×4")
    };
    let unipotent =
        GroupElement::from_blocks(2, &[one, zero, zero, one], &[zero, one, one, zero], &[zero; 4], &[one, zero, zero, one])
            .expect("4×4");
    let weyl = match kind {
        GroupKind::So4 => GroupElement::sigma(2, 2),
        _ => GroupElement::sigma(2, 1),
    }
    .expect("4×4");
    vec![
        levi([g, zero, zero, one]),
        levi([one, one, zero, one]),
        levi([one, zero, one, one]),
        unipotent,
        weyl,
    ]
}

/// `y ↦ r·y` on 16-bit rows of four 4-bit entries, for every scalar `r`.
struct NibbleMul {
    row_scale: Vec<u16>,
}

impl NibbleMul {
    fn new(ctx: &FieldCtx) -> Self {
        let q = ctx.q() as usize;
        let mut row_scale = vec![0u16; 16 << 16];
        for s in 0..q {
            for row in 0..1usize << 16 {
                let mut out = 0u16;
                for k in 0..4 {
                    let e = (row >> (12 - 4 * k)) & 0xf;
                    if e < q {
                        out |= ctx.mul(fe(s as u16), fe(e as u16)).0 << (12 - 4 * k);
                    }
                }
                row_scale[(s << 16) | row] = out;
            }
        }
        NibbleMul { row_scale }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        let rows_b = [(b >> 48) as u16, (b >> 32) as u16, (b >> 16) as u16, b as u16];
        let mut out = 0u64;
        for i in 0..4 {
            let ra = (a >> (48 - 16 * i)) as u16;
            let mut acc = 0u16;
            for (k, &rb) in rows_b.iter().enumerate() {
                let s = ((ra >> (12 - 4 * k)) & 0xf) as usize;
                acc ^= self.row_scale[(s << 16) | rb as usize];
            }
            out |= (acc as u64) << (48 - 16 * i);
        }
        out
    }
}

#[derive(Default)]
struct MixHasher(u64);

impl Hasher for MixHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_u64(&mut self, x: u64) {
        let mut z = (self.0 ^ x).wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        self.0 = z ^ (z >> 31);
    }
}

/// Closure enumeration of SO⁺(4,q) or O⁺(4,q), `q ≤ 16`.
pub fn enumerate_closure(
    ctx: &FieldCtx,
    kind: GroupKind,
    store_elements: bool,
    traversal: Traversal,
) -> Result<GroupCensus> {
    if kind.n() != 2 {
        return Err(Error::Precondition(format!("closure enumeration is for 4×4 groups, not {}", kind.name())));
    }
    if ctx.q() > CLOSURE_MAX_Q {
        let order = group_order_formula(ctx.q() as u64, 2, kind.variant());
        return Err(Error::Resource {
            what: "orthogonal group enumeration",
            cost: order.to_u128().unwrap_or(u128::MAX),
            budget: group_order_formula(CLOSURE_MAX_Q as u64, 2, kind.variant()).to_u128().unwrap_or(0),
        });
    }
    let width = packing_width(ctx.q());
    let pack = |m: &GroupElement| m.pack(width).expect("4-bit entries fit");
    let mut gens: Vec<u64> = closure_generators(ctx, kind).iter().map(pack).collect();
    if traversal == Traversal::ReversedGenerators {
        gens.reverse();
    }
    let table = NibbleMul::new(ctx);
    let capacity = group_order_formula(ctx.q() as u64, 2, kind.variant()).to_usize().unwrap_or(0);
    let mut seen: HashSet<u64, BuildHasherDefault<MixHasher>> =
        HashSet::with_capacity_and_hasher(capacity, Default::default());
    let mut frontier: Vec<u64> = Vec::new();
    for p in parabolic_4(ctx).iter().map(pack) {
        if seen.insert(p) {
            frontier.push(p);
        }
    }
    match traversal {
        Traversal::DepthFirst => {
            while let Some(x) = frontier.pop() {
                for &g in &gens {
                    let y = table.mul(x, g);
                    if seen.insert(y) {
                        frontier.push(y);
                    }
                }
            }
        }
        Traversal::BreadthFirst | Traversal::ReversedGenerators => {
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for &x in &frontier {
                    for &g in &gens {
                        let y = table.mul(x, g);
                        if seen.insert(y) {
                            next.push(y);
                        }
                    }
                }
                frontier = next;
            }
        }
    }
    drop(frontier);
    let elements: Vec<u64> = seen.into_iter().collect();
    GroupCensus::from_packed(ctx, kind, elements, store_elements)
}
