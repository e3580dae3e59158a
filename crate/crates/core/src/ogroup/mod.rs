//! Orthogonal groups O⁺(2n,q), SO⁺(2n,q) in characteristic two for
//! `n ∈ {1, 2}`: elements, censuses, trace histograms and Gauss sums.

mod census;
mod formula;
mod matrix;

pub use census::{
    enumerate_closure, enumerate_o_plus_4, enumerate_so_plus_4, gauss_sum_enumerated, gauss_sum_from_histogram,
    o_plus_2_elements, packed_trace, parabolic_4, so_plus_2_elements, trace_histogram, GroupCensus, Traversal,
    CLOSURE_MAX_Q,
};
pub use formula::{
    gauss_sum_formula, group_order_bruhat, group_order_formula, trace_histogram_formula,
    trace_histogram_formula_with, GaussFormulaParams, GAUSS_FORMULA_MAX_N,
};
pub use matrix::{
    dickson, dickson_value, is_o_plus_member, membership_via_form, packing_width, rank_parity, theta_plus,
    GroupElement,
};

/// Full orthogonal group or the kernel of the Dickson invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    O,
    SO,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    /// SO⁺(2,q), the group behind the first code.
    So2,
    /// O⁺(2,q), the second code.
    O2,
    /// SO⁺(4,q), the third code.
    So4,
    O4,
}

impl GroupKind {
    pub const ALL: [GroupKind; 4] = [GroupKind::So2, GroupKind::O2, GroupKind::So4, GroupKind::O4];

    /// Block size: matrices are `2n × 2n`.
    pub fn n(self) -> usize {
        match self {
            GroupKind::So2 | GroupKind::O2 => 1,
            GroupKind::So4 | GroupKind::O4 => 2,
        }
    }

    pub fn variant(self) -> Variant {
        match self {
            GroupKind::So2 | GroupKind::So4 => Variant::SO,
            GroupKind::O2 | GroupKind::O4 => Variant::O,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupKind::So2 => "SO+(2,q)",
            GroupKind::O2 => "O+(2,q)",
            GroupKind::So4 => "SO+(4,q)",
            GroupKind::O4 => "O+(4,q)",
        }
    }

    /// Short CLI-style name: `so2`, `o2`, `so4`, `o4`.
    pub fn slug(self) -> &'static str {
        match self {
            GroupKind::So2 => "so2",
            GroupKind::O2 => "o2",
            GroupKind::So4 => "so4",
            GroupKind::O4 => "o4",
        }
    }

    pub fn from_slug(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.slug() == s)
    }

    /// Code index 1, 2, 3 for the three groups that define codes.
    pub fn code_index(self) -> Option<u8> {
        match self {
            GroupKind::So2 => Some(1),
            GroupKind::O2 => Some(2),
            GroupKind::So4 => Some(3),
            GroupKind::O4 => None,
        }
    }

    pub fn from_code_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(GroupKind::So2),
            2 => Some(GroupKind::O2),
            3 => Some(GroupKind::So4),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2r::{FieldCtx, FieldElement};

    #[test]
    fn dickson_lands_in_f2_and_is_additive_on_random_pairs() {
        let f = FieldCtx::new(2).unwrap();
        let o = enumerate_o_plus_4(&f, true).unwrap();
        let n = o.order() as usize;
        let mut s = 0x1234_5678u64;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s % n as u64) as usize
        };
        for _ in 0..100_000 {
            let x = o.element(next()).unwrap();
            let y = o.element(next()).unwrap();
            let xy = x.mul(&f, &y);
            assert!(is_o_plus_member(&f, &xy));
            let d = dickson(&f, &xy).unwrap();
            assert_eq!(d, dickson(&f, &x).unwrap() ^ dickson(&f, &y).unwrap());
        }
        for w in o.iter() {
            let v = dickson_value(&f, &w);
            assert!(v == FieldElement::ZERO || v == FieldElement::ONE);
        }
    }

    #[test]
    fn so4_random_products_stay_in_kernel() {
        let f = FieldCtx::new(3).unwrap();
        let so = enumerate_so_plus_4(&f, true).unwrap();
        let n = so.order();
        let mut s = 99u64;
        for _ in 0..100_000 {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
            let x = so.element(((s >> 20) % n) as usize).unwrap();
            let y = so.element(((s >> 40) % n) as usize).unwrap();
            let xy = x.mul(&f, &y);
            assert_eq!(dickson(&f, &xy).unwrap(), 0);
            let p = xy.pack(so.width()).unwrap();
            assert!(so.packed().unwrap().binary_search(&p).is_ok());
        }
    }

    #[test]
    fn kind_names_roundtrip() {
        for k in GroupKind::ALL {
            assert_eq!(GroupKind::from_slug(k.slug()), Some(k));
            if let Some(i) = k.code_index() {
                assert_eq!(GroupKind::from_code_index(i), Some(k));
            }
        }
    }
}
