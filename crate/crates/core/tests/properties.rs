use kloos_core::codes::{build_code_spec, dual_codeword, dual_kernel_check, dual_weights, weight_distribution_dp};
use kloos_core::expsum::{
    artin_schreier_sum, gl_explicit, gl_recursive, irreducible_quadratic_sum, kloosterman, kloosterman_m,
    kloosterman_m_direct, kloosterman_m_table, kloosterman_table, twisted_sum, twisted_sum_closed_form,
};
use kloos_core::moments::{pless_check, PlessInputs};
use kloos_core::ogroup::{is_o_plus_member, membership_via_form, GroupElement};
use kloos_core::{FieldCtx, FieldElement};
use proptest::prelude::*;

fn field(r: u32) -> FieldCtx {
    FieldCtx::new(r).unwrap()
}

fn elem(ctx: &FieldCtx, bits: u32) -> FieldElement {
    FieldElement((bits % ctx.q()) as u16)
}

fn nonzero(ctx: &FieldCtx, bits: u32) -> FieldElement {
    FieldElement((bits % (ctx.q() - 1) + 1) as u16)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ring_laws(r in 1u32..=12, x in any::<u32>(), y in any::<u32>(), z in any::<u32>()) {
        let f = field(r);
        let (x, y, z) = (elem(&f, x), elem(&f, y), elem(&f, z));
        prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.mul(x, y), f.mul_clmul(x, y));
        prop_assert_eq!(f.trace(f.add(x, y)), f.trace(x) ^ f.trace(y));
        prop_assert_eq!(f.trace(f.square(x)), f.trace(x));
        if !x.is_zero() {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), FieldElement::ONE);
            prop_assert_eq!(f.inv(x).unwrap(), f.inv_euclid(x).unwrap());
        }
    }

    #[test]
    fn weil_bound_and_frobenius_invariance(r in 1u32..=9, a in any::<u32>()) {
        let f = field(r);
        let a = nonzero(&f, a);
        let k = kloosterman(&f, a, FieldElement::ONE).unwrap();
        prop_assert!((k * k) as u64 <= 4 * f.q() as u64);
        if r >= 2 {
            prop_assert_eq!(k.rem_euclid(4), 3);
        }
        prop_assert_eq!(kloosterman(&f, f.square(a), FieldElement::ONE).unwrap(), k);
        prop_assert_eq!(kloosterman(&f, f.pow(a, 1 << (r - 1)), FieldElement::ONE).unwrap(), k);
    }

    #[test]
    fn carlitz_square_relation(r in 1u32..=8, a in any::<u32>()) {
        let f = field(r);
        let a = nonzero(&f, a);
        let k = kloosterman(&f, a, FieldElement::ONE).unwrap();
        prop_assert_eq!(kloosterman_m(&f, 2, a).unwrap(), k * k - f.q() as i64);
    }

    #[test]
    fn peeled_km_matches_direct(r in 1u32..=4, m in 1u32..=3, a in any::<u32>()) {
        let f = field(r);
        let a = nonzero(&f, a);
        prop_assert_eq!(kloosterman_m(&f, m, a).unwrap(), kloosterman_m_direct(&f, m, a).unwrap());
    }

    #[test]
    fn twisted_sums(r in 2u32..=5, m in 1u32..=3, beta in any::<u32>()) {
        let f = field(r);
        let beta = elem(&f, beta);
        let km = kloosterman_m_table(&f, m).unwrap();
        let prev = if m > 1 { kloosterman_m_table(&f, m - 1).unwrap() } else { Vec::new() };
        prop_assert_eq!(twisted_sum(&f, &km, beta), twisted_sum_closed_form(&f, m, &prev, beta));
    }

    #[test]
    fn artin_schreier_identities(r in 2u32..=8, beta in any::<u32>(), c in any::<u32>()) {
        let f = field(r);
        let beta = nonzero(&f, beta);
        let k = kloosterman(&f, beta, FieldElement::ONE).unwrap();
        prop_assert_eq!(artin_schreier_sum(&f, beta), k - 1);
        let c = elem(&f, c);
        if f.trace(c) == 1 {
            prop_assert_eq!(irreducible_quadratic_sum(&f, beta, c).unwrap(), -k - 1);
        } else {
            prop_assert!(irreducible_quadratic_sum(&f, beta, c).is_err());
        }
    }

    #[test]
    fn gl_recursion_equals_explicit(r in 1u32..=6, t in 0u32..=5, a in any::<u32>()) {
        let f = field(r);
        let k = kloosterman(&f, nonzero(&f, a), FieldElement::ONE).unwrap();
        prop_assert_eq!(gl_recursive(f.q() as u64, t, k), gl_explicit(f.q() as u64, t, k));
    }

    #[test]
    fn membership_predicates_agree(r in 1u32..=4, entries in proptest::collection::vec(any::<u16>(), 16)) {
        let f = field(r);
        let e: Vec<FieldElement> = entries.iter().map(|&v| elem(&f, v as u32)).collect();
        let w = GroupElement::from_entries(2, &e).unwrap();
        prop_assert_eq!(is_o_plus_member(&f, &w), membership_via_form(&f, &w));
    }

    #[test]
    fn dual_codewords_are_additive(r in 1u32..=7, which in 1u8..=2, a in any::<u32>(), b in any::<u32>()) {
        let f = field(r);
        let spec = build_code_spec(&f, which).unwrap();
        let (a, b) = (elem(&f, a), elem(&f, b));
        let mut x = dual_codeword(&f, &spec, a).unwrap();
        x.xor_assign(&dual_codeword(&f, &spec, b).unwrap());
        prop_assert_eq!(x, dual_codeword(&f, &spec, f.add(a, b)).unwrap());
    }

    #[test]
    fn pless_identity(r in 1u32..=6, which in 1u8..=3, h in 0u32..=10) {
        let f = field(r);
        let spec = build_code_spec(&f, which).unwrap();
        let dist = weight_distribution_dp(&spec, Some(h as u64)).unwrap();
        let k = dual_kernel_check(&f, &spec).dual_dimension(r);
        let rep = pless_check(&PlessInputs::new(h), &dual_weights(&f, &spec).unwrap(), &dist, k, h).unwrap();
        prop_assert!(rep.holds());
    }

    #[test]
    fn truncated_dp_is_prefix(r in 2u32..=5, which in 1u8..=2, h in 0u64..=20) {
        let f = field(r);
        let spec = build_code_spec(&f, which).unwrap();
        let full = weight_distribution_dp(&spec, None).unwrap();
        prop_assert_eq!(weight_distribution_dp(&spec, Some(h)).unwrap(), full.truncated(h));
    }
}

#[test]
fn kloosterman_table_sums_to_one() {
    // Σ_{a≠0} K(a) = MK¹ = 1
    for r in 1..=10 {
        let t = kloosterman_table(&field(r));
        assert_eq!(t.values()[1..].iter().sum::<i64>(), 1);
        assert!(t.within_weil_bound());
    }
}
