//! Randomized structural properties: field axioms, polynomial ring laws,
//! criterion agreement on arbitrary value tables, and evaluation invariances.

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use dickson4::{
    hermite_check, is_pp_direct, rdp4_eval_recursive, rdp_coeffs_exact, rdp_eval_param, DensePoly,
    Field, FieldCtx, FieldSpec,
};

fn fq(p: u64, e: usize) -> FieldCtx {
    FieldCtx::new(p, e, None).unwrap()
}

fn poly_from(ctx: &FieldCtx, idx: &[u64]) -> DensePoly<dickson4::FqElem> {
    DensePoly::from_coeffs(ctx, idx.iter().map(|&i| ctx.element(i)).collect())
}

fn mod_p(c: &BigInt, p: u64) -> u64 {
    let pp = BigInt::from(p);
    u64::try_from(((c % &pp) + &pp) % &pp).unwrap()
}

proptest! {
    #[test]
    fn field_axioms_f49(ai in 0..49u64, bi in 0..49u64, ci in 0..49u64) {
        let f = fq(7, 2);
        let (a, b, c) = (f.element(ai), f.element(bi), f.element(ci));
        prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(
            f.mul(&a, &f.add(&b, &c)),
            f.add(&f.mul(&a, &b), &f.mul(&a, &c))
        );
        prop_assert_eq!(f.sub(&a, &a), f.zero());
        if !f.is_zero(&a) {
            let inv = f.inv(&a).unwrap();
            prop_assert_eq!(f.mul(&a, &inv), f.one());
        }
        // Frobenius is additive in characteristic 7
        prop_assert_eq!(
            f.pow_u64(&f.add(&a, &b), 7),
            f.add(&f.pow_u64(&a, 7), &f.pow_u64(&b, 7))
        );
    }

    #[test]
    fn poly_ring_laws_f25(
        fi in prop::collection::vec(0..25u64, 0..8),
        gi in prop::collection::vec(0..25u64, 0..8),
        hi in prop::collection::vec(0..25u64, 0..8),
        xi in 0..25u64,
    ) {
        let ctx = fq(5, 2);
        let (f, g, h) = (poly_from(&ctx, &fi), poly_from(&ctx, &gi), poly_from(&ctx, &hi));
        let x = ctx.element(xi);
        prop_assert_eq!(f.mul(&ctx, &g), g.mul(&ctx, &f));
        prop_assert_eq!(
            f.add(&ctx, &g).mul(&ctx, &h),
            f.mul(&ctx, &h).add(&ctx, &g.mul(&ctx, &h))
        );
        prop_assert_eq!(
            f.mul(&ctx, &g).eval(&ctx, &x),
            ctx.mul(&f.eval(&ctx, &x), &g.eval(&ctx, &x))
        );
        prop_assert_eq!(
            f.add(&ctx, &g).eval(&ctx, &x),
            ctx.add(&f.eval(&ctx, &x), &g.eval(&ctx, &x))
        );
    }

    /// The power-sum criterion agrees with the direct bijection check on
    /// arbitrary value tables, not only on tables this crate produces.
    #[test]
    fn hermite_matches_direct_on_any_table(vals in prop::collection::vec(0..7u64, 7)) {
        let ctx = fq(7, 1);
        let table: Vec<_> = vals.iter().map(|&v| ctx.element(v)).collect();
        prop_assert_eq!(
            hermite_check(&ctx, &table).unwrap(),
            is_pp_direct(&ctx, &table).unwrap()
        );
    }

    /// Coefficients live in F_p, so evaluation commutes with Frobenius.
    #[test]
    fn evaluation_commutes_with_frobenius(n in 0..200u64, xi in 0..25u64) {
        let ctx = fq(5, 2);
        let x = ctx.element(xi);
        let nb = BigUint::from(n);
        let lhs = rdp4_eval_recursive(&ctx, &nb, &ctx.pow_u64(&x, 5));
        let rhs = ctx.pow_u64(&rdp4_eval_recursive(&ctx, &nb, &x), 5);
        prop_assert_eq!(lhs, rhs);
    }

    /// Two-parameter evaluation against the integer-coefficient route and
    /// the homogeneity law D(a, x) = a^n D(1, x / a^2).
    #[test]
    fn parameter_scaling_matches_integer_route(
        n in 0..120u64,
        ai in 0..25u64,
        xi in 0..25u64,
    ) {
        let ctx = fq(5, 2);
        let a = ctx.element(ai);
        let x = ctx.element(xi);
        prop_assume!(!ctx.is_zero(&a));
        let coeffs: Vec<_> = rdp_coeffs_exact(n, 3)
            .unwrap()
            .iter()
            .map(|c| ctx.from_u64(mod_p(c, 5)))
            .collect();
        let defn = DensePoly::from_coeffs(&ctx, coeffs);
        let a2_inv = ctx.inv(&ctx.mul(&a, &a)).unwrap();
        let expected = ctx.mul(
            &ctx.pow_u64(&a, n),
            &defn.eval(&ctx, &ctx.mul(&x, &a2_inv)),
        );
        prop_assert_eq!(rdp_eval_param(&ctx, &BigUint::from(n), &a, &x), expected);
    }

    #[test]
    fn series_division_inverts_multiplication(
        num in prop::collection::vec(0..13u64, 1..6),
        den in prop::collection::vec(0..13u64, 1..6),
        lead in 1..13u64,
    ) {
        let ctx = fq(13, 1);
        let numerator = poly_from(&ctx, &num);
        let mut den_idx = den.clone();
        den_idx[0] = lead; // invertible constant term
        let denominator = poly_from(&ctx, &den_idx);
        let quotient = DensePoly::series_div(&ctx, &numerator, &denominator, 24);
        let back = quotient.mul(&ctx, &denominator);
        for i in 0..=24 {
            prop_assert_eq!(back.coeff(&ctx, i), numerator.coeff(&ctx, i));
        }
    }

    #[test]
    fn element_index_round_trip(i in 0..2197u64) {
        let ctx = fq(13, 3);
        prop_assert_eq!(ctx.index_of(&ctx.element(i)), i);
    }
}

#[test]
fn field_spec_round_trip() {
    for (p, e) in [(5u64, 1usize), (7, 2), (11, 1), (13, 3), (5, 2)] {
        let ctx = fq(p, e);
        let printed = ctx.spec_string();
        let spec: FieldSpec = printed.parse().unwrap();
        assert_eq!(format!("{spec}"), printed);
        let rebuilt = FieldCtx::new(spec.p, spec.e, spec.modulus.as_deref()).unwrap();
        assert_eq!(rebuilt.spec_string(), printed);
    }
}
