//! Permutation analysis for x -> D_{n,3}(1, x) on F_q: the direct bijection
//! check, the power-sum criterion, the index-residue necessary condition, the
//! two-to-one characterization on the extended point set F_q union V, and the
//! auxiliary integer polynomial f_n with 2^n D_{n,3}(1, x) = f_n(1 - 4x).

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

use crate::binomial::binom_row;
use crate::dickson::{
    closed_form_at_y, rdp4_eval_recursive, rdp4_special_value, rdp4_value_table, DEFAULT_N_MAX,
};
use crate::error::{Error, Result};
use crate::field::{Field, FieldCtx, FqElem};
use crate::poly::DensePoly;
use crate::quad::QuadExtCtx;

/// Every criterion evaluated at one index n, plus the raw value table.
#[derive(Debug, Clone)]
pub struct PpReport {
    pub q: u64,
    pub n: u64,
    pub direct: bool,
    pub hermite: bool,
    pub mod6: bool,
    pub two_to_one: bool,
    /// Bijectivity of the auxiliary polynomial f_n; absent for odd n.
    pub aux_equiv: Option<bool>,
    pub values: Vec<FqElem>,
}

/// Bijectivity by sorting: the table permutes F_q iff its sorted index list
/// has no repeats.
pub fn is_pp_direct(ctx: &FieldCtx, values: &[FqElem]) -> Result<bool> {
    let q = ctx.order();
    if values.len() as u64 != q {
        return Err(Error::LengthMismatch {
            expected: q,
            got: values.len(),
        });
    }
    let mut idx: Vec<u64> = values.iter().map(|v| ctx.index_of(v)).collect();
    idx.sort_unstable();
    Ok(idx.windows(2).all(|w| w[0] != w[1]))
}

/// Power-sum criterion: the table is a permutation iff
/// sum_a f(a)^i = 0 for 0 <= i <= q-2 and -1 for i = q-1 (with 0^0 = 1).
pub fn hermite_check(ctx: &FieldCtx, values: &[FqElem]) -> Result<bool> {
    let q = ctx.order();
    if values.len() as u64 != q {
        return Err(Error::LengthMismatch {
            expected: q,
            got: values.len(),
        });
    }
    let minus_one = ctx.int(-1);
    let mut powers = vec![ctx.one(); values.len()];
    for i in 0..q {
        let mut sum = ctx.zero();
        for pw in &powers {
            sum = ctx.add(&sum, pw);
        }
        let expect = if i == q - 1 { &minus_one } else { &ctx.zero() };
        if sum != *expect {
            return Ok(false);
        }
        if i + 1 < q {
            for (pw, v) in powers.iter_mut().zip(values) {
                *pw = ctx.mul(pw, v);
            }
        }
    }
    Ok(true)
}

/// Necessary residue condition: D_{n,3}(1, x) can only permute F_q when
/// n = 2 (mod 6).
pub fn necessary_mod6(n: &BigUint) -> bool {
    (n % 6u32).to_u64() == Some(2)
}

/// Closed values at the two fixed sample points: D_{n,3}(1, 1) depends only
/// on n mod 6 through (1, 2, 1, -1, -2, -1) starting at n = 1 (and -1 at
/// n = 0); D_{n,3}(1, -2) is 1 for odd n and -1 for even n.
pub fn fixed_point_tables(ctx: &FieldCtx, n: &BigUint) -> (FqElem, FqElem) {
    let r = (n % 6u32).to_u64().expect("fits");
    let at_one = match r {
        1 | 3 => ctx.one(),
        2 => ctx.int(2),
        5 => ctx.int(-2),
        _ => ctx.int(-1),
    };
    let at_minus_two = if n.bit(0) { ctx.one() } else { ctx.int(-1) };
    (at_one, at_minus_two)
}

/// Outcome of the two-to-one characterization over S = (F_q union V) minus
/// {1/2}: fiber sizes, avoidance of the fixed value (3n - 1)/2^n, and the
/// distinct image in F_q.
#[derive(Debug, Clone)]
pub struct TwoToOneDetail {
    pub verdict: bool,
    pub fibers_ok: bool,
    pub misses_special: bool,
    pub image: Vec<FqElem>,
}

/// Evaluate the closed fraction f on all 2q - 2 points of S and classify:
/// x -> D_{n,3}(1, x) permutes F_q iff f is exactly two-to-one on S and
/// never takes the value (3n - 1)/2^n there. When it does permute, the image
/// of f on S is F_q minus that one value.
pub fn two_to_one_detail(quad: &QuadExtCtx, n: u64) -> Result<TwoToOneDetail> {
    let base = quad.base();
    let q = base.order();
    let half = base.half();
    let mut points = Vec::with_capacity(2 * q as usize - 2);
    for x in base.elements() {
        if x != half {
            points.push(quad.embed(&x));
        }
    }
    let half_emb = quad.embed(&half);
    for z in quad.v_set() {
        if z != half_emb {
            points.push(z);
        }
    }
    if points.len() as u64 != 2 * q - 2 {
        return Err(Error::InternalInconsistency(format!(
            "extended point set has size {} instead of {}",
            points.len(),
            2 * q - 2
        )));
    }

    let special = rdp4_special_value(base, &BigUint::from(n));
    let special_idx = quad.index_of(&quad.embed(&special));

    let mut image_idx: Vec<u64> = Vec::with_capacity(points.len());
    let mut image = Vec::new();
    for y in &points {
        let v = closed_form_at_y(quad, n, y);
        let proj = quad.project(&v).ok_or_else(|| {
            Error::InternalInconsistency(format!("two-to-one image left the base field at n={n}"))
        })?;
        image_idx.push(quad.index_of(&v));
        image.push(proj);
    }
    image_idx.sort_unstable();
    let mut fibers_ok = true;
    let mut i = 0;
    while i < image_idx.len() {
        let mut j = i;
        while j < image_idx.len() && image_idx[j] == image_idx[i] {
            j += 1;
        }
        if j - i != 2 {
            fibers_ok = false;
            break;
        }
        i = j;
    }
    let misses_special = !image_idx.contains(&special_idx);

    image.sort();
    image.dedup();
    Ok(TwoToOneDetail {
        verdict: fibers_ok && misses_special,
        fibers_ok,
        misses_special,
        image,
    })
}

pub fn two_to_one_characterization(quad: &QuadExtCtx, n: u64) -> Result<bool> {
    Ok(two_to_one_detail(quad, n)?.verdict)
}

/// The auxiliary integer polynomial f_n (n even): leading coefficient -1 in
/// degree n/2, and coefficient 3 C(n, 2j+1) - C(n, 2j) on x^j below that.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxPoly {
    pub n: u64,
    pub coeffs: Vec<BigInt>,
}

impl AuxPoly {
    /// Reduction mod p as a polynomial over the field.
    pub fn reduced(&self, ctx: &FieldCtx) -> DensePoly<FqElem> {
        let p = BigInt::from(ctx.p());
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let r = ((c % &p) + &p) % &p;
                ctx.from_u64(r.to_u64().expect("residue fits"))
            })
            .collect();
        DensePoly::from_coeffs(ctx, coeffs)
    }
}

pub fn aux_poly(n: u64) -> Result<AuxPoly> {
    aux_poly_capped(n, DEFAULT_N_MAX)
}

pub fn aux_poly_capped(n: u64, n_max: u64) -> Result<AuxPoly> {
    if n % 2 == 1 {
        return Err(Error::OddDegree(n));
    }
    if n > n_max {
        return Err(Error::DegreeTooLarge { n, max: n_max });
    }
    let row = binom_row(n);
    let mut coeffs = Vec::with_capacity(n as usize / 2 + 1);
    for j in 0..(n / 2) as usize {
        let c = BigInt::from(3u32) * BigInt::from(row[2 * j + 1].clone())
            - BigInt::from(row[2 * j].clone());
        coeffs.push(c);
    }
    coeffs.push(BigInt::from(-1));
    Ok(AuxPoly { n, coeffs })
}

/// For even n, check the scaling identity 2^n D_{n,3}(1, x) = f_n(1 - 4x)
/// pointwise over F_q, and whether f_n itself permutes F_q (which happens
/// exactly when D_{n,3}(1, .) does, since x -> 1 - 4x is a bijection and
/// 2^n != 0).
pub fn aux_identity_and_equiv(ctx: &FieldCtx, n: u64) -> Result<(bool, bool)> {
    let aux = aux_poly_capped(n, n.max(DEFAULT_N_MAX))?;
    let poly = aux.reduced(ctx);
    let two_pow = ctx.pow_u64(&ctx.from_u64(2), n);
    let nbig = BigUint::from(n);
    let four = ctx.from_u64(4);
    let mut identity = true;
    let mut aux_values = Vec::with_capacity(ctx.order() as usize);
    for x in ctx.elements() {
        let arg = ctx.sub(&ctx.one(), &ctx.mul(&four, &x));
        let lhs = poly.eval(ctx, &arg);
        let rhs = ctx.mul(&two_pow, &rdp4_eval_recursive(ctx, &nbig, &x));
        if lhs != rhs {
            identity = false;
        }
        aux_values.push(poly.eval(ctx, &x));
    }
    let equiv = is_pp_direct(ctx, &aux_values)?;
    Ok((identity, equiv))
}

/// Run every criterion for each n in [n_lo, n_hi] and cross-check them
/// against each other; any disagreement aborts the scan with a diagnostic.
pub fn pp_scan(quad: &QuadExtCtx, n_lo: u64, n_hi: u64) -> Result<Vec<PpReport>> {
    let ctx = quad.base();
    let q = ctx.order();
    let mut out = Vec::with_capacity((n_hi.saturating_sub(n_lo) + 1) as usize);
    for n in n_lo..=n_hi {
        let nbig = BigUint::from(n);
        let values = rdp4_value_table(ctx, &nbig);
        let direct = is_pp_direct(ctx, &values)?;
        let hermite = hermite_check(ctx, &values)?;
        let mod6 = necessary_mod6(&nbig);
        let two_to_one = if n == 0 {
            direct
        } else {
            two_to_one_characterization(quad, n)?
        };
        let aux_equiv = if n % 2 == 0 {
            let (identity, equiv) = aux_identity_and_equiv(ctx, n)?;
            if !identity {
                return Err(Error::InternalInconsistency(format!(
                    "auxiliary scaling identity failed at q={q}, n={n}"
                )));
            }
            Some(equiv)
        } else {
            None
        };

        let disagree =
            |left_name: &'static str, left: bool, right_name: &'static str, right: bool| {
                Error::CriterionDisagreement {
                    q,
                    n,
                    left_name,
                    left,
                    right_name,
                    right,
                }
            };
        if hermite != direct {
            return Err(disagree("direct", direct, "power-sum", hermite));
        }
        if two_to_one != direct {
            return Err(disagree("direct", direct, "two-to-one", two_to_one));
        }
        if let Some(equiv) = aux_equiv {
            if equiv != direct {
                return Err(disagree("direct", direct, "auxiliary-permutation", equiv));
            }
        }
        if direct && !mod6 {
            return Err(disagree("direct", direct, "index-residue", mod6));
        }

        out.push(PpReport {
            q,
            n,
            direct,
            hermite,
            mod6,
            two_to_one,
            aux_equiv,
            values,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn f5() -> FieldCtx {
        FieldCtx::new(5, 1, None).unwrap()
    }

    fn table(ctx: &FieldCtx, vals: &[u64]) -> Vec<FqElem> {
        vals.iter().map(|&v| ctx.from_u64(v)).collect()
    }

    #[test]
    fn direct_check_basics() {
        let f = f5();
        assert!(is_pp_direct(&f, &table(&f, &[0, 1, 2, 3, 4])).unwrap());
        assert!(is_pp_direct(&f, &table(&f, &[3, 0, 4, 1, 2])).unwrap());
        assert!(!is_pp_direct(&f, &table(&f, &[1, 2, 1, 4, 3])).unwrap());
        assert!(matches!(
            is_pp_direct(&f, &table(&f, &[1, 2])),
            Err(Error::LengthMismatch {
                expected: 5,
                got: 2
            })
        ));
    }

    #[test]
    fn power_sum_check_matches_direct() {
        let f = f5();
        assert!(hermite_check(&f, &table(&f, &[0, 1, 2, 3, 4])).unwrap());
        assert!(!hermite_check(&f, &table(&f, &[1, 2, 1, 4, 3])).unwrap());
        for n in 0u64..=30 {
            let t = rdp4_value_table(&f, &big(n));
            assert_eq!(
                hermite_check(&f, &t).unwrap(),
                is_pp_direct(&f, &t).unwrap(),
                "n={n}"
            );
        }
        let f25 = FieldCtx::new(5, 2, None).unwrap();
        for n in 0u64..=30 {
            let t = rdp4_value_table(&f25, &big(n));
            assert_eq!(
                hermite_check(&f25, &t).unwrap(),
                is_pp_direct(&f25, &t).unwrap(),
                "q=25, n={n}"
            );
        }
    }

    #[test]
    fn index_residue_condition() {
        assert!(necessary_mod6(&big(2)));
        assert!(necessary_mod6(&big(8)));
        assert!(necessary_mod6(&big(2 + 6 * 1_000_000)));
        assert!(!necessary_mod6(&big(0)));
        assert!(!necessary_mod6(&big(3)));
        assert!(!necessary_mod6(&big(5)));
    }

    #[test]
    fn fixed_point_values_match_recursion() {
        for (p, e) in [(5u64, 1usize), (7, 1), (5, 2)] {
            let f = FieldCtx::new(p, e, None).unwrap();
            let one = f.one();
            let minus_two = f.int(-2);
            for n in 0u64..=100 {
                let (at_one, at_m2) = fixed_point_tables(&f, &big(n));
                assert_eq!(at_one, rdp4_eval_recursive(&f, &big(n), &one), "n={n}");
                assert_eq!(at_m2, rdp4_eval_recursive(&f, &big(n), &minus_two), "n={n}");
            }
        }
        let f = f5();
        assert_eq!(fixed_point_tables(&f, &big(0)), (f.int(-1), f.int(-1)));
        assert_eq!(fixed_point_tables(&f, &big(2)), (f.int(2), f.int(-1)));
        assert_eq!(fixed_point_tables(&f, &big(5)), (f.int(-2), f.one()));
    }

    #[test]
    fn two_to_one_examples_over_f5() {
        let f = f5();
        let ext = QuadExtCtx::new(&f);
        let d2 = two_to_one_detail(&ext, 2).unwrap();
        assert!(d2.verdict && d2.fibers_ok && d2.misses_special);
        // image = F_5 minus (3*2 - 1)/2^2 = 0
        assert_eq!(d2.image, table(&f, &[1, 2, 3, 4]));
        let d3 = two_to_one_detail(&ext, 3).unwrap();
        assert!(!d3.verdict);
        let d8 = two_to_one_detail(&ext, 8).unwrap();
        assert!(!d8.verdict);
    }

    #[test]
    fn two_to_one_agrees_with_direct() {
        for p in [5u64, 7] {
            let f = FieldCtx::new(p, 1, None).unwrap();
            let ext = QuadExtCtx::new(&f);
            for n in 0u64..=(p * p - 1) {
                let t = rdp4_value_table(&f, &big(n));
                assert_eq!(
                    two_to_one_detail(&ext, n).unwrap().verdict,
                    is_pp_direct(&f, &t).unwrap(),
                    "p={p}, n={n}"
                );
            }
        }
    }

    #[test]
    fn aux_poly_examples() {
        let ints = |v: &[i64]| -> Vec<BigInt> { v.iter().map(|&c| BigInt::from(c)).collect() };
        assert_eq!(aux_poly(0).unwrap().coeffs, ints(&[-1]));
        assert_eq!(aux_poly(2).unwrap().coeffs, ints(&[5, -1]));
        assert_eq!(aux_poly(4).unwrap().coeffs, ints(&[11, 6, -1]));
        assert!(matches!(aux_poly(7), Err(Error::OddDegree(7))));
        assert!(matches!(aux_poly(514), Err(Error::DegreeTooLarge { .. })));
        assert!(aux_poly_capped(514, 1024).is_ok());
        // constant term 3n - 1
        for n in (2u64..=512).step_by(2) {
            let aux = aux_poly(n).unwrap();
            assert_eq!(aux.coeffs[0], BigInt::from(3 * n - 1), "n={n}");
            assert_eq!(*aux.coeffs.last().unwrap(), BigInt::from(-1), "n={n}");
        }
    }

    #[test]
    fn aux_coefficient_integer_identity() {
        // (3n - 8j - 1) C(n+1, 2j+1) = (n+1) (3 C(n, 2j+1) - C(n, 2j))
        for n in (0u64..=512).step_by(4) {
            let rowp = binom_row(n + 1);
            let row = binom_row(n);
            for j in 0..=(n / 2) {
                let lhs = BigInt::from(3 * (n as i128) - 8 * (j as i128) - 1)
                    * BigInt::from(rowp[(2 * j + 1) as usize].clone());
                let c2jp1 = if 2 * j < n {
                    BigInt::from(row[(2 * j + 1) as usize].clone())
                } else {
                    BigInt::from(0)
                };
                let rhs = BigInt::from(n + 1)
                    * (BigInt::from(3u32) * c2jp1 - BigInt::from(row[(2 * j) as usize].clone()));
                assert_eq!(lhs, rhs, "n={n}, j={j}");
            }
        }
    }

    #[test]
    fn aux_identity_and_equivalence_over_f5() {
        let f = f5();
        for n in [2u64, 4, 8, 12, 20] {
            let (identity, equiv) = aux_identity_and_equiv(&f, n).unwrap();
            assert!(identity, "n={n}");
            let t = rdp4_value_table(&f, &big(n));
            assert_eq!(equiv, is_pp_direct(&f, &t).unwrap(), "n={n}");
        }
        assert!(matches!(
            aux_identity_and_equiv(&f, 3),
            Err(Error::OddDegree(3))
        ));
    }

    #[test]
    fn scan_over_f5_full_period() {
        let f = f5();
        let ext = QuadExtCtx::new(&f);
        let reports = pp_scan(&ext, 0, 24).unwrap();
        assert_eq!(reports.len(), 25);
        for r in &reports {
            assert_eq!(r.q, 5);
            assert_eq!(r.hermite, r.direct);
            assert_eq!(r.two_to_one, r.direct);
            if r.n % 2 == 0 {
                assert_eq!(r.aux_equiv, Some(r.direct));
            } else {
                assert_eq!(r.aux_equiv, None);
            }
            if r.direct {
                assert_eq!(r.n % 6, 2, "permutation outside the n = 2 mod 6 class");
            }
        }
        assert!(reports[2].direct);
        assert!(!reports[8].direct);
        assert!(!reports[0].direct);
    }
}
