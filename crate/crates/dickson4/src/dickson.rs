//! Reversed Dickson polynomials D_{n,k}(a, x), centered on the fourth kind
//! k = 3, through four independent routes: exact integer coefficients, the
//! two-term recursion, the closed parametric form through y(1-y) = x, and the
//! generating function (2t - 1)/(1 - t + x t^2).
//!
//! Conventions: D_{0,k}(a, x) = 2 - k (so D_{0,3} = -1), D_{n,3}(1, x) has
//! degree floor(n/2) in x, and the recursion is
//! D_{n,3}(1, x) = D_{n-1,3}(1, x) - x * D_{n-2,3}(1, x).

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::binomial::binom_signed;
use crate::error::{Error, Result};
use crate::field::{Field, FieldCtx, FqElem};
use crate::poly::DensePoly;
use crate::quad::{Fq2Elem, QuadExtCtx};

/// Default cap for exact-coefficient expansion; binomials beyond this are
/// still exact but no longer desk-sized.
pub const DEFAULT_N_MAX: u64 = 512;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_kind(kind: u8) -> Result<()> {
    if kind > 3 {
        return Err(Error::KindOutOfRange(kind));
    }
    Ok(())
}

/// Reduce n into [1, m] for a sequence of period m on indices >= 1;
/// n = 0 maps to 0.
fn reduce_into_period(n: &BigUint, m: u64) -> u64 {
    if n.is_zero() {
        return 0;
    }
    let r = (n % m).to_u64().expect("reduced residue fits");
    if r == 0 {
        m
    } else {
        r
    }
}

pub(crate) fn bigint_mod_p(v: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((v % &m) + &m) % &m;
    r.to_u64().expect("residue fits")
}

// ---------------------------------------------------------------------------
// exact coefficients
// ---------------------------------------------------------------------------

/// Exact integer coefficients of D_{n,k}(1, x) (index = degree in x), with
/// the default degree cap.
pub fn rdp_coeffs_exact(n: u64, kind: u8) -> Result<Vec<BigInt>> {
    rdp_coeffs_exact_capped(n, kind, DEFAULT_N_MAX)
}

/// Exact integer coefficients with an explicit cap. Coefficient of x^i is
/// (-1)^i * ((n - ki)/(n - i)) * C(n-i, i), computed in the manifestly
/// integral form (-1)^i * (C(n-i, i) - (k-1) * C(n-1-i, i-1)).
pub fn rdp_coeffs_exact_capped(n: u64, kind: u8, n_max: u64) -> Result<Vec<BigInt>> {
    check_kind(kind)?;
    if n > n_max {
        return Err(Error::DegreeTooLarge { n, max: n_max });
    }
    if n == 0 {
        return Ok(vec![BigInt::from(2 - kind as i64)]);
    }
    let k_minus_1 = kind as i64 - 1;
    let mut out = Vec::with_capacity(n as usize / 2 + 1);
    for i in 0..=(n / 2) {
        let mut c = binom_signed(n - i, i);
        if i >= 1 {
            c -= BigInt::from(k_minus_1) * binom_signed(n - 1 - i, i - 1);
        }
        if i % 2 == 1 {
            c = -c;
        }
        out.push(c);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// recursion route
// ---------------------------------------------------------------------------

fn rdp4_iterate(ctx: &FieldCtx, steps: u64, x: &FqElem) -> FqElem {
    let mut prev = ctx.int(-1);
    if steps == 0 {
        return prev;
    }
    let mut cur = ctx.one();
    for _ in 2..=steps {
        let next = ctx.sub(&cur, &ctx.mul(x, &prev));
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// D_{n,3}(1, x) by the two-term recursion. For n beyond q^2 - 1 the index is
/// reduced first: modulo q^2 - 1 (into [1, q^2 - 1]) away from x = 1/4, and
/// modulo lcm(p, ord(2)) at x = 1/4, both exact period laws of the value
/// sequence.
pub fn rdp4_eval_recursive(ctx: &FieldCtx, n: &BigUint, x: &FqElem) -> FqElem {
    let q = ctx.order();
    let q2m1 = q * q - 1;
    let steps = match n.to_u64() {
        Some(v) if v <= q2m1 => v,
        _ => {
            if *x == ctx.quarter() {
                let period = {
                    let t = ctx.order_of_two();
                    let p = ctx.p();
                    p / gcd(p, t) * t
                };
                (n % period).to_u64().expect("fits")
            } else {
                reduce_into_period(n, q2m1)
            }
        }
    };
    rdp4_iterate(ctx, steps, x)
}

/// The value table [D_{n,3}(1, x)]_x over all of F_q in enumeration order,
/// advancing all columns of the recursion in lockstep.
pub fn rdp4_value_table(ctx: &FieldCtx, n: &BigUint) -> Vec<FqElem> {
    let q = ctx.order();
    let q2m1 = q * q - 1;
    let xs: Vec<FqElem> = ctx.elements().collect();
    let (steps, fix_quarter) = match n.to_u64() {
        Some(v) if v <= q2m1 => (v, false),
        _ => (reduce_into_period(n, q2m1), true),
    };
    let mut prev = vec![ctx.int(-1); xs.len()];
    let mut cur = vec![ctx.one(); xs.len()];
    let mut table = if steps == 0 {
        prev
    } else {
        for _ in 2..=steps {
            for (i, x) in xs.iter().enumerate() {
                let next = ctx.sub(&cur[i], &ctx.mul(x, &prev[i]));
                prev[i] = std::mem::replace(&mut cur[i], next);
            }
        }
        cur
    };
    if fix_quarter {
        // the reduction law above only covers x != 1/4
        let qi = ctx.index_of(&ctx.quarter()) as usize;
        table[qi] = rdp4_special_value(ctx, n);
    }
    table
}

/// The fixed value D_{n,3}(1, 1/4) = (3n - 1)/2^n, exact for every n >= 0.
pub fn rdp4_special_value(ctx: &FieldCtx, n: &BigUint) -> FqElem {
    let p = ctx.p();
    let nbar = (n % p).to_u64().expect("fits");
    let num = ctx.from_u64((3 * nbar + p - 1) % p);
    let emod = (n % (p - 1)).to_u64().expect("fits");
    let den = ctx.pow_u64(&ctx.from_u64(2), emod);
    ctx.mul(&num, &ctx.inv(&den).expect("2 invertible"))
}

// ---------------------------------------------------------------------------
// closed parametric route
// ---------------------------------------------------------------------------

/// f(y) = ((2 - y) y^m - (y + 1)(1 - y)^m) / (2y - 1), the closed form of
/// D_{m,3}(1, y(1-y)); y must differ from 1/2. The exponent is taken as
/// given, so pass a reduced index for large n.
pub fn closed_form_at_y(quad: &QuadExtCtx, m: u64, y: &Fq2Elem) -> Fq2Elem {
    let one = quad.one();
    let two = quad.int(2);
    let ym = quad.pow_u64(y, m);
    let oy = quad.sub(&one, y);
    let oym = quad.pow_u64(&oy, m);
    let t1 = quad.mul(&quad.sub(&two, y), &ym);
    let t2 = quad.mul(&quad.add(y, &one), &oym);
    let num = quad.sub(&t1, &t2);
    let den = quad.sub(&quad.mul(&two, y), &one);
    let den_inv = quad.inv(&den).expect("closed form needs y != 1/2");
    quad.mul(&num, &den_inv)
}

/// D_{n,3}(1, x) via the parametrization x = y(1-y): the closed fraction for
/// x != 1/4, the fixed value (3n - 1)/2^n at x = 1/4. The result must land in
/// the embedded base field; anything else is reported as an inconsistency.
pub fn rdp4_eval_closed(quad: &QuadExtCtx, n: &BigUint, x: &FqElem) -> Result<FqElem> {
    let base = quad.base();
    if *x == base.quarter() {
        return Ok(rdp4_special_value(base, n));
    }
    let y = quad.parametrize_y(x);
    let m = reduce_into_period(n, quad.order() - 1);
    let val = closed_form_at_y(quad, m, &y);
    quad.project(&val).ok_or_else(|| {
        Error::InternalInconsistency(format!("closed form left the base field at n={n}, x={x}"))
    })
}

// ---------------------------------------------------------------------------
// general parameter a
// ---------------------------------------------------------------------------

/// D_{n,3}(a, x): for a != 0 through the scaling identity
/// D_{n,3}(a, x) = a^n * D_{n,3}(1, x/a^2); for a = 0 through the closed
/// display D_{n,3}(0, x) = 0 for odd n and (-1)^(n/2+1) x^(n/2) for even n.
pub fn rdp_eval_param(ctx: &FieldCtx, n: &BigUint, a: &FqElem, x: &FqElem) -> FqElem {
    let q = ctx.order();
    if ctx.is_zero(a) {
        if n.bit(0) {
            return ctx.zero();
        }
        let h: BigUint = n >> 1;
        let sign: i64 = if h.bit(0) { 1 } else { -1 };
        let hr = if ctx.is_zero(x) {
            u64::from(!h.is_zero())
        } else {
            (h % (q - 1)).to_u64().expect("fits")
        };
        return ctx.mul(&ctx.int(sign), &ctx.pow_u64(x, hr));
    }
    let an = ctx.pow_u64(a, (n % (q - 1)).to_u64().expect("fits"));
    let a2 = ctx.mul(a, a);
    let xa = ctx.mul(x, &ctx.inv(&a2).expect("a nonzero"));
    ctx.mul(&an, &rdp4_eval_recursive(ctx, n, &xa))
}

// ---------------------------------------------------------------------------
// generating-function route
// ---------------------------------------------------------------------------

/// Truncated series of (2t - 1)/(1 - t + x t^2); coefficient of t^n is
/// D_{n,3}(1, x).
pub fn genfun_series(ctx: &FieldCtx, x: &FqElem, n_max: usize) -> DensePoly<FqElem> {
    let num = DensePoly::from_coeffs(ctx, vec![ctx.int(-1), ctx.int(2)]);
    let den = DensePoly::from_coeffs(ctx, vec![ctx.one(), ctx.int(-1), x.clone()]);
    DensePoly::series_div(ctx, &num, &den, n_max)
}

// ---------------------------------------------------------------------------
// Frobenius-power identity
// ---------------------------------------------------------------------------

/// Both sides of 2^(p^k) * D_{p^k,3}(1, x) + 1 = 3 (1 - 4x)^((p^k - 1)/2),
/// as polynomials over F_q, their pointwise tabulation verdict, and whether
/// x -> D_{p^k,3}(1, x) permutes F_q (it never does for k <= e).
pub struct FrobeniusPowerCheck {
    pub lhs: DensePoly<FqElem>,
    pub rhs: DensePoly<FqElem>,
    pub pointwise_equal: bool,
    pub is_permutation: bool,
}

pub fn frobenius_power_identity(ctx: &FieldCtx, k: u32) -> Result<FrobeniusPowerCheck> {
    if k == 0 {
        return Err(Error::Usage("Frobenius power k must be at least 1".into()));
    }
    let n = ctx
        .p()
        .checked_pow(k)
        .filter(|&n| n <= 4096)
        .ok_or(Error::DegreeTooLarge {
            n: u64::MAX,
            max: 4096,
        })?;
    let p = ctx.p();
    let coeffs = rdp_coeffs_exact_capped(n, 3, n)?;
    let d_poly = DensePoly::from_coeffs(
        ctx,
        coeffs
            .iter()
            .map(|c| ctx.from_u64(bigint_mod_p(c, p)))
            .collect(),
    );
    let two_pow = ctx.pow_u64(&ctx.from_u64(2), n);
    let lhs = d_poly
        .scale(ctx, &two_pow)
        .add(ctx, &DensePoly::constant(ctx, ctx.one()));
    let base = DensePoly::from_coeffs(ctx, vec![ctx.one(), ctx.int(-4)]);
    let rhs = base.pow(ctx, (n - 1) / 2).scale(ctx, &ctx.int(3));

    let pointwise_equal = ctx
        .elements()
        .all(|x| lhs.eval(ctx, &x) == rhs.eval(ctx, &x));
    let table = rdp4_value_table(ctx, &BigUint::from(n));
    let is_permutation = crate::perm::is_pp_direct(ctx, &table)?;
    Ok(FrobeniusPowerCheck {
        lhs,
        rhs,
        pointwise_equal,
        is_permutation,
    })
}

// ---------------------------------------------------------------------------
// classical kinds (first, second, third) via their closed forms
// ---------------------------------------------------------------------------

/// Reversed Dickson polynomials of the first (kind = 0), second (kind = 1),
/// and third (kind = 2) kind at a = 1, evaluated through the same
/// y(1-y) = x parametrization: D_n = y^n + (1-y)^n,
/// E_n = (y^(n+1) - (1-y)^(n+1))/(2y - 1), D_{n,2} = E_{n-1}, with the
/// limit values 2/2^n and (n+1)/2^n at x = 1/4.
pub fn classical_eval(quad: &QuadExtCtx, n: &BigUint, kind: u8, x: &FqElem) -> Result<FqElem> {
    if kind > 2 {
        return Err(Error::KindOutOfRange(kind));
    }
    let base = quad.base();
    if kind == 2 {
        return if n.is_zero() {
            Ok(base.zero()) // D_{0,k} = 2 - k
        } else {
            classical_eval(quad, &(n - 1u32), 1, x)
        };
    }
    let p = base.p();
    if *x == base.quarter() {
        let emod = (n % (p - 1)).to_u64().expect("fits");
        let half_pow = base.pow_u64(&base.half(), emod);
        return Ok(match kind {
            0 => base.mul(&base.from_u64(2), &half_pow),
            _ => {
                let np1 = ((n + 1u32) % p).to_u64().expect("fits");
                base.mul(&base.from_u64(np1), &half_pow)
            }
        });
    }
    let y = quad.parametrize_y(x);
    let oy = quad.sub(&quad.one(), &y);
    let val = match kind {
        0 => {
            let m = reduce_into_period(n, quad.order() - 1);
            quad.add(&quad.pow_u64(&y, m), &quad.pow_u64(&oy, m))
        }
        _ => {
            let m = reduce_into_period(&(n + 1u32), quad.order() - 1);
            let num = quad.sub(&quad.pow_u64(&y, m), &quad.pow_u64(&oy, m));
            let den = quad.sub(&quad.mul(&quad.int(2), &y), &quad.one());
            quad.mul(&num, &quad.inv(&den).expect("x != 1/4 keeps y != 1/2"))
        }
    };
    quad.project(&val).ok_or_else(|| {
        Error::InternalInconsistency(format!(
            "classical closed form left the base field at n={n}, kind={kind}, x={x}"
        ))
    })
}
