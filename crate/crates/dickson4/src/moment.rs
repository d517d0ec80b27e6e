//! First moments of the fourth-kind value tables: a_n = sum over x in F_q of
//! D_{n,3}(1, x), computed two independent ways. The recurrence route builds
//! a_n for every n in [1, q^2 - 1] from two auxiliary coefficient series in
//! F_p[t] (the shifted d_n = a_n - (3n - 1)/2^n satisfy a five-band linear
//! recurrence driven by the c-series); the oracle route sums the value tables
//! directly.
//!
//! The driving series exists in two variants which differ by
//! -2 (t^q - t^(q-1) - 1)(t^(q^2-1) - 1): the corrected variant reproduces
//! the oracle everywhere, the as-printed variant demonstrably does not
//! (first failure at n = q - 1, where it overshoots by exactly 2).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::binomial::binom;
use crate::dickson::{rdp4_special_value, rdp4_value_table};
use crate::error::{Error, Result};
use crate::field::{Field, FieldCtx, FqElem};
use crate::poly::DensePoly;

/// Which variant of the driving c-series to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Inner factor t; agrees with the brute-force oracle at every index.
    Corrected,
    /// Inner factor 3t - 2; kept for comparison, diverges from the oracle.
    AsPrinted,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Convention::Corrected => write!(f, "corrected"),
            Convention::AsPrinted => write!(f, "as-printed"),
        }
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(Convention::Corrected),
            "as-printed" => Ok(Convention::AsPrinted),
            _ => Err(Error::Usage(format!(
                "unknown convention '{s}' (expected 'corrected' or 'as-printed')"
            ))),
        }
    }
}

/// One index where the recurrence value disagrees with the brute-force sum.
/// Both values are reported in the ambient field F_q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub n: u64,
    pub recurrence: FqElem,
    pub oracle: FqElem,
}

/// The four coefficient series of the recurrence pipeline, all over F_p.
/// Indexing is by exponent; d and a run over n in [0, q^2 - 1] with the
/// n = 0 slots filled directly (a_0 = 0, d_0 = 1).
#[derive(Debug, Clone)]
pub struct MomentTable {
    pub q: u64,
    pub convention: Convention,
    pub b: Vec<FqElem>,
    pub c: Vec<FqElem>,
    pub d: Vec<FqElem>,
    pub a: Vec<FqElem>,
}

impl MomentTable {
    pub fn a_at(&self, n: u64) -> Option<&FqElem> {
        self.a.get(n as usize)
    }

    pub fn d_at(&self, n: u64) -> Option<&FqElem> {
        self.d.get(n as usize)
    }
}

/// Computes moment series over F_q; recurrence coefficients live in the
/// prime subfield F_p.
pub struct MomentEngine<'a> {
    ctx: &'a FieldCtx,
    fp: FieldCtx,
    q: u64,
}

impl<'a> MomentEngine<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Result<Self> {
        let fp = FieldCtx::new(ctx.p(), 1, None)?;
        let q = ctx.order();
        Ok(MomentEngine { ctx, fp, q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn prime_field(&self) -> &FieldCtx {
        &self.fp
    }

    /// sum over u in F_q of u^k for k = 0..q-1: zero everywhere except
    /// k = q - 1, where it is -1 (with 0^0 = 1).
    pub fn power_sums(&self) -> Vec<FqElem> {
        let ctx = self.ctx;
        let xs: Vec<FqElem> = ctx.elements().collect();
        let mut powers = vec![ctx.one(); xs.len()];
        let mut out = Vec::with_capacity(self.q as usize);
        for k in 0..self.q {
            let mut sum = ctx.zero();
            for pw in &powers {
                sum = ctx.add(&sum, pw);
            }
            out.push(sum);
            if k + 1 < self.q {
                for (pw, x) in powers.iter_mut().zip(&xs) {
                    *pw = ctx.mul(pw, x);
                }
            }
        }
        out
    }

    /// The b-series -1 - (t - t^q)^(q-1) by its coefficient formula: -1 at
    /// index 0 and (-1)^(beta+1) C(q-1, beta) at index (beta+1)(q-1) for
    /// beta = 0..q-1; zero elsewhere. Length q^2 - q + 1.
    pub fn b_coefficients(&self) -> Vec<FqElem> {
        let fp = &self.fp;
        let p = fp.p();
        let q = self.q;
        let len = (q * q - q + 1) as usize;
        let mut b = vec![fp.zero(); len];
        b[0] = fp.int(-1);
        for beta in 0..q {
            let idx = ((beta + 1) * (q - 1)) as usize;
            let residue = (binom(q - 1, beta) % BigUint::from(p))
                .to_u64()
                .expect("residue fits");
            let mut v = fp.from_u64(residue);
            if beta % 2 == 0 {
                v = fp.neg(&v);
            }
            b[idx] = fp.add(&b[idx], &v);
        }
        b
    }

    /// The same series by literal polynomial expansion.
    pub fn b_coefficients_expanded(&self) -> Vec<FqElem> {
        let fp = &self.fp;
        let q = self.q as usize;
        let mut base = vec![fp.zero(); q + 1];
        base[1] = fp.one();
        base[q] = fp.int(-1);
        let expanded = DensePoly::from_coeffs(fp, base)
            .pow(fp, self.q - 1)
            .neg(fp)
            .sub(fp, &DensePoly::constant(fp, fp.one()));
        pad(fp, &expanded, q * q - q + 1)
    }

    /// The driving c-series of length q^2 + q:
    ///   -(t^q - t^(q-1) - 1) * G * sum_{i=0}^{q^2-2} t^i
    ///   - (2t - 1) * (t^(2(q-1)) + sum_{k=1}^{q-1} (t-1)^(q-1-k) t^(2k) 4^(-k)) * B(t)
    ///
    /// with inner factor G = t (corrected) or G = 3t - 2 (as-printed).
    pub fn c_coefficients(&self, convention: Convention) -> Vec<FqElem> {
        let fp = &self.fp;
        let q = self.q as usize;
        let len = q * q + q;

        let mut lead_coeffs = vec![fp.zero(); q + 1];
        lead_coeffs[0] = fp.int(-1);
        lead_coeffs[q - 1] = fp.int(-1);
        lead_coeffs[q] = fp.one();
        let lead = DensePoly::from_coeffs(fp, lead_coeffs);
        let g = match convention {
            Convention::Corrected => DensePoly::monomial(fp, fp.one(), 1),
            Convention::AsPrinted => DensePoly::from_coeffs(fp, vec![fp.int(-2), fp.int(3)]),
        };
        let ones = DensePoly::from_coeffs(fp, vec![fp.one(); q * q - 1]);
        let s1 = lead.mul(fp, &g).mul(fp, &ones).neg(fp);

        let b = DensePoly::from_coeffs(fp, self.b_coefficients());
        let mut t_minus_1_pows = Vec::with_capacity(q - 1);
        t_minus_1_pows.push(DensePoly::constant(fp, fp.one()));
        let t_minus_1 = DensePoly::from_coeffs(fp, vec![fp.int(-1), fp.one()]);
        for m in 1..=(q - 2) {
            let next = t_minus_1_pows[m - 1].mul(fp, &t_minus_1);
            t_minus_1_pows.push(next);
        }
        let quarter = fp.inv(&fp.from_u64(4)).expect("4 invertible");
        let mut mid = DensePoly::monomial(fp, fp.one(), 2 * (q - 1));
        let mut qk = fp.one();
        for k in 1..=(q - 1) {
            qk = fp.mul(&qk, &quarter);
            let term = t_minus_1_pows[q - 1 - k].shift(fp, 2 * k).scale(fp, &qk);
            mid = mid.add(fp, &term);
        }
        let two_t_minus_1 = DensePoly::from_coeffs(fp, vec![fp.int(-1), fp.int(2)]);
        let s2 = two_t_minus_1.mul(fp, &mid).mul(fp, &b).neg(fp);

        pad(fp, &s1.add(fp, &s2), len)
    }

    /// Run the five-band recurrence for d_n over n in [1, q^2 - 1], then lift
    /// to a_n = d_n + (3n - 1)/2^n. Band layout, driven by stage l:
    ///   d_j        = -c_j                                   (1 <= j <= q-1)
    ///   d_q        = c_1 - c_q
    ///   d_{lq}     = d_{(l-1)q} - d_{(l-1)q+1} - c_{lq}     (2 <= l <= q-2)
    ///   d_{lq+j}   = d_{(l-1)q+j} - d_{(l-1)q+j+1} - c_{lq+j}
    ///                                        (1 <= l <= q-2, 1 <= j <= q-1)
    ///   d_{q^2-q+j} = sum_{i=j}^{q-1} c_{q^2+i}             (0 <= j <= q-1)
    /// Within a stage the d_{lq} value must exist before the j = q-1 step
    /// reaches for it.
    pub fn moment_table(&self, convention: Convention) -> Result<MomentTable> {
        let fp = &self.fp;
        let q = self.q as usize;
        let total = q * q;
        let b = self.b_coefficients();
        let c = self.c_coefficients(convention);

        let mut d: Vec<Option<FqElem>> = vec![None; total];
        d[0] = Some(fp.one());
        for j in 1..q {
            d[j] = Some(fp.neg(&c[j]));
        }
        let take = |d: &[Option<FqElem>], i: usize| -> Result<FqElem> {
            d[i].clone().ok_or(Error::IndexCoverage(i as u64))
        };
        for l in 1..=(q - 2) {
            let dq = if l == 1 {
                fp.sub(&c[1], &c[q])
            } else {
                let u = take(&d, (l - 1) * q)?;
                let v = take(&d, (l - 1) * q + 1)?;
                fp.sub(&fp.sub(&u, &v), &c[l * q])
            };
            d[l * q] = Some(dq);
            for j in 1..q {
                let u = take(&d, (l - 1) * q + j)?;
                let v = take(&d, (l - 1) * q + j + 1)?;
                d[l * q + j] = Some(fp.sub(&fp.sub(&u, &v), &c[l * q + j]));
            }
        }
        for j in 0..q {
            let mut s = fp.zero();
            for i in j..q {
                s = fp.add(&s, &c[q * q + i]);
            }
            d[q * q - q + j] = Some(s);
        }

        let mut dv = Vec::with_capacity(total);
        let mut av = Vec::with_capacity(total);
        for n in 0..total {
            let val = take(&d, n)?;
            let a = fp.add(&val, &rdp4_special_value(fp, &BigUint::from(n as u64)));
            dv.push(val);
            av.push(a);
        }
        Ok(MomentTable {
            q: self.q,
            convention,
            b,
            c,
            d: dv,
            a: av,
        })
    }

    /// a_n by definition: sum the full value table over F_q.
    pub fn first_moment_bruteforce(&self, n: &BigUint) -> FqElem {
        let ctx = self.ctx;
        let mut sum = ctx.zero();
        for v in rdp4_value_table(ctx, n) {
            sum = ctx.add(&sum, &v);
        }
        sum
    }

    /// Brute-force a_n for every n in [0, q^2 - 1] at once, advancing one
    /// lockstep recursion over all columns.
    pub fn first_moments_all(&self) -> Vec<FqElem> {
        let ctx = self.ctx;
        let xs: Vec<FqElem> = ctx.elements().collect();
        let total = (self.q * self.q) as usize;
        let sum_of = |row: &[FqElem]| {
            let mut s = ctx.zero();
            for v in row {
                s = ctx.add(&s, v);
            }
            s
        };
        let mut prev = vec![ctx.int(-1); xs.len()];
        let mut cur = vec![ctx.one(); xs.len()];
        let mut out = Vec::with_capacity(total);
        out.push(sum_of(&prev));
        out.push(sum_of(&cur));
        for _ in 2..total {
            for (i, x) in xs.iter().enumerate() {
                let next = ctx.sub(&cur[i], &ctx.mul(x, &prev[i]));
                prev[i] = std::mem::replace(&mut cur[i], next);
            }
            out.push(sum_of(&cur));
        }
        out
    }

    /// Compare the recurrence table against the brute-force oracle at every
    /// n in [1, q^2 - 1]. Returns the table and the disagreeing indices.
    pub fn verify_moments(&self, convention: Convention) -> Result<(MomentTable, Vec<Divergence>)> {
        let table = self.moment_table(convention)?;
        let ctx = self.ctx;
        let oracle_all = self.first_moments_all();
        let mut divergences = Vec::new();
        for n in 1..(self.q * self.q) {
            let oracle = oracle_all[n as usize].clone();
            let recurrence = ctx.from_u64(table.a[n as usize].coeffs()[0]);
            if recurrence != oracle {
                divergences.push(Divergence {
                    n,
                    recurrence,
                    oracle,
                });
            }
        }
        Ok((table, divergences))
    }
}

fn pad(fp: &FieldCtx, poly: &DensePoly<FqElem>, len: usize) -> Vec<FqElem> {
    let mut v = poly.coeffs().to_vec();
    assert!(v.len() <= len, "series longer than its pinned length");
    v.resize(len, fp.zero());
    v
}
