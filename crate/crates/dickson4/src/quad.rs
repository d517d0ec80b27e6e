//! The quadratic extension F_{q^2} over a base F_q, plus the parametrization
//! machinery built on it: every x in F_q is y(1-y) for a y drawn from
//! F_q ∪ V, where V = {z : z^q = 1 - z}.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::{Field, FieldCtx, FqElem};

/// Element a + b·u of F_{q^2}; ordering is enumeration-index order
/// (base component varies fastest).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fq2Elem {
    a: FqElem,
    b: FqElem,
}

impl Fq2Elem {
    pub fn base_part(&self) -> &FqElem {
        &self.a
    }

    pub fn ext_part(&self) -> &FqElem {
        &self.b
    }
}

impl std::fmt::Display for Fq2Elem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}+{}*u", self.a, self.b)
    }
}

impl PartialOrd for Fq2Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fq2Elem {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.b, &self.a).cmp(&(&other.b, &other.a))
    }
}

/// F_{q^2} = F_q[u]/(u^2 - lin·u - con). The default model takes lin = 0 and
/// con = the first non-square of F_q in enumeration order; any irreducible
/// quadratic (discriminant lin^2 + 4·con a non-square) is accepted, and all
/// downstream values are model-independent.
#[derive(Clone, Debug)]
pub struct QuadExtCtx {
    base: FieldCtx,
    lin: FqElem,
    con: FqElem,
}

impl QuadExtCtx {
    /// Default model u^2 = ν with ν the first non-square of the base field.
    pub fn new(base: &FieldCtx) -> Self {
        let con = base.first_nonsquare();
        QuadExtCtx {
            base: base.clone(),
            lin: base.zero(),
            con,
        }
    }

    /// Explicit model u^2 = lin·u + con; rejected unless irreducible.
    pub fn with_modulus(base: &FieldCtx, con: FqElem, lin: FqElem) -> Result<Self> {
        // u^2 - lin u - con splits over F_q iff its discriminant is a square
        let disc = base.add(&base.mul(&lin, &lin), &base.mul(&base.int(4), &con));
        if base.is_square(&disc) {
            return Err(Error::ReducibleModulus {
                coeffs: vec![base.index_of(&con), base.index_of(&lin), 1],
                p: base.p(),
            });
        }
        Ok(QuadExtCtx {
            base: base.clone(),
            lin,
            con,
        })
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    /// The defining non-square for the default model, if this is one.
    pub fn nonresidue(&self) -> Option<&FqElem> {
        if self.base.is_zero(&self.lin) {
            Some(&self.con)
        } else {
            None
        }
    }

    pub fn make(&self, a: FqElem, b: FqElem) -> Fq2Elem {
        Fq2Elem { a, b }
    }

    pub fn embed(&self, x: &FqElem) -> Fq2Elem {
        Fq2Elem {
            a: x.clone(),
            b: self.base.zero(),
        }
    }

    /// Some(x) iff z lies in the embedded base field.
    pub fn project(&self, z: &Fq2Elem) -> Option<FqElem> {
        if self.base.is_zero(&z.b) {
            Some(z.a.clone())
        } else {
            None
        }
    }

    /// z^q by square-and-multiply; coincides with the conjugation
    /// a + b·(lin - u) but is computed independently of that formula.
    pub fn frobenius(&self, z: &Fq2Elem) -> Fq2Elem {
        self.pow_u64(z, self.base.order())
    }

    /// Membership in V = {z : z^q = 1 - z}.
    pub fn in_v(&self, z: &Fq2Elem) -> bool {
        self.frobenius(z) == self.sub(&self.one(), z)
    }

    fn coords(&self, z: &Fq2Elem) -> Vec<u64> {
        let mut v = Vec::with_capacity(2 * self.base.extension_degree());
        v.extend_from_slice(z.a.coeffs());
        v.extend_from_slice(z.b.coeffs());
        v
    }

    fn coords_to_elem(&self, v: &[u64]) -> Fq2Elem {
        let e = self.base.extension_degree();
        Fq2Elem {
            a: self.base.from_coeffs(&v[..e]).expect("coordinate width"),
            b: self.base.from_coeffs(&v[e..]).expect("coordinate width"),
        }
    }

    /// V as a sorted list of q elements, found by solving the F_p-affine
    /// condition frobenius(z) + z = 1 on coordinate vectors.
    pub fn v_set(&self) -> Vec<Fq2Elem> {
        let p = self.base.p();
        let dim = 2 * self.base.extension_degree();
        // columns of (Frob + I) in the coordinate basis
        let mut cols = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut unit = vec![0u64; dim];
            unit[j] = 1;
            let basis = self.coords_to_elem(&unit);
            let image = self.frobenius(&basis);
            let mut col = self.coords(&image);
            col[j] = (col[j] + 1) % p;
            cols.push(col);
        }
        let target = self.coords(&self.one());

        // Gauss-Jordan over F_p on the augmented system
        let mut rows: Vec<Vec<u64>> = (0..dim)
            .map(|r| {
                let mut row: Vec<u64> = (0..dim).map(|c| cols[c][r]).collect();
                row.push(target[r]);
                row
            })
            .collect();
        let inv = |a: u64| -> u64 {
            // p prime
            let mut acc = 1u64;
            let mut base = a % p;
            let mut e = p - 2;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * base % p;
                }
                base = base * base % p;
                e >>= 1;
            }
            acc
        };
        let mut pivot_col_of_row = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..dim {
            let Some(r) = (pivot_row..dim).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(pivot_row, r);
            let scale = inv(rows[pivot_row][col]);
            for v in &mut rows[pivot_row] {
                *v = *v * scale % p;
            }
            let pivot_vals = rows[pivot_row].clone();
            for (r2, row) in rows.iter_mut().enumerate().take(dim) {
                if r2 != pivot_row && row[col] != 0 {
                    let f = row[col];
                    for (slot, &pv) in row.iter_mut().zip(&pivot_vals) {
                        let t = (p - pv * f % p) % p;
                        *slot = (*slot + t) % p;
                    }
                }
            }
            pivot_col_of_row.push(col);
            pivot_row += 1;
            if pivot_row == dim {
                break;
            }
        }
        // solvability: zero rows must have zero targets (always true here)
        for row in rows.iter().take(dim).skip(pivot_row) {
            assert_eq!(row[dim], 0, "frobenius-affine system is consistent");
        }
        let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
        let free_cols: Vec<usize> = (0..dim).filter(|c| !pivot_cols.contains(c)).collect();

        let mut particular = vec![0u64; dim];
        for (r, &c) in pivot_cols.iter().enumerate() {
            particular[c] = rows[r][dim];
        }
        let mut kernel = Vec::new();
        for &fc in &free_cols {
            let mut vec = vec![0u64; dim];
            vec[fc] = 1;
            for (r, &c) in pivot_cols.iter().enumerate() {
                vec[c] = (p - rows[r][fc]) % p;
            }
            kernel.push(vec);
        }
        assert_eq!(
            kernel.len(),
            self.base.extension_degree(),
            "solution space of z^q = 1 - z has q elements"
        );

        let mut out = Vec::with_capacity(self.base.order() as usize);
        let combos = self.base.order();
        for mut idx in 0..combos {
            let mut v = particular.clone();
            for k in &kernel {
                let c = idx % p;
                idx /= p;
                if c != 0 {
                    for (vi, ki) in v.iter_mut().zip(k) {
                        *vi = (*vi + c * ki) % p;
                    }
                }
            }
            out.push(self.coords_to_elem(&v));
        }
        out.sort();
        out
    }

    /// V by exhaustive filtering; quadratic cost, intended as a cross-check
    /// for small q.
    pub fn v_set_filtered(&self) -> Vec<Fq2Elem> {
        let mut out: Vec<Fq2Elem> = self.elements().filter(|z| self.in_v(z)).collect();
        out.sort();
        out
    }

    /// The canonical y with y(1-y) = x: y = (1 + u)/2 where u is the
    /// canonical square root of 1 - 4x, taken in F_q when it exists there and
    /// in F_{q^2} otherwise. x = 1/4 lands on y = 1/2; every other x yields
    /// y in (F_q ∪ V) \ {1/2}.
    pub fn parametrize_y(&self, x: &FqElem) -> Fq2Elem {
        let base = &self.base;
        let w = base.sub(&base.one(), &base.mul(&base.int(4), x));
        let u = match base.sqrt_opt(&w) {
            Some(r) => self.embed(&r),
            None => self
                .sqrt_opt(&self.embed(&w))
                .expect("1 - 4x is always a square in the quadratic extension"),
        };
        let half = self.embed(&base.half());
        self.mul(&self.add(&self.one(), &u), &half)
    }
}

impl Field for QuadExtCtx {
    type Elem = Fq2Elem;

    fn characteristic(&self) -> u64 {
        self.base.p()
    }

    fn order(&self) -> u64 {
        self.base.order() * self.base.order()
    }

    fn zero(&self) -> Fq2Elem {
        Fq2Elem {
            a: self.base.zero(),
            b: self.base.zero(),
        }
    }

    fn one(&self) -> Fq2Elem {
        Fq2Elem {
            a: self.base.one(),
            b: self.base.zero(),
        }
    }

    fn add(&self, x: &Fq2Elem, y: &Fq2Elem) -> Fq2Elem {
        Fq2Elem {
            a: self.base.add(&x.a, &y.a),
            b: self.base.add(&x.b, &y.b),
        }
    }

    fn sub(&self, x: &Fq2Elem, y: &Fq2Elem) -> Fq2Elem {
        Fq2Elem {
            a: self.base.sub(&x.a, &y.a),
            b: self.base.sub(&x.b, &y.b),
        }
    }

    fn neg(&self, x: &Fq2Elem) -> Fq2Elem {
        Fq2Elem {
            a: self.base.neg(&x.a),
            b: self.base.neg(&x.b),
        }
    }

    fn mul(&self, x: &Fq2Elem, y: &Fq2Elem) -> Fq2Elem {
        // (a1 + b1 u)(a2 + b2 u) with u^2 = lin u + con
        let f = &self.base;
        let a1a2 = f.mul(&x.a, &y.a);
        let b1b2 = f.mul(&x.b, &y.b);
        let cross = f.add(&f.mul(&x.a, &y.b), &f.mul(&x.b, &y.a));
        Fq2Elem {
            a: f.add(&a1a2, &f.mul(&b1b2, &self.con)),
            b: f.add(&cross, &f.mul(&b1b2, &self.lin)),
        }
    }

    fn inv(&self, x: &Fq2Elem) -> Option<Fq2Elem> {
        if self.is_zero(x) {
            return None;
        }
        let f = &self.base;
        // conjugate (a + b·lin) - b·u; norm = a^2 + a·b·lin - b^2·con
        let conj = Fq2Elem {
            a: f.add(&x.a, &f.mul(&x.b, &self.lin)),
            b: f.neg(&x.b),
        };
        let norm = f.sub(
            &f.add(&f.mul(&x.a, &x.a), &f.mul(&f.mul(&x.a, &x.b), &self.lin)),
            &f.mul(&f.mul(&x.b, &x.b), &self.con),
        );
        let ninv = f.inv(&norm).expect("nonzero element has nonzero norm");
        Some(Fq2Elem {
            a: f.mul(&conj.a, &ninv),
            b: f.mul(&conj.b, &ninv),
        })
    }

    fn element(&self, index: u64) -> Fq2Elem {
        let q = self.base.order();
        Fq2Elem {
            a: self.base.element(index % q),
            b: self.base.element(index / q),
        }
    }

    fn index_of(&self, x: &Fq2Elem) -> u64 {
        self.base.index_of(&x.a) + self.base.order() * self.base.index_of(&x.b)
    }

    fn int(&self, v: i64) -> Fq2Elem {
        self.embed(&self.base.int(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5_ext() -> QuadExtCtx {
        QuadExtCtx::new(&FieldCtx::new(5, 1, None).unwrap())
    }

    #[test]
    fn default_model_f5_uses_nu_2() {
        let ext = f5_ext();
        assert_eq!(ext.nonresidue(), Some(&ext.base().from_u64(2)));
    }

    #[test]
    fn field_axioms_spot_check_and_inverses() {
        for (p, e) in [(5, 1), (7, 1), (5, 2)] {
            let base = FieldCtx::new(p, e, None).unwrap();
            let ext = QuadExtCtx::new(&base);
            for z in ext.elements().skip(1) {
                let zi = ext.inv(&z).unwrap();
                assert_eq!(ext.mul(&z, &zi), ext.one());
            }
            assert_eq!(ext.inv(&ext.zero()), None);
        }
    }

    #[test]
    fn frobenius_fixes_base_and_squares_to_identity() {
        for (p, e) in [(5, 1), (7, 1), (5, 2)] {
            let base = FieldCtx::new(p, e, None).unwrap();
            let ext = QuadExtCtx::new(&base);
            for x in base.elements() {
                let z = ext.embed(&x);
                assert_eq!(ext.frobenius(&z), z);
            }
            for z in ext.elements() {
                assert_eq!(ext.frobenius(&ext.frobenius(&z)), z);
            }
        }
    }

    #[test]
    fn element_index_round_trip() {
        let ext = f5_ext();
        for i in 0..ext.order() {
            assert_eq!(ext.index_of(&ext.element(i)), i);
        }
    }

    #[test]
    fn v_set_structure() {
        for (p, e) in [(5, 1), (7, 1), (5, 2)] {
            let base = FieldCtx::new(p, e, None).unwrap();
            let ext = QuadExtCtx::new(&base);
            let v = ext.v_set();
            assert_eq!(v.len() as u64, base.order(), "|V| = q");
            // defining equation and closure under z -> 1 - z
            for z in &v {
                assert!(ext.in_v(z));
                assert!(v.contains(&ext.sub(&ext.one(), z)));
            }
            // V ∩ F_q = {1/2}
            let half = ext.embed(&base.half());
            let in_base: Vec<&Fq2Elem> = v.iter().filter(|z| ext.project(z).is_some()).collect();
            assert_eq!(in_base, vec![&half]);
            // agrees with the exhaustive filter
            assert_eq!(v, ext.v_set_filtered());
        }
    }

    #[test]
    fn parametrize_y_examples_f5() {
        let ext = f5_ext();
        let base = ext.base();
        // x = 1/4 -> y = 1/2
        let y = ext.parametrize_y(&base.quarter());
        assert_eq!(y, ext.embed(&base.half()));
        // x = 0 -> u = 1, y = 1
        let y = ext.parametrize_y(&base.zero());
        assert_eq!(y, ext.one());
        // x = -2: 1-4x = 9 = 4, canonical sqrt 2, y = 3/2 = 4
        let y = ext.parametrize_y(&base.from_i64(-2));
        assert_eq!(y, ext.embed(&base.from_u64(4)));
    }

    #[test]
    fn parametrize_y_defining_equation_and_membership() {
        for (p, e) in [(5, 1), (7, 1), (5, 2), (7, 2)] {
            let base = FieldCtx::new(p, e, None).unwrap();
            let ext = QuadExtCtx::new(&base);
            let v = ext.v_set();
            for x in base.elements() {
                let y = ext.parametrize_y(&x);
                let prod = ext.mul(&y, &ext.sub(&ext.one(), &y));
                assert_eq!(prod, ext.embed(&x), "y(1-y) = x");
                let in_base = ext.project(&y).is_some();
                assert!(in_base || v.contains(&y), "y in F_q ∪ V");
            }
        }
    }

    #[test]
    fn quadratic_membership_criterion_exhaustive() {
        // z(1-z) lands in F_q exactly when z^q = z or z^q = 1 - z
        for p in [5u64, 7] {
            let base = FieldCtx::new(p, 1, None).unwrap();
            let ext = QuadExtCtx::new(&base);
            for z in ext.elements() {
                let w = ext.mul(&z, &ext.sub(&ext.one(), &z));
                let in_base = ext.project(&w).is_some();
                let fz = ext.frobenius(&z);
                let criterion = fz == z || fz == ext.sub(&ext.one(), &z);
                assert_eq!(in_base, criterion, "p={p}, z={z:?}");
            }
        }
    }

    #[test]
    fn rejects_reducible_quadratic_model() {
        let base = FieldCtx::new(5, 1, None).unwrap();
        // u^2 = u + 2 has discriminant 1 + 8 = 9, a square
        assert!(QuadExtCtx::with_modulus(&base, base.from_u64(2), base.one()).is_err());
        // u^2 = u + 3 has discriminant 13 = 3, a non-square
        assert!(QuadExtCtx::with_modulus(&base, base.from_u64(3), base.one()).is_ok());
    }

    #[test]
    fn second_model_is_a_field_too() {
        let base = FieldCtx::new(5, 1, None).unwrap();
        let ext = QuadExtCtx::with_modulus(&base, base.from_u64(3), base.one()).unwrap();
        for z in ext.elements().skip(1) {
            let zi = ext.inv(&z).unwrap();
            assert_eq!(ext.mul(&z, &zi), ext.one());
        }
        for z in ext.elements() {
            assert_eq!(ext.pow_u64(&z, ext.order()), z);
        }
    }
}
