//! Dense polynomials over a field context; coefficient index = degree,
//! trailing zeros trimmed. Doubles as a truncated power series.

use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DensePoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + Eq> DensePoly<E> {
    pub fn from_coeffs<F: Field<Elem = E>>(f: &F, mut coeffs: Vec<E>) -> Self {
        let zero = f.zero();
        while coeffs.last() == Some(&zero) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn zero() -> Self {
        DensePoly { coeffs: Vec::new() }
    }

    pub fn constant<F: Field<Elem = E>>(f: &F, c: E) -> Self {
        Self::from_coeffs(f, vec![c])
    }

    /// The monomial c·t^k.
    pub fn monomial<F: Field<Elem = E>>(f: &F, c: E, k: usize) -> Self {
        let mut v = vec![f.zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(f, v)
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Coefficient of t^i, zero-padded beyond the stored length.
    pub fn coeff<F: Field<Elem = E>>(&self, f: &F, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| f.add(&self.coeff(f, i), &other.coeff(f, i)))
            .collect();
        Self::from_coeffs(f, v)
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| f.sub(&self.coeff(f, i), &other.coeff(f, i)))
            .collect();
        Self::from_coeffs(f, v)
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        let v = self.coeffs.iter().map(|c| f.neg(c)).collect();
        Self::from_coeffs(f, v)
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        let v = self.coeffs.iter().map(|x| f.mul(x, c)).collect();
        Self::from_coeffs(f, v)
    }

    /// Multiply by t^k.
    pub fn shift<F: Field<Elem = E>>(&self, f: &F, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![f.zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(f, v)
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut acc = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                acc[i + j] = f.add(&acc[i + j], &f.mul(a, b));
            }
        }
        Self::from_coeffs(f, acc)
    }

    /// Exact power by square-and-multiply.
    pub fn pow<F: Field<Elem = E>>(&self, f: &F, mut e: u64) -> Self {
        let mut acc = Self::constant(f, f.one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    /// Horner evaluation.
    pub fn eval<F: Field<Elem = E>>(&self, f: &F, x: &E) -> E {
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    /// Truncated series quotient num/den through degree n_max; den must have
    /// an invertible constant term.
    pub fn series_div<F: Field<Elem = E>>(f: &F, num: &Self, den: &Self, n_max: usize) -> Self {
        let d0 = den.coeff(f, 0);
        let d0_inv = f
            .inv(&d0)
            .expect("series division requires an invertible constant term");
        let mut out: Vec<E> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut acc = num.coeff(f, n);
            let upper = n.min(den.coeffs.len().saturating_sub(1));
            for j in 1..=upper {
                acc = f.sub(&acc, &f.mul(&den.coeff(f, j), &out[n - j]));
            }
            out.push(f.mul(&acc, &d0_inv));
        }
        Self::from_coeffs(f, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;

    fn p(f: &FieldCtx, cs: &[i64]) -> DensePoly<crate::field::FqElem> {
        DensePoly::from_coeffs(f, cs.iter().map(|&c| f.from_i64(c)).collect())
    }

    #[test]
    fn arithmetic_basics() {
        let f = FieldCtx::new(7, 1, None).unwrap();
        let a = p(&f, &[1, 2, 3]);
        let b = p(&f, &[4, 0, 0, 5]);
        assert_eq!(a.add(&f, &b), p(&f, &[5, 2, 3, 5]));
        assert_eq!(a.sub(&f, &a), DensePoly::zero());
        let ab = a.mul(&f, &b);
        // (1+2t+3t^2)(4+5t^3) = 4 + 8t + 12t^2 + 5t^3 + 10t^4 + 15t^5
        assert_eq!(ab, p(&f, &[4, 1, 5, 5, 3, 1]));
        assert_eq!(a.mul(&f, &b), b.mul(&f, &a));
    }

    #[test]
    fn trim_invariant() {
        let f = FieldCtx::new(5, 1, None).unwrap();
        let a = p(&f, &[1, 0, 0]);
        assert_eq!(a.degree(), Some(0));
        assert_eq!(p(&f, &[0, 0]).degree(), None);
    }

    #[test]
    fn eval_and_pow() {
        let f = FieldCtx::new(5, 1, None).unwrap();
        let a = p(&f, &[1, -4]); // 1 - 4t = 1 + t
        assert_eq!(a.eval(&f, &f.from_u64(3)), f.from_u64(4));
        let sq = a.pow(&f, 2); // 1 + 2t + t^2
        assert_eq!(sq, p(&f, &[1, 2, 1]));
        assert_eq!(a.pow(&f, 0), p(&f, &[1]));
    }

    #[test]
    fn series_div_inverts_multiplication() {
        let f = FieldCtx::new(7, 1, None).unwrap();
        let den = p(&f, &[1, -1, 3]);
        let num = p(&f, &[-1, 2]);
        let n_max = 40;
        let series = DensePoly::series_div(&f, &num, &den, n_max);
        let back = series.mul(&f, &den);
        for i in 0..=n_max {
            assert_eq!(back.coeff(&f, i), num.coeff(&f, i), "coefficient {i}");
        }
    }
}
