//! Exact arithmetic in F_p and F_{p^e} for odd primes p > 3.
//!
//! Elements are canonical coefficient vectors over F_p (constant term first),
//! enumeration order is fixed (constant coefficient varies fastest), and every
//! derived choice (default modulus, canonical square root, first non-square)
//! is deterministic, so identical inputs always produce identical bytes
//! downstream.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Largest supported field order q = p^e. Keeps q^2 inside u64 so that
/// quadratic-extension exponents and enumeration indices never overflow.
pub const MAX_FIELD_ORDER: u64 = 1 << 31;

// ---------------------------------------------------------------------------
// scalar arithmetic mod p
// ---------------------------------------------------------------------------

#[inline]
fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse mod a prime p; a must be nonzero mod p.
fn invm(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powm(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

// ---------------------------------------------------------------------------
// dense polynomials over F_p (coefficient index = degree), used only for
// modulus validation and inversion
// ---------------------------------------------------------------------------

fn ptrim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pdeg(v: &[u64]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = addm(out[i + j], mulm(ai, bj, p), p);
        }
    }
    ptrim(&mut out);
    out
}

/// Remainder of a mod m; m need not be monic (leading coefficient inverted).
fn prem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let md = pdeg(m).expect("nonzero divisor");
    let lead_inv = invm(m[md], p);
    let mut r = a.to_vec();
    ptrim(&mut r);
    while let Some(rd) = pdeg(&r) {
        if rd < md {
            break;
        }
        let c = mulm(r[rd], lead_inv, p);
        let shift = rd - md;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = subm(r[shift + i], mulm(c, mi, p), p);
        }
        ptrim(&mut r);
    }
    r
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    ptrim(&mut x);
    ptrim(&mut y);
    while !y.is_empty() {
        let r = prem(&x, &y, p);
        x = y;
        y = r;
    }
    // normalize monic
    if let Some(d) = pdeg(&x) {
        let inv = invm(x[d], p);
        for c in &mut x {
            *c = mulm(*c, inv, p);
        }
    }
    x
}

fn pmulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    prem(&pmul(a, b, p), m, p)
}

/// base^e mod m over F_p[x].
fn ppowmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = prem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = pmulmod(&acc, &b, m, p);
        }
        b = pmulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

/// x^(p^k) mod m, via k iterated p-th powers (exponents stay in u64).
fn pfrob_iter(k: usize, m: &[u64], p: u64) -> Vec<u64> {
    let mut h = prem(&[0, 1], m, p);
    for _ in 0..k {
        h = ppowmod(&h, p, m, p);
    }
    h
}

/// Deterministic irreducibility test for a monic polynomial of degree >= 1
/// over F_p: root search suffices for degree <= 3 at small p, the iterated
/// Frobenius divisor test covers the rest.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = pdeg(f).expect("nonzero polynomial");
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if d <= 3 && p <= 100_000 {
        // degree 2 or 3: reducible iff it has a root
        for a in 0..p {
            let mut acc = 0u64;
            for &c in f.iter().rev() {
                acc = addm(mulm(acc, a, p), c, p);
            }
            if acc == 0 {
                return false;
            }
        }
        return true;
    }
    // x^(p^d) == x mod f, and gcd(x^(p^(d/r)) - x, f) = 1 for each prime r | d
    let xd = pfrob_iter(d, f, p);
    let mut x_poly = vec![0u64, 1];
    ptrim(&mut x_poly);
    if prem(&xd, f, p) != prem(&x_poly, f, p) {
        return false;
    }
    let mut rem = d;
    let mut r = 2;
    let mut prime_divs = Vec::new();
    while r * r <= rem {
        if rem.is_multiple_of(r) {
            prime_divs.push(r);
            while rem.is_multiple_of(r) {
                rem /= r;
            }
        }
        r += 1;
    }
    if rem > 1 {
        prime_divs.push(rem);
    }
    for r in prime_divs {
        let h = pfrob_iter(d / r, f, p);
        // h - x
        let mut diff = h;
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = subm(diff[1], 1, p);
        ptrim(&mut diff);
        let g = pgcd(&diff, f, p);
        if pdeg(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Inverse of a mod m over F_p[x] (m irreducible, a nonzero mod m).
fn pinv_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = m.to_vec();
    let mut r1 = prem(a, m, p);
    if r1.is_empty() {
        return None;
    }
    let mut t0: Vec<u64> = Vec::new();
    let mut t1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        // long division r0 = q*r1 + r
        let d1 = pdeg(&r1).unwrap();
        let lead_inv = invm(r1[d1], p);
        let mut q = vec![0u64; r0.len().saturating_sub(r1.len()) + 1];
        let mut rem = r0.clone();
        while let Some(d0) = pdeg(&rem) {
            if d0 < d1 {
                break;
            }
            let c = mulm(rem[d0], lead_inv, p);
            q[d0 - d1] = c;
            for (i, &mi) in r1.iter().enumerate() {
                rem[d0 - d1 + i] = subm(rem[d0 - d1 + i], mulm(c, mi, p), p);
            }
            ptrim(&mut rem);
        }
        ptrim(&mut q);
        // (t0, t1) = (t1, t0 - q*t1)
        let qt1 = pmul(&q, &t1, p);
        let mut t2 = t0.clone();
        t2.resize(t2.len().max(qt1.len()), 0);
        for (i, &c) in qt1.iter().enumerate() {
            t2[i] = subm(t2[i], c, p);
        }
        ptrim(&mut t2);
        t0 = std::mem::replace(&mut t1, t2);
        r0 = std::mem::replace(&mut r1, rem);
    }
    let d = pdeg(&r0)?;
    if d != 0 {
        return None; // gcd not constant: m reducible or a = 0
    }
    let scale = invm(r0[0], p);
    let mut out = t0;
    for c in &mut out {
        *c = mulm(*c, scale, p);
    }
    Some(prem(&out, m, p))
}

// ---------------------------------------------------------------------------
// elements
// ---------------------------------------------------------------------------

/// An element of F_{p^e}: e least nonnegative residues, constant term first.
///
/// Equality is componentwise; the ordering is the enumeration-index order
/// (constant coefficient varies fastest), i.e. lexicographic on the reversed
/// coefficient vector. Comparing elements of different fields is meaningless.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FqElem {
    coeffs: Vec<u64>,
}

impl FqElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

impl PartialOrd for FqElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FqElem {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        self.coeffs.iter().rev().cmp(other.coeffs.iter().rev())
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "[")?;
            for (i, c) in self.coeffs.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "]")
        }
    }
}

// ---------------------------------------------------------------------------
// the field abstraction shared by F_q and its quadratic extension
// ---------------------------------------------------------------------------

/// Context-style field interface: the context owns the modulus and hands out
/// canonical elements. Square roots, powers, and enumeration are provided
/// generically on top of the ring operations.
pub trait Field {
    type Elem: Clone + Eq + Ord + std::fmt::Debug;

    fn characteristic(&self) -> u64;
    /// Number of elements.
    fn order(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// None exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// index in 0..order(), constant coefficient fastest.
    fn element(&self, index: u64) -> Self::Elem;
    fn index_of(&self, a: &Self::Elem) -> u64;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    /// Embed a small integer (residue mod p).
    fn int(&self, v: i64) -> Self::Elem {
        let p = self.characteristic() as i64;
        let mut r = (v % p + p) % p;
        // double-and-add from one()
        let mut acc = self.zero();
        let mut base = self.one();
        while r > 0 {
            if r & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            r >>= 1;
        }
        acc
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// a^e with the 0^0 = 1 convention.
    fn pow_u64(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// a^e for arbitrary-precision e (no exponent reduction: exact semantics).
    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// All elements in enumeration order.
    fn elements(&self) -> Box<dyn Iterator<Item = Self::Elem> + '_>
    where
        Self: Sized,
    {
        Box::new((0..self.order()).map(move |i| self.element(i)))
    }

    /// Euler criterion; zero counts as a square.
    fn is_square(&self, a: &Self::Elem) -> bool {
        if self.is_zero(a) {
            return true;
        }
        self.pow_u64(a, (self.order() - 1) / 2) == self.one()
    }

    /// First non-square in enumeration order (exists: the squares are a
    /// proper subgroup for odd q).
    fn first_nonsquare(&self) -> Self::Elem {
        for i in 1..self.order() {
            let z = self.element(i);
            if !self.is_square(&z) {
                return z;
            }
        }
        unreachable!("odd field order always has a non-square")
    }

    /// Canonical square root: Tonelli–Shanks with a deterministic non-square
    /// witness, returning the root with the smaller enumeration index.
    /// None iff a is a non-square; sqrt(0) = 0.
    fn sqrt_opt(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        let q = self.order();
        if self.pow_u64(a, (q - 1) / 2) != self.one() {
            return None;
        }
        let r = if q % 4 == 3 {
            self.pow_u64(a, (q + 1) / 4)
        } else {
            // q - 1 = 2^s * t, t odd
            let mut t = q - 1;
            let mut s = 0u32;
            while t.is_multiple_of(2) {
                t /= 2;
                s += 1;
            }
            let z = self.first_nonsquare();
            let mut m = s;
            let mut c = self.pow_u64(&z, t);
            let mut u = self.pow_u64(a, t);
            let mut r = self.pow_u64(a, t.div_ceil(2));
            while u != self.one() {
                let mut i = 0u32;
                let mut probe = u.clone();
                while probe != self.one() {
                    probe = self.mul(&probe, &probe);
                    i += 1;
                    debug_assert!(i < m, "non-square slipped through Euler check");
                }
                let mut b = c.clone();
                for _ in 0..(m - i - 1) {
                    b = self.mul(&b, &b);
                }
                m = i;
                c = self.mul(&b, &b);
                u = self.mul(&u, &c);
                r = self.mul(&r, &b);
            }
            r
        };
        debug_assert_eq!(self.mul(&r, &r), *a);
        let nr = self.neg(&r);
        Some(if self.index_of(&r) <= self.index_of(&nr) {
            r
        } else {
            nr
        })
    }
}

// ---------------------------------------------------------------------------
// field specification / serialization
// ---------------------------------------------------------------------------

/// Parsed description of a field: characteristic, extension degree, optional
/// explicit modulus (monic, degree e, constant term first, e+1 entries).
///
/// Text form: `p=5,e=2,mod=[2,0,1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub e: usize,
    pub modulus: Option<Vec<u64>>,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={},e={}", self.p, self.e)?;
        if let Some(m) = &self.modulus {
            write!(f, ",mod=[")?;
            for (i, c) in m.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Usage(format!(
                "malformed field spec {s:?}, expected p=..,e=..,mod=[..]"
            ))
        };
        let mut p = None;
        let mut e = None;
        let mut modulus = None;
        // `mod=[2,0,1]` contains commas, so split on key boundaries
        let mut rest = s;
        while !rest.is_empty() {
            let (key, tail) = rest.split_once('=').ok_or_else(bad)?;
            match key.trim() {
                "p" => {
                    let (val, t) = tail.split_once(',').map_or((tail, ""), |(a, b)| (a, b));
                    p = Some(val.trim().parse::<u64>().map_err(|_| bad())?);
                    rest = t;
                }
                "e" => {
                    let (val, t) = tail.split_once(',').map_or((tail, ""), |(a, b)| (a, b));
                    e = Some(val.trim().parse::<usize>().map_err(|_| bad())?);
                    rest = t;
                }
                "mod" => {
                    let tail = tail.trim_start();
                    let inner = tail
                        .strip_prefix('[')
                        .and_then(|t| t.split_once(']'))
                        .ok_or_else(bad)?;
                    let mut coeffs = Vec::new();
                    for part in inner.0.split(',') {
                        coeffs.push(part.trim().parse::<u64>().map_err(|_| bad())?);
                    }
                    modulus = Some(coeffs);
                    rest = inner.1.trim_start_matches(',');
                }
                _ => return Err(bad()),
            }
        }
        Ok(FieldSpec {
            p: p.ok_or_else(bad)?,
            e: e.ok_or_else(bad)?,
            modulus,
        })
    }
}

// ---------------------------------------------------------------------------
// F_{p^e} context
// ---------------------------------------------------------------------------

/// Arithmetic context for F_{p^e} = F_p[x]/(modulus), p prime > 3.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u64,
    e: usize,
    q: u64,
    /// monic, degree e, constant first, e+1 entries
    modulus: Vec<u64>,
    /// x^e = sum red[i] x^i derived from the modulus
    red: Vec<u64>,
    half: FqElem,
    quarter: FqElem,
}

impl FieldCtx {
    /// Build a field context. The modulus, when supplied, must be monic of
    /// degree e with entries already reduced mod p; when omitted, the
    /// enumeration-least monic irreducible of degree e is chosen.
    pub fn new(p: u64, e: usize, modulus: Option<&[u64]>) -> Result<Self> {
        if p <= 3 || !is_prime(p) {
            return Err(Error::UnsupportedCharacteristic(p));
        }
        if e == 0 {
            return Err(Error::Usage("extension degree e must be at least 1".into()));
        }
        let q = (1..=e).try_fold(1u64, |acc, _| {
            acc.checked_mul(p).filter(|&v| v <= MAX_FIELD_ORDER)
        });
        let q = q.ok_or(Error::FieldTooLarge {
            q: (0..e).fold(1u128, |acc, _| acc.saturating_mul(p as u128)),
            bound: MAX_FIELD_ORDER,
        })?;

        let modulus = match modulus {
            Some(m) => {
                if m.len() != e + 1 || m[e] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::Usage(format!(
                        "modulus must be monic of degree {e} with entries in 0..{p} (got {m:?})"
                    )));
                }
                if !is_irreducible(m, p) {
                    return Err(Error::ReducibleModulus {
                        coeffs: m.to_vec(),
                        p,
                    });
                }
                m.to_vec()
            }
            None => Self::default_modulus(p, e),
        };

        let red: Vec<u64> = modulus[..e].iter().map(|&c| subm(0, c, p)).collect();
        let mut ctx = FieldCtx {
            p,
            e,
            q,
            modulus,
            red,
            half: FqElem { coeffs: vec![0; e] },
            quarter: FqElem { coeffs: vec![0; e] },
        };
        let mut half = vec![0u64; e];
        half[0] = invm(2 % p, p);
        let mut quarter = vec![0u64; e];
        quarter[0] = invm(4 % p, p);
        ctx.half = FqElem { coeffs: half };
        ctx.quarter = FqElem { coeffs: quarter };
        Ok(ctx)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        Self::new(spec.p, spec.e, spec.modulus.as_deref())
    }

    /// Enumeration-least monic irreducible of degree e: lower-coefficient
    /// vectors are walked with the constant term varying fastest.
    fn default_modulus(p: u64, e: usize) -> Vec<u64> {
        if e == 1 {
            return vec![0, 1]; // x
        }
        let total = p.pow(e as u32);
        for idx in 0..total {
            let mut f = Vec::with_capacity(e + 1);
            let mut rem = idx;
            for _ in 0..e {
                f.push(rem % p);
                rem /= p;
            }
            f.push(1);
            if is_irreducible(&f, p) {
                return f;
            }
        }
        unreachable!("monic irreducibles of every degree exist over F_p")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn extension_degree(&self) -> usize {
        self.e
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// `p=5,e=2,mod=[2,0,1]`
    pub fn spec_string(&self) -> String {
        FieldSpec {
            p: self.p,
            e: self.e,
            modulus: Some(self.modulus.clone()),
        }
        .to_string()
    }

    /// Canonical element from arbitrary residues (len <= e, reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FqElem> {
        if coeffs.len() > self.e {
            return Err(Error::Usage(format!(
                "element has {} coordinates, field degree is {}",
                coeffs.len(),
                self.e
            )));
        }
        let mut v = vec![0u64; self.e];
        for (i, &c) in coeffs.iter().enumerate() {
            v[i] = c % self.p;
        }
        Ok(FqElem { coeffs: v })
    }

    pub fn from_u64(&self, r: u64) -> FqElem {
        let mut v = vec![0u64; self.e];
        v[0] = r % self.p;
        FqElem { coeffs: v }
    }

    pub fn from_i64(&self, r: i64) -> FqElem {
        let p = self.p as i64;
        self.from_u64(((r % p + p) % p) as u64)
    }

    pub fn half(&self) -> FqElem {
        self.half.clone()
    }

    pub fn quarter(&self) -> FqElem {
        self.quarter.clone()
    }

    /// Reduce an arbitrary-precision integer into the prime subfield.
    pub fn from_biguint_mod_p(&self, n: &BigUint) -> FqElem {
        let r = (n % BigUint::from(self.p)).to_u64().expect("residue fits");
        self.from_u64(r)
    }

    /// Multiplicative order of 2, by direct search (2 != 0 since p > 3).
    pub fn order_of_two(&self) -> u64 {
        let two = self.from_u64(2);
        let mut acc = two.clone();
        let mut k = 1;
        while acc != self.one() {
            acc = self.mul(&acc, &two);
            k += 1;
        }
        k
    }
}

impl Field for FieldCtx {
    type Elem = FqElem;

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn order(&self) -> u64 {
        self.q
    }

    fn zero(&self) -> FqElem {
        FqElem {
            coeffs: vec![0; self.e],
        }
    }

    fn one(&self) -> FqElem {
        let mut v = vec![0u64; self.e];
        v[0] = 1;
        FqElem { coeffs: v }
    }

    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| addm(x, y, self.p))
            .collect();
        FqElem { coeffs }
    }

    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| subm(x, y, self.p))
            .collect();
        FqElem { coeffs }
    }

    fn neg(&self, a: &FqElem) -> FqElem {
        let coeffs = a.coeffs.iter().map(|&x| subm(0, x, self.p)).collect();
        FqElem { coeffs }
    }

    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.p;
        if self.e == 1 {
            return FqElem {
                coeffs: vec![mulm(a.coeffs[0], b.coeffs[0], p)],
            };
        }
        // schoolbook product, then fold degrees >= e down via x^e = red
        let mut wide = vec![0u64; 2 * self.e - 1];
        for (i, &ai) in a.coeffs.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.coeffs.iter().enumerate() {
                wide[i + j] = addm(wide[i + j], mulm(ai, bj, p), p);
            }
        }
        for d in (self.e..wide.len()).rev() {
            let c = wide[d];
            if c == 0 {
                continue;
            }
            wide[d] = 0;
            for (i, &ri) in self.red.iter().enumerate() {
                if ri != 0 {
                    wide[d - self.e + i] = addm(wide[d - self.e + i], mulm(c, ri, p), p);
                }
            }
        }
        wide.truncate(self.e);
        FqElem { coeffs: wide }
    }

    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if self.is_zero(a) {
            return None;
        }
        if self.e == 1 {
            return Some(FqElem {
                coeffs: vec![invm(a.coeffs[0], self.p)],
            });
        }
        let mut trimmed = a.coeffs.clone();
        ptrim(&mut trimmed);
        let inv = pinv_mod(&trimmed, &self.modulus, self.p)
            .expect("irreducible modulus: every nonzero element is invertible");
        let mut v = inv;
        v.resize(self.e, 0);
        Some(FqElem { coeffs: v })
    }

    fn element(&self, index: u64) -> FqElem {
        debug_assert!(index < self.q);
        let mut v = Vec::with_capacity(self.e);
        let mut rem = index;
        for _ in 0..self.e {
            v.push(rem % self.p);
            rem /= self.p;
        }
        FqElem { coeffs: v }
    }

    fn index_of(&self, a: &FqElem) -> u64 {
        let mut idx = 0u64;
        for &c in a.coeffs.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }

    fn int(&self, v: i64) -> FqElem {
        self.from_i64(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_characteristic() {
        assert!(matches!(
            FieldCtx::new(3, 1, None),
            Err(Error::UnsupportedCharacteristic(3))
        ));
        assert!(matches!(
            FieldCtx::new(4, 1, None),
            Err(Error::UnsupportedCharacteristic(4))
        ));
        assert!(matches!(
            FieldCtx::new(2, 1, None),
            Err(Error::UnsupportedCharacteristic(2))
        ));
    }

    #[test]
    fn prime_field_enumeration() {
        let f5 = FieldCtx::new(5, 1, None).unwrap();
        let elems: Vec<u64> = f5.elements().map(|x| x.coeffs()[0]).collect();
        assert_eq!(elems, vec![0, 1, 2, 3, 4]);
        assert_eq!(f5.modulus(), &[0, 1]);
        assert_eq!(f5.spec_string(), "p=5,e=1,mod=[0,1]");
    }

    #[test]
    fn default_modulus_f25_is_x2_plus_2() {
        // walk of monic quadratics over F_5: x^2, x^2+1 both have roots,
        // x^2+2 does not
        let f25 = FieldCtx::new(5, 2, None).unwrap();
        assert_eq!(f25.modulus(), &[2, 0, 1]);
        assert_eq!(f25.spec_string(), "p=5,e=2,mod=[2,0,1]");
    }

    #[test]
    fn default_modulus_is_deterministic() {
        for (p, e) in [(5, 2), (7, 2), (5, 3), (11, 2)] {
            let a = FieldCtx::new(p, e, None).unwrap();
            let b = FieldCtx::new(p, e, None).unwrap();
            assert_eq!(a.modulus(), b.modulus(), "p={p}, e={e}");
        }
    }

    #[test]
    fn explicit_modulus_validation() {
        // x^2 + 1 has root 2 over F_5
        assert!(matches!(
            FieldCtx::new(5, 2, Some(&[1, 0, 1])),
            Err(Error::ReducibleModulus { .. })
        ));
        // x^2 + x + 1 has no root over F_5
        let f = FieldCtx::new(5, 2, Some(&[1, 1, 1])).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // malformed: not monic
        assert!(matches!(
            FieldCtx::new(5, 2, Some(&[1, 0, 2])),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn fermat_exhaustive_small_fields() {
        for (p, e) in [
            (5, 1),
            (7, 1),
            (11, 1),
            (13, 1),
            (5, 2),
            (7, 2),
            (11, 2),
            (5, 3),
        ] {
            let f = FieldCtx::new(p, e, None).unwrap();
            let q = f.order();
            for x in f.elements() {
                assert_eq!(f.pow_u64(&x, q), x, "x^q = x in q={q}");
            }
        }
    }

    #[test]
    fn pow_examples() {
        let f5 = FieldCtx::new(5, 1, None).unwrap();
        assert_eq!(f5.pow_u64(&f5.from_u64(2), 4), f5.one());
        let f7 = FieldCtx::new(7, 1, None).unwrap();
        assert_eq!(f7.pow_u64(&f7.from_u64(2), 10), f7.from_u64(2));
        // 0^0 = 1
        assert_eq!(f5.pow_u64(&f5.zero(), 0), f5.one());
        assert_eq!(f5.pow(&f5.zero(), &BigUint::from(0u32)), f5.one());
    }

    #[test]
    fn sqrt_canonical_and_complete() {
        let f5 = FieldCtx::new(5, 1, None).unwrap();
        assert_eq!(f5.sqrt_opt(&f5.from_u64(4)), Some(f5.from_u64(2)));
        assert_eq!(f5.sqrt_opt(&f5.from_u64(2)), None);
        assert_eq!(f5.sqrt_opt(&f5.zero()), Some(f5.zero()));

        // exhaustive: sqrt agrees with brute-force square tables
        for (p, e) in [(5, 1), (7, 1), (13, 1), (5, 2), (7, 2)] {
            let f = FieldCtx::new(p, e, None).unwrap();
            for x in f.elements() {
                let roots: Vec<FqElem> = f.elements().filter(|r| f.mul(r, r) == x).collect();
                match f.sqrt_opt(&x) {
                    Some(r) => {
                        assert!(roots.contains(&r));
                        // canonical: smallest enumeration index among the roots
                        let min = roots.iter().map(|r| f.index_of(r)).min().unwrap();
                        assert_eq!(f.index_of(&r), min);
                    }
                    None => assert!(roots.is_empty()),
                }
            }
        }
    }

    #[test]
    fn first_nonsquare_f5_is_2() {
        let f5 = FieldCtx::new(5, 1, None).unwrap();
        assert_eq!(f5.first_nonsquare(), f5.from_u64(2));
    }

    #[test]
    fn inverses_round_trip() {
        for (p, e) in [(5, 1), (7, 2), (5, 3), (13, 1)] {
            let f = FieldCtx::new(p, e, None).unwrap();
            for x in f.elements().skip(1) {
                let xi = f.inv(&x).unwrap();
                assert_eq!(f.mul(&x, &xi), f.one());
            }
            assert_eq!(f.inv(&f.zero()), None);
        }
    }

    #[test]
    fn cached_constants() {
        let f5 = FieldCtx::new(5, 1, None).unwrap();
        assert_eq!(f5.half(), f5.from_u64(3));
        assert_eq!(f5.quarter(), f5.from_u64(4));
        let f7 = FieldCtx::new(7, 1, None).unwrap();
        assert_eq!(f7.quarter(), f7.from_u64(2));
        assert_eq!(f7.order_of_two(), 3);
    }

    #[test]
    fn element_index_round_trip() {
        for (p, e) in [(5, 1), (5, 2), (7, 2), (5, 3)] {
            let f = FieldCtx::new(p, e, None).unwrap();
            for i in 0..f.order() {
                assert_eq!(f.index_of(&f.element(i)), i);
            }
        }
    }

    #[test]
    fn ordering_matches_enumeration_index() {
        let f = FieldCtx::new(5, 2, None).unwrap();
        let mut sorted: Vec<FqElem> = f.elements().collect();
        sorted.sort();
        let walked: Vec<FqElem> = f.elements().collect();
        assert_eq!(sorted, walked);
    }

    #[test]
    fn spec_round_trip() {
        let s: FieldSpec = "p=5,e=2,mod=[2,0,1]".parse().unwrap();
        assert_eq!(
            s,
            FieldSpec {
                p: 5,
                e: 2,
                modulus: Some(vec![2, 0, 1])
            }
        );
        assert_eq!(s.to_string(), "p=5,e=2,mod=[2,0,1]");
        let t: FieldSpec = "p=7,e=1".parse().unwrap();
        assert_eq!(t.modulus, None);
        assert!("p=x,e=1".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn int_embedding() {
        let f = FieldCtx::new(7, 2, None).unwrap();
        assert_eq!(f.int(-1), f.from_u64(6));
        assert_eq!(f.int(-8), f.from_u64(6));
        assert_eq!(f.int(9), f.from_u64(2));
    }
}
