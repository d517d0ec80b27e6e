//! Exact binomial coefficients.

use num_bigint::{BigInt, BigUint};

/// C(n, k) as an exact nonnegative integer; 0 when k > n.
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    // Every prefix product is itself a binomial coefficient, so the division
    // below is exact at each step.
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The full row C(n, 0), ..., C(n, n), built incrementally.
pub fn binom_row(n: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut cur = BigUint::from(1u32);
    row.push(cur.clone());
    for m in 0..n {
        cur = cur * (n - m) / (m + 1);
        row.push(cur.clone());
    }
    row
}

/// C(n, k) as a signed big integer, for formulas that mix signs.
pub fn binom_signed(n: u64, k: u64) -> BigInt {
    BigInt::from(binom(n, k))
}
