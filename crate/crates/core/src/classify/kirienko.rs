//! Closed-form count of `(n-4)`-resilient Boolean functions, which by the
//! bipartite flip is also the count of functions of degree at most 3.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Coefficients from `n^10` down to `n^0`, as `(numerator, denominator)`.
const COEFFS: [(i64, i64); 11] = [
    (1, 2),
    (7, 6),
    (890, 9),
    (-10903, 9),
    (64288, 45),
    (953308, 45),
    (-1341569, 18),
    (899251, 18),
    (365018, 5),
    (-1048961, 15),
    (2, 1),
];

/// The polynomial evaluated exactly at `n`.
pub fn kirienko_polynomial(n: u64) -> BigRational {
    let x = BigRational::from_integer(BigInt::from(n));
    COEFFS.iter().fold(BigRational::zero(), |acc, &(p, q)| {
        acc * &x + BigRational::new(BigInt::from(p), BigInt::from(q))
    })
}

/// Number of `(n-4)`-resilient functions of `n` arguments.
pub fn kirienko_count(n: u64) -> BigInt {
    let v = kirienko_polynomial(n);
    debug_assert!(v.denom().is_one());
    v.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_on_a_range() {
        for n in 0..40 {
            assert!(kirienko_polynomial(n).denom().is_one(), "n = {n}");
        }
    }
}
