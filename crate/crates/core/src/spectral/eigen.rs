use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Coefficients of `det(xI - A)`, lowest degree first.
pub fn characteristic_polynomial(a: &[Vec<i64>]) -> Vec<BigInt> {
    let k = a.len();
    let m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut p = vec![BigInt::one()];
    for r in 0..k {
        // border of the leading (r+1)x(r+1) block: row R, column C, corner a
        let mut beta = Vec::with_capacity(r);
        let mut w: Vec<BigInt> = (0..r).map(|i| m[i][r].clone()).collect();
        for _ in 0..r {
            let b: BigInt = (0..r).map(|j| &m[r][j] * &w[j]).sum();
            beta.push(b);
            w = (0..r).map(|i| (0..r).map(|j| &m[i][j] * &w[j]).sum()).collect();
        }
        let mut q = vec![BigInt::zero(); r + 2];
        for (d, c) in p.iter().enumerate() {
            q[d + 1] += c;
            q[d] -= &m[r][r] * c;
        }
        for (kk, b) in beta.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let shift = kk + 1;
            for (d, c) in p.iter().enumerate().skip(shift) {
                q[d - shift] -= b * c;
            }
        }
        p = q;
    }
    p
}

/// Divide by `x - root` if the remainder is zero.
pub fn divide_root(p: &[BigInt], root: i64) -> Option<Vec<BigInt>> {
    if p.len() < 2 {
        return None;
    }
    let r = BigInt::from(root);
    let deg = p.len() - 1;
    let mut q = vec![BigInt::zero(); deg];
    let mut carry = BigInt::zero();
    for d in (0..=deg).rev() {
        let cur = &p[d] + &carry * &r;
        if d == 0 {
            return if cur.is_zero() { Some(q) } else { None };
        }
        q[d - 1] = cur.clone();
        carry = cur;
    }
    unreachable!()
}
