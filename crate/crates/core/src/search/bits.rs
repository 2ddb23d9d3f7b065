//! Coordinate actions on truth tables packed into one machine word
//! (`u64` for `n <= 6`, `u128` for `n <= 7`).

const LOW64: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

#[inline]
fn low128(j: u32) -> u128 {
    if j == 6 {
        u64::MAX as u128
    } else {
        let m = LOW64[j as usize] as u128;
        m | (m << 64)
    }
}

/// `y(v) = x(v ^ 2^j)`.
#[inline]
pub fn flip64(x: u64, j: u32) -> u64 {
    let s = 1u32 << j;
    let m = LOW64[j as usize];
    ((x & m) << s) | ((x >> s) & m)
}

#[inline]
pub fn flip128(x: u128, j: u32) -> u128 {
    let s = 1u32 << j;
    let m = low128(j);
    ((x & m) << s) | ((x >> s) & m)
}

/// `y(v) = x(σ_ij v)` where `σ_ij` exchanges bits `i` and `j`.
#[inline]
pub fn swap64(x: u64, i: u32, j: u32) -> u64 {
    if i == j {
        return x;
    }
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    // positions with bit i set and bit j clear
    let m = !LOW64[i as usize] & LOW64[j as usize];
    let s = (1u32 << j) - (1u32 << i);
    let t = ((x >> s) ^ x) & m;
    x ^ t ^ (t << s)
}

#[inline]
pub fn swap128(x: u128, i: u32, j: u32) -> u128 {
    if i == j {
        return x;
    }
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    let m = !low128(i) & low128(j);
    let s = (1u32 << j) - (1u32 << i);
    let t = ((x >> s) ^ x) & m;
    x ^ t ^ (t << s)
}

/// All-ones mask of a `2^n`-entry table, `n <= 6`.
#[inline]
pub fn full64(n: u32) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << n)) - 1
    }
}

#[inline]
pub fn full128(n: u32) -> u128 {
    if n >= 7 {
        u128::MAX
    } else {
        (1u128 << (1u32 << n)) - 1
    }
}

/// Transpositions `σ_1, ..., σ_r` with `P = σ_r ∘ ... ∘ σ_1`, where `P`
/// sends bit `j` to bit `perm[j]`.
pub fn transpositions(perm: &[u8]) -> Vec<(u32, u32)> {
    let mut q: Vec<u8> = perm.to_vec();
    let mut out = Vec::new();
    for i in 0..q.len() {
        let j = q.iter().position(|&x| x as usize == i).expect("permutation");
        if j != i {
            q.swap(i, j);
            out.push((i as u32, j as u32));
        }
    }
    out
}

/// Pull-back `y(v) = x(α(v))` for `α(v) = P(v ^ flips)`, with `P` given by
/// [`transpositions`].
#[inline]
pub fn pull64(x: u64, swaps: &[(u32, u32)], flips: u32) -> u64 {
    let mut y = x;
    for &(i, j) in swaps.iter().rev() {
        y = swap64(y, i, j);
    }
    let mut f = flips;
    while f != 0 {
        y = flip64(y, f.trailing_zeros());
        f &= f - 1;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(x: u128, n: u32, f: impl Fn(u32) -> u32) -> u128 {
        (0..1u32 << n).filter(|&v| (x >> f(v)) & 1 == 1).fold(0, |acc, v| acc | (1u128 << v))
    }

    #[test]
    fn against_naive() {
        let x: u128 = 0x9e37_79b9_7f4a_7c15_f39c_c060_5ced_c834;
        for j in 0..7 {
            assert_eq!(flip128(x, j), naive(x, 7, |v| v ^ (1 << j)));
            if j < 6 {
                let y = x as u64;
                assert_eq!(flip64(y, j) as u128, naive(y as u128, 6, |v| v ^ (1 << j)));
            }
            for i in 0..7 {
                let sw = |v: u32| {
                    let (a, b) = ((v >> i) & 1, (v >> j) & 1);
                    (v & !(1 << i) & !(1 << j)) | (b << i) | (a << j)
                };
                assert_eq!(swap128(x, i, j), naive(x, 7, sw));
                if i < 6 && j < 6 {
                    assert_eq!(swap64(x as u64, i, j) as u128, naive(x as u64 as u128, 6, sw));
                }
            }
        }
    }

    #[test]
    fn pull_back_matches_table() {
        use crate::hypercube::{Dimension, Fiber, SignedPermutation};
        let d = Dimension::new(6).unwrap();
        let x: u64 = 0x9e37_79b9_7f4a_7c15;
        let t = Fiber::from_words(d, vec![x]).unwrap();
        for perm in [[0u8, 1, 2, 3, 4, 5], [1, 2, 0, 5, 3, 4], [5, 4, 3, 2, 1, 0], [2, 0, 1, 4, 5, 3]] {
            for flips in [0u32, 1, 0b101101, 63] {
                let a = SignedPermutation::new(d, perm.to_vec(), flips).unwrap();
                let y = pull64(x, &transpositions(&perm), flips);
                assert_eq!(y, t.apply(&a).words()[0]);
            }
        }
    }
}
