use crate::hypercube::{Coloring, Dimension, Fiber};
use serde::{Deserialize, Serialize};

/// `coeffs[S] = Σ_v (-1)^{|S & v|} t(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalshSpectrum {
    pub n: Dimension,
    pub coeffs: Vec<i64>,
}

/// In-place unnormalized Walsh–Hadamard butterfly.
pub fn fwht(a: &mut [i64]) {
    let len = a.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for i in block..block + h {
                let (x, y) = (a[i], a[i + h]);
                a[i] = x + y;
                a[i + h] = x - y;
            }
        }
        h <<= 1;
    }
}

pub fn walsh(t: &Fiber) -> WalshSpectrum {
    let mut coeffs: Vec<i64> = (0..t.n().order() as u32).map(|v| t.get(v) as i64).collect();
    fwht(&mut coeffs);
    WalshSpectrum { n: t.n(), coeffs }
}

impl WalshSpectrum {
    /// Values of the original function; `None` if the spectrum is not the
    /// transform of an integer function.
    pub fn inverse(&self) -> Option<Vec<i64>> {
        let mut a = self.coeffs.clone();
        fwht(&mut a);
        let len = a.len() as i64;
        a.iter().map(|&x| if x % len == 0 { Some(x / len) } else { None }).collect()
    }

    /// Bit `i` set iff some coefficient with `|S| = i` is nonzero.
    pub fn level_support(&self) -> u32 {
        let mut m = 0;
        for (s, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                m |= 1 << (s as u32).count_ones();
            }
        }
        m
    }

    /// Union of the supports of all nonzero coefficients, as a coordinate mask.
    pub fn support_coordinates(&self) -> u32 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .fold(0, |m, (s, _)| m | s as u32)
    }

    pub fn parseval_sum(&self) -> i64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// Largest `|S|` with a nonzero coefficient; `0` for constants.
pub fn fiber_degree(t: &Fiber) -> u32 {
    let s = walsh(t).level_support();
    if s == 0 {
        0
    } else {
        31 - s.leading_zeros()
    }
}

/// Union over fibers of [`WalshSpectrum::level_support`].
pub fn level_support(f: &Coloring) -> u32 {
    let k = f.k() as usize;
    // the last fiber is the complement of the others, so it adds nothing beyond level 0
    let mut m = 1;
    for t in f.fibers().iter().take(k.saturating_sub(1)) {
        m |= walsh(t).level_support();
    }
    m
}

pub fn degree(f: &Coloring) -> u32 {
    let s = level_support(f);
    31 - s.leading_zeros()
}

/// Largest `t` such that every fiber has vanishing coefficients on levels `1..=t`.
pub fn correlation_immunity(f: &Coloring) -> i32 {
    ci_from_support(level_support(f), f.n().get())
}

pub(crate) fn ci_from_support(support: u32, n: u32) -> i32 {
    let s = support & !1;
    if s == 0 {
        n as i32
    } else {
        s.trailing_zeros() as i32 - 1
    }
}

/// Correlation-immunity order for balanced colorings, `-1` otherwise.
pub fn resilience(f: &Coloring) -> i32 {
    let sizes = f.class_sizes();
    if sizes.iter().all(|&s| s == sizes[0]) {
        correlation_immunity(f)
    } else {
        -1
    }
}

/// Complement the values on odd-weight vertices.
pub fn bipartite_flip(t: &Fiber) -> Fiber {
    t.xor(&Fiber::parity_odd(t.n()))
}
