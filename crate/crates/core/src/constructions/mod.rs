//! Explicit perfect colorings and the constructions that build new ones
//! from smaller ones.
//!
//! Every constructor returns a [`Construction`]: the coloring together with
//! the quotient matrix and spectrum it is supposed to have, in the color order
//! of the coloring. [`Construction::verify`] checks both.

mod fab;
mod q9;

pub use fab::{constr3, constr3_with, fab_families, g_ij, g_of, reconstruct_fab, FabFamily, Split};
pub use q9::{g_based_coloring, q9_coloring, quasigroup_coloring, star_equation_coloring, Group, Q9Variant};

use crate::error::{Error, Result};
use crate::hypercube::{Coloring, Dimension};
use crate::spectral::{eigenvalues, quotient_matrix, QuotientMatrix};
use serde::Serialize;

/// What a construction claims about its output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionSpec {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub expected: QuotientMatrix,
    /// `(eigenvalue, multiplicity)`, eigenvalues descending.
    pub eigenvalues: Vec<(i32, u32)>,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub spec: ConstructionSpec,
    pub coloring: Coloring,
}

impl Construction {
    fn new(name: &str, params: Vec<(String, String)>, expected: QuotientMatrix, eig: &[i32], coloring: Coloring) -> Self {
        let spec = ConstructionSpec { name: name.into(), params, expected, eigenvalues: multiset(eig) };
        Construction { spec, coloring }
    }

    /// The quotient matrix must equal the expected one entry by entry, and
    /// its eigenvalues must match the stated spectrum.
    pub fn verify(&self) -> Result<()> {
        let q = quotient_matrix(&self.coloring)?;
        if q != self.spec.expected {
            return Err(Error::Precondition(format!(
                "{}: quotient matrix {q} differs from {}",
                self.spec.name, self.spec.expected
            )));
        }
        let eig = eigenvalues(&q, self.coloring.n())?;
        if eig != self.spec.eigenvalues {
            return Err(Error::Precondition(format!(
                "{}: eigenvalues {eig:?} differ from {:?}",
                self.spec.name, self.spec.eigenvalues
            )));
        }
        Ok(())
    }
}

/// Eigenvalue list as descending `(value, multiplicity)` pairs.
pub fn multiset(eig: &[i32]) -> Vec<(i32, u32)> {
    let mut v = eig.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    let mut out: Vec<(i32, u32)> = Vec::new();
    for x in v {
        match out.last_mut() {
            Some((y, m)) if *y == x => *m += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

fn flat(spec: &[(i32, u32)]) -> Vec<i32> {
    spec.iter().flat_map(|&(l, m)| std::iter::repeat_n(l, m as usize)).collect()
}

fn param(name: &str, value: impl ToString) -> (String, String) {
    (name.to_string(), value.to_string())
}

fn matrix(rows: Vec<Vec<i64>>) -> QuotientMatrix {
    QuotientMatrix::new(rows.into_iter().map(|r| r.into_iter().map(|x| x as u32).collect()).collect())
        .expect("well-formed matrix")
}

/// The two quadrant-by-quadrant matrices of [`constr1`] and [`constr3`].
fn twin_pairs_matrix(n: u32, b: u32, c: u32) -> QuotientMatrix {
    let (n, b, c) = (n as i64, b as i64, c as i64);
    matrix(vec![
        vec![n - b - 2, b, 1, 1],
        vec![b, n - b - 2, 1, 1],
        vec![1, 1, n - c - 2, c],
        vec![1, 1, c, n - c - 2],
    ])
}

fn twin_pairs_spectrum(n: u32, b: u32, c: u32) -> Vec<i32> {
    let (n, b, c) = (n as i32, b as i32, c as i32);
    vec![n, n - 4, n - 2 * b - 2, n - 2 * c - 2]
}

/// `g(x, x_{n-1}) = (x_{n-1}, f(x))` on `Q_n`, with color `x_{n-1} k + f(x)`.
pub fn constr0(f: &Coloring) -> Result<Construction> {
    let s = quotient_matrix(f)?;
    let spec = eigenvalues(&s, f.n())?;
    let n = Dimension::new(f.n().get() + 1)?;
    let k = f.k() as usize;
    let m = f.n().order() as u32;
    let colors = (0..n.order() as u32).map(|v| f.color(v % m) + (v / m) as u16 * k as u16).collect();
    let rows = (0..2 * k)
        .map(|i| {
            (0..2 * k)
                .map(|j| {
                    let same = (i < k) == (j < k);
                    let e = if same { s.get(i % k, j % k) } else { (i % k == j % k) as u32 };
                    e as i64
                })
                .collect()
        })
        .collect();
    let eig: Vec<i32> = flat(&spec).into_iter().flat_map(|l| [l + 1, l - 1]).collect();
    Ok(Construction::new("constr0", vec![param("n", n), param("k", 2 * k)], matrix(rows), &eig, Coloring::new(n, colors)?))
}

fn check_half(f: &Coloring, b: u32, what: &str) -> Result<()> {
    let m = f.n().get();
    let expected = match f.k() {
        1 if b == 0 => matrix(vec![vec![m as i64]]),
        2 if b > 0 && b <= m => matrix(vec![vec![(m - b) as i64, b as i64], vec![b as i64, (m - b) as i64]]),
        _ => return Err(Error::Precondition(format!("{what} must be a 1-coloring (b = 0) or 2-coloring (b > 0)"))),
    };
    let q = quotient_matrix(f)?;
    if q != expected {
        return Err(Error::Precondition(format!("{what} has quotient matrix {q}, expected {expected}")));
    }
    Ok(())
}

/// The 4-coloring of `Q_{m+2}` equal to `f`, `1 - f`, `2 + g`, `3 - g` on the
/// quadrants `(x_{n-2}, x_{n-1}) = (0,0), (1,1), (0,1), (1,0)`, where `f`, `g`
/// are colorings of `Q_m` with symmetric matrices of off-diagonal `b`, `c`.
pub fn constr1(f: &Coloring, g: &Coloring, b: u32, c: u32) -> Result<Construction> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch(f.n().get(), g.n().get()));
    }
    check_half(f, b, "f")?;
    check_half(g, c, "g")?;
    let n = Dimension::new(f.n().get() + 2)?;
    let m = f.n().order() as u32;
    let colors = (0..n.order() as u32)
        .map(|v| {
            let (x, q) = (v % m, v / m);
            match (q & 1, q >> 1) {
                (0, 0) => f.color(x),
                (1, 1) => 1 - f.color(x),
                (0, 1) => 2 + g.color(x),
                _ => 3 - g.color(x),
            }
        })
        .collect();
    let params = vec![param("n", n), param("b", b), param("c", c)];
    let eig = twin_pairs_spectrum(n.get(), b, c);
    Ok(Construction::new("constr1", params, twin_pairs_matrix(n.get(), b, c), &eig, Coloring::new(n, colors)?))
}

/// Distance from the all-zero word; tridiagonal matrix with entries `i`, `n - i`.
pub fn distance_coloring(n: Dimension) -> Result<Construction> {
    if n.get() == 0 {
        return Err(Error::InvalidArgument("distance coloring needs n >= 1".into()));
    }
    let m = n.get() as usize;
    let rows = (0..=m)
        .map(|i| {
            (0..=m)
                .map(|j| match j {
                    _ if j + 1 == i => i as i64,
                    _ if j == i + 1 => (m - i) as i64,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    let eig: Vec<i32> = (0..=m as i32).map(|i| m as i32 - 2 * i).collect();
    Ok(Construction::new(
        "distance",
        vec![param("n", n)],
        matrix(rows),
        &eig,
        Coloring::distance_coloring(n, 0),
    ))
}

/// The 8-coloring `(x_0+x_1+x_3+x_4, x_1+x_2+x_4+x_5, x_0+x_1+x_2)` of `Q_6`,
/// color `4a + 2b + c`. Colors differing only in `c` are never adjacent.
pub fn six_argument_example() -> Construction {
    let n = Dimension::new(6).expect("small");
    let bit = |v: u32, j: u32| (v >> j) & 1;
    let colors = (0..64u32)
        .map(|v| {
            let a = bit(v, 0) ^ bit(v, 1) ^ bit(v, 3) ^ bit(v, 4);
            let b = bit(v, 1) ^ bit(v, 2) ^ bit(v, 4) ^ bit(v, 5);
            let c = bit(v, 0) ^ bit(v, 1) ^ bit(v, 2);
            (4 * a + 2 * b + c) as u16
        })
        .collect();
    let rows = (0..8usize).map(|i| (0..8usize).map(|j| (i != j && i ^ j != 1) as i64).collect()).collect();
    let coloring = Coloring::new(n, colors).expect("all eight colors occur");
    Construction::new("six_argument_example", vec![param("n", 6)], matrix(rows), &[6, 0, 0, 0, 0, -2, -2, -2], coloring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::essential_arguments;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn constr0_of_constant_is_a_coordinate() {
        for n in 1..6 {
            let c = constr0(&Coloring::constant(dim(n))).unwrap();
            c.verify().unwrap();
            assert_eq!(c.coloring, Coloring::coordinate(dim(n + 1), n).unwrap());
        }
    }

    #[test]
    fn constr0_of_parity() {
        let c = constr0(&Coloring::parity(dim(4))).unwrap();
        c.verify().unwrap();
        assert_eq!(c.spec.eigenvalues, vec![(5, 1), (3, 1), (-3, 1), (-5, 1)]);
    }

    #[test]
    fn constr1_small_cases() {
        let one = Coloring::constant(dim(0));
        let c = constr1(&one, &one, 0, 0).unwrap();
        c.verify().unwrap();
        assert_eq!(c.spec.eigenvalues, vec![(2, 1), (0, 2), (-2, 1)]);

        let x = Coloring::coordinate(dim(3), 0).unwrap();
        let c = constr1(&x, &Coloring::constant(dim(3)), 1, 0).unwrap();
        c.verify().unwrap();
        assert_eq!(c.spec.expected, QuotientMatrix::parse("2,1,1,1;1,2,1,1;1,1,3,0;1,1,0,3").unwrap());
        assert_eq!(c.spec.eigenvalues, vec![(5, 1), (3, 1), (1, 2)]);
    }

    #[test]
    fn constr1_rejects_wrong_parameters() {
        let x = Coloring::coordinate(dim(3), 0).unwrap();
        assert!(constr1(&x, &x, 2, 1).is_err());
        assert!(constr1(&x, &Coloring::constant(dim(3)), 1, 1).is_err());
        assert!(constr0(&Coloring::from_fn(dim(2), |v| (v == 0) as u8)).is_err());
    }

    #[test]
    fn distance_colorings() {
        for n in 1..7 {
            distance_coloring(dim(n)).unwrap().verify().unwrap();
        }
        assert_eq!(distance_coloring(dim(2)).unwrap().spec.expected, QuotientMatrix::parse("0,2,0;1,0,1;0,2,0").unwrap());
    }

    #[test]
    fn six_argument_example_is_perfect() {
        let c = six_argument_example();
        c.verify().unwrap();
        assert_eq!(essential_arguments(&c.coloring).len(), 6);
    }
}
