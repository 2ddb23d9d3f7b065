//! Perfectness, quotient matrices, exact spectra and Walsh analysis.

mod eigen;
mod walsh;

pub use eigen::{characteristic_polynomial, divide_root};
pub use walsh::{
    bipartite_flip, correlation_immunity, degree, fiber_degree, fwht, level_support, resilience,
    walsh, WalshSpectrum,
};
pub(crate) use walsh::ci_from_support;

use crate::error::{Error, Result};
use crate::hypercube::{Coloring, Dimension};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// `S[i][j]` = number of color-`j` neighbors of any color-`i` vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct QuotientMatrix {
    k: usize,
    entries: Vec<u32>,
}

impl QuotientMatrix {
    /// Rows must be square and share one row sum.
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        let r0: u32 = rows[0].iter().sum();
        for r in &rows {
            if r.len() != k {
                return Err(Error::InvalidArgument("matrix is not square".into()));
            }
            if r.iter().sum::<u32>() != r0 {
                return Err(Error::InvalidArgument("row sums differ".into()));
            }
        }
        Ok(QuotientMatrix { k, entries: rows.concat() })
    }

    /// `"a,b;c,d"` or a JSON array of rows.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('[') {
            let rows: Vec<Vec<u32>> = serde_json::from_str(s)?;
            return Self::new(rows);
        }
        let rows = s
            .split(';')
            .map(|r| {
                r.split(',')
                    .map(|x| x.trim().parse::<u32>().map_err(|e| Error::Parse(format!("{x:?}: {e}"))))
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Common row sum.
    pub fn n(&self) -> u32 {
        self.entries[..self.k].iter().sum()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.k + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.k).map(|i| self.row(i).to_vec()).collect()
    }

    /// `new[i][j] = self[p[i]][p[j]]`.
    pub fn permuted(&self, p: &[usize]) -> QuotientMatrix {
        let k = self.k;
        let mut entries = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                entries[i * k + j] = self.get(p[i], p[j]);
            }
        }
        QuotientMatrix { k, entries }
    }

    /// Representative of the class under simultaneous row/column permutation.
    pub fn canonical(&self) -> QuotientMatrix {
        self.permuted(&canonical_matrix_order(self))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.k).all(|i| (0..self.k).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// The unique positive density vector with `ρ_i S_ij = ρ_j S_ji` and `Σρ = 1`,
    /// if the matrix admits one.
    pub fn densities(&self) -> Option<Vec<BigRational>> {
        let k = self.k;
        let mut rho: Vec<Option<BigRational>> = vec![None; k];
        rho[0] = Some(BigRational::one());
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            for j in 0..k {
                let (a, b) = (self.get(i, j), self.get(j, i));
                if (a == 0) != (b == 0) {
                    return None;
                }
                if a == 0 {
                    continue;
                }
                let r = rho[i].clone().unwrap() * BigRational::new(a.into(), b.into());
                match &rho[j] {
                    None => {
                        rho[j] = Some(r);
                        stack.push(j);
                    }
                    Some(x) if *x != r => return None,
                    _ => {}
                }
            }
        }
        let rho: Vec<BigRational> = rho.into_iter().collect::<Option<_>>()?;
        let total: BigRational = rho.iter().sum();
        Some(rho.into_iter().map(|x| x / &total).collect())
    }

    pub fn eigenvalues(&self, n: Dimension) -> Result<Vec<(i32, u32)>> {
        eigenvalues(self, n)
    }
}

impl TryFrom<Vec<Vec<u32>>> for QuotientMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<u32>>) -> Result<Self> {
        QuotientMatrix::new(rows)
    }
}

impl From<QuotientMatrix> for Vec<Vec<u32>> {
    fn from(m: QuotientMatrix) -> Self {
        m.rows()
    }
}

impl fmt::Display for QuotientMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.k)
            .map(|i| self.row(i).iter().map(u32::to_string).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Order of the colors in the canonical matrix: lexicographically least
/// sequence of blocks `(invariant(σ_i), S[σ_i][σ_j], S[σ_j][σ_i] for j < i, S[σ_i][σ_i])`.
fn canonical_matrix_order(m: &QuotientMatrix) -> Vec<usize> {
    let k = m.k;
    let inv: Vec<Vec<u32>> = (0..k)
        .map(|i| {
            let mut r: Vec<u32> = m.row(i).to_vec();
            let d = r[i];
            r.sort_unstable();
            let mut c: Vec<u32> = (0..k).map(|j| m.get(j, i)).collect();
            c.sort_unstable();
            let mut key = vec![d];
            key.extend(r);
            key.extend(c);
            key
        })
        .collect();

    struct St<'a> {
        m: &'a QuotientMatrix,
        inv: &'a [Vec<u32>],
        order: Vec<usize>,
        used: Vec<bool>,
        best: Option<(Vec<u32>, Vec<usize>)>,
        cur: Vec<u32>,
    }
    fn block(st: &St, c: usize) -> Vec<u32> {
        let mut b = st.inv[c].clone();
        for &o in &st.order {
            b.push(st.m.get(c, o));
            b.push(st.m.get(o, c));
        }
        b
    }
    fn rec(st: &mut St) {
        let k = st.m.k;
        if st.order.len() == k {
            if st.best.as_ref().is_none_or(|(b, _)| st.cur < *b) {
                st.best = Some((st.cur.clone(), st.order.clone()));
            }
            return;
        }
        let mut blocks: Vec<(Vec<u32>, usize)> =
            (0..k).filter(|&c| !st.used[c]).map(|c| (block(st, c), c)).collect();
        blocks.sort();
        let min = blocks[0].0.clone();
        let start = st.cur.len();
        if let Some((best, _)) = &st.best {
            if min.as_slice() > &best[start..start + min.len()] && st.cur[..] == best[..start] {
                return;
            }
        }
        for (b, c) in blocks.into_iter().take_while(|(b, _)| *b == min) {
            st.cur.extend_from_slice(&b);
            st.order.push(c);
            st.used[c] = true;
            rec(st);
            st.used[c] = false;
            st.order.pop();
            st.cur.truncate(start);
        }
    }
    let mut st = St { m, inv: &inv, order: vec![], used: vec![false; k], best: None, cur: vec![] };
    rec(&mut st);
    st.best.unwrap().1
}

/// Quotient matrix of `f`, or [`Error::NotPerfect`] with a witness pair.
pub fn quotient_matrix(f: &Coloring) -> Result<QuotientMatrix> {
    let n = f.n().get();
    let k = f.k() as usize;
    let mut rep: Vec<Option<(u32, Vec<u16>)>> = vec![None; k];
    let mut prof = vec![0u16; n as usize];
    for v in 0..f.n().order() as u32 {
        for j in 0..n {
            prof[j as usize] = f.color(v ^ (1 << j));
        }
        prof.sort_unstable();
        let c = f.color(v) as usize;
        match &rep[c] {
            None => rep[c] = Some((v, prof.clone())),
            Some((w, p)) => {
                if *p != prof {
                    return Err(Error::NotPerfect { first: *w, second: v, color: c as u16 });
                }
            }
        }
    }
    let mut entries = vec![0u32; k * k];
    for (i, r) in rep.iter().enumerate() {
        for &c in &r.as_ref().expect("surjective coloring").1 {
            entries[i * k + c as usize] += 1;
        }
    }
    Ok(QuotientMatrix { k, entries })
}

pub fn is_perfect(f: &Coloring) -> bool {
    quotient_matrix(f).is_ok()
}

/// Exact class proportions `|f^{-1}(i)| / 2^n`.
pub fn densities(f: &Coloring) -> Vec<BigRational> {
    let total = BigInt::from(f.n().order() as u64);
    f.class_sizes()
        .into_iter()
        .map(|s| BigRational::new(BigInt::from(s), total.clone()))
        .collect()
}

/// Eigenvalues `n - 2i` with algebraic multiplicities, descending.
pub fn eigenvalues(s: &QuotientMatrix, n: Dimension) -> Result<Vec<(i32, u32)>> {
    let n = n.get() as i64;
    if s.n() as i64 != n {
        return Err(Error::InvalidArgument(format!("row sum {} differs from n = {n}", s.n())));
    }
    let rows: Vec<Vec<i64>> = (0..s.k()).map(|i| s.row(i).iter().map(|&x| x as i64).collect()).collect();
    let mut p = characteristic_polynomial(&rows);
    let mut out = Vec::new();
    let mut total = 0;
    for i in 0..=n {
        let lambda = n - 2 * i;
        let mut mult = 0;
        while let Some(q) = divide_root(&p, lambda) {
            p = q;
            mult += 1;
        }
        if mult > 0 {
            out.push((lambda as i32, mult));
            total += mult;
        }
    }
    if total as usize != s.k() || p.iter().skip(1).any(|c| !c.is_zero()) {
        return Err(Error::Irregular);
    }
    Ok(out)
}

/// Set of eigenvalues of a perfect coloring read off the Walsh level supports.
pub fn eigenvalue_set(f: &Coloring) -> Vec<i32> {
    let n = f.n().get() as i32;
    let s = level_support(f);
    (0..=n).filter(|&i| s & (1 << i) != 0).map(|i| n - 2 * i).collect()
}

/// Coordinates `j` with `f(v) != f(v ^ 2^j)` for some `v`.
pub fn essential_mask(f: &Coloring) -> u32 {
    let mut m = 0;
    let c = f.colors();
    for j in 0..f.n().get() {
        let b = 1usize << j;
        if (0..c.len()).any(|v| v & b == 0 && c[v] != c[v | b]) {
            m |= 1 << j;
        }
    }
    m
}

pub fn essential_arguments(f: &Coloring) -> Vec<u32> {
    let m = essential_mask(f);
    (0..f.n().get()).filter(|j| m & (1 << j) != 0).collect()
}

/// Identify color `j` with `i`, keeping the relative order of the rest.
pub fn merge_colors(f: &Coloring, i: u16, j: u16) -> Result<Coloring> {
    if i == j {
        return Err(Error::InvalidArgument("cannot merge a color with itself".into()));
    }
    if i >= f.k() || j >= f.k() {
        return Err(Error::InvalidArgument(format!("colors {i}, {j} outside [0, {})", f.k())));
    }
    let colors = f
        .colors()
        .iter()
        .map(|&c| {
            let c = if c == j { i } else { c };
            if c > j {
                c - 1
            } else {
                c
            }
        })
        .collect();
    Coloring::new(f.n(), colors)
}

/// Merge colors according to `groups[c]`, a surjection onto `[0, groups.max]`.
pub fn merge_groups(f: &Coloring, groups: &[u16]) -> Result<Coloring> {
    if groups.len() != f.k() as usize {
        return Err(Error::ColorCountMismatch(groups.len(), f.k() as usize));
    }
    Coloring::new(f.n(), f.colors().iter().map(|&c| groups[c as usize]).collect())
}

/// Common refinement `x -> (f(x), g(x))`, renamed by first occurrence.
pub fn combine(f: &Coloring, g: &Coloring) -> Result<Coloring> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch(f.n().get(), g.n().get()));
    }
    let labels: Vec<(u16, u16)> = f.colors().iter().copied().zip(g.colors().iter().copied()).collect();
    Coloring::from_labels(f.n(), &labels)
}

/// Machine-readable summary of a perfect coloring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub n: u32,
    pub k: u32,
    pub quotient: QuotientMatrix,
    pub eigenvalues: Vec<(i32, u32)>,
    pub degree: u32,
    pub ci_order: i32,
    pub resilience_order: i32,
    pub essential_args: Vec<u32>,
    pub densities: Vec<String>,
}

pub fn spectrum_report(f: &Coloring) -> Result<SpectrumReport> {
    let q = quotient_matrix(f)?;
    let eig = eigenvalues(&q, f.n())?;
    let min = eig.last().map(|e| e.0).unwrap_or(f.n().get() as i32);
    Ok(SpectrumReport {
        n: f.n().get(),
        k: f.k() as u32,
        eigenvalues: eig,
        degree: ((f.n().get() as i32 - min) / 2) as u32,
        ci_order: correlation_immunity(f),
        resilience_order: resilience(f),
        essential_args: essential_arguments(f),
        densities: densities(f).iter().map(|d| d.to_string()).collect(),
        quotient: q,
    })
}

/// `ρ_i S_ij = ρ_j S_ji` for the given densities.
pub fn satisfies_balance(s: &QuotientMatrix, rho: &[BigRational]) -> bool {
    let k = s.k();
    rho.len() == k
        && (0..k).all(|i| {
            (0..k).all(|j| &rho[i] * BigRational::from(BigInt::from(s.get(i, j))) == &rho[j] * BigRational::from(BigInt::from(s.get(j, i))))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::{parse_hex, Fiber};

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn m(s: &str) -> QuotientMatrix {
        QuotientMatrix::parse(s).unwrap()
    }

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn quotient_examples() {
        let q = quotient_matrix(&Coloring::distance_coloring(dim(3), 0)).unwrap();
        assert_eq!(q, m("0,3,0,0;1,0,2,0;0,2,0,1;0,0,3,0"));
        assert_eq!(quotient_matrix(&Coloring::constant(dim(5))).unwrap(), m("5"));
        assert_eq!(quotient_matrix(&Coloring::parity(dim(4))).unwrap(), m("0,4;4,0"));
        let bad = Coloring::new(dim(3), vec![1, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert!(matches!(quotient_matrix(&bad), Err(Error::NotPerfect { .. })));
    }

    #[test]
    fn density_examples() {
        assert_eq!(densities(&Coloring::parity(dim(3))), vec![r(1, 2), r(1, 2)]);
        assert_eq!(
            densities(&Coloring::distance_coloring(dim(3), 0)),
            vec![r(1, 8), r(3, 8), r(3, 8), r(1, 8)]
        );
        let t = parse_hex("c30000c3003c3c00003c3c00c30000c3", dim(7)).unwrap();
        let f = Coloring::from_fiber(&t);
        assert_eq!(densities(&f), vec![r(3, 4), r(1, 4)]);
        let q = quotient_matrix(&f).unwrap();
        assert!(satisfies_balance(&q, &densities(&f)));
        assert_eq!(q.densities().unwrap(), densities(&f));
    }

    #[test]
    fn eigen_examples() {
        assert_eq!(eigenvalues(&m("2,3;1,4"), dim(5)).unwrap(), vec![(5, 1), (1, 1)]);
        assert_eq!(eigenvalues(&m("0,3,6;3,0,6;3,3,3"), dim(9)).unwrap(), vec![(9, 1), (-3, 2)]);
        assert_eq!(eigenvalues(&m("7"), dim(7)).unwrap(), vec![(7, 1)]);
        // roots 2 ± sqrt(...) are not of the form n - 2i
        assert!(eigenvalues(&m("1,2;2,1"), dim(3)).is_ok());
        assert!(matches!(eigenvalues(&m("0,3;2,1"), dim(3)), Err(Error::Irregular)));
    }

    #[test]
    fn walsh_examples() {
        let d = dim(2);
        assert!(walsh(&Fiber::empty(d)).coeffs.iter().all(|&c| c == 0));
        assert_eq!(walsh(&Fiber::full(d)).coeffs, vec![4, 0, 0, 0]);
        let par = Fiber::from_vertices(d, [1, 2]).unwrap();
        assert_eq!(walsh(&par).coeffs, vec![2, 0, 0, -2]);
    }

    #[test]
    fn degree_and_immunity() {
        for n in 1..=6 {
            let d = dim(n);
            assert_eq!(fiber_degree(&Fiber::parity_odd(d)), n);
            let p = Coloring::parity(d);
            assert_eq!(correlation_immunity(&p), n as i32 - 1);
            assert_eq!(resilience(&p), n as i32 - 1);
        }
        let dist = Coloring::distance_coloring(dim(3), 0);
        assert_eq!(fiber_degree(&dist.fiber(0)), 3);
        assert!(dist.fibers().iter().all(|t| fiber_degree(t) <= 3));
        let code = Coloring::from_fiber(&parse_hex("c30000c3003c3c00003c3c00c30000c3", dim(7)).unwrap());
        assert_eq!(correlation_immunity(&code), 3);
        assert_eq!(resilience(&code), -1);
    }

    #[test]
    fn essential_examples() {
        let d = dim(5);
        assert!(essential_arguments(&Coloring::constant(d)).is_empty());
        assert_eq!(essential_arguments(&Coloring::coordinate(d, 3).unwrap()), vec![3]);
    }

    #[test]
    fn flip_examples() {
        let d = dim(4);
        assert_eq!(bipartite_flip(&Fiber::full(d)), Fiber::parity_even(d));
        assert!(bipartite_flip(&Fiber::parity_odd(d)).is_empty());
        let f = Coloring::from_fiber(&Fiber::parity_even(d));
        assert_eq!(correlation_immunity(&f), 3);
    }

    #[test]
    fn merges() {
        let p = Coloring::parity(dim(3));
        assert_eq!(merge_colors(&p, 0, 1).unwrap(), Coloring::constant(dim(3)));
        assert!(merge_colors(&p, 1, 1).is_err());
        assert_eq!(combine(&p, &p).unwrap(), p);
        let d = Coloring::distance_coloring(dim(3), 0);
        let m = merge_colors(&d, 0, 2).unwrap();
        assert_eq!(m.k(), 3);
        assert_eq!(m.colors()[0], 0);
        assert_eq!(m.colors()[7], 2);
    }

    #[test]
    fn matrix_canonical_form() {
        let a = m("0,3,0,0;1,0,2,0;0,2,0,1;0,0,3,0");
        let b = a.permuted(&[2, 0, 3, 1]);
        assert_eq!(a.canonical(), b.canonical());
        assert_ne!(m("2,3;1,4").canonical(), m("3,2;2,3").canonical());
        assert_eq!(m("4,1;2,3").canonical(), m("3,2;1,4").canonical());
    }
}
