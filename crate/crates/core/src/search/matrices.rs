//! Admissible quotient matrices: row sum `n`, a positive density vector with
//! integral class sizes, and every eigenvalue of the form `n - 2i`.

use crate::error::{Error, Result};
use crate::hypercube::Dimension;
use crate::spectral::QuotientMatrix;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MatrixConstraint {
    /// Every eigenvalue is at least the bound.
    MinEigenvalue(i32),
    /// Every eigenvalue other than `n` is at most the bound.
    MaxNonMain(i32),
    /// The set of distinct eigenvalues equals the given set.
    ExactEigenvalues(Vec<i32>),
    /// Correlation immunity at least `t`: no eigenvalue in `[n - 2t, n - 2]`.
    CorrelationImmune(u32),
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixCandidateSet {
    pub n: u32,
    pub k: usize,
    pub constraints: Vec<MatrixConstraint>,
    pub matrices: Vec<QuotientMatrix>,
}

/// Practical cap on the number of colors.
pub const MAX_CANDIDATE_K: usize = 5;

fn compositions(n: u32, k: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(left - x, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

fn eigen_ok(n: u32, eig: &[(i32, u32)], cons: &[MatrixConstraint]) -> bool {
    let n = n as i32;
    cons.iter().all(|c| match c {
        MatrixConstraint::MinEigenvalue(b) => eig.iter().all(|e| e.0 >= *b),
        MatrixConstraint::MaxNonMain(b) => eig.iter().all(|e| e.0 == n && e.1 == 1 || e.0 <= *b),
        MatrixConstraint::ExactEigenvalues(set) => {
            let a: BTreeSet<i32> = eig.iter().map(|e| e.0).collect();
            a == set.iter().copied().collect()
        }
        MatrixConstraint::CorrelationImmune(t) => {
            eig.iter().all(|e| e.0 == n && e.1 == 1 || e.0 < n - 2 * *t as i32)
        }
    })
}

/// All admissible `k x k` quotient matrices for `Q_n` under the constraints,
/// one per class under simultaneous row and column permutation.
///
/// Correlation-immunity constraints with `k >= 3` also enforce `t <= 2n/3 - 1`.
pub fn candidate_matrices(n: Dimension, k: usize, constraints: &[MatrixConstraint]) -> Result<MatrixCandidateSet> {
    if k == 0 || k > MAX_CANDIDATE_K {
        return Err(Error::InvalidArgument(format!("k = {k} outside [1, {MAX_CANDIDATE_K}]")));
    }
    let nn = n.get();
    let mut matrices = Vec::new();
    let ci_too_high =
        k >= 3 && constraints.iter().any(|c| matches!(c, MatrixConstraint::CorrelationImmune(t) if 3 * (*t + 1) > 2 * nn));
    if !ci_too_high {
        let rows = compositions(nn, k);
        let mut seen = BTreeSet::new();
        let mut cur: Vec<usize> = Vec::with_capacity(k);
        search(k, &rows, &mut cur, &mut |m| {
            let q = QuotientMatrix::new(m.iter().map(|&r| rows[r].clone()).collect()).expect("row sums agree");
            if !admissible(n, &q) {
                return;
            }
            let Ok(eig) = q.eigenvalues(n) else { return };
            if eigen_ok(nn, &eig, constraints) {
                let c = q.canonical();
                if seen.insert(c.clone()) {
                    matrices.push(c);
                }
            }
        });
        matrices.sort();
    }
    Ok(MatrixCandidateSet { n: nn, k, constraints: constraints.to_vec(), matrices })
}

/// Positive densities with integral class sizes.
fn admissible(n: Dimension, q: &QuotientMatrix) -> bool {
    let Some(rho) = q.densities() else { return false };
    let total = BigRational::from_integer((n.order() as u64).into());
    rho.iter().all(|r| {
        let x = r * &total;
        x.is_integer() && x.to_integer().to_u64().is_some_and(|v| v > 0)
    })
}

/// Rows with nondecreasing diagonal and consistent zero pattern.
fn search(k: usize, rows: &[Vec<u32>], cur: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    let i = cur.len();
    if i == k {
        emit(cur);
        return;
    }
    for (r, row) in rows.iter().enumerate() {
        if i > 0 && row[i] < rows[cur[i - 1]][i - 1] {
            continue;
        }
        let ok = cur.iter().enumerate().all(|(j, &rj)| (rows[rj][i] == 0) == (row[j] == 0));
        if ok {
            cur.push(r);
            search(k, rows, cur, emit);
            cur.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn has(set: &MatrixCandidateSet, m: &str) -> bool {
        set.matrices.contains(&QuotientMatrix::parse(m).unwrap().canonical())
    }

    #[test]
    fn q5_eigenvalues_five_and_one() {
        let set = candidate_matrices(dim(5), 2, &[MatrixConstraint::ExactEigenvalues(vec![5, 1])]).unwrap();
        assert_eq!(set.matrices.len(), 2);
        assert!(has(&set, "2,3;1,4") && has(&set, "3,2;2,3"));
    }

    #[test]
    fn q7_codes_present() {
        let set = candidate_matrices(dim(7), 2, &[MatrixConstraint::MinEigenvalue(-1)]).unwrap();
        for mu in 1..=7u32 {
            assert!(has(&set, &format!("{},{};{},{}", mu - 1, 8 - mu, mu, 7 - mu)), "{mu}");
        }
    }

    #[test]
    fn q9_three_colors() {
        let set = candidate_matrices(dim(9), 3, &[MatrixConstraint::MaxNonMain(-3)]).unwrap();
        assert_eq!(set.matrices, vec![QuotientMatrix::parse("0,3,6;3,0,6;3,3,3").unwrap().canonical()]);
    }
}
