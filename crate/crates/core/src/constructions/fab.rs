//! The 3-colorings `f_{a,b}` of `Q_4`, the colorings `g`, `g_{i,j}` built from
//! them, and the twin-pair 4-colorings obtained by splitting both colors of
//! the four-argument degree-2 coloring with matrix `(n-2, 2; 2, n-2)`.
//!
//! The family is recovered by search. The merged 2-coloring is the unique
//! class of `Q_4` with matrix `(2, 2; 2, 2)` and four essential arguments;
//! `f_{0,0}` splits its first color with matrix `(1,1,2; 1,1,2; 1,1,2)`, and
//! `f_{1,1}`, `f_{0,1}`, `f_{1,0}` are chosen so that `g_{4,4}` and `g_{4,5}` are
//! perfect with the stated matrices and five and six essential arguments.

use super::{matrix, param, twin_pairs_matrix, twin_pairs_spectrum, Construction};
use crate::canonical::canonical_coloring;
use crate::error::{Error, Result};
use crate::hypercube::{Coloring, Dimension, SignedPermutation, Vertex};
use crate::search::enumerate_perfect_colorings;
use crate::spectral::{essential_mask, quotient_matrix, QuotientMatrix};
use std::collections::BTreeSet;
use std::sync::OnceLock;

/// The four 3-colorings `f_{a,b}` of `Q_4`, indexed by `2a + b`.
///
/// Colors 0 and 1 are twins and color 2 is the same set in all four.
#[derive(Clone, Debug)]
pub struct FabFamily {
    pub f: [Coloring; 4],
    /// Every `a` with `merged(a(x)) = 1 - merged(x)` that splits the second
    /// color consistently, where `merged` identifies colors 0 and 1.
    pub swaps: Vec<SignedPermutation>,
}

/// How one color of the merged coloring is split into two twins.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    /// By `f_{0,0}`; the twins have one common edge per vertex (`b = 1`).
    Plain,
    /// By `f_{x_i, x_j}`; two common edges per vertex (`b = 2`).
    Indexed(u32, u32),
}

impl Split {
    pub fn b(self) -> u32 {
        match self {
            Split::Plain => 1,
            Split::Indexed(..) => 2,
        }
    }

    fn select(self, v: Vertex) -> usize {
        match self {
            Split::Plain => 0,
            Split::Indexed(i, j) => (2 * ((v >> i) & 1) + ((v >> j) & 1)) as usize,
        }
    }

    fn check(self, n: Dimension) -> Result<()> {
        if let Split::Indexed(i, j) = self {
            for x in [i, j] {
                if !(4..n.get()).contains(&x) {
                    return Err(Error::IndexOutOfRange { index: x, n: n.get() });
                }
            }
        }
        Ok(())
    }
}

fn dim(n: u32) -> Dimension {
    Dimension::new(n).expect("small dimension")
}

fn g_matrix(n: u32) -> QuotientMatrix {
    let n = n as i64;
    matrix(vec![vec![n - 3, 1, 2], vec![1, n - 3, 2], vec![1, 1, n - 2]])
}

fn gij_matrix(n: u32) -> QuotientMatrix {
    let n = n as i64;
    matrix(vec![vec![n - 4, 2, 2], vec![2, n - 4, 2], vec![1, 1, n - 2]])
}

fn lift(fam: &[Coloring; 4], n: Dimension, split: Split) -> Coloring {
    let colors = (0..n.order() as u32).map(|v| fam[split.select(v)].color(v & 15)).collect();
    Coloring::new(n, colors).expect("three colors")
}

fn has(f: &Coloring, s: &QuotientMatrix, essential: u32) -> bool {
    quotient_matrix(f).is_ok_and(|q| &q == s) && essential_mask(f).count_ones() == essential
}

/// All `(A, B, C)` 3-colorings with `A ∪ B` the first color of `merged`, `|A| = |B|`.
fn splits(merged: &Coloring) -> Vec<Coloring> {
    let first: Vec<u32> = merged.fiber(0).iter_ones().collect();
    let half = first.len() as u32 / 2;
    (0u32..1 << first.len())
        .filter(|s| s.count_ones() == half)
        .map(|s| {
            let mut colors = vec![2u16; 16];
            for (i, &v) in first.iter().enumerate() {
                colors[v as usize] = ((s >> i) & 1 == 0) as u16;
            }
            Coloring::new(dim(4), colors).expect("three colors")
        })
        .collect()
}

fn merged_coloring() -> Result<Coloring> {
    let s = QuotientMatrix::parse("2,2;2,2")?;
    let four: Vec<Coloring> = enumerate_perfect_colorings(dim(4), &s)?
        .into_iter()
        .filter(|f| essential_mask(f).count_ones() == 4)
        .collect();
    match four.as_slice() {
        [f] => Ok(f.clone()),
        _ => Err(Error::Precondition(format!(
            "expected one class with matrix (2,2;2,2) and four essential arguments on Q_4, found {}",
            four.len()
        ))),
    }
}

fn raw_families() -> Result<(Coloring, Vec<[Coloring; 4]>)> {
    let merged = merged_coloring()?;
    let cands = splits(&merged);
    let (g4, g5, g6) = (g_matrix(4), gij_matrix(5), gij_matrix(6));
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for f00 in cands.iter().filter(|f| has(f, &g4, 4)) {
        for f11 in &cands {
            let pair = [f00.clone(), f00.clone(), f00.clone(), f11.clone()];
            if !has(&lift(&pair, dim(5), Split::Indexed(4, 4)), &g5, 5) {
                continue;
            }
            for f01 in &cands {
                for f10 in &cands {
                    let fam = [f00.clone(), f01.clone(), f10.clone(), f11.clone()];
                    let g = lift(&fam, dim(6), Split::Indexed(4, 5));
                    if !has(&g, &g6, 6) {
                        continue;
                    }
                    let key = (
                        canonical_coloring(f00)?,
                        canonical_coloring(&lift(&fam, dim(5), Split::Indexed(4, 4)))?,
                        canonical_coloring(&g)?,
                    );
                    if seen.insert(key) {
                        out.push(fam);
                    }
                }
            }
        }
    }
    Ok((merged, out))
}

fn build(fam: &[Coloring; 4], swap: &SignedPermutation, n: Dimension, first: Split, second: Split) -> Coloring {
    let colors = (0..n.order() as u32)
        .map(|v| {
            let x = v & 15;
            match fam[0].color(x) {
                2 => 2 + fam[second.select(v)].color(swap.apply(x)),
                _ => fam[first.select(v)].color(x),
            }
        })
        .collect();
    Coloring::new(n, colors).expect("four colors")
}

fn all_splits(n: u32) -> Vec<Split> {
    std::iter::once(Split::Plain)
        .chain((4..n).flat_map(|i| (4..n).map(move |j| Split::Indexed(i, j))))
        .collect()
}

/// Color-exchanging automorphisms under which every pair of splits at `Q_8`
/// gives the twin-pair matrix.
fn find_swaps(merged: &Coloring, fam: &[Coloring; 4]) -> Vec<SignedPermutation> {
    let n = dim(8);
    let firsts = [Split::Plain, Split::Indexed(4, 4), Split::Indexed(4, 5)];
    SignedPermutation::all(dim(4)).into_iter().filter(|a| {
        (0..16).all(|x| merged.color(a.apply(x)) != merged.color(x))
            && firsts.iter().all(|&s| {
                all_splits(8).into_iter().all(|t| {
                    quotient_matrix(&build(fam, a, n, s, t)).is_ok_and(|q| q == twin_pairs_matrix(8, s.b(), t.b()))
                })
            })
    })
    .collect()
}

/// Every inequivalent family satisfying the constraints, each with a working
/// color-exchanging automorphism.
pub fn fab_families() -> Result<Vec<FabFamily>> {
    let (merged, fams) = raw_families()?;
    fams.into_iter()
        .map(|f| {
            let swaps = find_swaps(&merged, &f);
            if swaps.is_empty() {
                return Err(Error::Precondition("no automorphism splits the second color consistently".into()));
            }
            Ok(FabFamily { f, swaps })
        })
        .collect()
}

/// The first family found by [`fab_families`]; computed once.
pub fn reconstruct_fab() -> Result<FabFamily> {
    static FAMILY: OnceLock<Result<FabFamily>> = OnceLock::new();
    FAMILY
        .get_or_init(|| {
            fab_families()?
                .into_iter()
                .next()
                .ok_or_else(|| Error::Precondition("no consistent f_{a,b} family".into()))
        })
        .clone()
}

/// `g(x) = f_{0,0}(x_0, ..., x_3)` on `Q_n`, `n >= 4`.
pub fn g_of(n: Dimension) -> Result<Construction> {
    if n.get() < 4 {
        return Err(Error::InvalidArgument("g needs n >= 4".into()));
    }
    let fam = reconstruct_fab()?;
    let e = n.get() as i32;
    Ok(Construction::new("g", vec![param("n", n)], g_matrix(n.get()), &[e, e - 4, e - 4], lift(&fam.f, n, Split::Plain)))
}

/// `g_{i,j}(x) = f_{x_i, x_j}(x_0, ..., x_3)` on `Q_n`, `n >= 5`, `4 <= i, j < n`.
pub fn g_ij(n: Dimension, i: u32, j: u32) -> Result<Construction> {
    if n.get() < 5 {
        return Err(Error::InvalidArgument("g_ij needs n >= 5".into()));
    }
    let split = Split::Indexed(i, j);
    split.check(n)?;
    let fam = reconstruct_fab()?;
    let e = n.get() as i32;
    let params = vec![param("n", n), param("i", i), param("j", j)];
    Ok(Construction::new("g_ij", params, gij_matrix(n.get()), &[e, e - 4, e - 6], lift(&fam.f, n, split)))
}

/// Both colors of the merged coloring split into twins: colors 0, 1 by
/// `first` (`b = first.b()`), colors 2, 3 by `second` through the
/// color-exchanging automorphism (`c = second.b()`).
pub fn constr3(n: Dimension, first: Split, second: Split) -> Result<Construction> {
    constr3_with(n, first, second, 0)
}

/// [`constr3`] with the `swap`-th color-exchanging automorphism of the family.
pub fn constr3_with(n: Dimension, first: Split, second: Split, swap: usize) -> Result<Construction> {
    let (b, c) = (first.b(), second.b());
    if n.get() < 3 + b.max(c) {
        return Err(Error::InvalidArgument(format!("n = {n} below 3 + max(b, c) = {}", 3 + b.max(c))));
    }
    first.check(n)?;
    second.check(n)?;
    let fam = reconstruct_fab()?;
    let mut params = vec![param("n", n), param("b", b), param("c", c)];
    for (name, s) in [("first", first), ("second", second)] {
        if let Split::Indexed(i, j) = s {
            params.push(param(name, format!("{i},{j}")));
        }
    }
    let a = fam.swaps.get(swap).ok_or(Error::IndexOutOfRange { index: swap as u32, n: fam.swaps.len() as u32 })?;
    let coloring = build(&fam.f, a, n, first, second);
    let eig = twin_pairs_spectrum(n.get(), b, c);
    Ok(Construction::new("constr3", params, twin_pairs_matrix(n.get(), b, c), &eig, coloring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::merge_colors;

    #[test]
    fn family_is_unique() {
        assert_eq!(fab_families().unwrap().len(), 1);
    }

    #[test]
    fn g_and_gij_verify() {
        for n in 4..9 {
            let g = g_of(dim(n)).unwrap();
            g.verify().unwrap();
            assert_eq!(essential_mask(&g.coloring).count_ones(), 4);
            let merged = merge_colors(&g.coloring, 0, 1).unwrap();
            let e = n - 2;
            assert_eq!(quotient_matrix(&merged).unwrap(), QuotientMatrix::parse(&format!("{e},2;2,{e}")).unwrap());
        }
        for n in 5..9 {
            for i in 4..n {
                for j in 4..n {
                    let g = g_ij(dim(n), i, j).unwrap();
                    g.verify().unwrap();
                    let want = if i == j { 5 } else { 6 };
                    assert_eq!(essential_mask(&g.coloring).count_ones(), want);
                }
            }
        }
    }

    #[test]
    fn constr3_sweep() {
        for n in 4..9 {
            for s in all_splits(n) {
                for t in all_splits(n) {
                    let (b, c) = (s.b(), t.b());
                    if n < 3 + b.max(c) {
                        assert!(constr3(dim(n), s, t).is_err());
                        continue;
                    }
                    for a in 0..reconstruct_fab().unwrap().swaps.len() {
                        let h = constr3_with(dim(n), s, t, a).unwrap();
                        h.verify().unwrap();
                        let ess = essential_mask(&h.coloring).count_ones();
                        assert!((3 + b.max(c)..=2 * b + 2 * c).contains(&ess), "{s:?} {t:?}: {ess}");
                    }
                }
            }
        }
    }

    #[test]
    fn index_checks() {
        assert!(g_ij(dim(6), 3, 4).is_err());
        assert!(g_ij(dim(6), 4, 6).is_err());
        assert!(g_of(dim(3)).is_err());
    }
}

