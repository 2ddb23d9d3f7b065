//! Isomorph-free enumeration of perfect colorings, multifold perfect codes and
//! partitions into such codes.

pub mod bits;
mod codes;
pub mod csp;
mod matrices;
mod partitions;
mod resume;

pub use codes::{
    cycle_structure, enumerate_codes, labeled_codes, one_perfect_codes, splittability, CodeClass, CodeEnumeration,
    Splittability,
};
pub use matrices::{candidate_matrices, MatrixCandidateSet, MatrixConstraint};
pub use partitions::{enumerate_partitions, PartitionSpectrum};
pub use resume::{enumerate_resumable, Checkpoint, CHECKPOINT_FORMAT, CHECKPOINT_VERSION};

use crate::canonical::{canonical_form, canonical_fiber};
use crate::error::{Error, Result};
use crate::hypercube::{Coloring, Dimension, Fiber};
use crate::spectral::QuotientMatrix;
use csp::{Control, Problem};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashSet};

/// Number of leaves canonicalized together.
const BATCH: usize = 4096;

/// Canonical strings of all solutions of `q`, with stabilizer orders.
fn classes_in(q: &Problem) -> Result<BTreeMap<Vec<u16>, u128>> {
    let n = q.n;
    let mut out = BTreeMap::new();
    let mut batch: Vec<Vec<u8>> = Vec::new();
    let mut err = None;
    let flush = |batch: &mut Vec<Vec<u8>>, out: &mut BTreeMap<Vec<u16>, u128>| -> Result<()> {
        for col in batch.drain(..) {
            let f = Coloring::new(n, col.iter().map(|&c| c as u16).collect())?;
            let c = canonical_form(&f)?;
            out.insert(c.canon.colors().to_vec(), c.aut_order);
        }
        Ok(())
    };
    csp::solve(q, &mut |col| {
        batch.push(col.to_vec());
        if batch.len() >= BATCH {
            if let Err(e) = flush(&mut batch, &mut out) {
                err = Some(e);
                return Control::Stop;
            }
        }
        Control::Continue
    });
    if let Some(e) = err {
        return Err(e);
    }
    flush(&mut batch, &mut out)?;
    Ok(out)
}

/// Canonical strings of all solutions of `p`, grouped by class, with the
/// stabilizer order of each class.
fn classes_of(p: &Problem) -> Result<BTreeMap<Vec<u16>, u128>> {
    let parts = csp::subproblems(p, split_depth(p));
    let maps = parts.par_iter().map(classes_in).collect::<Result<Vec<_>>>()?;
    let mut all = BTreeMap::new();
    for m in maps {
        all.extend(m);
    }
    Ok(all)
}

fn split_depth(p: &Problem) -> usize {
    let threads = rayon::current_num_threads();
    if threads <= 1 || p.n.get() < 5 {
        0
    } else {
        (usize::BITS - (4 * threads).leading_zeros()) as usize
    }
}

/// One canonical representative per equivalence class of perfect colorings of
/// `Q_n` whose quotient matrix is `s` up to a permutation of colors.
///
/// Practical for `n <= 7` in general and up to `n = 9` for matrices with
/// small classes.
pub fn enumerate_perfect_colorings(n: Dimension, s: &QuotientMatrix) -> Result<Vec<Coloring>> {
    Ok(enumerate_with_orders(n, s)?.into_iter().map(|(f, _)| f).collect())
}

/// As [`enumerate_perfect_colorings`], with stabilizer orders (colors may be renamed).
pub fn enumerate_with_orders(n: Dimension, s: &QuotientMatrix) -> Result<Vec<(Coloring, u128)>> {
    if s.k() == 1 {
        if s.get(0, 0) != n.get() {
            return Err(Error::InvalidArgument("row sum differs from n".into()));
        }
        return Ok(vec![(Coloring::constant(n), crate::hypercube::group_order(n))]);
    }
    let Some(p) = Problem::new(n, s)? else { return Ok(Vec::new()) };
    classes_of(&p)?
        .into_iter()
        .map(|(c, a)| Ok((Coloring::new(n, c)?, a)))
        .collect()
}

/// Classes of perfect colorings with matrix `s` refining `base`, where color
/// `c` of the result may only appear inside classes `b` of `base` with
/// `allowed[b] & (1 << c) != 0`.
pub fn enumerate_refinements(base: &Coloring, s: &QuotientMatrix, allowed: &[u16]) -> Result<Vec<Coloring>> {
    if allowed.len() != base.k() as usize {
        return Err(Error::ColorCountMismatch(allowed.len(), base.k() as usize));
    }
    let Some(mut p) = Problem::new(base.n(), s)? else { return Ok(Vec::new()) };
    p.break_root = false;
    p.domains = base.colors().iter().map(|&b| allowed[b as usize]).collect();
    Ok(classes_of(&p)?.into_keys().map(|c| Coloring::new(base.n(), c).expect("valid solution")).collect())
}

/// Matrix of the coloring obtained from one with matrix `s` by merging color
/// `c` into group `groups[c]`; `None` if the merge is not equitable.
pub fn merged_matrix(s: &QuotientMatrix, groups: &[u16]) -> Option<QuotientMatrix> {
    let k = *groups.iter().max()? as usize + 1;
    if groups.len() != s.k() || (0..k).any(|g| !groups.contains(&(g as u16))) {
        return None;
    }
    let mut rows: Vec<Option<Vec<u32>>> = vec![None; k];
    for c in 0..s.k() {
        let mut row = vec![0u32; k];
        for d in 0..s.k() {
            row[groups[d] as usize] += s.get(c, d);
        }
        let slot = &mut rows[groups[c] as usize];
        match slot {
            Some(r) if *r != row => return None,
            _ => *slot = Some(row),
        }
    }
    QuotientMatrix::new(rows.into_iter().map(Option::unwrap).collect()).ok()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

/// Classes of perfect colorings with matrix `fine` whose merge by `groups`
/// is one of `bases` (which must have the merged matrix up to color order).
/// Canonical and sorted.
pub fn enumerate_splits(bases: &[Coloring], fine: &QuotientMatrix, groups: &[u16]) -> Result<Vec<Coloring>> {
    let merged = merged_matrix(fine, groups)
        .ok_or_else(|| Error::InvalidArgument(format!("grouping {groups:?} of {fine} is not equitable")))?;
    let mut out = std::collections::BTreeSet::new();
    for base in bases {
        let q = crate::spectral::quotient_matrix(base)?;
        let mut matched = false;
        for p in permutations(q.k()) {
            // base color b plays merged color p[b]
            if (0..q.k()).any(|b| (0..q.k()).any(|c| q.get(b, c) != merged.get(p[b], p[c]))) {
                continue;
            }
            matched = true;
            let allowed: Vec<u16> = (0..q.k())
                .map(|b| (0..fine.k()).filter(|&c| groups[c] as usize == p[b]).fold(0u16, |m, c| m | 1 << c))
                .collect();
            for f in enumerate_refinements(base, fine, &allowed)? {
                out.insert(f);
            }
        }
        if !matched {
            return Err(Error::InvalidArgument(format!("base matrix {q} is not {merged} up to color order")));
        }
    }
    Ok(out.into_iter().collect())
}

/// Orbit of a truth table of `Q_n` (`n <= 7`) under `Aut(Q_n)`.
pub fn orbit128(n: u32, x: u128) -> Vec<u128> {
    let mut seen: HashSet<u128> = HashSet::new();
    seen.insert(x);
    let mut out = vec![x];
    let mut i = 0;
    while i < out.len() {
        let y = out[i];
        i += 1;
        let mut next = Vec::with_capacity(n as usize);
        next.push(bits::flip128(y, 0));
        for j in 0..n.saturating_sub(1) {
            next.push(bits::swap128(y, j, j + 1));
        }
        for z in next {
            if seen.insert(z) {
                out.push(z);
            }
        }
    }
    out
}

pub(crate) fn fiber_to_u128(t: &Fiber) -> u128 {
    let w = t.words();
    w[0] as u128 | (w.get(1).copied().unwrap_or(0) as u128) << 64
}

#[cfg(test)]
pub(crate) fn u128_to_fiber(n: Dimension, x: u128) -> Fiber {
    let words = if n.order() > 64 { vec![x as u64, (x >> 64) as u64] } else { vec![x as u64] };
    Fiber::from_words(n, words).expect("width matches")
}

/// Canonical fiber and stabilizer order of each class in `fibers`.
pub(crate) fn fiber_classes(fibers: impl IntoIterator<Item = Fiber>) -> Result<BTreeMap<Fiber, u128>> {
    let mut out = BTreeMap::new();
    for t in fibers {
        let c = canonical_fiber(&t)?;
        out.insert(c.canon, c.stabilizer_order);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::canonical_coloring;
    use crate::spectral::quotient_matrix;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    /// All perfect 2-colorings of `Q_n` by brute force, reduced to classes.
    fn naive_classes(n: u32) -> BTreeMap<QuotientMatrix, usize> {
        let d = dim(n);
        let mut seen: HashSet<Vec<u16>> = HashSet::new();
        let mut out = BTreeMap::new();
        for t in 1u32..(1 << (1 << n)) - 1 {
            let f = Coloring::from_fn(d, |v| (t >> v) & 1);
            if let Ok(q) = quotient_matrix(&f) {
                let c = canonical_coloring(&f).unwrap();
                if seen.insert(c.colors().to_vec()) {
                    *out.entry(q.canonical()).or_insert(0) += 1;
                }
            }
        }
        out
    }

    #[test]
    fn matches_naive_enumeration() {
        for n in 2..=4 {
            for (q, count) in naive_classes(n) {
                let found = enumerate_perfect_colorings(dim(n), &q).unwrap();
                assert_eq!(found.len(), count, "n={n} {q}");
                for f in &found {
                    assert_eq!(quotient_matrix(f).unwrap().canonical(), q);
                }
            }
        }
    }

    #[test]
    fn q5_antipodal_cycles() {
        let q = QuotientMatrix::parse("2,3;1,4").unwrap();
        assert_eq!(enumerate_perfect_colorings(dim(5), &q).unwrap().len(), 1);
    }

    #[test]
    fn orbit_sizes() {
        let d = dim(3);
        let t = Fiber::from_vertices(d, [0, 7]).unwrap();
        assert_eq!(orbit128(3, fiber_to_u128(&t)).len(), 4);
        let t = Fiber::from_vertices(d, [0]).unwrap();
        assert_eq!(orbit128(3, fiber_to_u128(&t)).len(), 8);
        assert_eq!(u128_to_fiber(d, fiber_to_u128(&t)), t);
    }

    #[test]
    fn refinements_of_parity() {
        // even vertices at distance 0 or 2, odd at 1 or 3
        let d = dim(3);
        let base = Coloring::parity(d);
        let s = QuotientMatrix::parse("0,3,0,0;1,0,2,0;0,2,0,1;0,0,3,0").unwrap();
        let found = enumerate_refinements(&base, &s, &[0b0101, 0b1010]).unwrap();
        assert_eq!(found.len(), 1);
    }
}
