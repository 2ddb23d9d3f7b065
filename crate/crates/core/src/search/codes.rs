//! `μ`-fold 1-perfect codes: sets meeting every closed ball of radius 1 in
//! exactly `μ` vertices.

use super::csp::{self, Control, Problem};
use super::{fiber_classes, fiber_to_u128, orbit128, split_depth};
use crate::error::{Error, Result};
use crate::hypercube::{group_order, Coloring, Dimension, Fiber};
use crate::spectral::{quotient_matrix, QuotientMatrix};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Largest dimension for code enumeration.
pub const MAX_CODE_N: u32 = 7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Splittability {
    /// Some 1-perfect code is a subset.
    pub contains_one_perfect: bool,
    /// The code is a disjoint union of `μ` 1-perfect codes.
    pub splits: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeClass {
    #[serde(serialize_with = "ser_hex")]
    pub representative: Fiber,
    pub stabilizer_order: u128,
    /// Cycle lengths with multiplicities for codes inducing a 2-factor.
    pub cycles: Option<Vec<(u32, u32)>>,
    pub splittability: Option<Splittability>,
}

fn ser_hex<S: serde::Serializer>(t: &Fiber, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::hypercube::emit_hex(t))
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeEnumeration {
    pub n: u32,
    pub mu: u32,
    pub classes: Vec<CodeClass>,
    /// Number of distinct codes, `Σ 2^n n! / |Stab|`.
    pub labeled: u128,
}

/// Quotient matrix of a `μ`-fold 1-perfect code, code first.
pub fn code_matrix(n: u32, mu: u32) -> Result<QuotientMatrix> {
    if mu == 0 || mu > n {
        return Err(Error::InvalidArgument(format!("mu = {mu} outside [1, {n}]")));
    }
    QuotientMatrix::new(vec![vec![mu - 1, n - mu + 1], vec![mu, n - mu]])
}

fn check(n: Dimension, mu: u32) -> Result<()> {
    if n.get() > MAX_CODE_N {
        return Err(Error::CapExceeded { what: "code enumeration", cap: MAX_CODE_N, n: n.get() });
    }
    if mu == 0 || mu > n.get() + 1 {
        return Err(Error::InvalidArgument(format!("mu = {mu} outside [1, {}]", n.get() + 1)));
    }
    Ok(())
}

/// Canonical representatives with stabilizer orders.
fn code_reps(n: Dimension, mu: u32) -> Result<BTreeMap<Fiber, u128>> {
    check(n, mu)?;
    let nn = n.get();
    if mu == nn + 1 {
        return fiber_classes([Fiber::full(n)]);
    }
    if 2 * mu > nn + 1 {
        // complements of (n+1-μ)-fold codes
        let dual = code_reps(n, nn + 1 - mu)?;
        return fiber_classes(dual.into_keys().map(|t| t.complement()));
    }
    let s = code_matrix(nn, mu)?;
    let Some(p) = Problem::new(n, &s)? else { return Ok(BTreeMap::new()) };
    let parts = csp::subproblems(&p, split_depth(&p));
    let maps = parts
        .par_iter()
        .map(|q| {
            let mut found = Vec::new();
            csp::solve(q, &mut |col| {
                found.push(Fiber::from_fn(n, |v| col[v as usize] == 0));
                Control::Continue
            });
            fiber_classes(found)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(maps.into_iter().flatten().collect())
}

/// All classes of `μ`-fold 1-perfect codes in `Q_n` (`n <= 7`).
pub fn enumerate_codes(n: Dimension, mu: u32) -> Result<CodeEnumeration> {
    let reps = code_reps(n, mu)?;
    let g = group_order(n);
    let hamming = if (n.get() + 1).is_power_of_two() && mu > 1 && mu <= n.get() {
        Some(one_perfect_codes(n)?)
    } else {
        None
    };
    let mut classes = Vec::new();
    let mut labeled = 0;
    for (t, stab) in reps {
        labeled += g / stab;
        let cycles = if mu == 3 { Some(cycle_structure(&t)?) } else { None };
        let splittability = hamming.as_ref().map(|h| split_with(&t, mu, h));
        classes.push(CodeClass { representative: t, stabilizer_order: stab, cycles, splittability });
    }
    Ok(CodeEnumeration { n: n.get(), mu, classes, labeled })
}

/// Every labeled `μ`-fold code of `Q_n`, `n <= 7`, as packed truth tables.
pub fn labeled_codes(n: Dimension, mu: u32) -> Result<Vec<u128>> {
    let reps = code_reps(n, mu)?;
    let mut all: Vec<u128> = reps.keys().flat_map(|t| orbit128(n.get(), fiber_to_u128(t))).collect();
    all.sort_unstable();
    Ok(all)
}

/// All 1-perfect codes of `Q_n`.
pub fn one_perfect_codes(n: Dimension) -> Result<Vec<u128>> {
    labeled_codes(n, 1)
}

/// Cycle lengths of the 2-regular subgraph induced by `t`.
pub fn cycle_structure(t: &Fiber) -> Result<Vec<(u32, u32)>> {
    let n = t.n().get();
    let mut seen = Fiber::empty(t.n());
    let mut lens: BTreeMap<u32, u32> = BTreeMap::new();
    for v in t.iter_ones() {
        if seen.get(v) {
            continue;
        }
        let mut len = 0;
        let mut prev = u32::MAX;
        let mut cur = v;
        loop {
            seen.set(cur, true);
            len += 1;
            let nb: Vec<u32> = (0..n).map(|j| cur ^ (1 << j)).filter(|&u| t.get(u)).collect();
            if nb.len() != 2 {
                return Err(Error::Precondition("code does not induce a 2-factor".into()));
            }
            let next = if nb[0] != prev { nb[0] } else { nb[1] };
            prev = cur;
            cur = next;
            if cur == v {
                break;
            }
        }
        *lens.entry(len).or_insert(0) += 1;
    }
    Ok(lens.into_iter().rev().collect())
}

fn split_with(t: &Fiber, mu: u32, hamming: &[u128]) -> Splittability {
    let x = fiber_to_u128(t);
    let inside: Vec<u128> = hamming.iter().copied().filter(|&h| h & !x == 0).collect();
    let contains_one_perfect = !inside.is_empty();
    fn rec(rest: u128, parts: u32, inside: &[u128]) -> bool {
        if parts == 0 {
            return rest == 0;
        }
        let low = rest.trailing_zeros();
        inside
            .iter()
            .filter(|&&h| h.trailing_zeros() == low && h & !rest == 0)
            .any(|&h| rec(rest & !h, parts - 1, inside))
    }
    let splits = contains_one_perfect && rec(x, mu, &inside);
    Splittability { contains_one_perfect, splits }
}

/// Whether a verified `μ`-fold code contains, or splits into, 1-perfect codes.
pub fn splittability(c: &Fiber, mu: u32) -> Result<Splittability> {
    let n = c.n();
    check(n, mu)?;
    // from_fiber colors code vertices 1
    let ok = if mu == n.get() + 1 {
        c.count_ones() == n.order() as u64
    } else {
        quotient_matrix(&Coloring::from_fiber(c)).map(|q| q.permuted(&[1, 0])).ok() == Some(code_matrix(n.get(), mu)?)
    };
    if !ok {
        return Err(Error::Precondition(format!("not a {mu}-fold 1-perfect code")));
    }
    let h = one_perfect_codes(n)?;
    Ok(split_with(c, mu, &h))
}

pub(crate) fn rep_iter(n: Dimension, mu: u32) -> Result<Vec<(Fiber, u128)>> {
    Ok(code_reps(n, mu)?.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn small_cubes() {
        let e = enumerate_codes(dim(3), 1).unwrap();
        assert_eq!(e.classes.len(), 1);
        assert_eq!(e.labeled, 4);
        let e = enumerate_codes(dim(3), 2).unwrap();
        assert_eq!(e.labeled as usize, labeled_codes(dim(3), 2).unwrap().len());
        assert_eq!(enumerate_codes(dim(3), 4).unwrap().labeled, 1);
    }

    #[test]
    fn complement_duality() {
        for mu in 1..=2 {
            let a = enumerate_codes(dim(5), mu).unwrap();
            let b = enumerate_codes(dim(5), 6 - mu).unwrap();
            assert_eq!(a.classes.len(), b.classes.len());
            assert_eq!(a.labeled, b.labeled);
        }
    }

    #[test]
    fn cycles_of_a_square() {
        let t = Fiber::from_vertices(dim(3), [0, 1, 3, 2]).unwrap();
        assert_eq!(cycle_structure(&t).unwrap(), vec![(4, 1)]);
    }
}
