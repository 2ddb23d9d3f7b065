//! Partitions of `Q_n` into multifold 1-perfect codes with a prescribed
//! multiset of multiplicities.
//!
//! One part of the largest multiplicity is fixed to a class representative;
//! the remaining parts are chosen in order of their lowest vertex from the
//! labeled code lists, and the last part is the complement. Classes are
//! coloring classes, so parts of equal multiplicity may be exchanged.

use super::codes::{labeled_codes, rep_iter};
use super::fiber_to_u128;
use crate::canonical::canonical_form;
use crate::error::{Error, Result};
use crate::hypercube::{group_order, Coloring, Dimension};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Debug, Serialize)]
pub struct PartitionSpectrum {
    /// Multiplicities in nonincreasing order.
    pub spectrum: Vec<u32>,
    pub class_count: usize,
    /// Number of unordered labeled partitions.
    pub labeled: u128,
    /// Canonical colorings, one per class.
    #[serde(skip)]
    pub classes: Vec<Coloring>,
}

struct Lists {
    /// `by_low[μ][v]`: labeled `μ`-fold codes with lowest vertex `v`.
    by_low: HashMap<u32, Vec<Vec<u128>>>,
}

impl Lists {
    fn new(n: Dimension, mus: &[u32]) -> Result<Self> {
        let mut by_low = HashMap::new();
        for &mu in mus {
            if by_low.contains_key(&mu) {
                continue;
            }
            let mut table = vec![Vec::new(); n.order()];
            for x in labeled_codes(n, mu)? {
                table[x.trailing_zeros() as usize].push(x);
            }
            by_low.insert(mu, table);
        }
        Ok(Lists { by_low })
    }
}

fn complete(full: u128, covered: u128, rest: &mut Vec<u32>, parts: &mut Vec<u128>, lists: &Lists, out: &mut Vec<Vec<u128>>) {
    if rest.len() == 1 {
        parts.push(full & !covered);
        out.push(parts.clone());
        parts.pop();
        return;
    }
    let low = (!covered & full).trailing_zeros() as usize;
    let mut tried = Vec::new();
    for idx in 0..rest.len() {
        let mu = rest[idx];
        if tried.contains(&mu) {
            continue;
        }
        tried.push(mu);
        rest.swap_remove(idx);
        for &c in &lists.by_low[&mu][low] {
            if c & covered == 0 {
                parts.push(c);
                complete(full, covered | c, rest, parts, lists, out);
                parts.pop();
            }
        }
        rest.push(mu);
        let last = rest.len() - 1;
        rest.swap(idx, last);
    }
}

/// Classes of partitions of `Q_n` (`n <= 7`) into codes with the given
/// multiplicities, which must sum to `n + 1`.
pub fn enumerate_partitions(n: Dimension, spectrum: &[u32]) -> Result<PartitionSpectrum> {
    let nn = n.get();
    let mut spec = spectrum.to_vec();
    spec.sort_unstable_by(|a, b| b.cmp(a));
    if spec.is_empty() || spec.contains(&0) || spec.iter().sum::<u32>() != nn + 1 {
        return Err(Error::InvalidArgument(format!("spectrum {spectrum:?} must be positive and sum to {}", nn + 1)));
    }
    if nn > 7 {
        return Err(Error::CapExceeded { what: "partition enumeration", cap: 7, n: nn });
    }
    let g = group_order(n);
    if spec.len() == 1 {
        let f = Coloring::constant(n);
        return Ok(PartitionSpectrum { spectrum: spec, class_count: 1, labeled: 1, classes: vec![f] });
    }
    let full = if n.order() == 128 { u128::MAX } else { (1u128 << n.order()) - 1 };
    let reps = rep_iter(n, spec[0])?;
    let rest: Vec<u32> = spec[1..].to_vec();
    let lists = Lists::new(n, &rest)?;
    let found: Vec<BTreeMap<Vec<u16>, u128>> = reps
        .par_iter()
        .map(|(r, _)| {
            let r = fiber_to_u128(r);
            let mut parts_out = Vec::new();
            complete(full, r, &mut rest.clone(), &mut vec![r], &lists, &mut parts_out);
            let mut classes = BTreeMap::new();
            for parts in parts_out {
                let colors: Vec<u16> = (0..n.order())
                    .map(|v| parts.iter().position(|&p| (p >> v) & 1 == 1).expect("parts cover") as u16)
                    .collect();
                let c = canonical_form(&Coloring::new(n, colors)?)?;
                classes.insert(c.canon.colors().to_vec(), c.aut_order);
            }
            Ok(classes)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut all = BTreeMap::new();
    for m in found {
        all.extend(m);
    }
    let labeled = all.values().map(|&a| g / a).sum();
    let classes = all.into_keys().map(|c| Coloring::new(n, c)).collect::<Result<Vec<_>>>()?;
    Ok(PartitionSpectrum { spectrum: spec, class_count: classes.len(), labeled, classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::quotient_matrix;

    #[test]
    fn q3_partitions() {
        let d = Dimension::new(3).unwrap();
        // four antipodal pairs
        let p = enumerate_partitions(d, &[1, 1, 1, 1]).unwrap();
        assert_eq!((p.class_count, p.labeled), (1, 1));
        let p = enumerate_partitions(d, &[3, 1]).unwrap();
        assert_eq!((p.class_count, p.labeled), (1, 4));
        let p = enumerate_partitions(d, &[2, 1, 1]).unwrap();
        assert_eq!(p.labeled, 6);
        for f in &p.classes {
            assert!(quotient_matrix(f).is_ok());
        }
        assert!(enumerate_partitions(d, &[2, 1]).is_err());
    }

    #[test]
    fn distinct_remaining_multiplicities() {
        // a 1-fold part is a perfect code, and Q_5 has none
        let p = enumerate_partitions(Dimension::new(5).unwrap(), &[3, 2, 1]).unwrap();
        assert_eq!((p.class_count, p.labeled), (0, 0u32.into()));
        let p = enumerate_partitions(Dimension::new(3).unwrap(), &[3, 1]).unwrap();
        assert!(p.class_count > 0);
        for f in &p.classes {
            assert!(quotient_matrix(f).is_ok());
        }
    }
}
