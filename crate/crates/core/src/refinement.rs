//! Coarsest equitable refinement by iterated neighbor-profile splitting.

use crate::error::{Error, Result};
use crate::hypercube::Coloring;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementRound {
    pub round: u32,
    pub k_before: u32,
    pub k_after: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementTrace {
    pub rounds: Vec<RefinementRound>,
    pub result: Coloring,
}

pub fn coarsest_equitable_refinement(f: &Coloring) -> Coloring {
    refine_traced(f).result
}

/// Each round splits every class by the sorted multiset of neighbor colors.
/// New labels are ordered by (old color, signature); the result is renamed by
/// first occurrence.
pub fn refine_traced(f: &Coloring) -> RefinementTrace {
    let n = f.n().get() as usize;
    let order = f.n().order();
    let mut labels: Vec<u32> = f.colors().iter().map(|&c| c as u32).collect();
    let mut k = f.k() as usize;
    let mut rounds = Vec::new();
    let mut nb = vec![0u32; n];
    loop {
        let bits = usize::BITS - (k.max(2) - 1).leading_zeros();
        let new_k;
        if (n + 1) * bits as usize <= 128 {
            let mut keys: Vec<u128> = Vec::with_capacity(order);
            for v in 0..order {
                for j in 0..n {
                    nb[j] = labels[v ^ (1 << j)];
                }
                nb.sort_unstable();
                let mut key = labels[v] as u128;
                for &c in &nb {
                    key = (key << bits) | c as u128;
                }
                keys.push(key);
            }
            let mut uniq = keys.clone();
            uniq.sort_unstable();
            uniq.dedup();
            new_k = uniq.len();
            if new_k != k {
                for (v, key) in keys.iter().enumerate() {
                    labels[v] = uniq.binary_search(key).unwrap() as u32;
                }
            }
        } else {
            let mut keys: Vec<Vec<u32>> = Vec::with_capacity(order);
            for v in 0..order {
                for j in 0..n {
                    nb[j] = labels[v ^ (1 << j)];
                }
                nb.sort_unstable();
                let mut key = Vec::with_capacity(n + 1);
                key.push(labels[v]);
                key.extend_from_slice(&nb);
                keys.push(key);
            }
            let mut uniq = keys.clone();
            uniq.sort_unstable();
            uniq.dedup();
            new_k = uniq.len();
            if new_k != k {
                for (v, key) in keys.iter().enumerate() {
                    labels[v] = uniq.binary_search(key).unwrap() as u32;
                }
            }
        }
        rounds.push(RefinementRound { round: rounds.len() as u32, k_before: k as u32, k_after: new_k as u32 });
        if new_k == k {
            break;
        }
        k = new_k;
    }
    let result = Coloring::from_labels(f.n(), &labels).expect("vertex count matches");
    RefinementTrace { rounds, result }
}

/// Each fiber of `g` lies inside one fiber of `f`.
pub fn is_refinement_of(g: &Coloring, f: &Coloring) -> Result<bool> {
    if g.n() != f.n() {
        return Err(Error::DimensionMismatch(g.n().get(), f.n().get()));
    }
    let mut image = vec![u16::MAX; g.k() as usize];
    for (&a, &b) in g.colors().iter().zip(f.colors()) {
        let slot = &mut image[a as usize];
        if *slot == u16::MAX {
            *slot = b;
        } else if *slot != b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Bit-parallel refinement for `n <= 6`, classes given as 64-bit vertex masks.
///
/// Returns the classes of the coarsest equitable refinement, sorted.
pub fn refine_masks(n: u32, classes: &[u64]) -> Vec<u64> {
    debug_assert!(n <= 6);
    let full = if n == 6 { u64::MAX } else { (1u64 << (1u32 << n)) - 1 };
    let mut cls: Vec<u64> = classes.iter().copied().filter(|&c| c != 0).collect();
    let mut queue: Vec<u64> = cls.clone();
    while let Some(splitter) = queue.pop() {
        // bit-sliced neighbor counts of `splitter`
        let mut planes = [0u64; 3];
        for j in 0..n {
            let x = crate::search::bits::flip64(splitter, j) & full;
            let c0 = planes[0] & x;
            planes[0] ^= x;
            let c1 = planes[1] & c0;
            planes[1] ^= c0;
            planes[2] ^= c1;
        }
        let mut next = Vec::with_capacity(cls.len() + 4);
        for &c in &cls {
            let mut parts = [0u64; 8];
            let mut rest = c;
            while rest != 0 {
                let v = rest.trailing_zeros();
                let val = ((planes[0] >> v) & 1) | (((planes[1] >> v) & 1) << 1) | (((planes[2] >> v) & 1) << 2);
                let m0 = if val & 1 != 0 { planes[0] } else { !planes[0] };
                let m1 = if val & 2 != 0 { planes[1] } else { !planes[1] };
                let m2 = if val & 4 != 0 { planes[2] } else { !planes[2] };
                let part = rest & m0 & m1 & m2;
                parts[val as usize] = part;
                rest &= !part;
            }
            let pieces: Vec<u64> = parts.iter().copied().filter(|&p| p != 0).collect();
            if pieces.len() > 1 {
                queue.extend_from_slice(&pieces);
            }
            next.extend(pieces);
        }
        cls = next;
    }
    cls.sort_unstable();
    cls
}
