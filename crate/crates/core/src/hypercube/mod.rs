//! Vertices, fibers, colorings and automorphisms of the Boolean hypercube `Q_n`.
//!
//! A vertex is an integer in `[0, 2^n)`; coordinate `x_j` is bit `j` of the
//! index, so the neighbors of `v` are `v ^ (1 << j)`.

mod aut;
mod coloring;
mod fiber;
mod io;

pub use aut::{apply_aut, group_order, ColoringEquivalence, SignedPermutation};
pub use coloring::Coloring;
pub use fiber::Fiber;
pub use io::{
    emit_hex, emit_hex_coloring, parse_hex, parse_hex_coloring, read_coloring_json,
    read_hex_fibers, write_coloring_json, ColoringJson,
};

use crate::error::{Error, Result};
use crate::spectral;
use serde::{Deserialize, Serialize};

/// A vertex index of `Q_n`.
pub type Vertex = u32;

/// Dimension `n` of the hypercube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Dimension(u8);

impl Dimension {
    /// Soft operational cap on `n`.
    pub const MAX: u32 = 24;

    pub fn new(n: u32) -> Result<Self> {
        if n > Self::MAX {
            return Err(Error::DimensionOutOfRange(n));
        }
        Ok(Dimension(n as u8))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0 as u32
    }

    /// Number of vertices, `2^n`.
    #[inline]
    pub fn order(self) -> usize {
        1usize << self.0
    }

    /// The all-ones vertex `2^n - 1`.
    #[inline]
    pub fn full_mask(self) -> u32 {
        ((1u64 << self.0) - 1) as u32
    }
}

impl TryFrom<u32> for Dimension {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        Dimension::new(n)
    }
}

impl From<Dimension> for u32 {
    fn from(d: Dimension) -> u32 {
        d.get()
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Neighbors `v ^ 2^j` for `j = 0..n`, ascending in `j`.
pub fn neighbors(v: Vertex, n: Dimension) -> Result<Vec<Vertex>> {
    if (v as usize) >= n.order() {
        return Err(Error::VertexOutOfRange { vertex: v as u64, n: n.get() });
    }
    Ok((0..n.get()).map(|j| v ^ (1 << j)).collect())
}

/// Hamming weight of a vertex.
#[inline]
pub fn weight(v: Vertex) -> u32 {
    v.count_ones()
}

/// Matching `m` on colors with `f(v ^ (2^n - 1)) = m(f(v))` for every `v`.
///
/// Exists for every perfect coloring; matched colors have equal class sizes.
pub fn antipodal_matching(f: &Coloring) -> Result<Vec<u16>> {
    spectral::quotient_matrix(f)?;
    let full = f.n().full_mask();
    let mut matching = vec![u16::MAX; f.k() as usize];
    for v in 0..f.n().order() as u32 {
        let c = f.color(v) as usize;
        let d = f.color(v ^ full);
        if matching[c] == u16::MAX {
            matching[c] = d;
        } else if matching[c] != d {
            return Err(Error::NoAntipodalMatching);
        }
    }
    for (c, &d) in matching.iter().enumerate() {
        if matching[d as usize] as usize != c {
            return Err(Error::NoAntipodalMatching);
        }
    }
    Ok(matching)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn neighbor_examples() {
        assert_eq!(neighbors(0, dim(3)).unwrap(), vec![1, 2, 4]);
        assert_eq!(neighbors(7, dim(3)).unwrap(), vec![6, 5, 3]);
        assert_eq!(neighbors(5, dim(4)).unwrap(), vec![4, 7, 1, 13]);
        assert!(matches!(neighbors(8, dim(3)), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn neighbors_are_distinct_at_distance_one() {
        for n in 1..=6 {
            let d = dim(n);
            for v in 0..d.order() as u32 {
                let nb = neighbors(v, d).unwrap();
                assert_eq!(nb.len(), n as usize);
                let mut s = nb.clone();
                s.sort();
                s.dedup();
                assert_eq!(s.len(), n as usize);
                assert!(nb.iter().all(|&u| (u ^ v).count_ones() == 1));
            }
        }
    }

    #[test]
    fn dimension_cap() {
        assert!(Dimension::new(25).is_err());
        assert_eq!(dim(10).order(), 1024);
        assert_eq!(dim(3).full_mask(), 7);
    }

    #[test]
    fn antipodal_examples() {
        let dist = Coloring::distance_coloring(dim(3), 0);
        assert_eq!(antipodal_matching(&dist).unwrap(), vec![3, 2, 1, 0]);
        let par = Coloring::parity(dim(4));
        assert_eq!(antipodal_matching(&par).unwrap(), vec![0, 1]);
        let code = parse_hex("c30000c3003c3c00003c3c00c30000c3", dim(7)).unwrap();
        let f = Coloring::from_fiber(&code);
        assert_eq!(antipodal_matching(&f).unwrap(), vec![0, 1]);
        let bad = Coloring::new(dim(3), vec![1, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert!(matches!(antipodal_matching(&bad), Err(Error::NotPerfect { .. })));
    }
}
