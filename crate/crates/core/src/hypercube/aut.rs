use super::{Coloring, Dimension, Vertex};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// An automorphism of `Q_n`: `v -> P(v ^ flips)`, where `P` sends bit `j`
/// to bit `perm[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedPermutation {
    n: Dimension,
    perm: Vec<u8>,
    flips: u32,
}

#[inline]
fn permute_bits(perm: &[u8], v: u32) -> u32 {
    let mut out = 0;
    let mut w = v;
    while w != 0 {
        let j = w.trailing_zeros();
        out |= 1 << perm[j as usize];
        w &= w - 1;
    }
    out
}

impl SignedPermutation {
    pub fn identity(n: Dimension) -> Self {
        SignedPermutation { n, perm: (0..n.get() as u8).collect(), flips: 0 }
    }

    pub fn new(n: Dimension, perm: Vec<u8>, flips: u32) -> Result<Self> {
        if perm.len() != n.get() as usize {
            return Err(Error::InvalidArgument(format!(
                "permutation has {} entries, expected {}",
                perm.len(),
                n
            )));
        }
        let mut seen = 0u32;
        for &p in &perm {
            if p as u32 >= n.get() || seen & (1 << p) != 0 {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
            }
            seen |= 1 << p;
        }
        if flips & !n.full_mask() != 0 {
            return Err(Error::InvalidArgument(format!("flip mask {flips:#x} exceeds Q_{n}")));
        }
        Ok(SignedPermutation { n, perm, flips })
    }

    /// The map `v -> c ^ P(v)`.
    pub fn from_affine(n: Dimension, c: u32, perm: Vec<u8>) -> Result<Self> {
        let id = SignedPermutation::new(n, perm, 0)?;
        let flips = id.inverse().apply(c);
        Ok(SignedPermutation { flips, ..id })
    }

    /// Complementation of coordinate `j`.
    pub fn flip(n: Dimension, j: u32) -> Result<Self> {
        if j >= n.get() {
            return Err(Error::IndexOutOfRange { index: j, n: n.get() });
        }
        Ok(SignedPermutation { flips: 1 << j, ..Self::identity(n) })
    }

    /// Exchange of coordinates `i` and `j`.
    pub fn transposition(n: Dimension, i: u32, j: u32) -> Result<Self> {
        for x in [i, j] {
            if x >= n.get() {
                return Err(Error::IndexOutOfRange { index: x, n: n.get() });
            }
        }
        let mut s = Self::identity(n);
        s.perm.swap(i as usize, j as usize);
        Ok(s)
    }

    /// `flip(0)` together with the adjacent transpositions; these generate the group.
    pub fn generators(n: Dimension) -> Vec<Self> {
        let mut gens = Vec::new();
        if n.get() == 0 {
            return gens;
        }
        gens.push(Self::flip(n, 0).unwrap());
        for j in 0..n.get().saturating_sub(1) {
            gens.push(Self::transposition(n, j, j + 1).unwrap());
        }
        gens
    }

    /// Every element of `Aut(Q_n)`; intended for `n <= 5`.
    pub fn all(n: Dimension) -> Vec<Self> {
        let mut perms = vec![Vec::<u8>::new()];
        for _ in 0..n.get() {
            let mut next = Vec::new();
            for p in &perms {
                for x in 0..n.get() as u8 {
                    if !p.contains(&x) {
                        let mut q = p.clone();
                        q.push(x);
                        next.push(q);
                    }
                }
            }
            perms = next;
        }
        let mut out = Vec::with_capacity(perms.len() << n.get());
        for p in perms {
            for flips in 0..n.order() as u32 {
                out.push(SignedPermutation { n, perm: p.clone(), flips });
            }
        }
        out
    }

    #[inline]
    pub fn n(&self) -> Dimension {
        self.n
    }

    pub fn perm(&self) -> &[u8] {
        &self.perm
    }

    pub fn flips(&self) -> u32 {
        self.flips
    }

    /// Image of the zero vertex.
    pub fn translation(&self) -> u32 {
        self.apply(0)
    }

    #[inline]
    pub fn apply(&self, v: Vertex) -> Vertex {
        permute_bits(&self.perm, v ^ self.flips)
    }

    /// `table[v] = self(v)` for every vertex.
    pub fn table(&self) -> Vec<u32> {
        let n = self.n.get() as usize;
        let mut t = vec![0u32; self.n.order()];
        t[0] = self.apply(0);
        for m in 0..n {
            let bit = 1u32 << self.perm[m];
            let lo = 1usize << m;
            for x in lo..2 * lo {
                t[x] = t[x - lo] ^ bit;
            }
        }
        t
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        debug_assert_eq!(self.n, other.n);
        let perm: Vec<u8> = other.perm.iter().map(|&p| self.perm[p as usize]).collect();
        let flips = other.flips ^ other.inverse_linear(self.flips);
        SignedPermutation { n: self.n, perm, flips }
    }

    fn inverse_linear(&self, v: u32) -> u32 {
        let mut out = 0;
        for (j, &p) in self.perm.iter().enumerate() {
            if v & (1 << p) != 0 {
                out |= 1 << j;
            }
        }
        out
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut perm = vec![0u8; self.perm.len()];
        for (j, &p) in self.perm.iter().enumerate() {
            perm[p as usize] = j as u8;
        }
        let flips = permute_bits(&self.perm, self.flips);
        SignedPermutation { n: self.n, perm, flips }
    }

    pub fn is_identity(&self) -> bool {
        self.flips == 0 && self.perm.iter().enumerate().all(|(j, &p)| p as usize == j)
    }

    /// Compact key, unique for `n <= 12`.
    pub fn key(&self) -> u64 {
        let mut k = self.flips as u64;
        for &p in &self.perm {
            k = (k << 4) | p as u64;
        }
        k
    }
}

/// `|Aut(Q_n)| = 2^n · n!`.
pub fn group_order(n: Dimension) -> u128 {
    (1..=n.get() as u128).product::<u128>() << n.get()
}

/// Witness `g(x) = color_map[f(aut(x))]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringEquivalence {
    pub aut: SignedPermutation,
    pub color_map: Vec<u16>,
}

impl ColoringEquivalence {
    pub fn identity(n: Dimension, k: u16) -> Self {
        ColoringEquivalence { aut: SignedPermutation::identity(n), color_map: (0..k).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut color_map = vec![0u16; self.color_map.len()];
        for (c, &d) in self.color_map.iter().enumerate() {
            color_map[d as usize] = c as u16;
        }
        ColoringEquivalence { aut: self.aut.inverse(), color_map }
    }
}

/// `g(x) = e.color_map[f(e.aut(x))]`.
pub fn apply_aut(f: &Coloring, e: &ColoringEquivalence) -> Result<Coloring> {
    if e.aut.n() != f.n() {
        return Err(Error::DimensionMismatch(e.aut.n().get(), f.n().get()));
    }
    if e.color_map.len() != f.k() as usize {
        return Err(Error::ColorCountMismatch(e.color_map.len(), f.k() as usize));
    }
    let mut seen = vec![false; e.color_map.len()];
    for &d in &e.color_map {
        if d as usize >= seen.len() || seen[d as usize] {
            return Err(Error::InvalidArgument("color map is not a bijection".into()));
        }
        seen[d as usize] = true;
    }
    let table = e.aut.table();
    let colors = table.iter().map(|&y| e.color_map[f.color(y) as usize]).collect();
    Coloring::new(f.n(), colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::Fiber;
    use std::collections::HashSet;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn table_agrees_with_apply() {
        let d = dim(5);
        for (i, a) in SignedPermutation::all(d).iter().enumerate().step_by(37) {
            let t = a.table();
            for v in 0..32 {
                assert_eq!(t[v as usize], a.apply(v), "element {i}");
            }
        }
    }

    #[test]
    fn composition_and_inverse() {
        let d = dim(4);
        let all = SignedPermutation::all(d);
        for a in all.iter().step_by(11) {
            assert!(a.compose(&a.inverse()).is_identity());
            assert!(a.inverse().compose(a).is_identity());
            for b in all.iter().step_by(29) {
                let ab = a.compose(b);
                for v in 0..16 {
                    assert_eq!(ab.apply(v), a.apply(b.apply(v)));
                }
            }
        }
    }

    #[test]
    fn affine_form() {
        let a = SignedPermutation::from_affine(dim(3), 5, vec![2, 0, 1]).unwrap();
        assert_eq!(a.apply(0), 5);
        assert_eq!(a.apply(1), 5 ^ 4);
        assert_eq!(a.apply(2), 5 ^ 1);
    }

    #[test]
    fn group_has_expected_order() {
        for n in 1..=4 {
            let d = dim(n);
            let all: HashSet<Vec<u32>> = SignedPermutation::all(d).iter().map(|a| a.table()).collect();
            assert_eq!(all.len() as u128, group_order(d));
            // closure of the generators
            let gens = SignedPermutation::generators(d);
            let mut seen = HashSet::new();
            let mut stack = vec![SignedPermutation::identity(d)];
            seen.insert(stack[0].key());
            while let Some(a) = stack.pop() {
                for g in &gens {
                    let b = g.compose(&a);
                    if seen.insert(b.key()) {
                        stack.push(b);
                    }
                }
            }
            assert_eq!(seen.len() as u128, group_order(d));
        }
    }

    #[test]
    fn examples() {
        let d = dim(3);
        let f = Coloring::distance_coloring(d, 0);
        let id = ColoringEquivalence::identity(d, f.k());
        assert_eq!(apply_aut(&f, &id).unwrap(), f);

        let t = Fiber::parity_even(d);
        for a in SignedPermutation::all(d) {
            if a.flips().count_ones() % 2 == 0 {
                assert_eq!(t.apply(&a), t);
            }
        }

        let e = ColoringEquivalence {
            aut: SignedPermutation::new(d, vec![0, 1, 2], 7).unwrap(),
            color_map: vec![0, 1, 2, 3],
        };
        assert_eq!(apply_aut(&f, &e).unwrap(), Coloring::distance_coloring(d, 7));
        let back = apply_aut(&apply_aut(&f, &e).unwrap(), &e.inverse()).unwrap();
        assert_eq!(back, f);
    }
}
