use super::{Dimension, SignedPermutation, Vertex};
use crate::error::{Error, Result};

/// Characteristic 0/1 function of a vertex set of `Q_n`, one bit per vertex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Fiber {
    n: Dimension,
    words: Vec<u64>,
}

/// Bit positions `p < 64` whose bit `j` is clear, for `j < 6`.
const LOW_CLEAR: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

fn word_count(n: Dimension) -> usize {
    (n.order() / 64).max(1)
}

fn tail_mask(n: Dimension) -> u64 {
    if n.get() >= 6 {
        u64::MAX
    } else {
        (1u64 << n.order()) - 1
    }
}

impl Fiber {
    pub fn empty(n: Dimension) -> Self {
        Fiber { n, words: vec![0; word_count(n)] }
    }

    pub fn full(n: Dimension) -> Self {
        let mut f = Fiber { n, words: vec![u64::MAX; word_count(n)] };
        f.mask_tail();
        f
    }

    /// Build from raw words (bit `v` of the concatenation is vertex `v`).
    pub fn from_words(n: Dimension, words: Vec<u64>) -> Result<Self> {
        if words.len() != word_count(n) {
            return Err(Error::InvalidArgument(format!(
                "expected {} words for Q_{}, got {}",
                word_count(n),
                n,
                words.len()
            )));
        }
        let mut f = Fiber { n, words };
        f.mask_tail();
        Ok(f)
    }

    pub fn from_fn(n: Dimension, mut pred: impl FnMut(Vertex) -> bool) -> Self {
        let mut f = Fiber::empty(n);
        for v in 0..n.order() as u32 {
            if pred(v) {
                f.set(v, true);
            }
        }
        f
    }

    pub fn from_vertices(n: Dimension, vs: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut f = Fiber::empty(n);
        for v in vs {
            if (v as usize) >= n.order() {
                return Err(Error::VertexOutOfRange { vertex: v as u64, n: n.get() });
            }
            f.set(v, true);
        }
        Ok(f)
    }

    /// Vertices of even weight.
    pub fn parity_even(n: Dimension) -> Self {
        Fiber::from_fn(n, |v| v.count_ones() % 2 == 0)
    }

    /// Vertices of odd weight.
    pub fn parity_odd(n: Dimension) -> Self {
        Fiber::from_fn(n, |v| v.count_ones() % 2 == 1)
    }

    fn mask_tail(&mut self) {
        let m = tail_mask(self.n);
        self.words[0] &= m;
    }

    #[inline]
    pub fn n(&self) -> Dimension {
        self.n
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, v: Vertex) -> bool {
        (self.words[(v >> 6) as usize] >> (v & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, v: Vertex, value: bool) {
        let w = &mut self.words[(v >> 6) as usize];
        if value {
            *w |= 1 << (v & 63);
        } else {
            *w &= !(1 << (v & 63));
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros();
                    w &= w - 1;
                    Some((i as u32) * 64 + b)
                }
            })
        })
    }

    /// Lowest vertex in the set.
    pub fn first_one(&self) -> Option<Vertex> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i as u32 * 64 + w.trailing_zeros())
    }

    pub fn complement(&self) -> Fiber {
        let mut f = Fiber { n: self.n, words: self.words.iter().map(|w| !w).collect() };
        f.mask_tail();
        f
    }

    pub fn and(&self, other: &Fiber) -> Fiber {
        Fiber { n: self.n, words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    pub fn or(&self, other: &Fiber) -> Fiber {
        Fiber { n: self.n, words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect() }
    }

    pub fn xor(&self, other: &Fiber) -> Fiber {
        Fiber { n: self.n, words: self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect() }
    }

    pub fn and_not(&self, other: &Fiber) -> Fiber {
        Fiber { n: self.n, words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect() }
    }

    pub fn is_subset_of(&self, other: &Fiber) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Fiber) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// The fiber `x -> t(aut(x))`.
    pub fn apply(&self, aut: &SignedPermutation) -> Fiber {
        debug_assert_eq!(aut.n(), self.n);
        let table = aut.table();
        self.apply_table(&table)
    }

    /// The fiber `x -> t(table[x])`.
    pub fn apply_table(&self, table: &[u32]) -> Fiber {
        let mut out = Fiber::empty(self.n);
        for (x, &y) in table.iter().enumerate() {
            if self.get(y) {
                out.words[x >> 6] |= 1 << (x & 63);
            }
        }
        out
    }

    /// The fiber `x -> t(x ^ 2^j)`.
    pub fn flip_coord(&self, j: u32) -> Fiber {
        debug_assert!(j < self.n.get());
        let mut out = self.clone();
        if j < 6 {
            let s = 1u32 << j;
            let m = LOW_CLEAR[j as usize];
            for w in out.words.iter_mut() {
                *w = ((*w >> s) & m) | ((*w & m) << s);
            }
        } else {
            let b = 1usize << (j - 6);
            for i in 0..out.words.len() {
                if i & b == 0 {
                    out.words.swap(i, i | b);
                }
            }
        }
        out
    }

    /// The fiber `x -> t(x with coordinates i and j exchanged)`.
    pub fn swap_coords(&self, i: u32, j: u32) -> Fiber {
        debug_assert!(i < self.n.get() && j < self.n.get());
        if i == j {
            return self.clone();
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let mut out = self.clone();
        if j < 6 {
            // positions with bit i set and bit j clear trade with the partner
            // `p + 2^j - 2^i`
            let shift = (1u32 << j) - (1u32 << i);
            let mask = !LOW_CLEAR[i as usize] & LOW_CLEAR[j as usize];
            for w in out.words.iter_mut() {
                let d = ((*w >> shift) ^ *w) & mask;
                *w ^= d ^ (d << shift);
            }
        } else if i >= 6 {
            let bi = 1usize << (i - 6);
            let bj = 1usize << (j - 6);
            for w in 0..out.words.len() {
                if w & bi != 0 && w & bj == 0 {
                    out.words.swap(w, w ^ bi ^ bj);
                }
            }
        } else {
            let s = 1u32 << i;
            let m = !LOW_CLEAR[i as usize];
            let bj = 1usize << (j - 6);
            for w in 0..out.words.len() {
                if w & bj == 0 {
                    let a = self.words[w];
                    let b = self.words[w | bj];
                    out.words[w] = (a & !m) | ((b << s) & m);
                    out.words[w | bj] = (b & m) | ((a >> s) & !m);
                }
            }
        }
        out
    }

    /// Coordinates on which the function depends.
    pub fn essential_mask(&self) -> u32 {
        (0..self.n.get())
            .filter(|&j| self.flip_coord(j) != *self)
            .fold(0, |m, j| m | (1 << j))
    }

    /// Bits as a 0/1 label vector indexed by vertex.
    pub fn to_labels(&self) -> Vec<u16> {
        (0..self.n.order() as u32).map(|v| self.get(v) as u16).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn pseudo_random(n: Dimension, seed: u64) -> Fiber {
        let mut s = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
        Fiber::from_fn(n, |_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            s & 1 == 1
        })
    }

    #[test]
    fn fast_coordinate_ops_match_tables() {
        for n in 1..=9 {
            let d = dim(n);
            for seed in 0..4 {
                let t = pseudo_random(d, seed + 10 * n as u64);
                for j in 0..n {
                    let slow = t.apply(&SignedPermutation::flip(d, j).unwrap());
                    assert_eq!(t.flip_coord(j), slow, "flip n={n} j={j}");
                    for i in 0..n {
                        let slow = t.apply(&SignedPermutation::transposition(d, i, j).unwrap());
                        assert_eq!(t.swap_coords(i, j), slow, "swap n={n} {i},{j}");
                    }
                }
            }
        }
    }

    #[test]
    fn set_algebra() {
        let d = dim(3);
        let a = Fiber::from_vertices(d, [0, 1, 2]).unwrap();
        let b = Fiber::from_vertices(d, [2, 3]).unwrap();
        assert_eq!(a.and(&b).iter_ones().collect::<Vec<_>>(), vec![2]);
        assert_eq!(a.complement().count_ones(), 5);
        assert!(!a.is_disjoint(&b));
        assert!(Fiber::from_vertices(d, [1]).unwrap().is_subset_of(&a));
        assert_eq!(Fiber::full(dim(2)).count_ones(), 4);
        assert_eq!(Fiber::full(dim(7)).count_ones(), 128);
        assert_eq!(b.first_one(), Some(2));
        assert!(Fiber::from_vertices(d, [9]).is_err());
    }

    #[test]
    fn essential_coordinates() {
        let d = dim(5);
        let t = Fiber::from_fn(d, |v| v & 8 != 0);
        assert_eq!(t.essential_mask(), 8);
        assert_eq!(Fiber::full(d).essential_mask(), 0);
        assert_eq!(Fiber::parity_odd(d).essential_mask(), 31);
    }
}
