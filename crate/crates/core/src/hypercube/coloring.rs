use super::{Dimension, Fiber, Vertex};
use crate::error::{Error, Result};

/// A surjective map from the vertices of `Q_n` onto `[0, k)`.
///
/// Labels are `u16` so that discrete colorings up to `Q_16` fit; the per-color
/// bit vectors are built on demand by [`Coloring::fiber`].
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Coloring {
    n: Dimension,
    k: u16,
    colors: Vec<u16>,
}

impl Coloring {
    /// Keeps labels as given; they must cover `[0, k)` with `k = max + 1`.
    pub fn new(n: Dimension, colors: Vec<u16>) -> Result<Self> {
        if colors.len() != n.order() {
            return Err(Error::InvalidColoring(format!(
                "expected {} colors, got {}",
                n.order(),
                colors.len()
            )));
        }
        let k = colors.iter().copied().max().unwrap_or(0) as usize + 1;
        let mut seen = vec![false; k];
        for &c in &colors {
            seen[c as usize] = true;
        }
        if let Some(c) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidColoring(format!("color {c} of {k} is unused")));
        }
        Ok(Coloring { n, k: k as u16, colors })
    }

    /// Arbitrary labels renamed to `0, 1, ...` by first occurrence.
    pub fn from_labels<T: Copy + Eq + std::hash::Hash>(n: Dimension, labels: &[T]) -> Result<Self> {
        if labels.len() != n.order() {
            return Err(Error::InvalidColoring(format!(
                "expected {} labels, got {}",
                n.order(),
                labels.len()
            )));
        }
        let mut map = std::collections::HashMap::new();
        let mut colors = Vec::with_capacity(labels.len());
        for l in labels {
            let next = map.len();
            let c = *map.entry(*l).or_insert(next);
            if c > u16::MAX as usize {
                return Err(Error::InvalidColoring("more than 65536 colors".into()));
            }
            colors.push(c as u16);
        }
        Ok(Coloring { n, k: map.len() as u16, colors })
    }

    pub fn from_fn<T: Copy + Eq + std::hash::Hash>(n: Dimension, f: impl Fn(Vertex) -> T) -> Self {
        let labels: Vec<T> = (0..n.order() as u32).map(f).collect();
        Self::from_labels(n, &labels).expect("label count matches")
    }

    /// Fiber `i` becomes color `i`; the fibers must partition the vertex set.
    pub fn from_fibers(fibers: &[Fiber]) -> Result<Self> {
        let n = fibers
            .first()
            .ok_or_else(|| Error::InvalidColoring("no fibers".into()))?
            .n();
        let mut colors = vec![u16::MAX; n.order()];
        for (c, t) in fibers.iter().enumerate() {
            if t.n() != n {
                return Err(Error::DimensionMismatch(t.n().get(), n.get()));
            }
            if t.is_empty() {
                return Err(Error::InvalidColoring(format!("fiber {c} is empty")));
            }
            for v in t.iter_ones() {
                if colors[v as usize] != u16::MAX {
                    return Err(Error::InvalidColoring(format!("vertex {v} lies in two fibers")));
                }
                colors[v as usize] = c as u16;
            }
        }
        if let Some(v) = colors.iter().position(|&c| c == u16::MAX) {
            return Err(Error::InvalidColoring(format!("vertex {v} is uncovered")));
        }
        Ok(Coloring { n, k: fibers.len() as u16, colors })
    }

    /// Color `t(v)`; a constant fiber gives the 1-coloring.
    pub fn from_fiber(t: &Fiber) -> Self {
        let n = t.n();
        if t.is_empty() || t.count_ones() as usize == n.order() {
            return Self::constant(n);
        }
        Coloring { n, k: 2, colors: t.to_labels() }
    }

    pub fn constant(n: Dimension) -> Self {
        Coloring { n, k: 1, colors: vec![0; n.order()] }
    }

    /// Weight parity; the constant coloring when `n = 0`.
    pub fn parity(n: Dimension) -> Self {
        if n.get() == 0 {
            return Self::constant(n);
        }
        Coloring { n, k: 2, colors: (0..n.order() as u32).map(|v| (v.count_ones() & 1) as u16).collect() }
    }

    /// `f(x) = x_j`.
    pub fn coordinate(n: Dimension, j: u32) -> Result<Self> {
        if j >= n.get() {
            return Err(Error::IndexOutOfRange { index: j, n: n.get() });
        }
        Ok(Coloring { n, k: 2, colors: (0..n.order() as u32).map(|v| ((v >> j) & 1) as u16).collect() })
    }

    /// Color of `v` is its distance from `center`.
    pub fn distance_coloring(n: Dimension, center: Vertex) -> Self {
        let colors = (0..n.order() as u32).map(|v| (v ^ center).count_ones() as u16).collect();
        Coloring { n, k: n.get() as u16 + 1, colors }
    }

    #[inline]
    pub fn n(&self) -> Dimension {
        self.n
    }

    #[inline]
    pub fn k(&self) -> u16 {
        self.k
    }

    #[inline]
    pub fn color(&self, v: Vertex) -> u16 {
        self.colors[v as usize]
    }

    #[inline]
    pub fn colors(&self) -> &[u16] {
        &self.colors
    }

    pub fn fiber(&self, c: u16) -> Fiber {
        let mut t = Fiber::empty(self.n);
        for (v, &x) in self.colors.iter().enumerate() {
            if x == c {
                t.set(v as u32, true);
            }
        }
        t
    }

    pub fn fibers(&self) -> Vec<Fiber> {
        let mut out = vec![Fiber::empty(self.n); self.k as usize];
        for (v, &x) in self.colors.iter().enumerate() {
            out[x as usize].set(v as u32, true);
        }
        out
    }

    pub fn class_sizes(&self) -> Vec<u64> {
        let mut s = vec![0u64; self.k as usize];
        for &c in &self.colors {
            s[c as usize] += 1;
        }
        s
    }

    /// Labels renamed by first occurrence in vertex order.
    pub fn normalized(&self) -> Coloring {
        let mut map = vec![u16::MAX; self.k as usize];
        let mut next = 0u16;
        let colors = self
            .colors
            .iter()
            .map(|&c| {
                if map[c as usize] == u16::MAX {
                    map[c as usize] = next;
                    next += 1;
                }
                map[c as usize]
            })
            .collect();
        Coloring { n: self.n, k: self.k, colors }
    }

    pub fn is_normalized(&self) -> bool {
        let mut next = 0u16;
        for &c in &self.colors {
            if c > next {
                return false;
            }
            if c == next {
                next += 1;
            }
        }
        true
    }

    /// Relabel by `map[old] = new`; `map` must be a bijection on `[0, k)`.
    pub fn relabeled(&self, map: &[u16]) -> Result<Coloring> {
        if map.len() != self.k as usize {
            return Err(Error::ColorCountMismatch(map.len(), self.k as usize));
        }
        Coloring::new(self.n, self.colors.iter().map(|&c| map[c as usize]).collect())
    }
}
