//! Depth-first color assignment with propagation for colorings of `Q_n` with a
//! prescribed quotient matrix.
//!
//! Each vertex carries a domain of admissible colors. Assigned vertices
//! constrain their neighborhoods to the row of the quotient matrix, free
//! vertices keep only colors whose rows dominate the neighbor counts seen so
//! far, and class sizes are fixed by the density vector.

use crate::error::{Error, Result};
use crate::hypercube::Dimension;
use crate::spectral::QuotientMatrix;
use num_traits::ToPrimitive;

const NONE: u8 = u8::MAX;

/// Largest dimension accepted by the solver.
pub const MAX_CSP_N: u32 = 10;

#[derive(Clone, Debug)]
pub struct Problem {
    pub n: Dimension,
    pub k: usize,
    /// Row-major quotient matrix.
    pub s: Vec<u8>,
    /// Class sizes.
    pub sizes: Vec<u32>,
    /// Initial domains (bit `c` set if color `c` is allowed).
    pub domains: Vec<u16>,
    /// Fix the color of vertex 0 and its neighbors (valid only when the domains
    /// are invariant under `Aut(Q_n)`).
    pub break_root: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Clone, Copy, Default, Debug)]
pub struct Stats {
    pub nodes: u64,
    pub leaves: u64,
}

impl Problem {
    pub fn new(n: Dimension, s: &QuotientMatrix) -> Result<Option<Problem>> {
        if n.get() > MAX_CSP_N {
            return Err(Error::CapExceeded { what: "coloring search", cap: MAX_CSP_N, n: n.get() });
        }
        if s.n() != n.get() {
            return Err(Error::InvalidArgument(format!("row sum {} differs from n = {}", s.n(), n.get())));
        }
        let k = s.k();
        if k > 16 {
            return Err(Error::InvalidArgument("at most 16 colors".into()));
        }
        let Some(rho) = s.densities() else { return Ok(None) };
        let mut sizes = Vec::with_capacity(k);
        for r in &rho {
            let x = r * num_rational::BigRational::from_integer((n.order() as u64).into());
            if !x.is_integer() {
                return Ok(None);
            }
            sizes.push(x.to_integer().to_u32().unwrap());
        }
        let s = (0..k).flat_map(|i| s.row(i).iter().map(|&x| x as u8).collect::<Vec<_>>()).collect();
        let full = if k == 16 { u16::MAX } else { (1u16 << k) - 1 };
        Ok(Some(Problem { n, k, s, sizes, domains: vec![full; n.order()], break_root: true }))
    }
}

struct State<'p> {
    p: &'p Problem,
    n: usize,
    k: usize,
    col: Vec<u8>,
    dom: Vec<u16>,
    cnt: Vec<u8>,
    free: Vec<u8>,
    left: Vec<u32>,
    trail: Vec<(u32, u16)>,
    stack: Vec<u32>,
    queue: Vec<u32>,
    queued: Vec<bool>,
    pending: Vec<u32>,
    stats: Stats,
}

impl<'p> State<'p> {
    fn new(p: &'p Problem) -> Self {
        let order = p.n.order();
        let n = p.n.get() as usize;
        State {
            p,
            n,
            k: p.k,
            col: vec![NONE; order],
            dom: p.domains.clone(),
            cnt: vec![0; order * p.k],
            free: vec![n as u8; order],
            left: p.sizes.clone(),
            trail: Vec::new(),
            stack: Vec::new(),
            queue: Vec::new(),
            queued: vec![false; order],
            pending: Vec::new(),
            stats: Stats::default(),
        }
    }

    #[inline]
    fn s(&self, a: usize, j: usize) -> u8 {
        self.p.s[a * self.k + j]
    }

    #[inline]
    fn enqueue(&mut self, w: u32) {
        if !self.queued[w as usize] {
            self.queued[w as usize] = true;
            self.queue.push(w);
        }
    }

    fn set_dom(&mut self, u: u32, d: u16) -> bool {
        let old = self.dom[u as usize];
        if d == old {
            return true;
        }
        self.trail.push((u, old));
        self.dom[u as usize] = d;
        if d == 0 {
            return false;
        }
        if d.is_power_of_two() {
            self.pending.push(u);
        }
        for j in 0..self.n {
            self.enqueue(u ^ (1 << j));
        }
        true
    }

    fn assign(&mut self, v: u32, c: usize) -> bool {
        let vi = v as usize;
        if self.col[vi] != NONE {
            return self.col[vi] as usize == c;
        }
        if self.dom[vi] & (1 << c) == 0 || self.left[c] == 0 {
            return false;
        }
        self.set_dom(v, 1 << c);
        self.col[vi] = c as u8;
        self.stack.push(v);
        self.left[c] -= 1;
        for j in 0..self.n {
            let u = (v ^ (1 << j)) as usize;
            self.cnt[u * self.k + c] += 1;
            self.free[u] -= 1;
            self.enqueue(u as u32);
        }
        self.enqueue(v);
        if self.left[c] == 0 {
            let bit = 1u16 << c;
            for u in 0..self.col.len() {
                if self.col[u] == NONE && self.dom[u] & bit != 0 && !self.set_dom(u as u32, self.dom[u] & !bit) {
                    return false;
                }
            }
        }
        true
    }

    fn check(&mut self, w: u32) -> bool {
        let wi = w as usize;
        let k = self.k;
        let base = wi * k;
        if self.col[wi] != NONE {
            let a = self.col[wi] as usize;
            let mut avail = [0u8; 16];
            for j in 0..self.n {
                let u = (w ^ (1 << j)) as usize;
                if self.col[u] == NONE {
                    let mut d = self.dom[u];
                    while d != 0 {
                        avail[d.trailing_zeros() as usize] += 1;
                        d &= d - 1;
                    }
                }
            }
            for (c, &av) in avail.iter().enumerate().take(k) {
                let have = self.cnt[base + c];
                let want = self.s(a, c);
                if have > want {
                    return false;
                }
                let need = want - have;
                if av < need {
                    return false;
                }
                if avail[c] > 0 && (need == 0 || need == avail[c]) {
                    let bit = 1u16 << c;
                    for j in 0..self.n {
                        let u = w ^ (1 << j);
                        let ui = u as usize;
                        if self.col[ui] == NONE && self.dom[ui] & bit != 0 {
                            let d = if need == 0 { self.dom[ui] & !bit } else { bit };
                            if !self.set_dom(u, d) {
                                return false;
                            }
                        }
                    }
                }
            }
            true
        } else {
            let mut allowed = 0u16;
            let mut d = self.dom[wi];
            while d != 0 {
                let a = d.trailing_zeros() as usize;
                d &= d - 1;
                if self.left[a] > 0 && (0..k).all(|c| self.cnt[base + c] <= self.s(a, c)) {
                    allowed |= 1 << a;
                }
            }
            self.set_dom(w, allowed)
        }
    }

    fn propagate(&mut self) -> bool {
        loop {
            if let Some(w) = self.queue.pop() {
                self.queued[w as usize] = false;
                if !self.check(w) {
                    return false;
                }
            } else if let Some(u) = self.pending.pop() {
                let d = self.dom[u as usize];
                if self.col[u as usize] == NONE && !self.assign(u, d.trailing_zeros() as usize) {
                    return false;
                }
            } else {
                return true;
            }
        }
    }

    fn clear_queues(&mut self) {
        for &w in &self.queue {
            self.queued[w as usize] = false;
        }
        self.queue.clear();
        self.pending.clear();
    }

    fn undo(&mut self, trail: usize, stack: usize) {
        while self.stack.len() > stack {
            let v = self.stack.pop().unwrap();
            let c = self.col[v as usize] as usize;
            self.col[v as usize] = NONE;
            self.left[c] += 1;
            for j in 0..self.n {
                let u = (v ^ (1 << j)) as usize;
                self.cnt[u * self.k + c] -= 1;
                self.free[u] += 1;
            }
        }
        while self.trail.len() > trail {
            let (u, d) = self.trail.pop().unwrap();
            self.dom[u as usize] = d;
        }
        self.clear_queues();
    }

    fn pick(&self) -> Option<u32> {
        let mut best: Option<(u32, u8, u32)> = None;
        for (v, &c) in self.col.iter().enumerate() {
            if c != NONE {
                continue;
            }
            let key = (self.dom[v].count_ones(), self.free[v]);
            if best.is_none_or(|(p, f, _)| key < (p, f)) {
                best = Some((key.0, key.1, v as u32));
                if key.0 == 2 && key.1 == 0 {
                    break;
                }
            }
        }
        best.map(|b| b.2)
    }

    fn dfs(&mut self, visit: &mut dyn FnMut(&[u8]) -> Control) -> Control {
        self.stats.nodes += 1;
        let Some(v) = self.pick() else {
            self.stats.leaves += 1;
            return visit(&self.col);
        };
        let mut d = self.dom[v as usize];
        while d != 0 {
            let c = d.trailing_zeros() as usize;
            d &= d - 1;
            let (t, s) = (self.trail.len(), self.stack.len());
            if self.assign(v, c) && self.propagate() && self.dfs(visit) == Control::Stop {
                return Control::Stop;
            }
            self.undo(t, s);
        }
        Control::Continue
    }

    fn root(&mut self) -> bool {
        for v in 0..self.col.len() {
            let d = self.dom[v];
            if d == 0 {
                return false;
            }
            if d.is_power_of_two() {
                self.pending.push(v as u32);
            }
            self.enqueue(v as u32);
        }
        if self.p.break_root {
            // smallest class at vertex 0, its neighbors sorted by color
            let i0 = (0..self.k).min_by_key(|&c| (self.left[c], c)).unwrap();
            if !self.assign(0, i0) {
                return false;
            }
            let mut j = 0u32;
            for c in 0..self.k {
                for _ in 0..self.s(i0, c) {
                    if !self.assign(1 << j, c) {
                        return false;
                    }
                    j += 1;
                }
            }
        }
        self.propagate()
    }
}

/// Visit every labeled solution (up to the root normalization when enabled).
pub fn solve(p: &Problem, visit: &mut dyn FnMut(&[u8]) -> Control) -> Stats {
    let mut st = State::new(p);
    if st.root() {
        st.dfs(visit);
    }
    st.stats
}

/// Split the search into independent subproblems by fixing the first `depth`
/// branching decisions; the union of their solutions is the full solution set.
pub fn subproblems(p: &Problem, depth: usize) -> Vec<Problem> {
    let mut st = State::new(p);
    let mut out = Vec::new();
    if !st.root() {
        return out;
    }
    fn rec(st: &mut State, depth: usize, out: &mut Vec<Problem>) {
        let v = if depth == 0 { None } else { st.pick() };
        let Some(v) = v else {
            let mut q = st.p.clone();
            q.domains = st.dom.clone();
            q.break_root = false;
            out.push(q);
            return;
        };
        let mut d = st.dom[v as usize];
        while d != 0 {
            let c = d.trailing_zeros() as usize;
            d &= d - 1;
            let (t, s) = (st.trail.len(), st.stack.len());
            if st.assign(v, c) && st.propagate() {
                rec(st, depth - 1, out);
            }
            st.undo(t, s);
        }
    }
    rec(&mut st, depth, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::Coloring;
    use crate::spectral::quotient_matrix;

    fn count(n: u32, m: &str, root: bool) -> u64 {
        let d = Dimension::new(n).unwrap();
        let s = QuotientMatrix::parse(m).unwrap();
        let Some(mut p) = Problem::new(d, &s).unwrap() else { return 0 };
        p.break_root = root;
        let mut seen = 0;
        solve(&p, &mut |col| {
            let f = Coloring::new(d, col.iter().map(|&c| c as u16).collect()).unwrap();
            assert_eq!(quotient_matrix(&f).unwrap(), s);
            seen += 1;
            Control::Continue
        });
        seen
    }

    #[test]
    fn perfect_codes_q3() {
        // antipodal pairs
        assert_eq!(count(3, "0,3;1,2", false), 4);
        // distance colorings
        assert_eq!(count(3, "0,3,0,0;1,0,2,0;0,2,0,1;0,0,3,0", false), 8);
        assert_eq!(count(3, "0,3,0,0;1,0,2,0;0,2,0,1;0,0,3,0", true), 1);
    }

    #[test]
    fn brute_force_agreement() {
        let d = Dimension::new(4).unwrap();
        for m in ["2,2;2,2", "1,3;1,3", "0,4;4,0", "1,3;3,1", "3,1;1,3", "0,4;2,2"] {
            let s = QuotientMatrix::parse(m).unwrap();
            let mut brute = 0;
            for t in (0u32..1 << 16).step_by(2).skip(1) {
                if let Ok(f) = Coloring::new(d, (0..16).map(|v| ((t >> v) & 1) as u16).collect()) {
                    if let Ok(q) = quotient_matrix(&f) {
                        brute += (q == s) as u64;
                    }
                }
            }
            let Some(mut p) = Problem::new(d, &s).unwrap() else {
                assert_eq!(brute, 0, "{m}");
                continue;
            };
            p.break_root = false;
            p.domains[0] = 1;
            let mut seen = 0;
            solve(&p, &mut |_| {
                seen += 1;
                Control::Continue
            });
            assert_eq!(seen, brute, "{m}");
        }
    }

    #[test]
    fn subproblems_partition_solutions() {
        let d = Dimension::new(4).unwrap();
        let s = QuotientMatrix::parse("2,2;2,2").unwrap();
        let p = Problem::new(d, &s).unwrap().unwrap();
        let total = solve(&p, &mut |_| Control::Continue).leaves;
        let parts: u64 = subproblems(&p, 3).iter().map(|q| solve(q, &mut |_| Control::Continue).leaves).sum();
        assert_eq!(total, parts);
    }
}
