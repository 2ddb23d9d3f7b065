//! Canonical forms, equivalence tests and stabilizers under `Aut(Q_n)`.
//!
//! The canonical form of a coloring with `d` inessential coordinates is the
//! canonical form of its essential core, embedded so that the `d` dummy
//! coordinates are the lowest ones. Among colorings without dummies it is the
//! lexicographically least first-occurrence-renamed string over `Aut(Q_n)`.

pub mod engine;
mod ops;

pub use engine::Mode;
pub use ops::{add_dummy_arg, drop_nonessential, extendable, extensions, flip_arg, swap_args};

use crate::error::{Error, Result};
use crate::hypercube::{apply_aut, group_order, Coloring, ColoringEquivalence, Dimension, Fiber, SignedPermutation};
use crate::spectral::essential_mask;
use std::collections::HashSet;

/// Practical cap on `n` for general canonical forms.
pub const MAX_CANON_N: u32 = 10;

/// Leaves collected when stabilizer elements are requested.
const LEAF_CAP: usize = 1 << 20;

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub canon: Coloring,
    /// Order of the set of `α` with `f ∘ α = π ∘ f` for some `π`.
    pub aut_order: u128,
    /// `canon(x) = color_map[f(aut(x))]`.
    pub witness: ColoringEquivalence,
    /// Generators of the stabilizer (empty unless requested).
    pub generators: Vec<ColoringEquivalence>,
}

struct Reduced {
    n: Dimension,
    ess: Vec<u32>,
    dummies: Vec<u32>,
    core_n: Dimension,
}

impl Reduced {
    fn new(n: Dimension, mask: u32) -> Self {
        let ess: Vec<u32> = (0..n.get()).filter(|j| mask & (1 << j) != 0).collect();
        let dummies: Vec<u32> = (0..n.get()).filter(|j| mask & (1 << j) == 0).collect();
        let core_n = Dimension::new(ess.len() as u32).unwrap();
        Reduced { n, ess, dummies, core_n }
    }

    fn spread(&self, y: u32) -> u32 {
        self.ess.iter().enumerate().filter(|(i, _)| y & (1 << i) != 0).fold(0, |x, (_, &e)| x | (1 << e))
    }

    fn core_labels(&self, labels: &[u16]) -> Vec<u16> {
        (0..self.core_n.order() as u32).map(|y| labels[self.spread(y) as usize]).collect()
    }

    /// Full-dimension automorphism acting as `a` on the core and sending
    /// coordinate `j < d` to the `j`-th dummy.
    fn lift(&self, a: &SignedPermutation) -> SignedPermutation {
        let d = self.dummies.len();
        let mut perm = vec![0u8; self.n.get() as usize];
        for (j, &x) in self.dummies.iter().enumerate() {
            perm[j] = x as u8;
        }
        for (i, &p) in a.perm().iter().enumerate() {
            perm[d + i] = self.ess[p as usize] as u8;
        }
        SignedPermutation::from_affine(self.n, self.spread(a.translation()), perm).unwrap()
    }

    /// Lift fixing dummies pointwise, for stabilizer elements.
    fn lift_in_place(&self, a: &SignedPermutation) -> SignedPermutation {
        let mut perm: Vec<u8> = (0..self.n.get() as u8).collect();
        for (i, &p) in a.perm().iter().enumerate() {
            perm[self.ess[i] as usize] = self.ess[p as usize] as u8;
        }
        SignedPermutation::from_affine(self.n, self.spread(a.translation()), perm).unwrap()
    }

    fn embed(&self, core: &[u16]) -> Vec<u16> {
        let d = self.dummies.len();
        (0..self.n.order()).map(|x| core[x >> d]).collect()
    }

    fn dummy_factor(&self) -> u128 {
        let d = self.dummies.len() as u128;
        (1..=d).product::<u128>() << d
    }

    fn dummy_generators(&self) -> Vec<SignedPermutation> {
        let mut g: Vec<SignedPermutation> =
            self.dummies.iter().map(|&j| SignedPermutation::flip(self.n, j).unwrap()).collect();
        for w in self.dummies.windows(2) {
            g.push(SignedPermutation::transposition(self.n, w[0], w[1]).unwrap());
        }
        g
    }
}

fn check_cap(n: Dimension) -> Result<()> {
    if n.get() > MAX_CANON_N {
        return Err(Error::CapExceeded { what: "canonical form", cap: MAX_CANON_N, n: n.get() });
    }
    Ok(())
}

/// Color map `π` with `g(x) = π(f(α(x)))`, if one exists.
pub fn induced_color_map(f: &Coloring, g: &Coloring, a: &SignedPermutation) -> Option<Vec<u16>> {
    if f.k() != g.k() {
        return None;
    }
    let mut map = vec![u16::MAX; f.k() as usize];
    for (x, y) in a.table().into_iter().enumerate() {
        let (c, d) = (f.color(y), g.colors()[x]);
        if map[c as usize] == u16::MAX {
            map[c as usize] = d;
        } else if map[c as usize] != d {
            return None;
        }
    }
    Some(map)
}

fn canonical_impl(f: &Coloring, want_generators: bool) -> Result<CanonicalForm> {
    let n = f.n();
    check_cap(n)?;
    let red = Reduced::new(n, essential_mask(f));
    let core = red.core_labels(f.colors());
    let cap = if want_generators { LEAF_CAP } else { 0 };
    let out = engine::minimize(red.core_n, &core, f.k() as usize, Mode::Renamed, cap);
    let canon = Coloring::new(n, red.embed(&out.best))?;
    let first = out.first.expect("group is nonempty");
    let aut = red.lift(&first);
    let witness = ColoringEquivalence { aut, color_map: out.first_map.clone() };
    debug_assert_eq!(apply_aut(f, &witness).ok().as_ref(), Some(&canon));
    let aut_order = out.count as u128 * red.dummy_factor();
    let mut generators = Vec::new();
    if want_generators {
        if (out.count as usize) > out.leaves.len() {
            return Err(Error::CapExceeded { what: "stabilizer elements", cap: LEAF_CAP as u32, n: n.get() });
        }
        let inv0 = first.inverse();
        let elems: Vec<SignedPermutation> =
            out.leaves.iter().map(|a| red.lift_in_place(&a.compose(&inv0))).collect();
        let mut gens = generating_set(n, &elems);
        gens.extend(red.dummy_generators());
        for g in gens {
            let map = induced_color_map(f, f, &g).expect("stabilizer element");
            generators.push(ColoringEquivalence { aut: g, color_map: map });
        }
    }
    Ok(CanonicalForm { canon, aut_order, witness, generators })
}

pub fn canonical_form(f: &Coloring) -> Result<CanonicalForm> {
    canonical_impl(f, false)
}

pub fn canonical_form_with_generators(f: &Coloring) -> Result<CanonicalForm> {
    canonical_impl(f, true)
}

/// Canonical string only.
pub fn canonical_coloring(f: &Coloring) -> Result<Coloring> {
    Ok(canonical_impl(f, false)?.canon)
}

pub fn are_equivalent(f: &Coloring, g: &Coloring) -> Result<Option<ColoringEquivalence>> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch(f.n().get(), g.n().get()));
    }
    if f.k() != g.k() {
        return Ok(None);
    }
    let cf = canonical_form(f)?;
    let cg = canonical_form(g)?;
    if cf.canon != cg.canon {
        return Ok(None);
    }
    // canon = πf f αf = πg g αg, so g = πg⁻¹ πf f (αf αg⁻¹)
    let aut = cf.witness.aut.compose(&cg.witness.aut.inverse());
    let ginv = cg.witness.inverse().color_map;
    let color_map = cf.witness.color_map.iter().map(|&c| ginv[c as usize]).collect();
    let e = ColoringEquivalence { aut, color_map };
    debug_assert_eq!(apply_aut(f, &e).ok().as_ref(), Some(g));
    Ok(Some(e))
}

#[derive(Clone, Debug)]
pub struct FiberCanon {
    pub canon: Fiber,
    /// Set-stabilizer order in `Aut(Q_n)`.
    pub stabilizer_order: u128,
    /// `canon = t ∘ witness`.
    pub witness: SignedPermutation,
}

fn fiber_impl(t: &Fiber, cap: usize) -> Result<(FiberCanon, Vec<SignedPermutation>)> {
    let n = t.n();
    check_cap(n)?;
    let red = Reduced::new(n, t.essential_mask());
    let labels = t.to_labels();
    let core = red.core_labels(&labels);
    let out = engine::minimize(red.core_n, &core, 2, Mode::Raw, cap);
    let canon_labels = red.embed(&out.best);
    let mut canon = Fiber::empty(n);
    for (v, &c) in canon_labels.iter().enumerate() {
        if c == 1 {
            canon.set(v as u32, true);
        }
    }
    let first = out.first.expect("group is nonempty");
    let witness = red.lift(&first);
    let mut gens = Vec::new();
    if cap > 0 {
        if (out.count as usize) > out.leaves.len() {
            return Err(Error::CapExceeded { what: "stabilizer elements", cap: cap as u32, n: n.get() });
        }
        let inv0 = first.inverse();
        let elems: Vec<SignedPermutation> =
            out.leaves.iter().map(|a| red.lift_in_place(&a.compose(&inv0))).collect();
        gens = generating_set(n, &elems);
        gens.extend(red.dummy_generators());
    }
    Ok((FiberCanon { canon, stabilizer_order: out.count as u128 * red.dummy_factor(), witness }, gens))
}

pub fn canonical_fiber(t: &Fiber) -> Result<FiberCanon> {
    Ok(fiber_impl(t, 0)?.0)
}

/// Order of `{α : t ∘ α = t}`.
pub fn stabilizer_order(t: &Fiber) -> Result<u128> {
    Ok(fiber_impl(t, 0)?.0.stabilizer_order)
}

/// Generators of the set-stabilizer of `t`.
pub fn fiber_stabilizer_generators(t: &Fiber) -> Result<Vec<SignedPermutation>> {
    Ok(fiber_impl(t, LEAF_CAP)?.1)
}

/// Some `α` with `u = t ∘ α`.
pub fn fiber_transporter(t: &Fiber, u: &Fiber) -> Result<Option<SignedPermutation>> {
    let ct = canonical_fiber(t)?;
    let cu = canonical_fiber(u)?;
    if ct.canon != cu.canon {
        return Ok(None);
    }
    Ok(Some(ct.witness.compose(&cu.witness.inverse())))
}

/// Size of the orbit of `f` under `Aut(Q_n)` acting on colorings up to renaming.
pub fn orbit_size(f: &Coloring) -> Result<u128> {
    Ok(group_order(f.n()) / canonical_form(f)?.aut_order)
}

/// A subset of `elems` generating the same group (`elems` must be a group).
pub fn generating_set(n: Dimension, elems: &[SignedPermutation]) -> Vec<SignedPermutation> {
    let mut gens: Vec<SignedPermutation> = Vec::new();
    let mut closure: HashSet<u64> = HashSet::new();
    closure.insert(SignedPermutation::identity(n).key());
    let mut members = vec![SignedPermutation::identity(n)];
    for e in elems {
        if closure.contains(&e.key()) {
            continue;
        }
        gens.push(e.clone());
        // extend the closure by BFS over all generators
        let mut frontier: Vec<SignedPermutation> = members.clone();
        while let Some(a) = frontier.pop() {
            for g in &gens {
                let b = g.compose(&a);
                if closure.insert(b.key()) {
                    members.push(b.clone());
                    frontier.push(b);
                }
            }
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::parse_hex;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn invariant_under_automorphisms() {
        let d = dim(4);
        let f = Coloring::from_fn(d, |v| ((v & 3) == 3) as u8 + ((v >> 2) == 1) as u8 * 2);
        let c = canonical_form(&f).unwrap();
        for a in SignedPermutation::all(d).iter().step_by(7) {
            let e = ColoringEquivalence { aut: a.clone(), color_map: (0..f.k()).rev().collect() };
            let g = apply_aut(&f, &e).unwrap();
            assert_eq!(canonical_form(&g).unwrap().canon, c.canon);
        }
    }

    #[test]
    fn witness_and_equivalence() {
        let d = dim(5);
        let f = Coloring::from_fn(d, |v| (v.count_ones() + (v & 1)) % 3);
        let a = SignedPermutation::new(d, vec![3, 0, 4, 1, 2], 0b10110).unwrap();
        let g = apply_aut(&f, &ColoringEquivalence { aut: a, color_map: vec![2, 0, 1] }).unwrap();
        let e = are_equivalent(&f, &g).unwrap().unwrap();
        assert_eq!(apply_aut(&f, &e).unwrap(), g);
        let h = Coloring::from_fn(d, |v| (v.count_ones() % 3) as u8);
        assert!(are_equivalent(&f, &h).unwrap().is_none() || canonical_form(&f).unwrap().canon == canonical_form(&h).unwrap().canon);
    }

    #[test]
    fn single_essential_argument() {
        let d = dim(5);
        for j in 0..5 {
            let f = Coloring::coordinate(d, j).unwrap();
            assert_eq!(canonical_coloring(&f).unwrap(), canonical_coloring(&Coloring::coordinate(d, 0).unwrap()).unwrap());
            // dummies occupy the low coordinates
            assert_eq!(canonical_coloring(&f).unwrap(), Coloring::coordinate(d, 4).unwrap());
            // flipping x_j swaps the two colors
            assert_eq!(canonical_form(&f).unwrap().aut_order, 32 * 24);
        }
    }

    #[test]
    fn stabilizer_orders() {
        let d = dim(4);
        assert_eq!(stabilizer_order(&Fiber::full(d)).unwrap(), 384);
        assert_eq!(stabilizer_order(&Fiber::parity_even(d)).unwrap(), 192);
        let t = parse_hex("c30000c3003c3c00003c3c00c30000c3", dim(7)).unwrap();
        assert_eq!(stabilizer_order(&t).unwrap(), 1536);
        let gens = fiber_stabilizer_generators(&t).unwrap();
        for g in &gens {
            assert_eq!(t.apply(g), t);
        }
    }

    #[test]
    fn generators_generate() {
        let d = dim(3);
        let f = Coloring::distance_coloring(d, 0);
        let c = canonical_form_with_generators(&f).unwrap();
        assert_eq!(c.aut_order, 6 * 2);
        let elems: HashSet<u64> = {
            let mut seen = HashSet::new();
            let mut stack = vec![SignedPermutation::identity(d)];
            seen.insert(stack[0].key());
            while let Some(a) = stack.pop() {
                for g in &c.generators {
                    let b = g.aut.compose(&a);
                    if seen.insert(b.key()) {
                        stack.push(b);
                    }
                }
            }
            seen
        };
        assert_eq!(elems.len() as u128, c.aut_order);
    }

    #[test]
    fn transporter() {
        let d = dim(5);
        let t = Fiber::from_vertices(d, [0, 3, 5, 6, 24]).unwrap();
        let a = SignedPermutation::new(d, vec![1, 2, 0, 4, 3], 9).unwrap();
        let u = t.apply(&a);
        let b = fiber_transporter(&t, &u).unwrap().unwrap();
        assert_eq!(t.apply(&b), u);
    }
}
