//! Argument manipulation: `σ_ij`, `τ_j`, dummy coordinates and extendability.

use crate::error::{Error, Result};
use crate::hypercube::{Coloring, Dimension, Fiber, SignedPermutation};
use crate::spectral::{combine, essential_mask};

fn check_index(j: u32, n: Dimension) -> Result<()> {
    if j >= n.get() {
        return Err(Error::IndexOutOfRange { index: j, n: n.get() });
    }
    Ok(())
}

fn pull_back(f: &Coloring, a: &SignedPermutation) -> Coloring {
    let table = a.table();
    let colors = table.iter().map(|&y| f.color(y)).collect();
    Coloring::new(f.n(), colors).expect("same color set")
}

/// `g(x) = f(σ_ij x)`.
pub fn swap_args(f: &Coloring, i: u32, j: u32) -> Result<Coloring> {
    check_index(i, f.n())?;
    check_index(j, f.n())?;
    Ok(pull_back(f, &SignedPermutation::transposition(f.n(), i, j)?))
}

/// `g(x) = f(τ_j x)`.
pub fn flip_arg(f: &Coloring, j: u32) -> Result<Coloring> {
    check_index(j, f.n())?;
    Ok(pull_back(f, &SignedPermutation::flip(f.n(), j)?))
}

/// Coloring of `Q_{n+1}` not depending on coordinate `n`.
pub fn add_dummy_arg(f: &Coloring) -> Result<Coloring> {
    let n1 = Dimension::new(f.n().get() + 1)?;
    let mask = f.n().full_mask();
    Coloring::new(n1, (0..n1.order() as u32).map(|v| f.color(v & mask)).collect())
}

/// Projection onto the essential coordinates, in ascending order.
/// A constant coloring keeps coordinate 0 so the result stays on `Q_1`.
pub fn drop_nonessential(f: &Coloring) -> Result<Coloring> {
    let mask = essential_mask(f);
    let ess: Vec<u32> = if mask == 0 { vec![0] } else { (0..f.n().get()).filter(|j| mask & (1 << j) != 0).collect() };
    let m = Dimension::new(ess.len() as u32)?;
    let colors = (0..m.order() as u32)
        .map(|y| {
            let x = ess.iter().enumerate().filter(|(i, _)| y & (1 << i) != 0).fold(0u32, |x, (_, &e)| x | (1 << e));
            f.color(x)
        })
        .collect();
    Coloring::new(m, colors)
}

/// Whether `(g, t)` extends to a coloring with one more essential argument
/// and the same number of colors by adding a dummy coordinate and swapping it
/// with some coordinate in `t` only.
pub fn extendable(g: &Coloring, t: &Fiber) -> Result<bool> {
    Ok(!extensions(g, t)?.is_empty())
}

/// The colorings `(g', σ_{i,n} t')` of `Q_{n+1}` witnessing [`extendable`],
/// where `g'` and `t'` are `g` and `t` with a dummy coordinate `n` added.
pub fn extensions(g: &Coloring, t: &Fiber) -> Result<Vec<Coloring>> {
    if g.n() != t.n() {
        return Err(Error::DimensionMismatch(g.n().get(), t.n().get()));
    }
    let mut on_t = t.iter_ones().map(|v| g.color(v));
    if let Some(c) = on_t.next() {
        if on_t.any(|d| d != c) {
            return Err(Error::Precondition("g is not constant on the ones of t".into()));
        }
    }
    let tf = Coloring::from_fiber(t);
    let h = combine(g, &tf)?;
    let n = g.n().get();
    let g1 = add_dummy_arg(g)?;
    let t1 = add_dummy_arg(&tf)?;
    let target = essential_mask(&h).count_ones() + 1;
    let mut out = Vec::new();
    for i in 0..n {
        let ts = swap_args(&t1, i, n)?;
        let h1 = combine(&g1, &ts)?;
        if h1.k() == h.k() && essential_mask(&h1).count_ones() == target {
            out.push(h1);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn swap_is_involution() {
        let f = Coloring::from_fn(dim(4), |v| (v * 7 + (v >> 2)) % 3);
        let g = swap_args(&swap_args(&f, 1, 3).unwrap(), 1, 3).unwrap();
        assert_eq!(f, g);
        assert_eq!(flip_arg(&flip_arg(&f, 2).unwrap(), 2).unwrap(), f);
        assert!(swap_args(&f, 0, 4).is_err());
    }

    #[test]
    fn dummy_round_trip() {
        let f = Coloring::from_fn(dim(3), |v| (v & 1) ^ (v >> 2));
        let g = add_dummy_arg(&f).unwrap();
        assert_eq!(g.n().get(), 4);
        assert_eq!(essential_mask(&g), essential_mask(&f));
        let d = drop_nonessential(&f).unwrap();
        assert_eq!(d.n().get(), 2);
        assert_eq!(drop_nonessential(&g).unwrap(), d);
    }

    #[test]
    fn constant_fiber_not_extendable() {
        let g = Coloring::parity(dim(3));
        assert!(!extendable(&g, &Fiber::empty(dim(3))).unwrap());
        let t = Fiber::from_vertices(dim(3), [0, 3]).unwrap();
        assert!(!extendable(&g, &t).unwrap());
        // moving x_1 of t to the dummy cannot add an argument g depends on
        let g = Coloring::from_fiber(&Fiber::from_fn(dim(3), |v| v & 1 == 1));
        let t = Fiber::from_fn(dim(3), |v| v & 1 == 0 && v & 2 == 0);
        assert!(!extendable(&g, &t).unwrap());
        let bad = Fiber::from_vertices(dim(3), [0, 1]).unwrap();
        assert!(extendable(&g, &bad).is_err());
    }
}
