//! Perfect colorings of `Q_9` with eigenvalues `9` and `-3` only.
//!
//! Each triple of coordinates `(x_{3t}, x_{3t+1}, x_{3t+2})` is read as the
//! pair `(x_{3t} + x_{3t+1}, x_{3t} + x_{3t+2})`, an element of a 4-set encoded
//! as `2p + q`.

use super::{matrix, param, Construction};
use crate::error::{Error, Result};
use crate::hypercube::{Coloring, Dimension};
use crate::spectral::{quotient_matrix, QuotientMatrix};

/// Group structure on the 4-set of pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    /// Componentwise addition.
    Klein,
    /// Addition of `2p + q` modulo 4.
    Cyclic,
}

impl Group {
    fn op(self, a: u32, b: u32) -> u32 {
        match self {
            Group::Klein => a ^ b,
            Group::Cyclic => (a + b) & 3,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Q9Variant {
    StarEquation(Group),
    GBased(Coloring),
    Quasigroup,
}

fn q9() -> Dimension {
    Dimension::new(9).expect("small")
}

fn pair(v: u32, t: u32) -> u32 {
    let b = |j: u32| (v >> (3 * t + j)) & 1;
    2 * (b(0) ^ b(1)) + (b(0) ^ b(2))
}

fn all_threes() -> QuotientMatrix {
    matrix((0..4).map(|i| (0..4).map(|j| if i == j { 0 } else { 3 }).collect()).collect())
}

/// Color 0 is the solution set of `pair_0 ⋆ pair_1 = pair_2`.
pub fn star_equation_coloring(group: Group) -> Construction {
    let colors = (0..512u32).map(|v| (group.op(pair(v, 0), pair(v, 1)) != pair(v, 2)) as u16).collect();
    let coloring = Coloring::new(q9(), colors).expect("two colors");
    let expected = matrix(vec![vec![0, 9], vec![3, 6]]);
    Construction::new("star_equation", vec![param("group", format!("{group:?}"))], expected, &[9, -3], coloring)
}

/// `(g(y) + x_0 + x_1 + x_2, y_0 + ... + y_5)` with `x` on coordinates 0..3
/// and `y` on 3..9; color `2a + b`. `g` must have matrix `(3, 3; 3, 3)` on `Q_6`.
pub fn g_based_coloring(g: &Coloring) -> Result<Construction> {
    let want = QuotientMatrix::parse("3,3;3,3")?;
    if g.n().get() != 6 || quotient_matrix(g)? != want {
        return Err(Error::Precondition("base must be a 2-coloring of Q_6 with matrix (3,3;3,3)".into()));
    }
    let colors = (0..512u32)
        .map(|v| {
            let (x, y) = (v & 7, v >> 3);
            let a = g.color(y) as u32 ^ (x.count_ones() & 1);
            (2 * a + (y.count_ones() & 1)) as u16
        })
        .collect();
    let coloring = Coloring::new(q9(), colors)?;
    Ok(Construction::new("g_based", vec![param("n", 9)], all_threes(), &[9, -3, -3, -3], coloring))
}

/// `(a * b) ∘ c`, where `*` is [`Group::Cyclic`] and `∘` is addition modulo 4
/// under the labeling `00, 01, 11, 10 -> 0, 1, 2, 3`.
pub fn quasigroup_coloring() -> Construction {
    const GRAY: [u32; 4] = [0, 1, 3, 2];
    let circ = |a: u32, c: u32| GRAY[((GRAY[a as usize] + GRAY[c as usize]) & 3) as usize];
    let colors = (0..512u32)
        .map(|v| circ(Group::Cyclic.op(pair(v, 0), pair(v, 1)), pair(v, 2)) as u16)
        .collect();
    let coloring = Coloring::new(q9(), colors).expect("four colors");
    Construction::new("quasigroup", vec![param("n", 9)], all_threes(), &[9, -3, -3, -3], coloring)
}

pub fn q9_coloring(variant: &Q9Variant) -> Result<Construction> {
    match variant {
        Q9Variant::StarEquation(g) => Ok(star_equation_coloring(*g)),
        Q9Variant::GBased(g) => g_based_coloring(g),
        Q9Variant::Quasigroup => Ok(quasigroup_coloring()),
    }
}
