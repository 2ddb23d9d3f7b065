//! Resumable enumeration for long searches.
//!
//! The search tree is cut at a fixed depth into an ordered list of
//! subproblems, so the list is the same on every run and on every thread
//! count. Subproblems are solved in batches; after each batch the caller gets
//! a [`Checkpoint`] holding the number of finished subproblems and every class
//! found so far.

use super::csp::{self, Problem};
use super::{classes_in, enumerate_with_orders};
use crate::error::{Error, Result};
use crate::hypercube::{Coloring, Dimension};
use crate::spectral::QuotientMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const CHECKPOINT_FORMAT: &str = "equicube-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

const DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    /// The enumeration this state belongs to.
    pub task: String,
    pub parts: usize,
    /// Subproblems `0..done` are finished.
    pub done: usize,
    /// Canonical colorings found so far, one hex digit per vertex, with
    /// stabilizer orders.
    pub classes: BTreeMap<String, u128>,
}

fn task(n: Dimension, s: &QuotientMatrix) -> String {
    format!("perfect-colorings n={n} matrix={s} depth={DEPTH}")
}

fn encode(colors: &[u16]) -> String {
    colors.iter().map(|&c| char::from_digit(c as u32, 16).expect("at most 16 colors")).collect()
}

fn decode(n: Dimension, s: &str) -> Result<Coloring> {
    let colors = s
        .chars()
        .map(|ch| ch.to_digit(16).map(|d| d as u16).ok_or(Error::HexChar(ch)))
        .collect::<Result<Vec<_>>>()?;
    Coloring::new(n, colors)
}

/// As [`enumerate_with_orders`](super::enumerate_with_orders), continuing from
/// `resume` if given and calling `save` after every batch. An error from
/// `save` stops the search and is returned.
pub fn enumerate_resumable(
    n: Dimension,
    s: &QuotientMatrix,
    resume: Option<Checkpoint>,
    save: &mut dyn FnMut(&Checkpoint) -> Result<()>,
) -> Result<Vec<(Coloring, u128)>> {
    let Some(p) = (if s.k() == 1 { None } else { Problem::new(n, s)? }) else {
        return enumerate_with_orders(n, s);
    };
    let parts = csp::subproblems(&p, DEPTH);
    let mut state = match resume {
        Some(c) => {
            if c.format != CHECKPOINT_FORMAT || c.version != CHECKPOINT_VERSION {
                return Err(Error::Parse(format!("unsupported checkpoint {} v{}", c.format, c.version)));
            }
            if c.task != task(n, s) || c.parts != parts.len() || c.done > c.parts {
                return Err(Error::InvalidArgument(format!("checkpoint is for {:?}, not {:?}", c.task, task(n, s))));
            }
            c
        }
        None => Checkpoint {
            format: CHECKPOINT_FORMAT.into(),
            version: CHECKPOINT_VERSION,
            task: task(n, s),
            parts: parts.len(),
            done: 0,
            classes: BTreeMap::new(),
        },
    };
    let batch = 2 * rayon::current_num_threads().max(1);
    while state.done < parts.len() {
        let end = (state.done + batch).min(parts.len());
        let found = parts[state.done..end].par_iter().map(classes_in).collect::<Result<Vec<_>>>()?;
        for m in found {
            state.classes.extend(m.into_iter().map(|(c, a)| (encode(&c), a)));
        }
        state.done = end;
        save(&state)?;
    }
    state.classes.iter().map(|(c, &a)| Ok((decode(n, c)?, a))).collect()
}
