//! Perfect colorings (equitable partitions) of the Boolean hypercube `Q_n`.
//!
//! Vertices are integers in `[0, 2^n)` with coordinate `x_j` at bit `j`.

pub mod canonical;
pub mod classify;
pub mod constructions;
pub mod error;
pub mod hypercube;
pub mod refinement;
pub mod search;
pub mod spectral;

pub use error::{Error, Result};
