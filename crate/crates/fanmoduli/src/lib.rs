//! Exact combinatorial moduli of simplicial fans: admissibility charts for
//! calibrations, finite symmetry actions, Grassmannian compactifications and
//! boundary degeneration strata. All arithmetic is exact rational; there are
//! no tolerances anywhere.

pub mod cli;
pub mod comb;
pub mod cone;
pub mod degeneration;
pub mod error;
pub mod grassmann;
pub mod io;
pub mod matrix;
pub mod moduli;
pub mod rat;
pub mod render;
pub mod symmetry;

pub use error::{Error, Result};
