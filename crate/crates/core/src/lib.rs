//! Angular integrals over O(n) and Sp(2m) and their resolvent correlators.
//!
//! Closed forms (determinants, the recursion over tetrad classes and matrix
//! determinants) live next to independent oracles: Haar Monte Carlo, Gaussian
//! triangular sampling, exact Wick pairings and Gauss-Hermite quadrature checks in tests.

pub mod cli;
pub mod closed_form;
pub mod combinatorics;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod oracles;
pub mod recursion;

pub use error::{Error, Result};
