//! The tetrad-basis recursion: `M̄`, initial vectors, Mdet and the correlator formulas.

mod correlator;
mod initial;
mod matrix;
mod mdet;
mod points;

use num_complex::Complex64;
use serde::Serialize;

pub use correlator::{correlator_vector, correlator_vector_rescaled, correlator_vector_weyl_sum, triangular_expectation};
pub use initial::{initial_condition, Center};
pub use matrix::{recursion_matrix_bar, recursion_matrix_unitary, RecursionMatrix, UNITARY_MAX_POINTS};
pub use mdet::{mdet, mdet_apply, MatrixGrid, COMMUTE_TOL};
pub use points::{SpectralPoints, POLE_TOL};

use crate::linalg::CVec;

/// Complex values over the `(2R)!` basis classes, in basis order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisVector {
    rank: usize,
    #[serde(skip)]
    entries: CVec,
}

impl BasisVector {
    pub fn new(rank: usize, entries: Vec<Complex64>) -> BasisVector {
        BasisVector { rank, entries: CVec::from_vec(entries) }
    }

    pub fn from_vector(rank: usize, entries: CVec) -> BasisVector {
        BasisVector { rank, entries }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &[Complex64] {
        self.entries.as_slice()
    }

    pub fn vector(&self) -> &CVec {
        &self.entries
    }

    pub fn into_vector(self) -> CVec {
        self.entries
    }
}
