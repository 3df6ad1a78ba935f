//! Independent checks for the closed forms: direct basis evaluation, Haar and triangular
//! Monte Carlo, and exact Wick pairings.

pub mod basis;
pub mod group_mc;
pub mod haar;
pub mod stats;
pub mod triangular;
pub mod wick;

pub use basis::{basis_eval, correlator_eval, trace_form, SignedResolvents};
pub use group_mc::{mc_group_correlator, mc_group_correlators, mc_group_partition, mc_group_partition_shifted};
pub use haar::{haar_orthogonal, haar_symplectic, quaternion_reality_defect};
pub use stats::{McConfig, McEstimate, DEFAULT_SHARDS};
pub use triangular::{mc_triangular_expectation, sample_triangular, TriangularSample};
pub use wick::{wick_enumerate, Symbol, WICK_MAX};
