//! Majorization-based entropic uncertainty bounds for a pair of orthonormal
//! bases related by a unitary `U`.
//!
//! The central objects are the submatrix coefficients `s_k` of `U`, the
//! vector `Q` built from them that majorizes every product `p ⊗ q` of outcome
//! distributions, and the ladder of Rényi bounds `B_α^k = H_α(Q^(k))`, which
//! are compared against the Deutsch and Maassen–Uffink bounds.
//!
//! ```
//! use majorant::{bound_ladder, fourier_matrix, RenyiOrder};
//!
//! let report = bound_ladder(&fourier_matrix(3), RenyiOrder::SHANNON).unwrap();
//! assert!((report.b_mu - 3f64.ln()).abs() < 1e-12);
//! assert!(report.b_deutsch <= report.b_mu);
//! ```
//!
//! All logarithms are natural.

pub mod bounds;
pub mod entropy;
pub mod equivalence;
pub mod error;
pub mod exec;
pub mod extremal;
pub mod families;
pub mod linalg;
pub mod matrix;
pub mod montecarlo;
pub mod rng;
pub mod submatrices;
pub mod tolerance;
pub mod verify;

pub use bounds::{
    bound_deutsch, bound_ladder, bound_mu, classical_bound, classical_mixture_entropy, eur_lhs, majorizing_vector,
    outcome_distributions, slomczynski_check, BoundReport, MajorizingVector, StochasticMatrix,
};
pub use entropy::{
    majorizes, renyi_entropy, schur_concavity_witness, shannon_entropy, tensor_product, ProbabilityVector, RenyiOrder,
};
pub use equivalence::{apply_transform, canonical_rotation_angle, dephase, EquivalenceTransform, Permutation};
pub use error::{Error, Result};
pub use exec::Execution;
pub use extremal::{lemma_max_value, maximizing_state, SubspacePair};
pub use families::{
    birkhoff_matrix, cross_section_scan, cyclic_shift, family_sweep, fourier_matrix, permutation_power,
    rotation_matrix, sweep_parameters, unistochastic_check_3, unistochastic_lift_3, BirkhoffPoint, Family, ScanRecord,
    SweepRow,
};
pub use matrix::{ComplexMatrix, ComplexScalar, StateVector};
pub use montecarlo::{beat_rate, majorization_fuzz, BeatRateResult, FuzzReport};
pub use rng::RngSeed;
pub use submatrices::{s_coefficients, SubmatrixCoefficients};
