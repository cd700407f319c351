//! Numerical tolerances shared by every module and by the test suites.

/// Default max-norm bound on `M M† - I` for a matrix to count as unitary.
pub const UNITARITY: f64 = 1e-10;

/// Relative accuracy targeted by the Hermitian eigensolver.
pub const EIGEN_RELATIVE: f64 = 1e-12;

/// Allowed deviation of a probability vector's sum from one.
pub const NORMALIZATION: f64 = 1e-10;

/// Allowed deviation of a state vector's squared norm from one.
pub const STATE_NORM: f64 = 1e-12;

/// Slack used by property predicates (majorization, Schur concavity, classical inequalities).
pub const PROPERTY: f64 = 1e-10;

/// Orders of Rényi entropy closer than this to one use the Shannon branch.
pub const SHANNON_WINDOW: f64 = 1e-9;

/// Components below this are treated as exact zeros for support counting.
pub const ZERO_COMPONENT: f64 = 1e-300;

/// Negative components of a majorizing vector smaller than this in magnitude are rounding noise.
pub const CLAMP: f64 = 1e-12;

/// Slack in the chain-link triangle inequality.
pub const CHAIN_LINK: f64 = 1e-12;

/// Modulus tolerance on unimodular phases.
pub const PHASE: f64 = 1e-12;

/// Largest dimension accepted by the exhaustive submatrix enumeration without an override.
pub const MAX_ENUMERATION_DIM: usize = 12;
