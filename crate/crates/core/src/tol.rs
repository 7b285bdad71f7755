//! Numerical tolerances used across the crate.
//!
//! Structural invariants of validated objects (Hermiticity, trace, POVM
//! completeness, distribution normalization) are held to [`STRUCTURAL`].
//! Iterative routines repair their iterates to [`FEASIBILITY`] and the
//! see-saw accepts a converged strategy only if it re-validates at
//! [`OBLIVIOUSNESS_LOOSE`]. Exact arithmetic on priors and payoffs is
//! compared at [`EXACT_ARITHMETIC`], which covers accumulation error of
//! short sums of doubles.

/// Hermiticity / trace / completeness slack on validated matrices.
pub const STRUCTURAL: f64 = 1e-10;

/// Eigenvalues above `-STRUCTURAL` count as nonnegative.
pub const PSD_SLACK: f64 = 1e-10;

/// A matrix handed to the eigensolver may deviate from Hermitian by at most
/// this much; it is symmetrized before decomposition.
pub const HERMITICITY_GATE: f64 = 1e-8;

/// Default tolerance for obliviousness checks on distributions and states.
pub const OBLIVIOUSNESS: f64 = 1e-9;

/// Looser re-validation tolerance applied to optimizer output.
pub const OBLIVIOUSNESS_LOOSE: f64 = 1e-7;

/// Balance comparison of per-cell encoding weights.
pub const BALANCE: f64 = 1e-12;

/// Comparisons that hold to accumulation error of short exact sums.
pub const EXACT_ARITHMETIC: f64 = 1e-12;

/// Constraint residual targeted by feasibility projections.
pub const FEASIBILITY: f64 = 1e-10;

/// Steered remote states must have uniform outcome weights within this.
pub const MARGINAL_UNIFORMITY: f64 = 1e-8;

/// Agreement between a correlation functional and its bridged game value.
pub const BRIDGE_EQUALITY: f64 = 1e-10;
