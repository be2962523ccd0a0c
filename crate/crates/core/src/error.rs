//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration violated a documented precondition.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An eigenvalue computation did not converge within the iteration cap.
    #[error("eigensolver failed to converge (index {index}, after {iterations} iterations)")]
    EigenNoConvergence { index: usize, iterations: usize },

    /// Doubling the basis did not stabilize the requested eigenvalues.
    #[error("basis-size doubling did not converge: residual {residual:.3e} > {tolerance:.3e} at n_basis = {n_basis}")]
    BasisNotConverged {
        n_basis: usize,
        residual: f64,
        tolerance: f64,
    },

    /// Non-finite numbers appeared during time propagation.
    #[error("propagation diverged at step {step} (tau = {tau:.6}): non-finite state entries")]
    IntegrationDiverged { step: usize, tau: f64 },

    /// The assembled one-cycle matrix is not unitary to the requested tolerance.
    #[error("monodromy unitarity defect {defect:.3e} exceeds tolerance {tolerance:.3e}; increase steps_per_period")]
    UnitarityExceeded { defect: f64, tolerance: f64 },

    /// Root bracketing failed: the requested target is not attainable.
    #[error("target {target:.6} outside attainable range [{lo:.6}, {hi:.6}]")]
    TargetOutOfRange { target: f64, lo: f64, hi: f64 },

    /// Two continuation candidates were indistinguishable by overlap.
    #[error("ambiguous state continuation at sweep index {sweep_index} (state {state}): top overlaps differ by {difference:.3e}")]
    AmbiguousContinuation {
        sweep_index: usize,
        state: usize,
        difference: f64,
    },

    /// An anticrossing scan found no close approach between the requested labels.
    #[error("labels never approach within the scan window (minimal gap {min_gap:.3e})")]
    NoCloseApproach { min_gap: f64 },

    /// A label pair was not present in the sweep.
    #[error("label ({n}, {m}) not found in the labeled sweep")]
    LabelNotFound { n: usize, m: i64 },

    /// The symmetry-reduced propagation disagreed with direct propagation.
    #[error("symmetry-reduced monodromy deviates from direct propagation by {deviation:.3e} (tolerance {tolerance:.3e})")]
    SymmetryValidationFailed { deviation: f64, tolerance: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
