use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative evaluation stopped before reaching its tolerance.
    #[error("{what} did not converge (achieved relative tolerance {achieved:.3e})")]
    NoConvergence { what: String, achieved: f64 },

    /// Adaptive quadrature ran out of function evaluations.
    #[error("quadrature budget exhausted after {evaluations} evaluations: estimate {estimate:.6e} ± {error:.3e}")]
    BudgetExhausted {
        estimate: f64,
        error: f64,
        evaluations: usize,
    },

    /// A vanishing denominator, e.g. a surface-mode pole.
    #[error("singularity: {0}")]
    Singular(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// An input state or series failed validation.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Integrator settings inconsistent with the parameters.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// A spectral measurement could not be made.
    #[error("measurement failed: {0}")]
    Measurement(String),

    /// A least-squares fit could not be made.
    #[error("fit failed: {0}")]
    Fit(String),
}
