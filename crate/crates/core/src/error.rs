use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{operation} requires an isotropic kernel, got {kernel}")]
    NotIsotropic {
        operation: &'static str,
        kernel: &'static str,
    },

    #[error("{operation} requires an isotropic, decreasing kernel, got {kernel}")]
    NotDecreasing {
        operation: &'static str,
        kernel: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("training set has no outputs; posterior mean needs y values")]
    MissingOutputs,

    #[error("data covariance matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("information radius {radius} exceeds k(x,x)/L_k = {limit}")]
    RadiusTooLarge { radius: f64, limit: f64 },

    #[error("ball count must be at least 1 for the isotropic bound; use k(x,x) for an empty ball")]
    EmptyBall,

    #[error(
        "segment plan (N={n_samples}, n={n}) is invalid; fall back to the one-point curve bound"
    )]
    InvalidSegmentPlan { n_samples: usize, n: usize },

    #[error("index n={n} out of range for N={n_samples} (need {min} <= n <= {max})")]
    OrderOutOfRange {
        n_samples: usize,
        n: usize,
        min: usize,
        max: usize,
    },

    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("moment order k={0} is not supported (1 <= k <= 8)")]
    UnsupportedMomentOrder(u32),

    #[error("density does not integrate to one (mass {0})")]
    DensityNotNormalized(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

pub(crate) fn nonnegative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be nonnegative and finite",
        })
    }
}
