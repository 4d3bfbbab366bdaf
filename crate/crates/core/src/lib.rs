//! Posterior-variance bounds for Gaussian-process regression.
//!
//! The crate evaluates exact GP posterior variances and compares them with
//! cheap upper bounds that only look at how many training points lie near a
//! test point. It also checks when those bounds shrink to zero, and computes
//! average learning-curve bounds for one-dimensional uniform inputs.
//!
//! ```
//! use postvar::{Kernel, TrainingSet, posterior_variance, isotropic_bound, ball_count};
//!
//! let k = Kernel::squared_exponential(1.0, 1.0).unwrap();
//! let train = TrainingSet::from_scalars(&[0.0, 0.05, 0.1], 0.1).unwrap();
//! let exact = posterior_variance(&train, &k, &[0.0]).unwrap();
//! let ball = ball_count(&train, &[0.0], 0.1);
//! let bound = isotropic_bound(&k, ball.count, 0.1, 0.1).unwrap();
//! assert!(exact <= bound);
//! ```

pub mod bounds;
pub mod cholesky;
pub mod convergence;
pub mod error;
pub mod experiment;
pub mod gp;
pub mod kernels;
pub mod learning_curve;
pub mod quadrature;
pub mod seed;

pub use bounds::{
    ball_count, bound_report, isotropic_bound, isotropic_bound_or_prior, lipschitz_bound,
    nearest_neighbours, one_point_bound, two_point_bound, BallCount, BoundForm, BoundReport,
    LipschitzBound, RadiusSchedule,
};
pub use convergence::{
    ball_probability, bernoulli_central_moment, binomial_moment_bound, check_mass_condition,
    check_schedule_exponent, moment_bound_coefficients, ConvergenceVerdict, Density,
};
pub use error::{Error, Result};
pub use gp::{posterior_mean, posterior_variance, Posterior, TrainingSet};
pub use kernels::{Domain, Kernel, KernelKind, LipschitzEstimate, LipschitzMethod};
pub use learning_curve::{
    e1_bound, e2_bound, e_rho_bound, greedy_select_n, i_n_integral, learning_curve_table,
    monte_carlo_curve, segment_plan, spacing_density, CurveOptions, LearningCurveTable,
    SegmentPlan, SpanDensity,
};
