//! Upper bounds on the posterior variance that only need local information:
//! the number of training inputs within an information radius `ρ` of the test
//! point, or the distances to its one or two nearest neighbours.

use crate::error::{nonnegative, positive, Error, Result};
use crate::gp::{Posterior, TrainingSet};
use crate::kernels::{distance, Kernel};

/// Number of training inputs in the closed ball `{x' : ‖x' − x‖ ≤ ρ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallCount {
    pub center: Vec<f64>,
    pub radius: f64,
    pub count: usize,
}

pub fn ball_count(train: &TrainingSet, x: &[f64], radius: f64) -> BallCount {
    let count = train.points().filter(|p| distance(p, x) <= radius).count();
    BallCount {
        center: x.to_vec(),
        radius,
        count,
    }
}

/// Which numerator to use for the Lipschitz-kernel bound.
///
/// `Standard` is `k σ_n² + |𝔹| (4 k L ρ − L² ρ²)`; `KernelScaled` multiplies the
/// `L² ρ²` term by `k(x, x)` as well.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundForm {
    #[default]
    Standard,
    KernelScaled,
}

/// The bound for Lipschitz-continuous kernels at one test point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzBound {
    pub prior_variance: f64,
    pub lipschitz: f64,
    pub noise_variance: f64,
    pub form: BoundForm,
}

impl LipschitzBound {
    pub fn new(kernel: &Kernel, x: &[f64], lipschitz: f64, noise_variance: f64) -> Result<Self> {
        Ok(LipschitzBound {
            prior_variance: kernel.prior_variance(x),
            lipschitz: nonnegative("lipschitz", lipschitz)?,
            noise_variance: positive("noise_variance", noise_variance)?,
            form: BoundForm::Standard,
        })
    }

    pub fn with_form(mut self, form: BoundForm) -> Self {
        self.form = form;
        self
    }

    /// Largest admissible radius `k(x, x) / L_k`.
    pub fn radius_limit(&self) -> f64 {
        if self.lipschitz == 0.0 {
            f64::INFINITY
        } else {
            self.prior_variance / self.lipschitz
        }
    }

    pub fn evaluate(&self, ball_count: usize, radius: f64) -> Result<f64> {
        nonnegative("radius", radius)?;
        let limit = self.radius_limit();
        if radius > limit {
            return Err(Error::RadiusTooLarge { radius, limit });
        }
        let k = self.prior_variance;
        let lr = self.lipschitz * radius;
        let b = ball_count as f64;
        let s2 = self.noise_variance;
        let spread = match self.form {
            BoundForm::Standard => 4.0 * k * lr - lr * lr,
            BoundForm::KernelScaled => (4.0 * lr - lr * lr) * k,
        };
        Ok((k * s2 + b * spread) / (b * (k + 2.0 * lr) + s2))
    }
}

/// Standard-form Lipschitz bound; see [`LipschitzBound`].
pub fn lipschitz_bound(
    kernel: &Kernel,
    lipschitz: f64,
    x: &[f64],
    ball_count: usize,
    radius: f64,
    noise_variance: f64,
) -> Result<f64> {
    LipschitzBound::new(kernel, x, lipschitz, noise_variance)?.evaluate(ball_count, radius)
}

/// `k(0) − k²(ρ) / (k(0) + σ_n²/|𝔹|)` for isotropic, decreasing kernels.
pub fn isotropic_bound(
    kernel: &Kernel,
    ball_count: usize,
    radius: f64,
    noise_variance: f64,
) -> Result<f64> {
    if !kernel.is_decreasing() {
        return Err(Error::NotDecreasing {
            operation: "isotropic_bound",
            kernel: kernel.name(),
        });
    }
    nonnegative("radius", radius)?;
    positive("noise_variance", noise_variance)?;
    if ball_count == 0 {
        return Err(Error::EmptyBall);
    }
    let k0 = kernel.iso_unchecked(0.0);
    let kr = kernel.iso_unchecked(radius);
    Ok(k0 - kr * kr / (k0 + noise_variance / ball_count as f64))
}

/// As [`isotropic_bound`], but an empty ball yields the prior `k(0)`.
pub fn isotropic_bound_or_prior(
    kernel: &Kernel,
    ball_count: usize,
    radius: f64,
    noise_variance: f64,
) -> Result<f64> {
    match isotropic_bound(kernel, ball_count, radius, noise_variance) {
        Err(Error::EmptyBall) => kernel.k0(),
        other => other,
    }
}

/// Exact posterior variance with a single training input at distance `τ`.
pub fn one_point_bound(kernel: &Kernel, tau: f64, noise_variance: f64) -> Result<f64> {
    let k0 = kernel.k0()?;
    nonnegative("tau", tau)?;
    positive("noise_variance", noise_variance)?;
    let kt = kernel.iso_unchecked(tau);
    Ok(k0 - kt * kt / (k0 + noise_variance))
}

/// Exact posterior variance with two training inputs at distances `τ₁`, `τ₂`
/// from the test point and `δ` from each other, by explicit inversion of the
/// 2×2 data covariance.
pub fn two_point_bound(
    kernel: &Kernel,
    tau1: f64,
    tau2: f64,
    delta: f64,
    noise_variance: f64,
) -> Result<f64> {
    let k0 = kernel.k0()?;
    nonnegative("tau1", tau1)?;
    nonnegative("tau2", tau2)?;
    nonnegative("delta", delta)?;
    positive("noise_variance", noise_variance)?;
    let a = k0 + noise_variance;
    let kd = kernel.iso_unchecked(delta);
    let k1 = kernel.iso_unchecked(tau1);
    let k2 = kernel.iso_unchecked(tau2);
    let det = a * a - kd * kd;
    Ok(k0 - (a * (k1 * k1 + k2 * k2) - 2.0 * kd * k1 * k2) / det)
}

/// Shrinking information radius `ρ(N) = c N^(−α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusSchedule {
    coefficient: f64,
    exponent: f64,
}

impl RadiusSchedule {
    /// `exponent` may be zero (fixed radius) or exceed one; only `(0, 1]`
    /// gives a vanishing radius with a growing ball population in d = 1.
    pub fn new(coefficient: f64, exponent: f64) -> Result<Self> {
        Ok(RadiusSchedule {
            coefficient: positive("schedule coefficient", coefficient)?,
            exponent: nonnegative("schedule exponent", exponent)?,
        })
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// Unclipped `c N^(−α)`; `N = 0` is treated as `N = 1`.
    pub fn radius(&self, n: usize) -> f64 {
        self.coefficient * (n.max(1) as f64).powf(-self.exponent)
    }

    /// `min(c N^(−α), k(x,x)/L_k)`.
    pub fn radius_at(&self, n: usize, kernel: &Kernel, x: &[f64], lipschitz: f64) -> f64 {
        let limit = if lipschitz > 0.0 {
            kernel.prior_variance(x) / lipschitz
        } else {
            f64::INFINITY
        };
        self.radius(n).min(limit)
    }
}

/// Distances from `x` to its two nearest training inputs and between them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbours {
    pub nearest: f64,
    pub second: Option<(f64, f64)>,
}

pub fn nearest_neighbours(train: &TrainingSet, x: &[f64]) -> Option<Neighbours> {
    let mut best: Option<(f64, usize)> = None;
    let mut next: Option<(f64, usize)> = None;
    for (i, p) in train.points().enumerate() {
        let d = distance(p, x);
        if best.is_none_or(|(b, _)| d < b) {
            next = best;
            best = Some((d, i));
        } else if next.is_none_or(|(s, _)| d < s) {
            next = Some((d, i));
        }
    }
    let (nearest, i) = best?;
    Some(Neighbours {
        nearest,
        second: next.map(|(d, j)| (d, distance(train.point(i), train.point(j)))),
    })
}

/// Exact variance and every applicable bound at one test point.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub exact: f64,
    pub lipschitz_bound: f64,
    pub isotropic_bound: Option<f64>,
    pub one_point_bound: Option<f64>,
    pub two_point_bound: Option<f64>,
    pub radius: f64,
    pub ball_count: usize,
    pub lipschitz: f64,
}

pub fn bound_report(
    kernel: &Kernel,
    train: &TrainingSet,
    x: &[f64],
    lipschitz: f64,
    schedule: &RadiusSchedule,
    form: BoundForm,
) -> Result<BoundReport> {
    let noise = train.noise_variance();
    let exact = if train.is_empty() {
        kernel.prior_variance(x)
    } else {
        Posterior::new(kernel, train)?.variance(x)?
    };
    let radius = schedule.radius_at(train.len(), kernel, x, lipschitz);
    let count = ball_count(train, x, radius).count;
    let lip = LipschitzBound::new(kernel, x, lipschitz, noise)?
        .with_form(form)
        .evaluate(count, radius)?;
    let iso = if kernel.is_decreasing() {
        Some(isotropic_bound_or_prior(kernel, count, radius, noise)?)
    } else {
        None
    };
    let (one, two) = match (kernel.is_isotropic(), nearest_neighbours(train, x)) {
        (true, Some(nb)) => {
            let one = one_point_bound(kernel, nb.nearest, noise)?;
            let two = match nb.second {
                Some((tau2, delta)) => {
                    Some(two_point_bound(kernel, nb.nearest, tau2, delta, noise)?)
                }
                None => None,
            };
            (Some(one), two)
        }
        _ => (None, None),
    };
    Ok(BoundReport {
        n: train.len(),
        exact,
        lipschitz_bound: lip,
        isotropic_bound: iso,
        one_point_bound: one,
        two_point_bound: two,
        radius,
        ball_count: count,
        lipschitz,
    })
}
