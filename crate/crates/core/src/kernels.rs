//! Covariance function catalog.
//!
//! Every kernel carries a signal variance `σ_f²`; stationary kinds also carry a
//! lengthscale `l`. Isotropic kinds depend on their arguments only through the
//! Euclidean distance `τ = ‖x − x'‖` and can be evaluated through
//! [`Kernel::eval_iso`].

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{positive, Error, Result};

/// Safety factor applied to grid-estimated Lipschitz constants.
pub const LIPSCHITZ_SAFETY: f64 = 1.05;
const LIPSCHITZ_GRID: usize = 10_000;
const LIPSCHITZ_Z_NODES: usize = 101;

/// Kernel family and its family-specific parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    SquaredExponential,
    /// Matérn with ν = 1/2 (exponential kernel).
    Matern12,
    RationalQuadratic {
        alpha: f64,
    },
    /// `exp(−2 sin²(πτ/p)/l²)` of the Euclidean distance; positive
    /// semi-definite for scalar inputs only.
    Periodic {
        period: f64,
    },
    /// `σ_f² (x·x' + offset)^degree`.
    Polynomial {
        degree: u32,
        offset: f64,
    },
    /// Arcsine kernel of an infinitely wide single-layer network with
    /// augmented input `(1, x)` and prior weight variances
    /// `diag(bias_variance, weight_variance, ...)`.
    NeuralNetwork {
        bias_variance: f64,
        weight_variance: f64,
    },
}

impl KernelKind {
    pub const fn rational_quadratic() -> Self {
        KernelKind::RationalQuadratic { alpha: 1.0 }
    }

    pub const fn periodic() -> Self {
        KernelKind::Periodic { period: 1.0 }
    }

    pub const fn polynomial() -> Self {
        KernelKind::Polynomial {
            degree: 3,
            offset: 1.0,
        }
    }

    pub const fn neural_network() -> Self {
        KernelKind::NeuralNetwork {
            bias_variance: 1.0,
            weight_variance: 1.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelKind::SquaredExponential => "squared-exponential",
            KernelKind::Matern12 => "matern-1/2",
            KernelKind::RationalQuadratic { .. } => "rational-quadratic",
            KernelKind::Periodic { .. } => "periodic",
            KernelKind::Polynomial { .. } => "polynomial",
            KernelKind::NeuralNetwork { .. } => "neural-network",
        }
    }

    pub fn is_isotropic(&self) -> bool {
        !matches!(
            self,
            KernelKind::Polynomial { .. } | KernelKind::NeuralNetwork { .. }
        )
    }

    pub fn is_decreasing(&self) -> bool {
        matches!(
            self,
            KernelKind::SquaredExponential
                | KernelKind::Matern12
                | KernelKind::RationalQuadratic { .. }
        )
    }
}

/// An axis-aligned box `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Domain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        for (&lo, &hi) in lower.iter().zip(&upper) {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::InvalidParameter {
                    name: "domain",
                    value: hi - lo,
                    reason: "bounds must be finite with lower <= upper",
                });
            }
        }
        Ok(Domain { lower, upper })
    }

    pub fn interval(lower: f64, upper: f64) -> Result<Self> {
        Domain::new(vec![lower], vec![upper])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn diameter(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| (hi - lo) * (hi - lo))
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LipschitzMethod {
    Analytic,
    GridEstimate,
}

/// A per-argument Lipschitz constant: `|k(x', z) − k(x, z)| ≤ L_k ‖x' − x‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzEstimate {
    pub value: f64,
    pub method: LipschitzMethod,
    pub safety_factor: f64,
}

/// An immutable, validated covariance function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    kind: KernelKind,
    lengthscale: f64,
    signal_variance: f64,
}

impl Kernel {
    pub fn new(kind: KernelKind, lengthscale: f64, signal_variance: f64) -> Result<Self> {
        positive("signal_variance", signal_variance)?;
        match kind {
            KernelKind::SquaredExponential | KernelKind::Matern12 => {
                positive("lengthscale", lengthscale)?;
            }
            KernelKind::RationalQuadratic { alpha } => {
                positive("lengthscale", lengthscale)?;
                positive("alpha", alpha)?;
            }
            KernelKind::Periodic { period } => {
                positive("lengthscale", lengthscale)?;
                positive("period", period)?;
            }
            KernelKind::Polynomial { degree, offset } => {
                positive("offset", offset)?;
                if degree == 0 {
                    return Err(Error::InvalidParameter {
                        name: "degree",
                        value: 0.0,
                        reason: "must be at least 1",
                    });
                }
            }
            KernelKind::NeuralNetwork {
                bias_variance,
                weight_variance,
            } => {
                positive("bias_variance", bias_variance)?;
                positive("weight_variance", weight_variance)?;
            }
        }
        Ok(Kernel {
            kind,
            lengthscale,
            signal_variance,
        })
    }

    pub fn squared_exponential(lengthscale: f64, signal_variance: f64) -> Result<Self> {
        Kernel::new(KernelKind::SquaredExponential, lengthscale, signal_variance)
    }

    pub fn matern12(lengthscale: f64, signal_variance: f64) -> Result<Self> {
        Kernel::new(KernelKind::Matern12, lengthscale, signal_variance)
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn lengthscale(&self) -> f64 {
        self.lengthscale
    }

    pub fn signal_variance(&self) -> f64 {
        self.signal_variance
    }

    pub fn is_isotropic(&self) -> bool {
        self.kind.is_isotropic()
    }

    pub fn is_decreasing(&self) -> bool {
        self.kind.is_decreasing()
    }

    /// `k(x, x')`. Both points must have the same dimension.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), y.len());
        let sf2 = self.signal_variance;
        match self.kind {
            KernelKind::Polynomial { degree, offset } => {
                sf2 * (dot(x, y) + offset).powi(degree as i32)
            }
            KernelKind::NeuralNetwork {
                bias_variance,
                weight_variance,
            } => {
                let cross = bias_variance + weight_variance * dot(x, y);
                let xx = 1.0 + 2.0 * (bias_variance + weight_variance * dot(x, x));
                let yy = 1.0 + 2.0 * (bias_variance + weight_variance * dot(y, y));
                sf2 * 2.0 / PI * (2.0 * cross / (xx * yy).sqrt()).asin()
            }
            _ => self.iso_unchecked(distance(x, y)),
        }
    }

    /// Scalar convenience for one-dimensional inputs.
    pub fn eval_scalar(&self, x: f64, y: f64) -> f64 {
        self.eval(&[x], &[y])
    }

    /// The prior variance `k(x, x)`.
    pub fn prior_variance(&self, x: &[f64]) -> f64 {
        self.eval(x, x)
    }

    /// Isotropic form `k(τ)`; rejected for non-isotropic kinds.
    pub fn eval_iso(&self, tau: f64) -> Result<f64> {
        if !self.is_isotropic() {
            return Err(Error::NotIsotropic {
                operation: "eval_iso",
                kernel: self.name(),
            });
        }
        Ok(self.iso_unchecked(tau))
    }

    /// `k(0)` for isotropic kernels.
    pub fn k0(&self) -> Result<f64> {
        self.eval_iso(0.0)
    }

    pub(crate) fn iso_unchecked(&self, tau: f64) -> f64 {
        let sf2 = self.signal_variance;
        let l = self.lengthscale;
        match self.kind {
            KernelKind::SquaredExponential => sf2 * (-tau * tau / (2.0 * l * l)).exp(),
            KernelKind::Matern12 => sf2 * (-tau / l).exp(),
            KernelKind::RationalQuadratic { alpha } => {
                sf2 * (1.0 + tau * tau / (2.0 * alpha * l * l)).powf(-alpha)
            }
            KernelKind::Periodic { period } => {
                let s = (PI * tau / period).sin();
                sf2 * (-2.0 * s * s / (l * l)).exp()
            }
            KernelKind::Polynomial { .. } | KernelKind::NeuralNetwork { .. } => {
                unreachable!("non-isotropic kernel evaluated by distance")
            }
        }
    }

    /// Per-argument Lipschitz constant over `domain`.
    ///
    /// Closed forms are used for the squared-exponential, Matérn-1/2 and
    /// rational-quadratic kernels. The remaining kinds take the largest
    /// difference quotient on a fine grid, inflated by [`LIPSCHITZ_SAFETY`].
    pub fn lipschitz_constant(&self, domain: &Domain) -> LipschitzEstimate {
        let sf2 = self.signal_variance;
        let l = self.lengthscale;
        let analytic = |value| LipschitzEstimate {
            value,
            method: LipschitzMethod::Analytic,
            safety_factor: 1.0,
        };
        match self.kind {
            KernelKind::SquaredExponential => return analytic(sf2 * (-0.5f64).exp() / l),
            // one-sided slope at τ → 0⁺ dominates
            KernelKind::Matern12 => return analytic(sf2 / l),
            KernelKind::RationalQuadratic { alpha } => {
                let tau2 = alpha * l * l / (alpha + 0.5);
                let slope = sf2 * tau2.sqrt() / (l * l)
                    * (1.0 + tau2 / (2.0 * alpha * l * l)).powf(-alpha - 1.0);
                return analytic(slope);
            }
            _ => {}
        }
        if domain.diameter() == 0.0 {
            return analytic(0.0);
        }
        let raw = if self.is_isotropic() {
            self.iso_grid_slope(domain.diameter())
        } else if domain.dim() == 1 {
            self.grid_slope_1d(domain.lower()[0], domain.upper()[0])
        } else {
            self.sampled_slope(domain)
        };
        LipschitzEstimate {
            value: raw * LIPSCHITZ_SAFETY,
            method: LipschitzMethod::GridEstimate,
            safety_factor: LIPSCHITZ_SAFETY,
        }
    }

    fn iso_grid_slope(&self, diameter: f64) -> f64 {
        let h = diameter / LIPSCHITZ_GRID as f64;
        let mut prev = self.iso_unchecked(0.0);
        let mut best = 0.0f64;
        for i in 1..=LIPSCHITZ_GRID {
            let cur = self.iso_unchecked(i as f64 * h);
            best = best.max((cur - prev).abs() / h);
            prev = cur;
        }
        best
    }

    fn grid_slope_1d(&self, lo: f64, hi: f64) -> f64 {
        let h = (hi - lo) / LIPSCHITZ_GRID as f64;
        let mut best = 0.0f64;
        for j in 0..LIPSCHITZ_Z_NODES {
            let z = lo + (hi - lo) * j as f64 / (LIPSCHITZ_Z_NODES - 1) as f64;
            let mut prev = self.eval_scalar(lo, z);
            for i in 1..=LIPSCHITZ_GRID {
                let x = if i == LIPSCHITZ_GRID {
                    hi
                } else {
                    lo + i as f64 * h
                };
                let cur = self.eval_scalar(x, z);
                best = best.max((cur - prev).abs() / h);
                prev = cur;
            }
        }
        best
    }

    fn sampled_slope(&self, domain: &Domain) -> f64 {
        let d = domain.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(0x4c49_5053);
        let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            domain
                .lower()
                .iter()
                .zip(domain.upper())
                .map(|(lo, hi)| lo + (hi - lo) * rng.random::<f64>())
                .collect()
        };
        let mut best = 0.0f64;
        for _ in 0..LIPSCHITZ_GRID {
            let x = draw(&mut rng);
            let z = draw(&mut rng);
            let base = self.eval(&x, &z);
            let mut grad2 = 0.0;
            for axis in 0..d {
                let width = domain.upper()[axis] - domain.lower()[axis];
                if width == 0.0 {
                    continue;
                }
                let h = 1e-4 * width;
                let mut xs = x.clone();
                xs[axis] = if xs[axis] + h <= domain.upper()[axis] {
                    xs[axis] + h
                } else {
                    xs[axis] - h
                };
                let q = (self.eval(&xs, &z) - base) / h;
                grad2 += q * q;
            }
            best = best.max(grad2.sqrt());
        }
        best
    }
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> Vec<Kernel> {
        vec![
            Kernel::squared_exponential(1.0, 1.0).unwrap(),
            Kernel::matern12(1.0, 1.0).unwrap(),
            Kernel::new(KernelKind::rational_quadratic(), 1.0, 1.0).unwrap(),
            Kernel::new(KernelKind::periodic(), 1.0, 1.0).unwrap(),
            Kernel::new(KernelKind::polynomial(), 1.0, 1.0).unwrap(),
            Kernel::new(KernelKind::neural_network(), 1.0, 1.0).unwrap(),
        ]
    }

    #[test]
    fn se_values() {
        let k = Kernel::squared_exponential(1.0, 1.0).unwrap();
        assert_eq!(k.eval_scalar(0.3, 0.3), 1.0);
        assert!((k.eval_scalar(0.0, 1.0) - 0.606_530_659_712_633_4).abs() < 1e-15);
    }

    #[test]
    fn matern_value() {
        let k = Kernel::matern12(1.0, 1.0).unwrap();
        assert!((k.eval_scalar(-1.0, 1.0) - 0.135_335_283_236_612_7).abs() < 1e-15);
    }

    #[test]
    fn iso_values() {
        for k in catalog().into_iter().filter(Kernel::is_isotropic) {
            assert_eq!(k.eval_iso(0.0).unwrap(), k.signal_variance());
        }
        let p = Kernel::new(KernelKind::periodic(), 0.7, 2.0).unwrap();
        assert!((p.eval_iso(1.0).unwrap() - 2.0).abs() < 1e-14);
        let rq = Kernel::new(KernelKind::rational_quadratic(), 1.0, 1.0).unwrap();
        assert!((rq.eval_iso(1.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn eval_iso_rejects_non_isotropic() {
        let k = Kernel::new(KernelKind::polynomial(), 1.0, 1.0).unwrap();
        assert!(matches!(k.eval_iso(0.5), Err(Error::NotIsotropic { .. })));
    }

    #[test]
    fn construction_validates() {
        assert!(Kernel::squared_exponential(0.0, 1.0).is_err());
        assert!(Kernel::squared_exponential(1.0, -1.0).is_err());
        assert!(Kernel::new(KernelKind::Periodic { period: 0.0 }, 1.0, 1.0).is_err());
        // lengthscale is ignored by the dot-product kinds
        assert!(Kernel::new(KernelKind::polynomial(), 0.0, 1.0).is_ok());
    }

    #[test]
    fn analytic_lipschitz() {
        let dom = Domain::interval(0.5, 1.5).unwrap();
        let se = Kernel::squared_exponential(1.0, 1.0).unwrap();
        let est = se.lipschitz_constant(&dom);
        assert_eq!(est.method, LipschitzMethod::Analytic);
        assert!((est.value - (-0.5f64).exp()).abs() < 1e-15);
        let m = Kernel::matern12(1.0, 1.0).unwrap().lipschitz_constant(&dom);
        assert_eq!(m.value, 1.0);
    }

    #[test]
    fn rq_lipschitz_matches_grid() {
        let rq = Kernel::new(KernelKind::RationalQuadratic { alpha: 2.5 }, 0.4, 1.3).unwrap();
        let analytic = rq
            .lipschitz_constant(&Domain::interval(0.0, 3.0).unwrap())
            .value;
        let grid = rq.iso_grid_slope(3.0);
        assert!(grid <= analytic * (1.0 + 1e-9));
        assert!(grid >= analytic * 0.999);
    }

    #[test]
    fn degenerate_domain() {
        let dom = Domain::interval(1.0, 1.0).unwrap();
        let p = Kernel::new(KernelKind::polynomial(), 1.0, 1.0).unwrap();
        let est = p.lipschitz_constant(&dom);
        assert_eq!(est.value, 0.0);
        assert_eq!(est.method, LipschitzMethod::Analytic);
    }

    #[test]
    fn decreasing_flags_are_honest() {
        for k in catalog().into_iter().filter(Kernel::is_decreasing) {
            let mut prev = f64::INFINITY;
            for i in 0..1000 {
                let v = k.eval_iso(i as f64 * 5e-3).unwrap();
                assert!(v <= prev, "{} not decreasing", k.name());
                prev = v;
            }
        }
    }
}
