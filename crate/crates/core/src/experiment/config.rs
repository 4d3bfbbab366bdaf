use serde::Deserialize;

use super::ConfigError;
use crate::bounds::{BoundForm, RadiusSchedule};
use crate::convergence::Density;
use crate::kernels::{Kernel, KernelKind};
use crate::learning_curve::{CurveOptions, SpanDensity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    VarianceUniform,
    VarianceVanishing,
    LearningCurve,
    ConvergenceCheck,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::VarianceUniform => "variance-uniform",
            ExperimentKind::VarianceVanishing => "variance-vanishing",
            ExperimentKind::LearningCurve => "learning-curve",
            ExperimentKind::ConvergenceCheck => "convergence-check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelName {
    #[serde(alias = "se")]
    SquaredExponential,
    #[serde(alias = "matern")]
    Matern12,
    #[serde(alias = "rq")]
    RationalQuadratic,
    Periodic,
    Polynomial,
    #[serde(alias = "nn")]
    NeuralNetwork,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityName {
    Uniform,
    Vanishing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundFormName {
    Standard,
    KernelScaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpanDensityName {
    OrderStatistics,
    Unnormalized,
}

/// Family-specific kernel parameters; unset entries take the family default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelParams {
    pub alpha: Option<f64>,
    pub period: Option<f64>,
    pub degree: Option<u32>,
    pub offset: Option<f64>,
    pub bias_variance: Option<f64>,
    pub weight_variance: Option<f64>,
}

fn default_one() -> f64 {
    1.0
}
fn default_noise() -> f64 {
    0.1
}
fn default_domain() -> [f64; 2] {
    [0.5, 1.5]
}
fn default_n_min() -> usize {
    1
}
fn default_n_max() -> usize {
    2000
}
fn default_per_decade() -> usize {
    25
}
fn default_datasets() -> usize {
    20
}
fn default_test_points() -> usize {
    200
}
fn default_alpha() -> f64 {
    0.5
}
fn default_quad_tol() -> f64 {
    crate::learning_curve::DEFAULT_QUAD_TOL
}
fn default_conv_n_max() -> u64 {
    100_000
}
fn default_trials() -> usize {
    50
}

/// A flat experiment description, read from TOML.
///
/// ```toml
/// experiment = "learning-curve"
/// kernel = "squared-exponential"
/// lengthscale = 0.3
/// noise_variance = 0.05
/// n_max = 2000
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub kernel: KernelName,
    #[serde(default = "default_one")]
    pub lengthscale: f64,
    #[serde(default = "default_one")]
    pub signal_variance: f64,
    #[serde(default)]
    pub kernel_params: KernelParams,
    #[serde(default = "default_noise")]
    pub noise_variance: f64,
    /// Sampling interval for the variance and convergence experiments.
    #[serde(default = "default_domain")]
    pub domain: [f64; 2],
    #[serde(default = "default_one")]
    pub test_point: f64,
    /// Only read by `convergence-check`; the variance experiments fix the
    /// density through their name.
    pub density: Option<DensityName>,
    #[serde(default = "default_one")]
    pub schedule_c: f64,
    #[serde(default = "default_alpha")]
    pub schedule_alpha: f64,
    #[serde(default = "default_n_min")]
    pub n_min: usize,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_per_decade")]
    pub points_per_decade: usize,
    #[serde(default = "default_datasets")]
    pub datasets: usize,
    #[serde(default = "default_test_points")]
    pub test_points: usize,
    #[serde(default)]
    pub seed: u64,
    pub output: Option<String>,
    pub bound_form: Option<BoundFormName>,
    pub span_density: Option<SpanDensityName>,
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
    pub conv_c: Option<f64>,
    pub conv_epsilon: Option<f64>,
    #[serde(default = "default_conv_n_max")]
    pub conv_n_max: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        reason: reason.into(),
    }
}

fn require_positive(field: &'static str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            field,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Field-level checks not expressible in the schema.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.kernel()?;
        require_positive("noise_variance", self.noise_variance)?;
        require_positive("schedule_c", self.schedule_c)?;
        if !(self.schedule_alpha >= 0.0 && self.schedule_alpha.is_finite()) {
            return Err(invalid("schedule_alpha", "must be finite and non-negative"));
        }
        let [lo, hi] = self.domain;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(invalid("domain", "needs finite lower < upper"));
        }
        if !(lo..=hi).contains(&self.test_point) {
            return Err(invalid("test_point", "must lie inside domain"));
        }
        if self.n_max < self.n_min.max(1) {
            return Err(invalid("n_max", "must be at least n_min and at least 1"));
        }
        if self.points_per_decade == 0 {
            return Err(invalid("points_per_decade", "must be positive"));
        }
        if self.datasets == 0 {
            return Err(invalid("datasets", "must be positive"));
        }
        if self.test_points == 0 {
            return Err(invalid("test_points", "must be positive"));
        }
        if self.trials == 0 {
            return Err(invalid("trials", "must be positive"));
        }
        require_positive("quad_tol", self.quad_tol)?;
        if let Some(c) = self.conv_c {
            require_positive("conv_c", c)?;
        }
        if let Some(e) = self.conv_epsilon {
            require_positive("conv_epsilon", e)?;
        }
        if self.conv_c.is_some() != self.conv_epsilon.is_some() {
            return Err(invalid(
                "conv_c",
                "conv_c and conv_epsilon must be given together",
            ));
        }
        if self.conv_n_max == 0 {
            return Err(invalid("conv_n_max", "must be positive"));
        }
        match self.experiment {
            ExperimentKind::LearningCurve if !self.kernel()?.is_isotropic() => Err(invalid(
                "kernel",
                "learning curves need an isotropic kernel",
            )),
            ExperimentKind::ConvergenceCheck if self.density.is_none() => {
                Err(invalid("density", "required for convergence-check"))
            }
            _ => Ok(()),
        }
    }

    pub fn kernel(&self) -> Result<Kernel, ConfigError> {
        let p = &self.kernel_params;
        let kind = match self.kernel {
            KernelName::SquaredExponential => KernelKind::SquaredExponential,
            KernelName::Matern12 => KernelKind::Matern12,
            KernelName::RationalQuadratic => KernelKind::RationalQuadratic {
                alpha: p.alpha.unwrap_or(1.0),
            },
            KernelName::Periodic => KernelKind::Periodic {
                period: p.period.unwrap_or(1.0),
            },
            KernelName::Polynomial => KernelKind::Polynomial {
                degree: p.degree.unwrap_or(3),
                offset: p.offset.unwrap_or(1.0),
            },
            KernelName::NeuralNetwork => KernelKind::NeuralNetwork {
                bias_variance: p.bias_variance.unwrap_or(1.0),
                weight_variance: p.weight_variance.unwrap_or(1.0),
            },
        };
        Kernel::new(kind, self.lengthscale, self.signal_variance).map_err(|e| match e {
            crate::Error::InvalidParameter { name, reason, .. } => invalid(name, reason),
            other => invalid("kernel", other.to_string()),
        })
    }

    pub fn schedule(&self) -> RadiusSchedule {
        RadiusSchedule::new(self.schedule_c, self.schedule_alpha)
            .expect("validated schedule parameters")
    }

    /// The training-input density of the variance and convergence experiments.
    pub fn sampling_density(&self) -> Result<Density, ConfigError> {
        let name = match self.experiment {
            ExperimentKind::VarianceUniform => DensityName::Uniform,
            ExperimentKind::VarianceVanishing => DensityName::Vanishing,
            _ => self.density.unwrap_or(DensityName::Uniform),
        };
        let [lo, hi] = self.domain;
        match name {
            DensityName::Uniform => Density::uniform(lo, hi),
            DensityName::Vanishing => Density::vanishing(lo, hi, self.test_point),
        }
        .map_err(|e| invalid("density", e.to_string()))
    }

    pub fn bound_form(&self) -> BoundForm {
        match self.bound_form {
            Some(BoundFormName::KernelScaled) => BoundForm::KernelScaled,
            _ => BoundForm::Standard,
        }
    }

    pub fn curve_options(&self) -> CurveOptions {
        CurveOptions {
            quad_tol: self.quad_tol,
            span_density: match self.span_density {
                Some(SpanDensityName::Unnormalized) => SpanDensity::Unnormalized,
                _ => SpanDensity::OrderStatistics,
            },
        }
    }

    /// The log-spaced `N` grid.
    pub fn grid(&self) -> Vec<usize> {
        log_grid(self.n_min, self.n_max, self.points_per_decade)
    }
}

/// Integers `round(n_min · 10^(i/per_decade))` up to `n_max`, deduplicated,
/// with `n_max` always included.
pub fn log_grid(n_min: usize, n_max: usize, per_decade: usize) -> Vec<usize> {
    let start = n_min.max(1);
    let mut grid = Vec::new();
    let mut i = 0;
    loop {
        let v = (start as f64 * 10f64.powf(i as f64 / per_decade as f64)).round() as usize;
        if v >= n_max {
            break;
        }
        if grid.last() != Some(&v) {
            grid.push(v);
        }
        i += 1;
    }
    grid.push(n_max);
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = log_grid(1, 1000, 25);
        assert_eq!(g[0], 1);
        assert_eq!(*g.last().unwrap(), 1000);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g.contains(&10) && g.contains(&100));
        assert_eq!(log_grid(5, 5, 25), vec![5]);
    }

    #[test]
    fn unknown_field_is_named() {
        let err = ExperimentConfig::from_toml(
            "experiment = \"learning-curve\"\nkernel = \"se\"\nlenghtscale = 0.3\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("lenghtscale"), "{err}");
    }

    #[test]
    fn field_validation() {
        let base = "experiment = \"variance-uniform\"\nkernel = \"se\"\n";
        assert!(ExperimentConfig::from_toml(base).is_ok());
        let err =
            ExperimentConfig::from_toml(&format!("{base}noise_variance = -1.0\n")).unwrap_err();
        assert!(matches!(
            err,
            ConfigError::Invalid {
                field: "noise_variance",
                ..
            }
        ));
        let err = ExperimentConfig::from_toml(&format!("{base}lengthscale = 0.0\n")).unwrap_err();
        assert!(matches!(
            err,
            ConfigError::Invalid {
                field: "lengthscale",
                ..
            }
        ));
        let err = ExperimentConfig::from_toml(
            "experiment = \"learning-curve\"\nkernel = \"polynomial\"\n",
        )
        .unwrap_err();
        assert!(matches!(
            err,
            ConfigError::Invalid {
                field: "kernel",
                ..
            }
        ));
        let err =
            ExperimentConfig::from_toml("experiment = \"convergence-check\"\nkernel = \"se\"\n")
                .unwrap_err();
        assert!(matches!(
            err,
            ConfigError::Invalid {
                field: "density",
                ..
            }
        ));
    }

    #[test]
    fn kernel_params_table() {
        let cfg = ExperimentConfig::from_toml(
            "experiment = \"variance-uniform\"\nkernel = \"polynomial\"\nkernel_params = { degree = 2, offset = 0.5 }\n",
        )
        .unwrap();
        assert_eq!(
            cfg.kernel().unwrap().kind(),
            KernelKind::Polynomial {
                degree: 2,
                offset: 0.5
            }
        );
    }
}
