use super::{ConfigError, ExperimentConfig};

/// A named, shipped experiment configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub toml: &'static str,
}

impl Preset {
    /// First comment line of the preset file.
    pub fn summary(&self) -> &'static str {
        self.toml
            .lines()
            .next()
            .and_then(|l| l.strip_prefix("# "))
            .unwrap_or("")
    }

    pub fn config(&self) -> ExperimentConfig {
        ExperimentConfig::from_toml(self.toml).expect("shipped presets are valid")
    }
}

macro_rules! presets {
    ($($name:literal),* $(,)?) => {
        &[$(Preset {
            name: $name,
            toml: include_str!(concat!("../../presets/", $name, ".toml")),
        }),*]
    };
}

const PRESETS: &[Preset] = presets![
    "variance-uniform-se",
    "variance-uniform-matern",
    "variance-uniform-polynomial",
    "variance-uniform-nn",
    "variance-vanishing-se",
    "variance-vanishing-matern",
    "variance-vanishing-polynomial",
    "variance-vanishing-nn",
    "learning-curve-se",
    "learning-curve-matern",
    "learning-curve-rq",
    "learning-curve-periodic",
    "learning-curve-se-full",
    "convergence-uniform",
    "convergence-vanishing",
    "convergence-fixed-radius",
];

pub fn presets() -> &'static [Preset] {
    PRESETS
}

pub fn preset(name: &str) -> Result<Preset, ConfigError> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .copied()
        .ok_or_else(|| ConfigError::UnknownPreset(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::ExperimentKind;

    #[test]
    fn all_presets_parse() {
        for p in presets() {
            let cfg = p.config();
            assert!(!p.summary().is_empty(), "{}", p.name);
            if cfg.experiment == ExperimentKind::LearningCurve {
                assert_eq!((cfg.lengthscale, cfg.noise_variance), (0.3, 0.05));
            }
            if matches!(
                cfg.experiment,
                ExperimentKind::VarianceUniform | ExperimentKind::VarianceVanishing
            ) {
                assert_eq!((cfg.lengthscale, cfg.noise_variance), (1.0, 0.1));
                assert_eq!((cfg.test_point, cfg.datasets), (1.0, 20));
            }
        }
        assert!(preset("nope").is_err());
    }
}
