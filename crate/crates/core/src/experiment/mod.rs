//! Config-driven experiment runners that emit CSV tables.
//!
//! Each runner is deterministic in the configured seed: work is split into
//! `(experiment, N, dataset)` cells with derived seeds and reduced in index
//! order, so output is byte-identical across runs and thread counts.

mod config;
mod presets;

use std::fmt::Write as _;

use rayon::prelude::*;

pub use config::{
    log_grid, BoundFormName, DensityName, ExperimentConfig, ExperimentKind, KernelName,
    KernelParams, SpanDensityName,
};
pub use presets::{preset, presets, Preset};

use crate::bounds::{ball_count, isotropic_bound_or_prior, LipschitzBound};
use crate::convergence::{
    check_mass_condition, check_schedule_exponent, empirical_ball_growth, search_witness,
    ConvergenceVerdict,
};
use crate::gp::{Posterior, TrainingSet};
use crate::kernels::Domain;
use crate::learning_curve::learning_curve_table;
use crate::seed::{cell_rng, tag};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid config field `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("experiment `{found}` cannot run under `{command}`")]
    WrongExperiment {
        command: &'static str,
        found: &'static str,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numeric failure (seed {seed}, N = {n_samples}): {source}")]
    Numeric {
        seed: u64,
        n_samples: usize,
        source: crate::Error,
    },
}

impl RunError {
    /// Process exit code: 2 for configuration problems, 3 for numeric ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numeric { .. } => 3,
        }
    }
}

fn numeric(seed: u64, n_samples: usize) -> impl Fn(crate::Error) -> RunError {
    move |source| RunError::Numeric {
        seed,
        n_samples,
        source,
    }
}

/// Full double precision.
fn fmt(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.16e}")
    }
}

fn expect(
    cfg: &ExperimentConfig,
    command: &'static str,
    ok: &[ExperimentKind],
) -> Result<(), ConfigError> {
    if ok.contains(&cfg.experiment) {
        Ok(())
    } else {
        Err(ConfigError::WrongExperiment {
            command,
            found: cfg.experiment.name(),
        })
    }
}

pub const VARIANCE_HEADER: &str = "idx,sig_m,sig_bm,sig_bm_gen";
pub const CURVE_HEADER: &str = "idx,y_exact,y_bound,yE1,yE2";
pub const GROWTH_HEADER: &str = "N,mean_count,min_count,expected_count";

struct VarianceCell {
    exact: f64,
    isotropic: f64,
    lipschitz: f64,
}

/// Exact posterior variance at the test point against both ball bounds,
/// averaged over `datasets` training sets per `N`. Columns: `idx` (N),
/// `sig_m` (exact), `sig_bm` (isotropic bound, `nan` for kernels that are not
/// isotropic and decreasing), `sig_bm_gen` (Lipschitz bound).
pub fn run_variance_experiment(cfg: &ExperimentConfig) -> Result<String, RunError> {
    expect(
        cfg,
        "variance",
        &[
            ExperimentKind::VarianceUniform,
            ExperimentKind::VarianceVanishing,
        ],
    )?;
    let kernel = cfg.kernel()?;
    let density = cfg.sampling_density()?;
    let schedule = cfg.schedule();
    let form = cfg.bound_form();
    let x = [cfg.test_point];
    let domain =
        Domain::interval(cfg.domain[0], cfg.domain[1]).map_err(|e| ConfigError::Invalid {
            field: "domain",
            reason: e.to_string(),
        })?;
    let lipschitz = kernel.lipschitz_constant(&domain).value;
    let bound = LipschitzBound::new(&kernel, &x, lipschitz, cfg.noise_variance)
        .map_err(numeric(cfg.seed, 0))?
        .with_form(form);
    let grid = cfg.grid();
    let cells: Vec<(usize, usize)> = grid
        .iter()
        .flat_map(|&n| (0..cfg.datasets).map(move |d| (n, d)))
        .collect();
    let label = tag(cfg.experiment.name());
    let results: Vec<VarianceCell> = cells
        .par_iter()
        .map(|&(n, d)| {
            let err = numeric(cfg.seed, n);
            let mut rng = cell_rng(cfg.seed, &[label, n as u64, d as u64]);
            let xs: Vec<f64> = (0..n).map(|_| density.sample(&mut rng)).collect();
            let train = TrainingSet::from_scalars(&xs, cfg.noise_variance).map_err(&err)?;
            let exact = Posterior::new(&kernel, &train)
                .and_then(|p| p.variance(&x))
                .map_err(&err)?;
            let radius = schedule.radius_at(n, &kernel, &x, lipschitz);
            let count = ball_count(&train, &x, radius).count;
            let isotropic = if kernel.is_decreasing() {
                isotropic_bound_or_prior(&kernel, count, radius, cfg.noise_variance)
                    .map_err(&err)?
            } else {
                f64::NAN
            };
            let lipschitz = bound.evaluate(count, radius).map_err(&err)?;
            Ok(VarianceCell {
                exact,
                isotropic,
                lipschitz,
            })
        })
        .collect::<Result<_, RunError>>()?;
    let mut out = String::from(VARIANCE_HEADER);
    out.push('\n');
    for (i, &n) in grid.iter().enumerate() {
        let chunk = &results[i * cfg.datasets..(i + 1) * cfg.datasets];
        let avg =
            |f: fn(&VarianceCell) -> f64| chunk.iter().map(f).sum::<f64>() / cfg.datasets as f64;
        let _ = writeln!(
            out,
            "{n},{},{},{}",
            fmt(avg(|c| c.exact)),
            fmt(avg(|c| c.isotropic)),
            fmt(avg(|c| c.lipschitz))
        );
    }
    Ok(out)
}

/// Monte Carlo average learning curve with the greedy information-radius
/// bound and the one- and two-point bounds. With `subtract_noise`, `σ_n²` is
/// removed from every column.
pub fn run_learning_curve(
    cfg: &ExperimentConfig,
    subtract_noise: bool,
) -> Result<String, RunError> {
    expect(cfg, "learning-curve", &[ExperimentKind::LearningCurve])?;
    let kernel = cfg.kernel()?;
    let grid = cfg.grid();
    let table = learning_curve_table(
        &kernel,
        cfg.noise_variance,
        &grid,
        cfg.test_points,
        cfg.datasets,
        cfg.seed,
        &cfg.curve_options(),
    )
    .map_err(numeric(cfg.seed, *grid.last().unwrap_or(&0)))?;
    let shift = if subtract_noise {
        cfg.noise_variance
    } else {
        0.0
    };
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.n_samples,
            fmt(r.e_num - shift),
            fmt(r.e_rho - shift),
            fmt(r.e1 - shift),
            fmt(r.e2 - shift)
        );
    }
    Ok(out)
}

/// Result of a convergence check: a verdict summary and the empirical
/// ball-growth table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceOutput {
    pub verdict: ConvergenceVerdict,
    /// Positive-density schedule check in one dimension, independent of the
    /// sampling density.
    pub schedule_verdict: ConvergenceVerdict,
    pub report: String,
    pub csv: String,
}

fn describe(v: &ConvergenceVerdict) -> String {
    let opt = |o: Option<f64>| o.map_or("none".to_string(), |v| format!("{v}"));
    format!(
        "satisfied = {}\nc = {}\nepsilon = {}\nfirst_failing_n = {}\nfailure = {}\n",
        v.satisfied,
        opt(v.c),
        opt(v.epsilon),
        v.first_failing_n
            .map_or("none".to_string(), |n| n.to_string()),
        v.failure.map_or("none".to_string(), |f| format!("{f:?}")),
    )
}

pub fn run_convergence_check(cfg: &ExperimentConfig) -> Result<ConvergenceOutput, RunError> {
    expect(cfg, "convergence", &[ExperimentKind::ConvergenceCheck])?;
    let density = cfg.sampling_density()?;
    let schedule = cfg.schedule();
    let range = 1..=cfg.conv_n_max;
    let err = numeric(cfg.seed, 0);
    let verdict = match (cfg.conv_c, cfg.conv_epsilon) {
        (Some(c), Some(eps)) => {
            check_mass_condition(&density, cfg.test_point, &schedule, c, eps, range)
        }
        _ => search_witness(&density, cfg.test_point, &schedule, range),
    }
    .map_err(&err)?;
    let schedule_verdict = check_schedule_exponent(1, &schedule);
    let growth = empirical_ball_growth(
        &density,
        cfg.test_point,
        &schedule,
        &cfg.grid(),
        cfg.trials,
        cfg.seed,
    )
    .map_err(&err)?;
    let mut report = describe(&verdict);
    report.push_str("[positive-density schedule check, d = 1]\n");
    report.push_str(&describe(&schedule_verdict));
    let mut csv = String::from(GROWTH_HEADER);
    csv.push('\n');
    for row in &growth {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            row.n,
            fmt(row.mean_count),
            row.min_count,
            fmt(row.expected_count)
        );
    }
    Ok(ConvergenceOutput {
        verdict,
        schedule_verdict,
        report,
        csv,
    })
}

/// A gnuplot script drawing the CSV at `csv_path` on log-log axes.
pub fn plot_script(kind: ExperimentKind, csv_path: &str) -> String {
    let (title, columns): (&str, &[(usize, &str)]) = match kind {
        ExperimentKind::VarianceUniform | ExperimentKind::VarianceVanishing => (
            "posterior variance at the test point",
            &[(2, "exact"), (3, "isotropic bound"), (4, "Lipschitz bound")],
        ),
        ExperimentKind::LearningCurve => (
            "average learning curve",
            &[
                (2, "Monte Carlo"),
                (3, "radius bound"),
                (4, "one-point bound"),
                (5, "two-point bound"),
            ],
        ),
        ExperimentKind::ConvergenceCheck => (
            "ball population",
            &[(2, "mean count"), (3, "min count"), (4, "expected count")],
        ),
    };
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set logscale xy");
    let _ = writeln!(s, "set key top right");
    let _ = writeln!(s, "set xlabel 'N'");
    let _ = writeln!(s, "set title '{title}'");
    let plots: Vec<String> = columns
        .iter()
        .map(|(c, name)| format!("'{csv_path}' every ::1 using 1:{c} with lines title '{name}'"))
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}
