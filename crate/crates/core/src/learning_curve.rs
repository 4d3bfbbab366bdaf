//! Average learning-curve bounds for one-dimensional inputs drawn uniformly
//! from `[0, 1]`, and the Monte Carlo reference curve they are compared to.
//!
//! All bounds are expectations over the gaps between sorted uniform samples.
//! A single gap follows `N (1 − δ)^(N−1)`; the span of `j − 1` consecutive gaps
//! follows `Beta(j − 1, N − j + 2)`.

use rand::Rng;
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::error::{positive, Error, Result};
use crate::gp::{Posterior, TrainingSet};
use crate::kernels::Kernel;
use crate::quadrature::{integrate, integrate_with_breaks};
use crate::seed::{cell_rng, tag};

pub const DEFAULT_QUAD_TOL: f64 = 1e-9;

/// Log-weight drop below the peak at which the δ-integrands are truncated.
const LOG_CUTOFF: f64 = 45.0;

/// Density of the span of `n − 1` consecutive gaps used inside `I_n(δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpanDensity {
    /// `(n−1) C(N, n−1) δ^(n−2) (1−δ)^(N−n+1)`, the exact order-statistics
    /// density.
    #[default]
    OrderStatistics,
    /// `C(N, n−1) δ^(n−2) (1−δ)^(N−n−1)`; kept for comparison only, it does
    /// not integrate to one and can undershoot the true curve.
    Unnormalized,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveOptions {
    /// Absolute tolerance on each reported bound value.
    pub quad_tol: f64,
    pub span_density: SpanDensity,
}

impl Default for CurveOptions {
    fn default() -> Self {
        CurveOptions {
            quad_tol: DEFAULT_QUAD_TOL,
            span_density: SpanDensity::OrderStatistics,
        }
    }
}

impl CurveOptions {
    pub fn with_tol(quad_tol: f64) -> Self {
        CurveOptions {
            quad_tol,
            ..Default::default()
        }
    }
}

fn isotropic(kernel: &Kernel, operation: &'static str) -> Result<f64> {
    if !kernel.is_isotropic() {
        return Err(Error::NotIsotropic {
            operation,
            kernel: kernel.name(),
        });
    }
    Ok(kernel.iso_unchecked(0.0))
}

fn at_least_one(n_samples: usize) -> Result<()> {
    if n_samples == 0 {
        Err(Error::InvalidParameter {
            name: "N",
            value: 0.0,
            reason: "must be at least 1",
        })
    } else {
        Ok(())
    }
}

/// Density `N (1 − δ)^(N−1)` of the gap between adjacent uniform samples,
/// evaluated in log space.
pub fn spacing_density(n_samples: usize, delta: f64) -> f64 {
    assert!(n_samples >= 1, "N must be at least 1");
    if !(0.0..=1.0).contains(&delta) {
        return 0.0;
    }
    if n_samples == 1 {
        return 1.0;
    }
    let n = n_samples as f64;
    (n.ln() + (n - 1.0) * (-delta).ln_1p()).exp()
}

/// Upper end of the region where `N (1 − δ)^(N−1)` is non-negligible.
fn spacing_support(n_samples: usize) -> f64 {
    if n_samples <= 1 {
        1.0
    } else {
        let n = n_samples as f64;
        ((LOG_CUTOFF + n.ln()) / (n - 1.0)).min(1.0)
    }
}

fn squared_kernel_integral(kernel: &Kernel, a: f64, b: f64, tol: f64) -> Result<f64> {
    Ok(integrate(
        |t| {
            let k = kernel.iso_unchecked(t);
            k * k
        },
        a,
        b,
        tol,
    )?
    .value)
}

/// `E_δ[∫_0^{δ·scale} k²(τ) dτ]` under the single-gap density.
fn gap_expectation(kernel: &Kernel, n_samples: usize, scale: f64, tol: f64) -> Result<f64> {
    let upper = spacing_support(n_samples);
    let inner_tol = 0.1 * tol;
    let mut failure = None;
    let value = integrate(
        |d| match squared_kernel_integral(kernel, 0.0, scale * d, inner_tol) {
            Ok(g) => spacing_density(n_samples, d) * g,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        0.0,
        upper,
        0.5 * tol,
    )?
    .value;
    failure.map_or(Ok(value), Err)
}

/// One-nearest-neighbour learning-curve bound
/// `k(0) + σ² − 2E[∫_0^δ k²]/(k(0)+σ²) − 2(N−1)E[∫_0^{δ/2} k²]/(k(0)+σ²)`.
pub fn e1_bound(
    kernel: &Kernel,
    noise_variance: f64,
    n_samples: usize,
    quad_tol: f64,
) -> Result<f64> {
    let k0 = isotropic(kernel, "e1_bound")?;
    positive("noise_variance", noise_variance)?;
    positive("quad_tol", quad_tol)?;
    at_least_one(n_samples)?;
    let a = k0 + noise_variance;
    let inner = (n_samples - 1) as f64;
    let edge = gap_expectation(kernel, n_samples, 1.0, quad_tol * a / 8.0)?;
    let half = if n_samples > 1 {
        gap_expectation(kernel, n_samples, 0.5, quad_tol * a / (8.0 * inner))?
    } else {
        0.0
    };
    Ok(a - 2.0 * edge / a - 2.0 * inner * half / a)
}

/// Two-nearest-neighbour learning-curve bound. Each inner gap contributes
/// the exact two-point posterior variance integrated across the gap; the two
/// boundary gaps use the one-point form.
pub fn e2_bound(
    kernel: &Kernel,
    noise_variance: f64,
    n_samples: usize,
    quad_tol: f64,
) -> Result<f64> {
    let k0 = isotropic(kernel, "e2_bound")?;
    positive("noise_variance", noise_variance)?;
    positive("quad_tol", quad_tol)?;
    at_least_one(n_samples)?;
    let a = k0 + noise_variance;
    let inner = (n_samples - 1) as f64;
    let edge = gap_expectation(kernel, n_samples, 1.0, quad_tol * a / 8.0)?;
    let pair = if n_samples > 1 {
        let tol = quad_tol / (8.0 * inner);
        let mut failure = None;
        let value = integrate(
            |d| {
                let kd = kernel.iso_unchecked(d);
                let det = a * a - kd * kd;
                let explained = integrate(
                    |t| {
                        let kt = kernel.iso_unchecked(t);
                        a * kt * kt - kd * kt * kernel.iso_unchecked(d - t)
                    },
                    0.0,
                    d,
                    0.1 * tol * det,
                );
                match explained {
                    Ok(r) => spacing_density(n_samples, d) * r.value / det,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            0.0,
            spacing_support(n_samples),
            0.5 * tol,
        )?
        .value;
        if let Some(e) = failure {
            return Err(e);
        }
        value
    } else {
        0.0
    };
    Ok(a - 2.0 * inner * pair - 2.0 * edge / a)
}

/// Partition of the sorted samples into `m` inner sections of `n` samples
/// (consecutive sections share an end sample) and two boundary sections
/// holding `n_left` and `n_right` samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentPlan {
    pub n_samples: usize,
    pub n: usize,
    pub m: i64,
    pub n_left: i64,
    pub n_right: i64,
}

impl SegmentPlan {
    /// Valid when every section exists and every span index `j` used by the
    /// bound satisfies `2 ≤ j ≤ N − 1`.
    pub fn is_valid(&self) -> bool {
        let max = self.n_samples as i64 - 1;
        self.m >= 1
            && self.n_left >= 1
            && self.n_right >= 1
            && (self.n as i64) <= max
            && self.n_left < max
            && self.n_right < max
    }
}

pub fn segment_plan(n_samples: usize, n: usize) -> Result<SegmentPlan> {
    if n < 2 {
        return Err(Error::OrderOutOfRange {
            n_samples,
            n,
            min: 2,
            max: n_samples.saturating_sub(1),
        });
    }
    let big = n_samples as i64;
    let step = n as i64 - 1;
    let m = (big - 2 * n as i64 + 1).div_euclid(step)
        + i64::from((big - 2 * n as i64 + 1).rem_euclid(step) != 0);
    let rest = big - m * step + 1;
    Ok(SegmentPlan {
        n_samples,
        n,
        m,
        n_left: rest.div_euclid(2),
        n_right: rest - rest.div_euclid(2),
    })
}

fn ln_choose(n: usize, k: usize) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Log of the span weight in `I_n(δ)`.
fn log_span_weight(n_samples: usize, n: usize, delta: f64, density: SpanDensity) -> f64 {
    let big = n_samples as f64;
    let j = n as f64;
    let shape = if n == 2 { 0.0 } else { (j - 2.0) * delta.ln() };
    match density {
        SpanDensity::OrderStatistics => {
            (j - 1.0).ln()
                + ln_choose(n_samples, n - 1)
                + shape
                + (big - j + 1.0) * (-delta).ln_1p()
        }
        SpanDensity::Unnormalized => {
            ln_choose(n_samples, n - 1) + shape + (big - j - 1.0) * (-delta).ln_1p()
        }
    }
}

fn check_order(n_samples: usize, n: usize) -> Result<()> {
    if n < 2 || n + 1 > n_samples {
        return Err(Error::OrderOutOfRange {
            n_samples,
            n,
            min: 2,
            max: n_samples.saturating_sub(1),
        });
    }
    Ok(())
}

/// `I_n(δ) = w_n(δ) ∫_{δ/2}^{δ} k²(ρ) dρ`, where `w_n` is the span weight
/// selected by `density`.
pub fn i_n_integral(
    kernel: &Kernel,
    n_samples: usize,
    n: usize,
    delta: f64,
    quad_tol: f64,
    density: SpanDensity,
) -> Result<f64> {
    isotropic(kernel, "i_n_integral")?;
    check_order(n_samples, n)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: delta,
            reason: "must lie in (0, 1)",
        });
    }
    let weight = log_span_weight(n_samples, n, delta, density).exp();
    Ok(weight * squared_kernel_integral(kernel, 0.5 * delta, delta, quad_tol)?)
}

/// `[lo, mode, hi]` bracketing the region where the span weight is within
/// `LOG_CUTOFF` of its peak.
fn span_support(n_samples: usize, n: usize, density: SpanDensity) -> [f64; 3] {
    let big = n_samples as f64;
    let j = n as f64;
    let tail = match density {
        SpanDensity::OrderStatistics => big - j + 1.0,
        SpanDensity::Unnormalized => big - j - 1.0,
    };
    let mode = if n == 2 {
        0.0
    } else {
        (j - 2.0) / (j - 2.0 + tail)
    };
    let lw = |d: f64| log_span_weight(n_samples, n, d, density);
    let peak = if n == 2 { lw(0.0) } else { lw(mode) };
    let below = |d: f64| lw(d) < peak - LOG_CUTOFF;
    let bisect = |mut inside: f64, mut outside: f64| {
        for _ in 0..80 {
            let mid = 0.5 * (inside + outside);
            if below(mid) {
                outside = mid;
            } else {
                inside = mid;
            }
        }
        outside
    };
    let hi = if tail <= 0.0 || !below(1.0 - 1e-15) {
        1.0
    } else {
        bisect(mode, 1.0)
    };
    let lo = if n == 2 || !below(f64::MIN_POSITIVE) {
        0.0
    } else {
        bisect(mode, 0.0)
    };
    [lo, mode.max(lo), hi]
}

/// `∫_0^1 I_n(δ) dδ`.
fn span_expectation(
    kernel: &Kernel,
    n_samples: usize,
    n: usize,
    tol: f64,
    density: SpanDensity,
) -> Result<f64> {
    check_order(n_samples, n)?;
    let [lo, mode, hi] = span_support(n_samples, n, density);
    let inner_tol = 0.1 * tol;
    let mut failure = None;
    let value = integrate_with_breaks(
        |d| {
            if d <= 0.0 || d >= 1.0 {
                return 0.0;
            }
            match squared_kernel_integral(kernel, 0.5 * d, d, inner_tol) {
                Ok(g) => log_span_weight(n_samples, n, d, density).exp() * g,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        &[lo, mode, hi],
        0.5 * tol,
    )?
    .value;
    failure.map_or(Ok(value), Err)
}

/// Information-radius learning-curve bound for a section size `n ≥ 2`:
///
/// ```text
/// k(0) + σ² − 2m ∫I_n/(k(0)+σ²/n) − 2∫I_{n_l+1}/(k(0)+σ²/n_l) − 2∫I_{n_r+1}/(k(0)+σ²/n_r)
/// ```
///
/// An invalid segment plan is reported as [`Error::InvalidSegmentPlan`]; the
/// caller falls back to [`e1_bound`].
pub fn e_rho_bound(
    kernel: &Kernel,
    noise_variance: f64,
    n_samples: usize,
    n: usize,
    options: &CurveOptions,
) -> Result<f64> {
    let k0 = isotropic(kernel, "e_rho_bound")?;
    positive("noise_variance", noise_variance)?;
    positive("quad_tol", options.quad_tol)?;
    let plan = segment_plan(n_samples, n)?;
    if !plan.is_valid() {
        return Err(Error::InvalidSegmentPlan { n_samples, n });
    }
    let tol = options.quad_tol;
    let m = plan.m as f64;
    let density = options.span_density;
    let section = |size: usize, count: f64| -> Result<f64> {
        let j = span_expectation(
            kernel,
            n_samples,
            size,
            tol / (8.0 * count.max(1.0)),
            density,
        )?;
        Ok(2.0 * count * j)
    };
    let nl = plan.n_left as usize;
    let nr = plan.n_right as usize;
    let inner = section(n, m)? / (k0 + noise_variance / n as f64);
    let left = section(nl + 1, 1.0)? / (k0 + noise_variance / nl as f64);
    let right = section(nr + 1, 1.0)? / (k0 + noise_variance / nr as f64);
    Ok(k0 + noise_variance - inner - left - right)
}

/// `ē₁` for `n = 1`, otherwise `ē_ρ` (falling back to `ē₁` for invalid plans).
pub fn curve_bound_for(
    kernel: &Kernel,
    noise_variance: f64,
    n_samples: usize,
    n: usize,
    options: &CurveOptions,
) -> Result<f64> {
    if n <= 1 {
        return e1_bound(kernel, noise_variance, n_samples, options.quad_tol);
    }
    match e_rho_bound(kernel, noise_variance, n_samples, n, options) {
        Err(Error::InvalidSegmentPlan { .. }) => {
            e1_bound(kernel, noise_variance, n_samples, options.quad_tol)
        }
        other => other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreedyChoice {
    pub n: usize,
    pub bound: f64,
}

/// Starting from `n_prev`, increase `n` while the bound strictly decreases.
pub fn greedy_select_n(
    kernel: &Kernel,
    noise_variance: f64,
    n_samples: usize,
    n_prev: usize,
    options: &CurveOptions,
) -> Result<GreedyChoice> {
    let start = if n_samples <= 1 { 1 } else { n_prev.max(1) };
    let mut best = GreedyChoice {
        n: start,
        bound: curve_bound_for(kernel, noise_variance, n_samples, start, options)?,
    };
    if n_samples <= 1 {
        return Ok(best);
    }
    loop {
        let next = best.n + 1;
        let valid = segment_plan(n_samples, next)
            .map(|p| p.is_valid())
            .unwrap_or(false);
        if !valid {
            return Ok(best);
        }
        let bound = e_rho_bound(kernel, noise_variance, n_samples, next, options)?;
        if bound < best.bound {
            best = GreedyChoice { n: next, bound };
        } else {
            return Ok(best);
        }
    }
}

/// Bound values at one `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub n_samples: usize,
    pub e1: f64,
    pub e2: f64,
    pub e_rho: f64,
    pub n_selected: usize,
}

/// `ē₁`, `ē₂` and greedy `ē_ρ` along an increasing grid of `N`, warm-starting
/// the section size from the previous grid point.
pub fn bound_curve(
    kernel: &Kernel,
    noise_variance: f64,
    grid: &[usize],
    options: &CurveOptions,
) -> Result<Vec<BoundRow>> {
    let mut n_prev = 1;
    let mut rows = Vec::with_capacity(grid.len());
    for &n_samples in grid {
        let choice = greedy_select_n(kernel, noise_variance, n_samples, n_prev, options)?;
        n_prev = choice.n;
        rows.push(BoundRow {
            n_samples,
            e1: e1_bound(kernel, noise_variance, n_samples, options.quad_tol)?,
            e2: e2_bound(kernel, noise_variance, n_samples, options.quad_tol)?,
            e_rho: choice.bound,
            n_selected: choice.n,
        });
    }
    Ok(rows)
}

/// Monte Carlo estimate of `e(N) = E[σ_N²(x)] + σ²` at one `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McPoint {
    pub n_samples: usize,
    pub mean: f64,
    /// Standard error across training sets.
    pub std_error: f64,
}

/// Average posterior variance (plus noise) over `datasets` uniform training
/// sets on `[0, 1]`, each probed at `test_points` uniform test points.
/// Deterministic in `seed`; datasets run in parallel and are reduced in index
/// order.
pub fn monte_carlo_curve(
    kernel: &Kernel,
    noise_variance: f64,
    n_list: &[usize],
    test_points: usize,
    datasets: usize,
    seed: u64,
) -> Result<Vec<McPoint>> {
    positive("noise_variance", noise_variance)?;
    positive("test_points", test_points as f64)?;
    positive("datasets", datasets as f64)?;
    n_list
        .iter()
        .map(|&n_samples| {
            let means: Vec<f64> = (0..datasets)
                .into_par_iter()
                .map(|d| dataset_mean(kernel, noise_variance, n_samples, test_points, seed, d))
                .collect::<Result<_>>()?;
            let mean = means.iter().sum::<f64>() / datasets as f64;
            let std_error = if datasets > 1 {
                let var =
                    means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (datasets - 1) as f64;
                (var / datasets as f64).sqrt()
            } else {
                0.0
            };
            Ok(McPoint {
                n_samples,
                mean: mean + noise_variance,
                std_error,
            })
        })
        .collect()
}

fn dataset_mean(
    kernel: &Kernel,
    noise_variance: f64,
    n_samples: usize,
    test_points: usize,
    seed: u64,
    dataset: usize,
) -> Result<f64> {
    let mut rng = cell_rng(
        seed,
        &[tag("learning-curve"), n_samples as u64, dataset as u64],
    );
    let xs: Vec<f64> = (0..n_samples).map(|_| rng.random::<f64>()).collect();
    let train = TrainingSet::from_scalars(&xs, noise_variance)?;
    let total: f64 = if train.is_empty() {
        (0..test_points)
            .map(|_| kernel.prior_variance(&[rng.random::<f64>()]))
            .sum()
    } else {
        let post = Posterior::new(kernel, &train)?;
        let mut sum = 0.0;
        for _ in 0..test_points {
            sum += post.variance(&[rng.random::<f64>()])?;
        }
        sum
    };
    Ok(total / test_points as f64)
}

/// One row of the emitted learning-curve table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearningCurveRow {
    pub n_samples: usize,
    pub e_num: f64,
    pub e_num_std_error: f64,
    pub e1: f64,
    pub e2: f64,
    pub e_rho: f64,
    pub n_selected: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearningCurveTable {
    pub kernel: Kernel,
    pub noise_variance: f64,
    pub seed: u64,
    pub test_points: usize,
    pub datasets: usize,
    pub rows: Vec<LearningCurveRow>,
}

pub fn learning_curve_table(
    kernel: &Kernel,
    noise_variance: f64,
    grid: &[usize],
    test_points: usize,
    datasets: usize,
    seed: u64,
    options: &CurveOptions,
) -> Result<LearningCurveTable> {
    let bounds = bound_curve(kernel, noise_variance, grid, options)?;
    let mc = monte_carlo_curve(kernel, noise_variance, grid, test_points, datasets, seed)?;
    let rows = bounds
        .iter()
        .zip(&mc)
        .map(|(b, m)| LearningCurveRow {
            n_samples: b.n_samples,
            e_num: m.mean,
            e_num_std_error: m.std_error,
            e1: b.e1,
            e2: b.e2,
            e_rho: b.e_rho,
            n_selected: b.n_selected,
        })
        .collect();
    Ok(LearningCurveTable {
        kernel: *kernel,
        noise_variance,
        seed,
        test_points,
        datasets,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn se03() -> Kernel {
        Kernel::squared_exponential(0.3, 1.0).unwrap()
    }

    #[test]
    fn spacing_density_values() {
        assert_eq!(spacing_density(1, 0.37), 1.0);
        let v = spacing_density(100, 0.05);
        assert!((v - 100.0 * 0.95f64.powi(99)).abs() < 1e-12);
        assert!((v - 0.6232).abs() < 1e-4);
        for n in [1, 10, 100, 1000] {
            let mass = integrate_with_breaks(
                |d| spacing_density(n, d),
                &[0.0, spacing_support(n), 1.0],
                1e-12,
            )
            .unwrap()
            .value;
            assert!((mass - 1.0).abs() < 1e-10, "N={n}: {mass}");
        }
    }

    #[test]
    fn segment_plan_examples() {
        let p = segment_plan(8, 3).unwrap();
        assert_eq!((p.m, p.n_left, p.n_right), (2, 2, 3));
        assert!(p.is_valid());
        let p = segment_plan(6, 3).unwrap();
        assert_eq!(p.m, 1);
        assert!(p.is_valid());
        let p = segment_plan(5, 3).unwrap();
        assert_eq!(p.m, 0);
        assert!(!p.is_valid());
        assert!(!segment_plan(3, 3).unwrap().is_valid());
        assert!(segment_plan(10, 1).is_err());
        for big in 4..200usize {
            for n in 2..big {
                let p = segment_plan(big, n).unwrap();
                assert_eq!(p.n_left + p.n_right + p.m * (n as i64 - 1) - 1, big as i64);
            }
        }
    }

    #[test]
    fn e1_at_one_sample_is_the_single_gap_term() {
        let k = se03();
        let v = e1_bound(&k, 0.05, 1, 1e-12).unwrap();
        // N = 1: E[∫_0^δ k²] with δ ~ U(0,1) is ∫_0^1 k²(τ)(1−τ) dτ
        let direct = integrate(|t| (-t * t / 0.09f64).exp() * (1.0 - t), 0.0, 1.0, 1e-14)
            .unwrap()
            .value;
        assert!((v - (1.05 - 2.0 * direct / 1.05)).abs() < 1e-11);
        assert_eq!(e2_bound(&k, 0.05, 1, 1e-12).unwrap(), v);
    }

    #[test]
    fn i_n_examples() {
        let k = se03();
        let tol = 1e-13;
        assert!(i_n_integral(&k, 50, 5, 1e-9, tol, SpanDensity::OrderStatistics).unwrap() < 1e-25);
        assert!(i_n_integral(&k, 10, 10, 0.2, tol, SpanDensity::OrderStatistics).is_err());
        assert!(i_n_integral(&k, 10, 1, 0.2, tol, SpanDensity::OrderStatistics).is_err());
        let inner = integrate(|t| (-t * t / 0.09f64).exp(), 0.1, 0.2, 1e-15)
            .unwrap()
            .value;
        let unnormalized = i_n_integral(&k, 5, 2, 0.2, tol, SpanDensity::Unnormalized).unwrap();
        assert!((unnormalized - 5.0 * 0.8f64.powi(2) * inner).abs() < 1e-13);
        let exact = i_n_integral(&k, 5, 2, 0.2, tol, SpanDensity::OrderStatistics).unwrap();
        assert!((exact - 5.0 * 0.8f64.powi(4) * inner).abs() < 1e-13);
    }

    #[test]
    fn greedy_starts_at_one() {
        let k = se03();
        let c = greedy_select_n(&k, 0.05, 1, 7, &CurveOptions::default()).unwrap();
        assert_eq!(c.n, 1);
        // at N = 10 every valid section size is worse than the one-point curve
        let c = greedy_select_n(&k, 0.05, 10, 1, &CurveOptions::default()).unwrap();
        assert_eq!(c.n, 1);
        let e1 = e1_bound(&k, 0.05, 10, DEFAULT_QUAD_TOL).unwrap();
        assert!(e_rho_bound(&k, 0.05, 10, 2, &CurveOptions::default()).unwrap() > e1);
        assert_eq!(c.bound, e1);
    }

    #[test]
    fn invalid_plan_falls_back() {
        let k = se03();
        let opts = CurveOptions::default();
        assert!(matches!(
            e_rho_bound(&k, 0.05, 5, 3, &opts),
            Err(Error::InvalidSegmentPlan { .. })
        ));
        assert_eq!(
            curve_bound_for(&k, 0.05, 5, 3, &opts).unwrap(),
            e1_bound(&k, 0.05, 5, opts.quad_tol).unwrap()
        );
    }

    #[test]
    fn monte_carlo_prior_at_zero() {
        let k = se03();
        let mc = monte_carlo_curve(&k, 0.05, &[0], 10, 3, 1).unwrap();
        assert_eq!(mc[0].mean, 1.05);
        assert_eq!(mc[0].std_error, 0.0);
    }

    #[test]
    fn rejects_non_isotropic() {
        let k = Kernel::new(crate::kernels::KernelKind::polynomial(), 1.0, 1.0).unwrap();
        assert!(matches!(
            e1_bound(&k, 0.05, 10, 1e-9),
            Err(Error::NotIsotropic { .. })
        ));
    }
}
