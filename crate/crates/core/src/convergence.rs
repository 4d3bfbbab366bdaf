//! Conditions under which the number of samples inside a shrinking ball grows
//! without bound, plus the Bernoulli/binomial moment identities the argument
//! relies on.

use std::ops::RangeInclusive;

use rand::Rng;
use rayon::prelude::*;

use crate::bounds::RadiusSchedule;
use crate::error::{nonnegative, positive, Error, Result};
use crate::quadrature::integrate_with_breaks;
use crate::seed::{cell_rng, tag};

const NORMALIZATION_TOL: f64 = 1e-8;
const EXPONENT_TOL: f64 = 1e-12;
const MAX_PROBES: u64 = 20_000;

/// A sampling density on an interval.
#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    Uniform {
        lower: f64,
        upper: f64,
    },
    /// `p(t) ∝ |t − zero_at|`; vanishes at `zero_at`.
    Vanishing {
        lower: f64,
        upper: f64,
        zero_at: f64,
    },
    /// Piecewise-linear interpolation of `(knots[i], values[i])`.
    Tabulated {
        knots: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Density {
    pub fn uniform(lower: f64, upper: f64) -> Result<Self> {
        check_interval(lower, upper)?;
        Ok(Density::Uniform { lower, upper })
    }

    pub fn vanishing(lower: f64, upper: f64, zero_at: f64) -> Result<Self> {
        check_interval(lower, upper)?;
        if !(lower <= zero_at && zero_at <= upper) {
            return Err(Error::InvalidParameter {
                name: "zero_at",
                value: zero_at,
                reason: "must lie inside the support",
            });
        }
        Ok(Density::Vanishing {
            lower,
            upper,
            zero_at,
        })
    }

    /// The density `4|1 − x|` on `[0.5, 1.5]`.
    pub fn vanishing_at_one() -> Self {
        Density::Vanishing {
            lower: 0.5,
            upper: 1.5,
            zero_at: 1.0,
        }
    }

    pub fn tabulated(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() != values.len() || knots.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: knots.len().max(2),
                got: values.len(),
            });
        }
        for w in knots.windows(2) {
            check_interval(w[0], w[1])?;
            if w[0] == w[1] {
                return Err(Error::InvalidParameter {
                    name: "knots",
                    value: w[0],
                    reason: "knots must be strictly increasing",
                });
            }
        }
        if let Some(&v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidParameter {
                name: "values",
                value: v,
                reason: "density values must be nonnegative",
            });
        }
        let density = Density::Tabulated { knots, values };
        let mass = density.mass_over(f64::NEG_INFINITY, f64::INFINITY)?;
        if (mass - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::DensityNotNormalized(mass));
        }
        Ok(density)
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            Density::Uniform { lower, upper } | Density::Vanishing { lower, upper, .. } => {
                (*lower, *upper)
            }
            Density::Tabulated { knots, .. } => (knots[0], knots[knots.len() - 1]),
        }
    }

    fn vanishing_norm(lower: f64, upper: f64, zero_at: f64) -> f64 {
        0.5 * ((zero_at - lower).powi(2) + (upper - zero_at).powi(2))
    }

    pub fn pdf(&self, t: f64) -> f64 {
        let (lo, hi) = self.support();
        if t < lo || t > hi {
            return 0.0;
        }
        match self {
            Density::Uniform { lower, upper } => 1.0 / (upper - lower),
            Density::Vanishing {
                lower,
                upper,
                zero_at,
            } => (t - zero_at).abs() / Density::vanishing_norm(*lower, *upper, *zero_at),
            Density::Tabulated { knots, values } => {
                let i = knots.partition_point(|k| *k <= t).clamp(1, knots.len() - 1);
                let w = (t - knots[i - 1]) / (knots[i] - knots[i - 1]);
                values[i - 1] + w * (values[i] - values[i - 1])
            }
        }
    }

    /// Cumulative distribution for the closed-form kinds.
    fn cdf_closed(&self, t: f64) -> Option<f64> {
        let (lo, hi) = self.support();
        let t = t.clamp(lo, hi);
        match self {
            Density::Uniform { lower, upper } => Some((t - lower) / (upper - lower)),
            Density::Vanishing {
                lower,
                upper,
                zero_at,
            } => {
                let z = 2.0 * Density::vanishing_norm(*lower, *upper, *zero_at);
                let left = (zero_at - lower).powi(2);
                let f = if t <= *zero_at {
                    left - (zero_at - t).powi(2)
                } else {
                    left + (t - zero_at).powi(2)
                };
                Some(f / z)
            }
            Density::Tabulated { .. } => None,
        }
    }

    fn mass_over(&self, a: f64, b: f64) -> Result<f64> {
        let (lo, hi) = self.support();
        let a = a.max(lo);
        let b = b.min(hi);
        if a >= b {
            return Ok(0.0);
        }
        if let (Some(fa), Some(fb)) = (self.cdf_closed(a), self.cdf_closed(b)) {
            return Ok(fb - fa);
        }
        let Density::Tabulated { knots, .. } = self else {
            unreachable!()
        };
        let mut breaks = vec![a];
        breaks.extend(knots.iter().copied().filter(|k| *k > a && *k < b));
        breaks.push(b);
        Ok(integrate_with_breaks(|t| self.pdf(t), &breaks, 1e-13)?.value)
    }

    pub fn cdf(&self, t: f64) -> f64 {
        match self.cdf_closed(t) {
            Some(v) => v,
            None => self
                .mass_over(f64::NEG_INFINITY, t)
                .expect("piecewise-linear integrand converges"),
        }
    }

    /// Inverse-CDF sample.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        match self {
            Density::Uniform { lower, upper } => lower + (upper - lower) * u,
            Density::Vanishing {
                lower,
                upper,
                zero_at,
            } => {
                let z = 2.0 * Density::vanishing_norm(*lower, *upper, *zero_at);
                let left = (zero_at - lower).powi(2);
                let target = u * z;
                let t = if target <= left {
                    zero_at - (left - target).sqrt()
                } else {
                    zero_at + (target - left).sqrt()
                };
                t.clamp(*lower, *upper)
            }
            Density::Tabulated { .. } => {
                let (mut lo, mut hi) = self.support();
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if self.cdf(mid) < u {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }

    /// Leading-order behaviour `p̃(ρ) ≈ C ρ^q` as `ρ → 0`, for the built-in
    /// kinds. `None` when the density has no closed-form local expansion.
    fn local_expansion(&self, x: f64) -> Option<(f64, f64)> {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return Some((0.0, 1.0));
        }
        let sides = if x == lo || x == hi { 1.0 } else { 2.0 };
        match self {
            Density::Uniform { lower, upper } => Some((sides / (upper - lower), 1.0)),
            Density::Vanishing {
                lower,
                upper,
                zero_at,
            } => {
                let z = Density::vanishing_norm(*lower, *upper, *zero_at);
                if x == *zero_at {
                    // ∫ |s| ds over each available side gives ρ²/2
                    Some((sides * 0.5 / z, 2.0))
                } else {
                    Some((sides * (x - zero_at).abs() / z, 1.0))
                }
            }
            Density::Tabulated { .. } => {
                let p = self.pdf(x);
                (p > 0.0).then_some((sides * p, 1.0))
            }
        }
    }
}

fn check_interval(lower: f64, upper: f64) -> Result<()> {
    if lower.is_finite() && upper.is_finite() && lower < upper {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "support",
            value: upper - lower,
            reason: "need finite lower < upper",
        })
    }
}

/// Probability mass of the closed ball of radius `ρ` around `x`.
pub fn ball_probability(density: &Density, x: f64, radius: f64) -> Result<f64> {
    nonnegative("radius", radius)?;
    Ok(density.mass_over(x - radius, x + radius)?.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvergenceFailure {
    /// `ρ(N)` increased between consecutive probes.
    RadiusIncreasing { n: u64 },
    /// `ρ(N)` does not tend to zero.
    RadiusNotVanishing,
    /// `p̃(N) < c N^(−1+ε)` at the first failing `n`.
    MassBelowThreshold { n: u64 },
    /// The ball mass decays faster than `N^(−1+ε)`; no failing `N` was located
    /// below the search cap.
    AsymptoticRate,
    /// The schedule exponent is not strictly below `1/d`.
    ExponentTooLarge,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceVerdict {
    pub satisfied: bool,
    pub c: Option<f64>,
    pub epsilon: Option<f64>,
    pub first_failing_n: Option<u64>,
    pub failure: Option<ConvergenceFailure>,
}

impl ConvergenceVerdict {
    fn pass(c: f64, epsilon: f64) -> Self {
        ConvergenceVerdict {
            satisfied: true,
            c: Some(c),
            epsilon: Some(epsilon),
            first_failing_n: None,
            failure: None,
        }
    }

    fn fail(failure: ConvergenceFailure) -> Self {
        let first_failing_n = match failure {
            ConvergenceFailure::RadiusIncreasing { n }
            | ConvergenceFailure::MassBelowThreshold { n } => Some(n),
            _ => None,
        };
        ConvergenceVerdict {
            satisfied: false,
            c: None,
            epsilon: None,
            first_failing_n,
            failure: Some(failure),
        }
    }
}

fn probe_points(range: &RangeInclusive<u64>) -> Vec<u64> {
    let (start, end) = (*range.start().max(&1), *range.end());
    if end < start {
        return Vec::new();
    }
    if end - start < MAX_PROBES {
        return (start..=end).collect();
    }
    let ratio = (end as f64 / start as f64).ln() / (MAX_PROBES - 1) as f64;
    let mut pts: Vec<u64> = (0..MAX_PROBES)
        .map(|i| ((start as f64) * (ratio * i as f64).exp()).round() as u64)
        .collect();
    pts.push(end);
    pts.dedup();
    pts
}

fn mass_ok(
    density: &Density,
    x: f64,
    schedule: &RadiusSchedule,
    c: f64,
    epsilon: f64,
    n: u64,
) -> Result<bool> {
    let mass = ball_probability(density, x, schedule.radius(n as usize))?;
    Ok(mass >= c * (n as f64).powf(-1.0 + epsilon))
}

/// Check the sufficient condition for `|𝔹_ρ(N)(x)| → ∞` almost surely:
/// `ρ` non-increasing and vanishing, and `p̃(N) ≥ c N^(−1+ε)`.
///
/// The mass condition is probed over `n_range` and, for the built-in
/// densities, compared analytically through the leading-order exponent of the
/// ball mass. When only the asymptotic comparison fails, the first failing `N`
/// beyond the probed range is located by doubling and bisection.
pub fn check_mass_condition(
    density: &Density,
    x: f64,
    schedule: &RadiusSchedule,
    c: f64,
    epsilon: f64,
    n_range: RangeInclusive<u64>,
) -> Result<ConvergenceVerdict> {
    positive("c", c)?;
    positive("epsilon", epsilon)?;
    let probes = probe_points(&n_range);
    let mut prev = f64::INFINITY;
    for &n in &probes {
        let r = schedule.radius(n as usize);
        if r > prev {
            return Ok(ConvergenceVerdict::fail(
                ConvergenceFailure::RadiusIncreasing { n },
            ));
        }
        prev = r;
    }
    if schedule.exponent() <= 0.0 {
        return Ok(ConvergenceVerdict::fail(
            ConvergenceFailure::RadiusNotVanishing,
        ));
    }
    for &n in &probes {
        if !mass_ok(density, x, schedule, c, epsilon, n)? {
            return Ok(ConvergenceVerdict::fail(
                ConvergenceFailure::MassBelowThreshold { n },
            ));
        }
    }
    if let Some((lead, order)) = density.local_expansion(x) {
        let decay = order * schedule.exponent();
        let allowed = 1.0 - epsilon;
        let leading = lead * schedule.coefficient().powf(order);
        let ok = if lead == 0.0 {
            false
        } else if (decay - allowed).abs() <= EXPONENT_TOL {
            leading >= c
        } else {
            decay < allowed
        };
        if !ok {
            let last = probes.last().copied().unwrap_or(0);
            return Ok(ConvergenceVerdict::fail(
                match first_failure_beyond(density, x, schedule, c, epsilon, last)? {
                    Some(n) => ConvergenceFailure::MassBelowThreshold { n },
                    None => ConvergenceFailure::AsymptoticRate,
                },
            ));
        }
    }
    Ok(ConvergenceVerdict::pass(c, epsilon))
}

fn first_failure_beyond(
    density: &Density,
    x: f64,
    schedule: &RadiusSchedule,
    c: f64,
    epsilon: f64,
    last_ok: u64,
) -> Result<Option<u64>> {
    let mut lo = last_ok.max(1);
    let mut hi = lo;
    loop {
        hi = match hi.checked_mul(2) {
            Some(h) if h < (1u64 << 53) => h,
            _ => return Ok(None),
        };
        if !mass_ok(density, x, schedule, c, epsilon, hi)? {
            break;
        }
        lo = hi;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if mass_ok(density, x, schedule, c, epsilon, mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(hi))
}

/// Search `ε ∈ {0.95, 0.90, …, 0.05}` (strongest first) for a witness pair,
/// fitting `c` as the smallest `p̃(N) N^(1−ε)` over the probed range.
pub fn search_witness(
    density: &Density,
    x: f64,
    schedule: &RadiusSchedule,
    n_range: RangeInclusive<u64>,
) -> Result<ConvergenceVerdict> {
    let probes = probe_points(&n_range);
    let mut last = None;
    for step in (1..=19).rev() {
        let epsilon = step as f64 * 0.05;
        let mut c = f64::INFINITY;
        for &n in &probes {
            let mass = ball_probability(density, x, schedule.radius(n as usize))?;
            c = c.min(mass * (n as f64).powf(1.0 - epsilon));
        }
        if !(c > 0.0 && c.is_finite()) {
            continue;
        }
        let verdict = check_mass_condition(density, x, schedule, c, epsilon, n_range.clone())?;
        if verdict.satisfied {
            return Ok(verdict);
        }
        last = Some(verdict);
    }
    Ok(last.unwrap_or(ConvergenceVerdict::fail(ConvergenceFailure::AsymptoticRate)))
}

/// For densities positive around `x` in dimension `d`: the schedule needs
/// `ρ(N) ≥ c N^(−1/d + ε)` with `ε > 0` and `ρ(N) → 0`. For `ρ = c N^(−α)`
/// this holds iff `0 < α < 1/d`, with witnesses `c` and `ε = 1/d − α`.
pub fn check_schedule_exponent(dimension: u32, schedule: &RadiusSchedule) -> ConvergenceVerdict {
    assert!(dimension >= 1, "dimension must be at least 1");
    let alpha = schedule.exponent();
    if alpha <= 0.0 {
        return ConvergenceVerdict::fail(ConvergenceFailure::RadiusNotVanishing);
    }
    let epsilon = 1.0 / dimension as f64 - alpha;
    if epsilon > EXPONENT_TOL {
        ConvergenceVerdict::pass(schedule.coefficient(), epsilon)
    } else {
        ConvergenceVerdict::fail(ConvergenceFailure::ExponentTooLarge)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `k`-th central moment of a Bernoulli(`p`) variable:
/// `Σ_{i=0}^{k−1} (−1)^i C(k,i) p^(i+1) + (−p)^k`.
///
/// Panics if `p ∉ [0, 1]` or `k = 0`.
pub fn bernoulli_central_moment(p: f64, k: u32) -> f64 {
    assert!((0.0..=1.0).contains(&p), "p must lie in [0, 1]");
    assert!(k >= 1, "moment order must be positive");
    let sum: f64 = (0..k)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(k, i) * p.powi(i as i32 + 1)
        })
        .sum();
    sum + (-p).powi(k as i32)
}

fn compositions(
    total: u32,
    parts: u32,
    min_part: u32,
    out: &mut Vec<Vec<u32>>,
    cur: &mut Vec<u32>,
) {
    if parts == 0 {
        if total == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let mut first = min_part;
    while first + min_part * (parts - 1) <= total {
        cur.push(first);
        compositions(total - first, parts - 1, min_part, out, cur);
        cur.pop();
        first += 1;
    }
}

fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// Coefficients `α_1, …, α_k` of the binomial central-moment bound:
/// `α_m = Σ (2k; i_1..i_m) Π 2^(i_j) / m!` over compositions of `2k` into `m`
/// parts, each part at least 2. Exact integer arithmetic, `k ≤ 8`.
pub fn moment_bound_coefficients(k: u32) -> Result<Vec<f64>> {
    if !(1..=8).contains(&k) {
        return Err(Error::UnsupportedMomentOrder(k));
    }
    let order = 2 * k;
    let numerator = factorial(order);
    let weight = 1u128 << order;
    Ok((1..=k)
        .map(|m| {
            let mut comps = Vec::new();
            compositions(order, m, 2, &mut comps, &mut Vec::new());
            let total: u128 = comps
                .iter()
                .map(|c| numerator / c.iter().map(|&i| factorial(i)).product::<u128>() * weight)
                .sum();
            total as f64 / factorial(m) as f64
        })
        .collect())
}

/// Upper bound `Σ_{m=1}^k (Np)^m α_m` on the `2k`-th central moment of a
/// Binomial(`N`, `p`) variable.
pub fn binomial_moment_bound(n: u64, p: f64, k: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "N",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "must lie in [0, 1]",
        });
    }
    let alpha = moment_bound_coefficients(k)?;
    let np = n as f64 * p;
    Ok(alpha
        .iter()
        .enumerate()
        .map(|(i, a)| np.powi(i as i32 + 1) * a)
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    pub radius: f64,
    pub mean_count: f64,
    pub min_count: usize,
    pub expected_count: f64,
}

/// Monte Carlo illustration of ball-population growth: for each `N`, draw `N`
/// i.i.d. samples `trials` times and count those within `ρ(N)` of `x`.
pub fn empirical_ball_growth(
    density: &Density,
    x: f64,
    schedule: &RadiusSchedule,
    n_list: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<GrowthRow>> {
    positive("trials", trials as f64)?;
    n_list
        .iter()
        .map(|&n| {
            let radius = schedule.radius(n);
            let counts: Vec<usize> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = cell_rng(seed, &[tag("ball-growth"), n as u64, t as u64]);
                    (0..n)
                        .filter(|_| (density.sample(&mut rng) - x).abs() <= radius)
                        .count()
                })
                .collect();
            let mass = ball_probability(density, x, radius)?;
            Ok(GrowthRow {
                n,
                radius,
                mean_count: counts.iter().sum::<usize>() as f64 / trials as f64,
                min_count: counts.iter().copied().min().unwrap_or(0),
                expected_count: n as f64 * mass,
            })
        })
        .collect()
}
