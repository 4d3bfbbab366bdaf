use nalgebra::{DMatrix, SymmetricEigen};
use postvar::convergence::search_witness;
use postvar::learning_curve::{bound_curve, greedy_select_n, monte_carlo_curve};
use postvar::{
    ball_count, ball_probability, check_mass_condition, check_schedule_exponent, e1_bound,
    e2_bound, e_rho_bound, isotropic_bound, lipschitz_bound, nearest_neighbours, one_point_bound,
    posterior_variance, two_point_bound, CurveOptions, Density, Domain, Kernel, KernelKind,
    LipschitzBound, RadiusSchedule, TrainingSet,
};
use proptest::prelude::*;

fn kind_strategy() -> impl Strategy<Value = KernelKind> {
    prop_oneof![
        Just(KernelKind::SquaredExponential),
        Just(KernelKind::Matern12),
        (0.3..3.0f64).prop_map(|alpha| KernelKind::RationalQuadratic { alpha }),
        (0.5..3.0f64).prop_map(|period| KernelKind::Periodic { period }),
        (1..=3u32, 0.2..2.0f64)
            .prop_map(|(degree, offset)| KernelKind::Polynomial { degree, offset }),
        (0.2..2.0f64, 0.2..2.0f64).prop_map(|(b, w)| KernelKind::NeuralNetwork {
            bias_variance: b,
            weight_variance: w
        }),
    ]
}

fn kernel_strategy() -> impl Strategy<Value = Kernel> {
    (kind_strategy(), 0.2..2.0f64, 0.5..2.0f64)
        .prop_map(|(kind, l, sf2)| Kernel::new(kind, l, sf2).unwrap())
}

fn decreasing_kernel() -> impl Strategy<Value = Kernel> {
    kernel_strategy().prop_filter("decreasing", Kernel::is_decreasing)
}

fn isotropic_kernel() -> impl Strategy<Value = Kernel> {
    kernel_strategy().prop_filter("isotropic", Kernel::is_isotropic)
}

fn scalars(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.5..1.5f64, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernels_are_symmetric(k in kernel_strategy(), pairs in prop::collection::vec((0.5..1.5f64, 0.5..1.5f64), 16)) {
        for (x, y) in pairs {
            prop_assert_eq!(k.eval_scalar(x, y), k.eval_scalar(y, x));
        }
    }

    #[test]
    fn lipschitz_constant_bounds_slopes(
        k in kernel_strategy(),
        triples in prop::collection::vec((0.5..1.5f64, 0.5..1.5f64, 0.5..1.5f64), 160),
    ) {
        let lip = k.lipschitz_constant(&Domain::interval(0.5, 1.5).unwrap()).value;
        for (x, y, z) in triples {
            let slope = (k.eval_scalar(y, z) - k.eval_scalar(x, z)).abs();
            prop_assert!(slope <= lip * (y - x).abs() + 1e-12, "{} > {} |{} - {}|", slope, lip, y, x);
        }
    }

    #[test]
    fn gram_matrices_are_psd(k in kernel_strategy(), xs in scalars(1..=20)) {
        let n = xs.len();
        let g = DMatrix::from_fn(n, n, |i, j| k.eval_scalar(xs[i], xs[j]));
        let trace = g.trace();
        let min = SymmetricEigen::new(g).eigenvalues.min();
        prop_assert!(min >= -1e-8 * trace / n as f64, "min eigenvalue {}", min);
    }

    #[test]
    fn gershgorin_bound_on_gram(k in kernel_strategy(), xs in scalars(1..=30)) {
        let n = xs.len();
        let train = TrainingSet::from_scalars(&xs, 0.1).unwrap();
        let g = DMatrix::from_row_slice(n, n, &train.gram(&k));
        let largest = g.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
        let lambda = SymmetricEigen::new(g).eigenvalues.max();
        prop_assert!(lambda <= n as f64 * largest * (1.0 + 1e-12));
    }

    #[test]
    fn variance_between_zero_and_prior(k in kernel_strategy(), xs in scalars(0..=30), x in 0.5..1.5f64, noise in 0.01..1.0f64) {
        let train = TrainingSet::from_scalars(&xs, noise).unwrap();
        let v = posterior_variance(&train, &k, &[x]).unwrap();
        prop_assert!(v >= 0.0 && v <= k.prior_variance(&[x]));
    }

    #[test]
    fn adding_a_point_never_increases_variance(
        k in kernel_strategy(), xs in scalars(0..=30), extra in 0.5..1.5f64, x in 0.5..1.5f64, noise in 0.01..1.0f64,
    ) {
        let mut train = TrainingSet::from_scalars(&xs, noise).unwrap();
        let before = posterior_variance(&train, &k, &[x]).unwrap();
        train.push(&[extra]).unwrap();
        let after = posterior_variance(&train, &k, &[x]).unwrap();
        prop_assert!(after <= before + 1e-10);
    }

    #[test]
    fn bounds_hold_on_sampling_domain(
        k in kernel_strategy(), xs in scalars(1..=200), x in 0.5..1.5f64, noise in 0.01..1.0f64, frac in 0.0..1.0f64,
    ) {
        let train = TrainingSet::from_scalars(&xs, noise).unwrap();
        let exact = posterior_variance(&train, &k, &[x]).unwrap();
        let lip = k.lipschitz_constant(&Domain::interval(0.5, 1.5).unwrap()).value;
        let radius = frac * (k.prior_variance(&[x]) / lip).min(1.0);
        let count = ball_count(&train, &[x], radius).count;
        prop_assert!(lipschitz_bound(&k, lip, &[x], count, radius, noise).unwrap() >= exact - 1e-10);
        if k.is_decreasing() && count > 0 {
            prop_assert!(isotropic_bound(&k, count, radius, noise).unwrap() >= exact - 1e-10);
        }
        if k.is_isotropic() {
            let nb = nearest_neighbours(&train, &[x]).unwrap();
            prop_assert!(one_point_bound(&k, nb.nearest, noise).unwrap() >= exact - 1e-10);
            if let Some((t2, d)) = nb.second {
                prop_assert!(two_point_bound(&k, nb.nearest, t2, d, noise).unwrap() >= exact - 1e-10);
            }
        }
    }

    #[test]
    fn one_and_two_point_consistency(k in decreasing_kernel(), a in 0.0..1.0f64, b in 0.0..1.0f64, noise in 0.01..1.0f64) {
        prop_assert_eq!(
            isotropic_bound(&k, 1, a, noise).unwrap(),
            one_point_bound(&k, a, noise).unwrap()
        );
        // two inputs on either side of the test point
        let two = two_point_bound(&k, a, b, a + b, noise).unwrap();
        prop_assert!(two <= one_point_bound(&k, a.min(b), noise).unwrap() + 1e-12);
    }

    #[test]
    fn bounds_shrink_with_ball_count(k in decreasing_kernel(), frac in 0.0..1.0f64, noise in 0.01..1.0f64, count in 1usize..200) {
        let lip = k.lipschitz_constant(&Domain::interval(0.5, 1.5).unwrap()).value;
        let radius = frac * k.k0().unwrap() / lip;
        let lb = LipschitzBound::new(&k, &[1.0], lip, noise).unwrap();
        prop_assert!(lb.evaluate(count + 1, radius).unwrap() <= lb.evaluate(count, radius).unwrap() + 1e-15);
        prop_assert!(
            isotropic_bound(&k, count + 1, radius, noise).unwrap()
                <= isotropic_bound(&k, count, radius, noise).unwrap() + 1e-15
        );
    }

    #[test]
    fn ball_probability_non_decreasing(
        vanish in any::<bool>(), x in 0.5..1.5f64, r1 in 0.0..1.2f64, r2 in 0.0..1.2f64,
    ) {
        let d = if vanish { Density::vanishing_at_one() } else { Density::uniform(0.5, 1.5).unwrap() };
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let p_lo = ball_probability(&d, x, lo).unwrap();
        let p_hi = ball_probability(&d, x, hi).unwrap();
        prop_assert!(p_lo <= p_hi + 1e-15);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&p_hi));
        // continuity
        let p_near = ball_probability(&d, x, hi + 1e-9).unwrap();
        prop_assert!((p_near - p_hi).abs() < 1e-8);
    }

    #[test]
    fn schedule_check_agrees_with_mass_check(alpha in 0.0..1.5f64) {
        let schedule = RadiusSchedule::new(0.5, alpha).unwrap();
        let positive = check_schedule_exponent(1, &schedule);
        let mass = search_witness(&Density::uniform(0.5, 1.5).unwrap(), 1.0, &schedule, 1..=100_000).unwrap();
        // away from the boundary exponent the two checks must agree
        prop_assume!((alpha - 1.0).abs() > 0.06 && alpha > 1e-9);
        prop_assert_eq!(positive.satisfied, mass.satisfied, "alpha {}", alpha);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn learning_curve_quadrature_is_honest(k in isotropic_kernel(), n in 2usize..3000, exp in 5i32..9) {
        let tol = 10f64.powi(-exp);
        let half = 0.5 * tol;
        let noise = 0.05;
        let a = e1_bound(&k, noise, n, tol).unwrap();
        let b = e1_bound(&k, noise, n, half).unwrap();
        prop_assert!((a - b).abs() < tol, "e1 {} vs {}", a, b);
        let a = e2_bound(&k, noise, n, tol).unwrap();
        let b = e2_bound(&k, noise, n, half).unwrap();
        prop_assert!((a - b).abs() < tol, "e2 {} vs {}", a, b);
        if n >= 6 {
            let a = e_rho_bound(&k, noise, n, 3, &CurveOptions::with_tol(tol)).unwrap();
            let b = e_rho_bound(&k, noise, n, 3, &CurveOptions::with_tol(half)).unwrap();
            prop_assert!((a - b).abs() < tol, "e_rho {} vs {}", a, b);
        }
    }
}

#[test]
fn decreasing_flag_is_honest() {
    let kinds = [
        KernelKind::SquaredExponential,
        KernelKind::Matern12,
        KernelKind::rational_quadratic(),
        KernelKind::periodic(),
    ];
    for kind in kinds {
        let k = Kernel::new(kind, 0.7, 1.3).unwrap();
        let values: Vec<f64> = (0..1000)
            .map(|i| k.eval_iso(i as f64 * 0.005).unwrap())
            .collect();
        let monotone = values.windows(2).all(|w| w[1] <= w[0]);
        assert_eq!(monotone, k.is_decreasing(), "{}", k.name());
    }
}

#[test]
fn lipschitz_bound_vanishes_under_admissible_schedule() {
    // equally spaced inputs keep the ball population growing like 2ρN
    let k = Kernel::squared_exponential(1.0, 1.0).unwrap();
    let lip = k
        .lipschitz_constant(&Domain::interval(0.5, 1.5).unwrap())
        .value;
    let schedule = RadiusSchedule::new(1.0, 0.5).unwrap();
    let mut previous = f64::INFINITY;
    for n in [100usize, 1_000, 10_000, 100_000, 1_000_000] {
        let xs: Vec<f64> = (0..n).map(|i| 0.5 + (i as f64 + 0.5) / n as f64).collect();
        let train = TrainingSet::from_scalars(&xs, 0.1).unwrap();
        let radius = schedule.radius_at(n, &k, &[1.0], lip);
        let count = ball_count(&train, &[1.0], radius).count;
        let bound = lipschitz_bound(&k, lip, &[1.0], count, radius, 0.1).unwrap();
        assert!(bound < previous);
        previous = bound;
    }
    assert!(previous < 0.005, "bound at N = 1e6 is {previous}");
}

#[test]
fn bounds_dominate_monte_carlo_reference() {
    let k = Kernel::squared_exponential(0.3, 1.0).unwrap();
    let grid = [1, 3, 10, 30, 100, 300];
    let rows = bound_curve(&k, 0.05, &grid, &CurveOptions::default()).unwrap();
    let mc = monte_carlo_curve(&k, 0.05, &grid, 100, 20, 5).unwrap();
    for (b, m) in rows.iter().zip(&mc) {
        let floor = m.mean - 3.0 * m.std_error;
        assert!(
            b.e1 >= floor && b.e2 >= floor && b.e_rho >= floor,
            "N = {}",
            b.n_samples
        );
    }
}

#[test]
fn radius_bound_wins_at_ten_thousand() {
    let k = Kernel::squared_exponential(0.3, 1.0).unwrap();
    let opts = CurveOptions::default();
    let choice = greedy_select_n(&k, 0.05, 10_000, 1, &opts).unwrap();
    let e1 = e1_bound(&k, 0.05, 10_000, opts.quad_tol).unwrap();
    let e2 = e2_bound(&k, 0.05, 10_000, opts.quad_tol).unwrap();
    assert!(
        choice.bound < e1 && choice.bound < e2,
        "{choice:?} vs {e1} {e2}"
    );
}

#[test]
fn vanishing_density_first_failure() {
    let v = check_mass_condition(
        &Density::vanishing_at_one(),
        1.0,
        &RadiusSchedule::new(1.0, 0.5).unwrap(),
        1.0,
        0.5,
        1..=1000,
    )
    .unwrap();
    assert_eq!(v.first_failing_n, Some(17));
}
