//! Compare the exact posterior variance at x = 1 with the ball bounds and the
//! nearest-neighbour bounds as N grows.

use postvar::{bound_report, BoundForm, Domain, Kernel, RadiusSchedule, TrainingSet};
use rand::{Rng, SeedableRng};

fn main() -> postvar::Result<()> {
    let kernel = Kernel::squared_exponential(1.0, 1.0)?;
    let lipschitz = kernel
        .lipschitz_constant(&Domain::interval(0.5, 1.5)?)
        .value;
    let schedule = RadiusSchedule::new(1.0, 1.0 / 3.0)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);

    println!(
        "{:>6} {:>8} {:>5} {:>11} {:>11} {:>11} {:>11} {:>11}",
        "N", "rho", "|B|", "exact", "isotropic", "lipschitz", "one-point", "two-point"
    );
    for n in [1, 10, 100, 1000] {
        let xs: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
        let train = TrainingSet::from_scalars(&xs, 0.1)?;
        let r = bound_report(
            &kernel,
            &train,
            &[1.0],
            lipschitz,
            &schedule,
            BoundForm::Standard,
        )?;
        let show = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.3e}"));
        println!(
            "{:>6} {:>8.4} {:>5} {:>11.3e} {:>11} {:>11.3e} {:>11} {:>11}",
            n,
            r.radius,
            r.ball_count,
            r.exact,
            show(r.isotropic_bound),
            r.lipschitz_bound,
            show(r.one_point_bound),
            show(r.two_point_bound),
        );
    }
    Ok(())
}
