//! When does the number of training points near x = 1 grow without bound?

use postvar::convergence::{empirical_ball_growth, search_witness};
use postvar::{check_mass_condition, check_schedule_exponent, Density, RadiusSchedule};

fn main() -> postvar::Result<()> {
    let uniform = Density::uniform(0.5, 1.5)?;
    let vanishing = Density::vanishing_at_one();
    let sqrt = RadiusSchedule::new(1.0, 0.5)?;

    let v = check_mass_condition(&uniform, 1.0, &sqrt, 1.0, 0.5, 1..=100_000)?;
    println!("uniform,   rho = N^-1/2, c = 1, eps = 1/2: {v:?}");
    let v = check_mass_condition(&vanishing, 1.0, &sqrt, 1.0, 0.5, 1..=100_000)?;
    println!("vanishing, rho = N^-1/2, c = 1, eps = 1/2: {v:?}");
    let slow = RadiusSchedule::new(1.0, 0.25)?;
    let v = search_witness(&vanishing, 1.0, &slow, 1..=100_000)?;
    println!("vanishing, rho = N^-1/4, searched witness: {v:?}");

    for alpha in [0.0, 0.5, 1.0] {
        let v = check_schedule_exponent(1, &RadiusSchedule::new(1.0, alpha)?);
        println!(
            "positive density, d = 1, alpha = {alpha}: satisfied = {}",
            v.satisfied
        );
    }

    println!(
        "\n{:>7} {:>9} {:>10} {:>6} {:>10}",
        "N", "rho", "mean|B|", "min", "E|B|"
    );
    for row in empirical_ball_growth(&vanishing, 1.0, &slow, &[10, 100, 1000, 10_000], 40, 3)? {
        println!(
            "{:>7} {:>9.5} {:>10.2} {:>6} {:>10.2}",
            row.n, row.radius, row.mean_count, row.min_count, row.expected_count
        );
    }
    Ok(())
}
