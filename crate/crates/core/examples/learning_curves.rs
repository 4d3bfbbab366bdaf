//! Average learning curve for 1-D uniform inputs against its three bounds.

use postvar::learning_curve::{bound_curve, monte_carlo_curve};
use postvar::{CurveOptions, Kernel, SpanDensity};

fn main() -> postvar::Result<()> {
    let kernel = Kernel::squared_exponential(0.3, 1.0)?;
    let noise = 0.05;
    let grid = [1, 5, 10, 20, 50, 100, 200, 500, 1000, 2000];
    let opts = CurveOptions::default();
    let bounds = bound_curve(&kernel, noise, &grid, &opts)?;
    let mc = monte_carlo_curve(&kernel, noise, &grid[..8], 200, 20, 11)?;

    println!(
        "{:>5} {:>16} {:>9} {:>9} {:>9} {:>3}",
        "N", "e_num (se)", "e_rho", "e1", "e2", "n"
    );
    for (i, b) in bounds.iter().enumerate() {
        let num = mc.get(i).map_or("-".to_string(), |m| {
            format!("{:.4} ({:.4})", m.mean, m.std_error)
        });
        println!(
            "{:>5} {:>16} {:>9.5} {:>9.5} {:>9.5} {:>3}",
            b.n_samples, num, b.e_rho, b.e1, b.e2, b.n_selected
        );
    }
    println!(
        "\nlimits: e1 -> {:.6}, e2 -> {:.6}",
        noise * (2.0 + noise) / (1.0 + noise),
        noise * (3.0 + noise) / (2.0 + noise)
    );

    // the alternative span weight does not integrate to one
    let unnormalized = CurveOptions {
        span_density: SpanDensity::Unnormalized,
        ..opts
    };
    let n = 2;
    println!(
        "N = 20, n = {n}: order statistics {:.5}, alternative weight {:.5}",
        postvar::e_rho_bound(&kernel, noise, 20, n, &opts)?,
        postvar::e_rho_bound(&kernel, noise, 20, n, &unnormalized)?
    );
    Ok(())
}
