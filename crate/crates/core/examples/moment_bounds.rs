//! Central moments of Bernoulli and binomial counts, and the polynomial
//! upper bound on even binomial central moments.

use postvar::{bernoulli_central_moment, binomial_moment_bound, moment_bound_coefficients};

fn binomial_central_moment(n: u64, p: f64, order: i32) -> f64 {
    let mean = n as f64 * p;
    let mut choose = 1.0;
    let mut total = 0.0;
    for j in 0..=n {
        if j > 0 {
            choose *= (n - j + 1) as f64 / j as f64;
        }
        let pmf = choose * p.powi(j as i32) * (1.0 - p).powi((n - j) as i32);
        total += pmf * (j as f64 - mean).powi(order);
    }
    total
}

fn main() -> postvar::Result<()> {
    for k in 1..=4 {
        let row: Vec<String> = [0.1, 0.3, 0.5]
            .iter()
            .map(|&p| format!("{:+.6}", bernoulli_central_moment(p, k)))
            .collect();
        println!("E[(X-p)^{k}] for p = 0.1, 0.3, 0.5: {}", row.join("  "));
    }
    for k in 1..=3 {
        println!("alpha_m for k = {k}: {:?}", moment_bound_coefficients(k)?);
    }
    println!(
        "\n{:>4} {:>5} {:>3} {:>14} {:>14}",
        "N", "p", "k", "exact", "bound"
    );
    for (n, p) in [(10, 0.2), (30, 0.05), (30, 0.5)] {
        for k in 1..=3 {
            let exact = binomial_central_moment(n, p, 2 * k as i32);
            let bound = binomial_moment_bound(n, p, k)?;
            println!("{n:>4} {p:>5} {k:>3} {exact:>14.6} {bound:>14.6}");
        }
    }
    Ok(())
}
