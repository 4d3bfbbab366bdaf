//! List the shipped experiment presets and run two of them at reduced size.

use postvar::experiment::{preset, presets, run_convergence_check, run_variance_experiment};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for p in presets() {
        println!("{:<32} {}", p.name, p.summary());
    }

    let mut cfg = preset("variance-vanishing-matern")?.config();
    cfg.n_max = 200;
    let csv = run_variance_experiment(&cfg)?;
    println!("\n{}", csv.lines().take(6).collect::<Vec<_>>().join("\n"));
    println!("... {} rows", csv.lines().count() - 1);

    let out = run_convergence_check(&preset("convergence-vanishing")?.config())?;
    println!("\n{}", out.report);
    Ok(())
}
