//! Exact posterior mean and variance, and how the variance shrinks as
//! training points are added.

use postvar::{Kernel, Posterior, TrainingSet};

fn main() -> postvar::Result<()> {
    let kernel = Kernel::squared_exponential(1.0, 1.0)?;
    let xs = [0.6, 0.8, 1.1, 1.4];
    let ys: Vec<f64> = xs.iter().map(|x: &f64| (3.0 * x).sin()).collect();
    let train = TrainingSet::from_scalars(&xs, 0.1)?.with_outputs(ys)?;
    let post = Posterior::new(&kernel, &train)?;
    println!("{:>6} {:>10} {:>10}", "x", "mean", "variance");
    for i in 0..=10 {
        let x = 0.5 + 0.1 * i as f64;
        println!(
            "{x:>6.2} {:>10.5} {:>10.5}",
            post.mean(&[x])?,
            post.variance(&[x])?
        );
    }

    // adding data never increases the variance
    let mut growing = TrainingSet::empty(1, 0.1)?;
    let mut last = kernel.prior_variance(&[1.0]);
    for x in [1.3, 0.7, 1.05, 0.95, 1.0] {
        growing.push(&[x])?;
        let v = postvar::posterior_variance(&growing, &kernel, &[1.0])?;
        println!("N = {}  sigma^2(1) = {v:.6}", growing.len());
        assert!(v <= last + 1e-12);
        last = v;
    }
    Ok(())
}
