//! Evaluate every kernel family and its Lipschitz constant on [0.5, 1.5].

use postvar::{Domain, Kernel, KernelKind};

fn main() -> postvar::Result<()> {
    let domain = Domain::interval(0.5, 1.5)?;
    let kinds = [
        KernelKind::SquaredExponential,
        KernelKind::Matern12,
        KernelKind::rational_quadratic(),
        KernelKind::periodic(),
        KernelKind::polynomial(),
        KernelKind::neural_network(),
    ];
    println!(
        "{:<22} {:>10} {:>10} {:>10} {:>12}  method",
        "kernel", "k(1,1)", "k(1,1.2)", "k(1,1.5)", "L_k"
    );
    for kind in kinds {
        let k = Kernel::new(kind, 1.0, 1.0)?;
        let lip = k.lipschitz_constant(&domain);
        println!(
            "{:<22} {:>10.6} {:>10.6} {:>10.6} {:>12.6}  {:?}",
            k.name(),
            k.eval_scalar(1.0, 1.0),
            k.eval_scalar(1.0, 1.2),
            k.eval_scalar(1.0, 1.5),
            lip.value,
            lip.method,
        );
    }

    // isotropic kernels also expose k(τ)
    let se = Kernel::squared_exponential(0.3, 1.0)?;
    for tau in [0.0, 0.1, 0.3, 0.6] {
        println!("SE(l=0.3) k({tau}) = {:.6}", se.eval_iso(tau)?);
    }
    Ok(())
}
