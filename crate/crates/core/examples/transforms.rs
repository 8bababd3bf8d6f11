//! Scaling identities of the inner rescaling, and λ-absorption of a computed solution.

use bubbletower::diagnostics::FnRadial;
use bubbletower::ode::{integrate, EventSpec, IntegratorOptions};
use bubbletower::transforms::{absorbed_residual, lambda_absorb, norm_invariance_check};
use bubbletower::Params;

fn main() -> bubbletower::Result<()> {
    let n = 7;
    let f = FnRadial(|r: f64| ((1.0 - r) * (1.0 + 2.0 * r * r), 4.0 * r - 6.0 * r * r - 1.0));
    for m in [1e-2, 1.0, 1e4] {
        let g = norm_invariance_check(&f, n, 1.0, m)?;
        println!(
            "M = {m:<8e} gradient {:.2e} critical {:.2e} L2 {:.2e}",
            g.gradient, g.critical, g.l2_scaling
        );
    }

    let lambda = 3.0;
    let p = Params::new(n, lambda)?;
    let prof = integrate(
        &p,
        40.0,
        1.0,
        EventSpec::default(),
        IntegratorOptions::default(),
    )?;
    let rho: Vec<f64> = (1..=10).map(|i| lambda.sqrt() * i as f64 / 10.0).collect();
    for (x, w, dw) in lambda_absorb(&prof, n, lambda, &rho)?.iter().step_by(3) {
        println!("ρ = {x:.4}  w = {w:>12.6}  w' = {dw:>12.6}");
    }
    println!(
        "λ-free residual {:.2e}",
        absorbed_residual(&prof, n, lambda, &rho)?
    );
    Ok(())
}
