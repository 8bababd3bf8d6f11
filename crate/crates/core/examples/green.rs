//! The outer profile λ^{-(n-2)/(2n-8)} u against c̃ G(·, 0) on a fixed annulus.

use bubbletower::asymptotics::{green_comparison, linspace};
use bubbletower::bubble::constants;
use bubbletower::green::GreenBall;
use bubbletower::shooting::{continuation_sweep, SolveOptions};

fn main() -> bubbletower::Result<()> {
    let n = 7;
    let consts = constants(n)?;
    let g = GreenBall::new(n)?;
    println!(
        "G(0.5, 0) = {:.6}, ∂rG(0.5, 0) = {:.6}",
        g.at_center(0.5)?,
        g.gradient_at_center(0.5)?
    );

    let grid = linspace(0.2, 0.8, 301);
    for s in continuation_sweep(
        n,
        &[4.0, 1.0, 0.25, 0.0625],
        2,
        &SolveOptions::default(),
        false,
    )? {
        let s = s?;
        let scale = s.params.lambda.powf(-s.params.exponents.green_exp()?);
        let (dv, dg) = green_comparison(&s.profile, &consts, (0.2, 0.8), &grid)?;
        println!(
            "λ = {:<7} scaled u(0.5) = {:>10.4}  c̃G = {:>10.4}  sup gaps {dv:.4e} {dg:.4e}",
            s.params.lambda,
            scale * s.profile.value(0.5),
            consts.c_tilde * g.at_center(0.5)?
        );
    }
    Ok(())
}
