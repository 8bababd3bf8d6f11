//! Integrates the λ = 0 equation from u(0) = 1 and compares with the unit bubble.

use bubbletower::bubble::Bubble;
use bubbletower::ode::{integrate, EventSpec, IntegratorOptions};
use bubbletower::Params;

fn main() -> bubbletower::Result<()> {
    for n in [7, 9] {
        let p = Params::limiting(n)?;
        let prof = integrate(
            &p,
            1.0,
            10.0,
            EventSpec::default(),
            IntegratorOptions::direct(),
        )?;
        let b = Bubble::unit(n);
        let mut sup: f64 = 0.0;
        for i in 0..=1000 {
            let r = i as f64 / 100.0;
            sup = sup.max((prof.value(r) - b.eval(r)).abs());
        }
        println!(
            "n = {n}: {} knots, sup |u - δ| on [0, 10] = {sup:.3e}",
            prof.knots().len()
        );
    }
    Ok(())
}
