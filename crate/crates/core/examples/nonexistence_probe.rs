//! Counts interior zeros against amplitude for n = 4, where small λ admits no
//! two-signed radial solution, and contrasts with n = 7.

use bubbletower::ode::IntegratorOptions;
use bubbletower::shooting::{solve_nodal, zero_landscape, SolveOptions};
use bubbletower::Params;

fn main() -> bubbletower::Result<()> {
    for (n, lambda) in [(4, 0.5), (7, 0.5)] {
        let p = Params::new(n, lambda)?;
        print!("n = {n}, λ = {lambda}: zeros in (0,1) at a = 10^k:");
        for k in (0..=80).step_by(10) {
            let l = zero_landscape(&p, 10f64.powi(k), 2, IntegratorOptions::default())?;
            print!(" {}", l.interior_zeros);
        }
        println!();
        match solve_nodal(&p, 2, &SolveOptions::default()) {
            Ok(s) => println!("  solved, a* = {:.6e}", s.a_star),
            Err(e) => println!("  {}: {e}", e.code()),
        }
    }
    Ok(())
}
