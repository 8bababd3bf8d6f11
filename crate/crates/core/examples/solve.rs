//! One two-signed solution: amplitude, nodal features and certification residuals.
//!
//! ```text
//! cargo run --release --example solve -- 7 0.5
//! ```

use bubbletower::shooting::{solve_nodal, SolveOptions};
use bubbletower::Params;

fn main() -> bubbletower::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u32 = args.next().map_or(7, |s| s.parse().expect("n"));
    let lambda: f64 = args.next().map_or(1.0, |s| s.parse().expect("lambda"));

    let p = Params::new(n, lambda)?;
    let sol = solve_nodal(&p, 2, &SolveOptions::default())?;
    let f = sol.features.expect("two nodal regions");
    println!("n = {n}, λ = {lambda}");
    println!("a*      = {:.12e}", sol.a_star);
    println!("r_λ     = {:.12e}", f.r_lambda);
    println!("s_λ     = {:.12e}", f.s_lambda);
    println!("M+ / M- = {:.6e} / {:.6}", f.m_plus, f.m_minus);
    println!("energy  = {:.9}", sol.energy());
    println!("{:#?}", sol.residuals);
    Ok(())
}
