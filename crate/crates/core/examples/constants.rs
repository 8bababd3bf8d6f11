//! Dimensional constants for n = 5..10.

use bubbletower::bubble::constants;

fn main() -> bubbletower::Result<()> {
    println!(
        "{:>3} {:>14} {:>14} {:>14} {:>12} {:>14} {:>10}",
        "n", "c1", "c2", "c3", "c~", "S^(n/2)", "λ1"
    );
    for n in 5..=10 {
        let c = constants(n)?;
        println!(
            "{n:>3} {:>14.6e} {:>14.6e} {:>14.6e} {:>12.6} {:>14.6e} {:>10.6}",
            c.c1, c.c2, c.c3, c.c_tilde, c.s_pow, c.lambda1
        );
    }
    Ok(())
}
