//! Pointwise envelopes of the positive and negative parts along a sweep.

use bubbletower::asymptotics::{
    check_annulus_envelope, check_inner_envelope, check_rescaled_envelope, node_slope_ratio,
};
use bubbletower::shooting::{continuation_sweep, SolveOptions};
use bubbletower::Error;

fn main() -> bubbletower::Result<()> {
    let n = 7;
    let eps = (n as f64 - 2.0) / 4.0;
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "λ", "inner/M+", "rescaled", "annulus/M-", "A inner", "slope"
    );
    for s in continuation_sweep(
        n,
        &[4.0, 2.0, 1.0, 0.5, 0.25],
        2,
        &SolveOptions::default(),
        false,
    )? {
        let s = s?;
        let f = s.features.expect("two nodal regions");
        let inner = check_inner_envelope(&s.profile, &f) / f.m_plus;
        let rescaled = check_rescaled_envelope(&s.profile, &f)?;
        let (annulus, a_inner) = match check_annulus_envelope(&s.profile, &f, eps) {
            Ok(b) => (b.violation / f.m_minus, b.inner),
            Err(Error::RegionEmpty { inner }) => (f64::NAN, inner),
            Err(e) => return Err(e),
        };
        println!(
            "{:>6} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.4e}",
            s.params.lambda,
            inner,
            rescaled,
            annulus,
            a_inner,
            node_slope_ratio(n, &f)
        );
    }
    Ok(())
}
