//! Bessel function of the first kind and its first positive zero, used for the
//! first Dirichlet eigenvalue of the unit ball.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// `J_ν(x)` for `ν ≥ 0`, `x ≥ 0`, from the power series.
///
/// Terms are generated by the ratio recurrence, so only one gamma evaluation is
/// needed. Accurate to roughly `1e-13` relative for `x ≲ ν + 20`, which covers the
/// first zero for the dimensions this crate handles.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let lead = (nu * half.ln() - ln_gamma(nu + 1.0)).exp();
    let y = half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -y / (k * (k + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() && k > y.sqrt() {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    lead * sum
}

/// First positive zero of `J_ν`, bracketed by a scan and refined by bisection.
pub fn bessel_first_zero(nu: f64) -> Result<f64> {
    if !(nu >= 0.0) {
        return Err(Error::OutOfDomain(format!("bessel order {nu}")));
    }
    // j_{ν,1} > ν, and J_ν > 0 on (0, j_{ν,1})
    let step = 0.05;
    let mut lo = nu.max(step);
    let mut f_lo = bessel_j(nu, lo);
    if f_lo <= 0.0 {
        lo = step;
        f_lo = bessel_j(nu, lo);
    }
    let mut hi = lo + step;
    let mut f_hi = bessel_j(nu, hi);
    let mut guard = 0;
    while f_lo.signum() == f_hi.signum() {
        lo = hi;
        f_lo = f_hi;
        hi += step;
        f_hi = bessel_j(nu, hi);
        guard += 1;
        if guard > 100_000 {
            return Err(Error::NonconvergentBisection { iterations: guard });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = bessel_j(nu, mid);
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First Dirichlet eigenvalue of `-Δ` on the unit ball of `R^n`: `j_{n/2-1,1}^2`.
pub fn first_dirichlet_eigenvalue(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let j = bessel_first_zero(n as f64 / 2.0 - 1.0)?;
    Ok(j * j)
}
