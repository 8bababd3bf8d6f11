//! Problem instance `-Δu = λu + |u|^{2*-2}u` on the unit ball of `R^n` and the
//! exponents derived from the dimension.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents that depend only on the dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub n: u32,
    /// Critical Sobolev exponent `2n/(n-2)`.
    pub two_star: f64,
    /// `2/(n-2)`; the inner length scale of a profile with height `M` is `M^-beta`.
    pub beta: f64,
    /// `2 - 2 beta = (2n-8)/(n-2)`.
    pub rate_exp: f64,
    green_exp: Option<f64>,
}

impl Exponents {
    /// `(n-2)/(2n-8)`, defined for `n >= 5`.
    pub fn green_exp(&self) -> Result<f64> {
        self.green_exp.ok_or(Error::UndefinedExponent(self.n))
    }

    /// Power of the nonlinearity, `2* - 1 = (n+2)/(n-2)`.
    pub fn nonlinear_power(&self) -> f64 {
        self.two_star - 1.0
    }
}

pub fn derive_exponents(n: u32) -> Result<Exponents> {
    if n < 3 {
        return Err(Error::InvalidDimension(n));
    }
    let nf = n as f64;
    let two_star = 2.0 * nf / (nf - 2.0);
    let beta = 2.0 / (nf - 2.0);
    let rate_exp = (2.0 * nf - 8.0) / (nf - 2.0);
    let green_exp = (n >= 5).then(|| (nf - 2.0) / (2.0 * nf - 8.0));
    Ok(Exponents {
        n,
        two_star,
        beta,
        rate_exp,
        green_exp,
    })
}

/// A problem instance: dimension and the coefficient of the linear term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsRepr", into = "ParamsRepr")]
pub struct Params {
    pub n: u32,
    pub lambda: f64,
    pub exponents: Exponents,
}

#[derive(Serialize, Deserialize)]
struct ParamsRepr {
    n: u32,
    lambda: f64,
}

impl TryFrom<ParamsRepr> for Params {
    type Error = Error;

    fn try_from(r: ParamsRepr) -> Result<Self> {
        if r.lambda == 0.0 {
            Params::limiting(r.n)
        } else {
            Params::new(r.n, r.lambda)
        }
    }
}

impl From<Params> for ParamsRepr {
    fn from(p: Params) -> Self {
        ParamsRepr {
            n: p.n,
            lambda: p.lambda,
        }
    }
}

impl Params {
    pub fn new(n: u32, lambda: f64) -> Result<Self> {
        let exponents = derive_exponents(n)?;
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::NonpositiveLambda(lambda));
        }
        Ok(Params {
            n,
            lambda,
            exponents,
        })
    }

    /// The limiting equation `-Δu = |u|^{2*-2}u` (λ = 0), whose positive entire
    /// solutions are the standard bubbles. Used as an integrator oracle.
    pub fn limiting(n: u32) -> Result<Self> {
        Ok(Params {
            n,
            lambda: 0.0,
            exponents: derive_exponents(n)?,
        })
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn beta(&self) -> f64 {
        self.exponents.beta
    }

    pub fn two_star(&self) -> f64 {
        self.exponents.two_star
    }

    /// `|u|^{2*-2} u`.
    pub fn nonlinearity(&self, u: f64) -> f64 {
        u.abs().powf(self.two_star() - 2.0) * u
    }

    /// `f(y) = λy + |y|^{2*-2}y`; `n·u''(0) = -f(u(0))` for a regular radial solution.
    pub fn source(&self, y: f64) -> f64 {
        self.lambda * y + self.nonlinearity(y)
    }
}

/// Whether `λ` lies in `(0, λ_1)`.
pub fn validate_lambda(params: &Params, lambda1: f64) -> Result<bool> {
    if !(params.lambda > 0.0) {
        return Err(Error::NonpositiveLambda(params.lambda));
    }
    Ok(params.lambda < lambda1)
}
