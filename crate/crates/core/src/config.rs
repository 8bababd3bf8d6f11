//! Run configuration shared by the command-line subcommands.
//!
//! Sources, later ones winning: a JSON file, the environment variables
//! `BUBBLETOWER_RTOL`, `BUBBLETOWER_ATOL`, `BUBBLETOWER_RESIDUAL_TOL`, then
//! explicit command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::asymptotics::RecordOptions;
use crate::error::{Error, Result};
use crate::ode::IntegratorOptions;
use crate::shooting::SolveOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    #[default]
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Config(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n: Option<u32>,
    pub lambda: Option<f64>,
    pub lambda_grid: Option<Vec<f64>>,
    pub k: usize,
    pub rtol: f64,
    pub atol: f64,
    pub residual_tol: f64,
    /// `ε` of the annulus envelope; `None` means `(n-2)/4`.
    pub epsilon: Option<f64>,
    pub annulus: (f64, f64),
    pub output: Option<PathBuf>,
    pub format: Format,
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let i = IntegratorOptions::default();
        RunConfig {
            n: None,
            lambda: None,
            lambda_grid: None,
            k: 2,
            rtol: i.rtol,
            atol: i.atol,
            residual_tol: SolveOptions::default().identity_tol,
            epsilon: None,
            annulus: RecordOptions::default().annulus,
            output: None,
            format: Format::default(),
            parallel: false,
        }
    }
}

pub const ENV_RTOL: &str = "BUBBLETOWER_RTOL";
pub const ENV_ATOL: &str = "BUBBLETOWER_ATOL";
pub const ENV_RESIDUAL_TOL: &str = "BUBBLETOWER_RESIDUAL_TOL";

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&s)
    }

    /// Applies tolerance overrides from `lookup` (normally `std::env::var`).
    pub fn apply_env<F>(&mut self, lookup: F) -> Result<()>
    where
        F: Fn(&str) -> Option<String>,
    {
        for (key, slot) in [
            (ENV_RTOL, &mut self.rtol),
            (ENV_ATOL, &mut self.atol),
            (ENV_RESIDUAL_TOL, &mut self.residual_tol),
        ] {
            if let Some(v) = lookup(key) {
                *slot = v
                    .trim()
                    .parse()
                    .map_err(|e| Error::Config(format!("{key}={v:?}: {e}")))?;
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rtol", self.rtol),
            ("atol", self.atol),
            ("residual_tol", self.residual_tol),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0) {
                return Err(Error::Config(format!("epsilon must be positive, got {e}")));
            }
        }
        if let Some(g) = &self.lambda_grid {
            if g.windows(2).any(|w| !(w[1] < w[0])) {
                return Err(Error::Config(
                    "lambda grid must be strictly decreasing".into(),
                ));
            }
        }
        let (a, b) = self.annulus;
        if !(0.0 < a && a < b && b < 1.0) {
            return Err(Error::Config(format!(
                "annulus ({a}, {b}) not inside (0, 1)"
            )));
        }
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        Ok(())
    }

    pub fn require_n(&self) -> Result<u32> {
        self.n.ok_or_else(|| Error::Config("missing n".into()))
    }

    pub fn require_lambda(&self) -> Result<f64> {
        self.lambda
            .ok_or_else(|| Error::Config("missing lambda".into()))
    }

    pub fn require_grid(&self) -> Result<&[f64]> {
        self.lambda_grid
            .as_deref()
            .ok_or_else(|| Error::Config("missing lambda grid".into()))
    }

    pub fn epsilon_for(&self, n: u32) -> f64 {
        self.epsilon.unwrap_or((n as f64 - 2.0) / 4.0)
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            integrator: IntegratorOptions {
                rtol: self.rtol,
                atol: self.atol,
                ..Default::default()
            },
            identity_tol: self.residual_tol,
            ..Default::default()
        }
    }

    pub fn record_options(&self) -> RecordOptions {
        RecordOptions {
            annulus: self.annulus,
            ..Default::default()
        }
    }
}

/// Parses `"4,2,1"` into a grid; the empty string is the empty grid.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|e| Error::Config(format!("grid entry {t:?}: {e}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        RunConfig::default().validate().unwrap();
        assert_eq!(RunConfig::default().epsilon_for(7), 1.25);
    }

    #[test]
    fn ascending_grid_rejected() {
        let c = RunConfig {
            lambda_grid: Some(vec![0.5, 1.0]),
            ..Default::default()
        };
        assert_eq!(c.validate().unwrap_err().code(), "config-parse-error");
    }

    #[test]
    fn nonpositive_tolerance_rejected() {
        for c in [
            RunConfig {
                rtol: 0.0,
                ..Default::default()
            },
            RunConfig {
                atol: -1.0,
                ..Default::default()
            },
            RunConfig {
                residual_tol: f64::NAN,
                ..Default::default()
            },
        ] {
            assert!(c.validate().is_err());
        }
    }

    #[test]
    fn json_file_fields() {
        let c = RunConfig::from_json(r#"{"n": 7, "lambda_grid": [4, 2, 1], "format": "json"}"#)
            .unwrap();
        assert_eq!(c.n, Some(7));
        assert_eq!(c.require_grid().unwrap(), &[4.0, 2.0, 1.0]);
        assert_eq!(c.format, Format::Json);
        assert_eq!(c.k, 2);
        assert!(RunConfig::from_json(r#"{"dimension": 7}"#).is_err());
    }

    #[test]
    fn env_overrides() {
        let mut c = RunConfig::default();
        c.apply_env(|k| (k == ENV_RTOL).then(|| "1e-11".to_string()))
            .unwrap();
        assert_eq!(c.rtol, 1e-11);
        assert_eq!(c.solve_options().integrator.rtol, 1e-11);
        assert!(c
            .apply_env(|k| (k == ENV_ATOL).then(|| "tiny".to_string()))
            .is_err());
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("4, 2,1").unwrap(), vec![4.0, 2.0, 1.0]);
        assert!(parse_grid("").unwrap().is_empty());
        assert!(parse_grid("4,x").is_err());
    }
}
