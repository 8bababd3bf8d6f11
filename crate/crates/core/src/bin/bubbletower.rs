use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use bubbletower::asymptotics::{
    check_annulus_envelope, check_inner_envelope, check_rescaled_envelope, verify_records,
    SweepRecord, VerifyOptions,
};
use bubbletower::bubble::constants;
use bubbletower::config::{parse_grid, Format, RunConfig};
use bubbletower::diagnostics::Residuals;
use bubbletower::io::{self, SolutionFile, SweepRow};
use bubbletower::shooting::{continuation_sweep, solve_nodal, NodalFeatures};
use bubbletower::special::first_dirichlet_eigenvalue;
use bubbletower::{Error, Params, Result};

/// Radial sign-changing solutions of -Δu = λu + |u|^{2*-2}u on the unit ball.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the dimensional constants as JSON.
    Constants {
        #[arg(long)]
        n: u32,
    },
    /// Solve for one λ and write the solution file.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: Option<f64>,
        /// Annulus envelope parameter, default (n-2)/4.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Solve along a decreasing λ grid and write one record per point.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated, strictly decreasing.
        #[arg(long)]
        grid: Option<String>,
        /// Solve points independently on a thread pool (no warm start).
        #[arg(long)]
        parallel: bool,
    },
    /// Check the asymptotic laws on a sweep file.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Sweep file (CSV or JSON).
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<u32>,
    /// Number of nodal regions.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    rtol: Option<f64>,
    #[arg(long)]
    atol: Option<f64>,
    #[arg(long)]
    residual_tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or csv
    #[arg(long)]
    format: Option<Format>,
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        c.apply_env(|k| std::env::var(k).ok())?;
        c.n = self.n.or(c.n);
        c.k = self.k.unwrap_or(c.k);
        c.rtol = self.rtol.unwrap_or(c.rtol);
        c.atol = self.atol.unwrap_or(c.atol);
        c.residual_tol = self.residual_tol.unwrap_or(c.residual_tol);
        c.output = self.out.clone().or(c.output);
        c.format = self.format.unwrap_or(c.format);
        Ok(c)
    }
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    message: String,
}

#[derive(Serialize)]
struct SolveSummary {
    params: Params,
    k: usize,
    a_star: f64,
    energy: f64,
    features: Option<NodalFeatures>,
    residuals: Residuals,
    envelopes: Option<Envelopes>,
}

/// Largest envelope violations, relative to `M₊` (inner) and `M₋` (annulus).
#[derive(Serialize)]
struct Envelopes {
    epsilon: f64,
    inner: f64,
    rescaled: f64,
    annulus: Option<f64>,
}

fn emit(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve(c: &RunConfig) -> Result<ExitCode> {
    let n = c.require_n()?;
    let params = Params::new(n, c.require_lambda()?)?;
    let lambda1 = first_dirichlet_eigenvalue(n)?;
    if params.lambda >= lambda1 {
        return Err(Error::InvalidLambda {
            lambda: params.lambda,
            lambda1,
        });
    }
    let sol = solve_nodal(&params, c.k, &c.solve_options())?;
    let summary = SolveSummary {
        params,
        k: sol.k,
        a_star: sol.a_star,
        energy: sol.energy(),
        features: sol.features,
        residuals: sol.residuals,
        envelopes: match sol.features {
            Some(f) if sol.k == 2 => {
                let epsilon = c.epsilon_for(n);
                Some(Envelopes {
                    epsilon,
                    inner: check_inner_envelope(&sol.profile, &f) / f.m_plus,
                    rescaled: check_rescaled_envelope(&sol.profile, &f)?,
                    annulus: match check_annulus_envelope(&sol.profile, &f, epsilon) {
                        Ok(b) => Some(b.violation / f.m_minus),
                        Err(Error::RegionEmpty { .. }) => None,
                        Err(e) => return Err(e),
                    },
                })
            }
            _ => None,
        },
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    if let Some(p) = &c.output {
        std::fs::write(p, SolutionFile::from_solution(&sol).to_json()?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn sweep(c: &RunConfig) -> Result<ExitCode> {
    let n = c.require_n()?;
    let grid = c.require_grid()?;
    let sols = continuation_sweep(n, grid, c.k, &c.solve_options(), c.parallel)?;
    let consts = constants(n)?;
    let ropts = c.record_options();
    let rows: Vec<SweepRow> = grid
        .iter()
        .zip(sols)
        .map(
            |(&lambda, s)| match s.and_then(|s| SweepRecord::from_solution(&s, &consts, &ropts)) {
                Ok(r) => SweepRow::Ok(r),
                Err(e) => {
                    eprintln!("lambda {lambda}: {e}");
                    SweepRow::Failed {
                        lambda,
                        error: e.code().to_string(),
                    }
                }
            },
        )
        .collect();
    let text = match c.format {
        Format::Json => io::sweep_to_json(&rows)? + "\n",
        Format::Csv => {
            let mut buf = Vec::new();
            io::write_sweep_csv(&mut buf, &rows)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
    };
    emit(c.output.as_ref(), &text)?;
    let failed = rows.iter().filter(|r| r.record().is_none()).count();
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn verify(c: &RunConfig, input: &PathBuf) -> Result<ExitCode> {
    let n = c.require_n()?;
    let text = std::fs::read_to_string(input)?;
    let rows = io::read_sweep(&text)?;
    let records: Vec<SweepRecord> = rows.iter().filter_map(|r| r.record().copied()).collect();
    let consts = constants(n)?;
    let opts = VerifyOptions {
        k: c.k,
        ..Default::default()
    };
    let report = verify_records(&records, &consts, &opts)?;
    match c.format {
        Format::Json => emit(
            c.output.as_ref(),
            &(serde_json::to_string_pretty(&report)? + "\n"),
        )?,
        Format::Csv => {
            print!("{}", report.table());
            if let Some(p) = &c.output {
                std::fs::write(p, serde_json::to_string_pretty(&report)? + "\n")?;
            }
        }
    }
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Constants { n } => {
            println!("{}", serde_json::to_string_pretty(&constants(n)?)?);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Solve {
            common,
            lambda,
            epsilon,
        } => {
            let mut c = common.config()?;
            c.lambda = lambda.or(c.lambda);
            c.epsilon = epsilon.or(c.epsilon);
            c.validate()?;
            solve(&c)
        }
        Cmd::Sweep {
            common,
            grid,
            parallel,
        } => {
            let mut c = common.config()?;
            if let Some(g) = grid {
                c.lambda_grid = Some(parse_grid(&g)?);
            }
            c.parallel |= parallel;
            c.validate()?;
            sweep(&c)
        }
        Cmd::Verify { common, input } => {
            let c = common.config()?;
            c.validate()?;
            verify(&c, &input)
        }
    }
}

fn fail(e: &Error) -> ExitCode {
    let report = ErrorReport {
        error: e.code(),
        message: e.to_string(),
    };
    eprintln!("{}", serde_json::to_string(&report).expect("serializable"));
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&Error::Config(e.to_string().trim().to_string())),
    };
    run(cli).unwrap_or_else(|e| fail(&e))
}
