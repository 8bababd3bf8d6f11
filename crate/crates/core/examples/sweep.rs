//! Continuation in λ and the rate quantities, written as CSV to stdout.

use bubbletower::asymptotics::{RecordOptions, SweepRecord};
use bubbletower::bubble::constants;
use bubbletower::io::{write_sweep_csv, SweepRow};
use bubbletower::shooting::{continuation_sweep, SolveOptions};

fn main() -> bubbletower::Result<()> {
    let n = 7;
    let grid = [4.0, 2.0, 1.0, 0.5, 0.25, 0.125];
    let consts = constants(n)?;
    let rows: Vec<SweepRow> = continuation_sweep(n, &grid, 2, &SolveOptions::default(), false)?
        .into_iter()
        .zip(grid)
        .map(|(s, lambda)| {
            match s.and_then(|s| SweepRecord::from_solution(&s, &consts, &RecordOptions::default()))
            {
                Ok(r) => SweepRow::Ok(r),
                Err(e) => SweepRow::Failed {
                    lambda,
                    error: e.code().into(),
                },
            }
        })
        .collect();
    for r in rows.iter().filter_map(SweepRow::record) {
        eprintln!(
            "λ = {:<6} q2/c3 = {:.4}  q3 = {:.4}  p1/c1 = {:.9}  p3/c1 = {:.4}",
            r.lambda,
            r.q2 / consts.c3,
            r.q3,
            r.p1 / consts.c1,
            r.p3 / consts.c1
        );
    }
    write_sweep_csv(std::io::stdout().lock(), &rows)
}
