//! Sweep, then the trend and extrapolation report.

use bubbletower::asymptotics::{verify_records, RecordOptions, SweepRecord, VerifyOptions};
use bubbletower::bubble::constants;
use bubbletower::shooting::{continuation_sweep, SolveOptions};

fn main() -> bubbletower::Result<()> {
    let n = 7;
    let consts = constants(n)?;
    let grid = [4.0, 2.0, 1.0, 0.5, 0.25];
    let mut records = Vec::new();
    for s in continuation_sweep(n, &grid, 2, &SolveOptions::default(), true)? {
        records.push(SweepRecord::from_solution(
            &s?,
            &consts,
            &RecordOptions::default(),
        )?);
    }
    let report = verify_records(&records, &consts, &VerifyOptions::default())?;
    print!("{}", report.table());
    Ok(())
}
