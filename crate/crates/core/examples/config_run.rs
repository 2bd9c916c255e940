//! Runs a task from one of the bundled JSON configs through the same entry
//! point the command-line tool uses.

use std::path::PathBuf;

use stable_ar2::cli::run;
use stable_ar2::{RunConfig, Task};

fn main() -> stable_ar2::Result<()> {
    let file = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/theta2.json"));
    let mut cfg = RunConfig::load(&file)?;
    cfg.task = Some(Task::CheckTheorem1);
    let report = run(&cfg)?;
    println!("{}", report.summary);

    cfg.task = Some(Task::Ratio);
    cfg.h_max = Some(10);
    let report = run(&cfg)?;
    report.table.write_to(std::io::stdout().lock())?;
    Ok(())
}
