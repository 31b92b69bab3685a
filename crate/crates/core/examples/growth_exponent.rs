//! Replica sweep in the plane and a log-log fit of mean S_n against n.
//!
//!     cargo run --release --example growth_exponent

use earthworm::stats::ols_loglog;
use earthworm::{run_sweep, ExperimentPlan};

fn main() {
    let plan = ExperimentPlan::new(2, vec![10_000, 30_000, 100_000, 300_000], 10, 2024);
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let table = run_sweep(&plan, threads).unwrap();

    let means: Vec<(f64, f64)> = table
        .means()
        .into_iter()
        .map(|(n, m)| (n as f64, m))
        .collect();
    for (n, m) in &means {
        println!("n = {n:>8}  mean S_n = {m:>10.1}");
    }
    let fit = ols_loglog(&means).unwrap();
    println!(
        "alpha = {:.4} +- {:.4}  (r^2 = {:.4})",
        fit.slope,
        fit.slope_stderr.unwrap_or(f64::NAN),
        fit.r_squared
    );
}
