//! Tan-point frequency decay, measured from visit-tracked runs.
//!
//! A step is a tan point when no visited site lies strictly ahead of the
//! worm. Such a step always creates a hole.
//!
//!     cargo run --release --example tan_points

use earthworm::stats::tan_point_exponent;
use earthworm::{run_sweep, ExperimentPlan};

fn main() {
    let plan =
        ExperimentPlan::new(2, vec![10_000, 30_000, 100_000, 300_000], 10, 2024).with_visits(true);
    let table = run_sweep(&plan, 1).unwrap();
    for n in table.grid() {
        let tan: u64 = table.at(n).map(|r| r.tan_total.unwrap()).sum();
        let freq = tan as f64 / (n * plan.replicas) as f64;
        println!("n = {n:>8}  tan points per step = {freq:.5}");
    }
    let fit = tan_point_exponent(&table).unwrap();
    println!(
        "decay exponent {:.4}, tan points without creation: {}",
        fit.slope, table.tan_violations
    );
}
