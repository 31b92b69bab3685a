//! KS test of standardized S_n against a normal law.
//!
//!     cargo run --release --example ks_normality -- 2000 10000

use earthworm::stats::ks_normal;
use earthworm::{run_sweep, ExperimentPlan};

fn main() {
    let mut args = std::env::args().skip(1);
    let replicas: u64 = args.next().map_or(2000, |s| s.parse().expect("replicas"));
    let n: u64 = args.next().map_or(10_000, |s| s.parse().expect("n"));

    let threads = std::thread::available_parallelism().map_or(1, |c| c.get());
    let table = run_sweep(&ExperimentPlan::new(2, vec![n], replicas, 2024), threads).unwrap();
    let samples = table.samples(n);
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let ks = ks_normal(&samples).unwrap();
    println!("n = {n}, {replicas} replicas, mean S_n = {mean:.1}");
    println!("D = {:.4}, p = {:.3}", ks.statistic, ks.p_value);
}
