//! Growth in higher dimensions. From d = 4 on, S_n grows linearly.
//!
//!     cargo run --release --example dimension_four

use earthworm::stats::ols_loglog;
use earthworm::{run_sweep, ExperimentPlan};

fn main() {
    for dim in [2, 3, 4, 5] {
        let table = run_sweep(
            &ExperimentPlan::new(dim, vec![1000, 10_000, 100_000], 10, 2024),
            1,
        )
        .unwrap();
        let means: Vec<(f64, f64)> = table
            .means()
            .into_iter()
            .map(|(n, m)| (n as f64, m))
            .collect();
        let fit = ols_loglog(&means).unwrap();
        let last = means.last().unwrap();
        println!(
            "d = {dim}: exponent {:.3}, S_n / n at n = 10^5: {:.3}",
            fit.slope,
            last.1 / last.0
        );
    }
}
