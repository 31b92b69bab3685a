//! One planar run, printing S_n along the way and the final hole count.
//!
//!     cargo run --release --example simulate_trajectory -- 1000000 7

use earthworm::WormState;

fn main() {
    let mut args = std::env::args().skip(1);
    let steps: u64 = args.next().map_or(1_000_000, |s| s.parse().expect("steps"));
    let seed: u64 = args.next().map_or(7, |s| s.parse().expect("seed"));

    let mut worm = WormState::new(2, seed, false).unwrap();
    let summary = worm.run(steps, Some((steps / 10).max(1)));
    for (n, s) in &summary.series {
        println!(
            "n = {n:>10}  S_n = {s:>8}  S_n / n^0.75 = {:.3}",
            *s as f64 / (*n as f64).powf(0.75)
        );
    }
    println!("final position {}, holes {}", worm.position(), summary.s_n);
}
