//! Replays random move sequences through the indexed engine and a naive
//! reference engine and compares hole sets after every step. The second
//! half shows what a reported divergence looks like.
//!
//!     cargo run --release --example oracle_equivalence

use earthworm::oracle::{replay_equivalence, replay_equivalence_with_fault};

fn main() {
    for dim in [2, 3, 4] {
        let ok = (1..=50).all(|seed| replay_equivalence(seed, 1000, dim).unwrap().equivalent);
        println!("d = {dim}: 50 seeds x 1000 steps equivalent: {ok}");
    }

    for k in 1..=1000 {
        let r = replay_equivalence_with_fault(1, 1000, 2, Some(k)).unwrap();
        if let Some(d) = r.divergence {
            println!("fault at step {k} detected at step {}", d.step);
            println!("  indexed holes: {}", d.indexed_holes.len());
            println!("  naive holes:   {}", d.naive_holes.len());
            break;
        }
    }
}
