//! A worm restarted from a single hole, driven by the same moves as the
//! original. Its holes stay a subset of the original's at every step.
//!
//!     cargo run --release --example coupling

use earthworm::coupling::{verify_coupling, CoupledPair};
use earthworm::{WormState, Xoshiro256pp};

fn main() {
    let mut main = WormState::new(2, 11, false).unwrap();
    main.run(100, None);
    let mut pair = CoupledPair::new(main);
    let mut moves = Xoshiro256pp::from_seed(99);
    for _ in 0..2000 {
        pair.apply_move(moves.draw_direction(2));
        assert!(pair.check_state().is_none());
    }
    println!(
        "after 2100 steps: original {} holes, restarted {} holes",
        pair.main.hole_count(),
        pair.restarted.hole_count()
    );

    let mut failures = 0;
    for seed in 1..=50 {
        for i in [1, 10, 100] {
            if !verify_coupling(seed, 1000, i).unwrap().passed() {
                failures += 1;
            }
        }
    }
    println!("150 coupled runs checked, {failures} violations");
}
