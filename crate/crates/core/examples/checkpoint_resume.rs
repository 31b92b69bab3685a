//! Stops a run halfway, saves it, reloads it and finishes. The result is
//! identical to a run that was never interrupted.
//!
//!     cargo run --release --example checkpoint_resume

use earthworm::checkpoint::{load_state, save_state};
use earthworm::WormState;

fn main() {
    let path = std::env::temp_dir().join("earthworm-example-checkpoint.json");

    let mut first = WormState::new(2, 5, true).unwrap();
    first.run(250_000, None);
    save_state(&first, &path).unwrap();
    let mut resumed = load_state(&path).unwrap();
    resumed.run(250_000, None);

    let mut straight = WormState::new(2, 5, true).unwrap();
    straight.run(500_000, None);

    println!(
        "checkpoint {} ({} bytes)",
        path.display(),
        std::fs::metadata(&path).unwrap().len()
    );
    println!(
        "resumed:  S_n = {}, position {}",
        resumed.hole_count(),
        resumed.position()
    );
    println!(
        "straight: S_n = {}, position {}",
        straight.hole_count(),
        straight.position()
    );
    println!(
        "identical: {}",
        resumed.holes_snapshot() == straight.holes_snapshot()
    );
    std::fs::remove_file(&path).ok();
}
