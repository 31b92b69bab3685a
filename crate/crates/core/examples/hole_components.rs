//! Connected components of the holes and of the rest of the trail.
//!
//!     cargo run --release --example hole_components -- 100000

use earthworm::stats::{hole_components, Connectivity};
use earthworm::WormState;

fn main() {
    let steps: u64 = std::env::args()
        .nth(1)
        .map_or(100_000, |s| s.parse().expect("steps"));
    let mut worm = WormState::new(2, 3, true).unwrap();
    worm.run(steps, None);
    let holes = worm.holes_snapshot();
    let visited = worm.visits().unwrap().sorted();

    for conn in [Connectivity::Lattice, Connectivity::Full] {
        let c = hole_components(&holes, Some(&visited), conn).unwrap();
        let trail = c.complement_sizes.as_deref().unwrap_or_default();
        println!(
            "{conn:?}: {} hole clusters (largest {}), {} trail clusters (largest {})",
            c.hole_sizes.len(),
            c.hole_sizes.iter().max().unwrap_or(&0),
            trail.len(),
            trail.iter().max().unwrap_or(&0)
        );
    }
}
