//! Simulation and verification of the earthworm hole dynamics on Z^d.
//!
//! A worm performs a simple random walk starting at the origin, which is the
//! only hole at time zero. On every step it pushes soil ahead of it: the
//! nearest hole strictly ahead on its line is filled and the worm's new site
//! becomes a hole. If nothing lies ahead, a new hole is created. S_n, the
//! number of holes after n steps, is the quantity of interest.
//!
//! * [`dynamics`]: the indexed engine ([`WormState`]).
//! * [`oracle`]: a naive engine for step-by-step equivalence checks.
//! * [`coupling`]: the restarted worm and its pathwise domination checks.
//! * [`montecarlo`]: reproducible replica sweeps and the sample CSV format.
//! * [`checkpoint`]: versioned JSON checkpoints.
//! * [`stats`]: exponent fits, KS normality, moment bounds, components.
//! * [`cli`]: the `earthworm` command-line tool.
//!
//! ```
//! use earthworm::WormState;
//!
//! let mut worm = WormState::new(2, 7, false).unwrap();
//! let summary = worm.run(10_000, None);
//! assert!(summary.s_n >= 100);
//! ```

pub mod checkpoint;
pub mod cli;
pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod index;
pub mod lattice;
pub mod montecarlo;
pub mod oracle;
pub mod rng;
pub mod stats;

pub use dynamics::{new_state, Event, RunSummary, StepOutcome, WormState};
pub use error::{Error, Result};
pub use index::{HoleIndex, VisitIndex};
pub use lattice::{Direction, LineKey, Site};
pub use montecarlo::{run_sweep, ExperimentPlan, SampleRow, SampleTable};
pub use rng::{derive_seed, SplitMix64, Xoshiro256pp};
