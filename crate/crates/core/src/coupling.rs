//! The restarted worm and its pathwise comparison with the original.
//!
//! At time `i` a second worm is started at the original's position with a
//! single hole there. Both then follow the same directions. Along every
//! path, the restarted hole set stays inside the original one, so whenever
//! the original creates a hole the restarted worm does too, and S'_k <= S_k.

use serde::Serialize;

use crate::dynamics::{StepOutcome, WormState};
use crate::error::{Error, Result};
use crate::rng::Xoshiro256pp;

#[derive(Clone, Debug)]
pub struct CoupledPair {
    pub main: WormState,
    pub restarted: WormState,
    pub restart_time: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// H'_k is not contained in H_k.
    Subset,
    /// The original created a hole but the restarted worm did not.
    Indicator,
    /// S'_k > S_k.
    Count,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub step: u64,
    pub kind: ViolationKind,
}

impl CoupledPair {
    pub fn new(main: WormState) -> Self {
        let restarted = main.restart();
        let restart_time = main.step_count();
        CoupledPair {
            main,
            restarted,
            restart_time,
        }
    }

    /// Moves both worms along `dir`.
    pub fn apply_move(&mut self, dir: crate::Direction) -> (StepOutcome, StepOutcome) {
        (self.main.apply_move(dir), self.restarted.apply_move(dir))
    }

    /// Checks the subset and count relations for the current step; the
    /// indicator relation needs the outcomes, see [`CoupledPair::check_step`].
    pub fn check_state(&self) -> Option<ViolationKind> {
        let subset = self
            .restarted
            .holes()
            .iter()
            .all(|h| self.main.holes().contains(h));
        if !subset {
            return Some(ViolationKind::Subset);
        }
        if self.restarted.hole_count() > self.main.hole_count() {
            return Some(ViolationKind::Count);
        }
        None
    }

    pub fn check_step(
        &self,
        main_out: &StepOutcome,
        restarted_out: &StepOutcome,
    ) -> Vec<ViolationKind> {
        let mut found = Vec::new();
        if main_out.created() && !restarted_out.created() {
            found.push(ViolationKind::Indicator);
        }
        let subset = self
            .restarted
            .holes()
            .iter()
            .all(|h| self.main.holes().contains(h));
        if !subset {
            found.push(ViolationKind::Subset);
        }
        if self.restarted.hole_count() > self.main.hole_count() {
            found.push(ViolationKind::Count);
        }
        found
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CouplingReport {
    pub seed: u64,
    pub steps: u64,
    pub restart_at: u64,
    pub subset_ok: bool,
    pub indicator_ok: bool,
    pub count_ok: bool,
    pub first_violation: Option<Violation>,
    /// Steps where the restarted worm created a hole and the original did
    /// not.
    pub strict_steps: u64,
    /// Whether the two hole sets were equal at every step.
    pub identical: bool,
}

impl CouplingReport {
    pub fn passed(&self) -> bool {
        self.subset_ok && self.indicator_ok && self.count_ok
    }
}

/// Runs a coupled pair for `n` steps with the restart at time `i`, checking
/// every relation at every step `k` in `(i, n]`.
pub fn verify_coupling(seed: u64, n: u64, i: u64) -> Result<CouplingReport> {
    verify_coupling_in(2, seed, n, i)
}

pub fn verify_coupling_in(dim: usize, seed: u64, n: u64, i: u64) -> Result<CouplingReport> {
    if i > n {
        return Err(Error::Parameter(format!(
            "restart time {i} exceeds run length {n}"
        )));
    }
    let mut rng = Xoshiro256pp::from_seed(seed);
    let directions: Vec<_> = (0..n).map(|_| rng.draw_direction(dim)).collect();

    let mut main = WormState::new(dim, seed, false)?;
    for &dir in &directions[..i as usize] {
        main.apply_move(dir);
    }
    let mut pair = CoupledPair::new(main);

    let mut report = CouplingReport {
        seed,
        steps: n,
        restart_at: i,
        subset_ok: true,
        indicator_ok: true,
        count_ok: true,
        first_violation: None,
        strict_steps: 0,
        identical: true,
    };
    if let Some(kind) = pair.check_state() {
        record(&mut report, i, kind);
    }
    for (k, &dir) in directions.iter().enumerate().skip(i as usize) {
        let step = k as u64 + 1;
        let (a, b) = pair.apply_move(dir);
        if b.created() && !a.created() {
            report.strict_steps += 1;
        }
        if pair.main.hole_count() != pair.restarted.hole_count() {
            report.identical = false;
        }
        for kind in pair.check_step(&a, &b) {
            record(&mut report, step, kind);
        }
    }
    Ok(report)
}

fn record(report: &mut CouplingReport, step: u64, kind: ViolationKind) {
    match kind {
        ViolationKind::Subset => report.subset_ok = false,
        ViolationKind::Indicator => report.indicator_ok = false,
        ViolationKind::Count => report.count_ok = false,
    }
    if report.first_violation.is_none() {
        report.first_violation = Some(Violation { step, kind });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restart_at_zero_tracks_the_original_exactly() {
        for seed in 0..5 {
            let r = verify_coupling(seed, 200, 0).unwrap();
            assert!(r.passed());
            assert!(r.identical);
            assert_eq!(r.strict_steps, 0);
        }
    }

    #[test]
    fn later_restart_passes_and_is_sometimes_strict() {
        let mut strict = 0;
        for seed in 0..10 {
            let r = verify_coupling(seed, 1000, 100).unwrap();
            assert!(r.passed(), "{r:?}");
            strict += r.strict_steps;
        }
        assert!(strict > 0);
    }

    #[test]
    fn restart_after_end_is_rejected() {
        assert!(verify_coupling(0, 10, 11).is_err());
    }

    #[test]
    fn restarted_worm_starts_with_one_hole_inside_the_original() {
        let mut main = WormState::new(2, 3, false).unwrap();
        main.run(50, None);
        let pair = CoupledPair::new(main);
        assert_eq!(pair.restarted.hole_count(), 1);
        assert_eq!(pair.restart_time, 50);
        assert_eq!(pair.check_state(), None);
    }
}
