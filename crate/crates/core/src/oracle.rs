//! A naive transcription of the dynamics over plain point sets, used to
//! check the indexed engine step by step.

use std::collections::HashSet;

use serde::Serialize;

use crate::dynamics::{Event, StepOutcome, WormState};
use crate::error::{Error, Result};
use crate::lattice::{Direction, Site};
use crate::rng::Xoshiro256pp;

#[derive(Clone, Debug)]
pub struct NaiveState {
    pub dim: usize,
    pub position: Site,
    pub step_count: u64,
    pub holes: HashSet<Site>,
    pub visited: HashSet<Site>,
}

/// Signed distance from `pos` to `site` along `dir` if `site` lies on the
/// same axis-parallel line strictly ahead, else `None`.
fn distance_ahead(pos: &Site, site: &Site, dir: Direction) -> Option<i64> {
    let axis = dir.axis();
    let same_line = (0..pos.dim()).all(|k| k == axis || pos.coord(k) == site.coord(k));
    let dist = (site.coord(axis) - pos.coord(axis)) * dir.sign();
    (same_line && dist > 0).then_some(dist)
}

impl NaiveState {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let origin = Site::origin(dim);
        Ok(NaiveState {
            dim,
            position: origin.clone(),
            step_count: 0,
            holes: HashSet::from([origin.clone()]),
            visited: HashSet::from([origin]),
        })
    }

    pub fn nearest_hole_ahead(&self, dir: Direction) -> Option<Site> {
        self.holes
            .iter()
            .filter_map(|h| distance_ahead(&self.position, h, dir).map(|d| (d, h)))
            .min_by_key(|(d, _)| *d)
            .map(|(_, h)| h.clone())
    }

    pub fn apply_move(&mut self, dir: Direction) -> StepOutcome {
        let tan_point = !self
            .visited
            .iter()
            .any(|v| distance_ahead(&self.position, v, dir).is_some());
        let ahead = self.nearest_hole_ahead(dir);
        let new_position = self.position.step(dir);

        let event = match ahead {
            None => Event::Created,
            Some(q) if q == new_position => Event::NoChange,
            Some(q) => Event::Transferred { from: q },
        };
        if let Event::Transferred { from } = &event {
            self.holes.remove(from);
        }
        self.holes.insert(new_position.clone());
        self.visited.insert(new_position.clone());
        self.position = new_position.clone();
        self.step_count += 1;

        StepOutcome {
            direction: dir,
            event,
            new_position,
            hole_count_after: self.holes.len() as u64,
            tan_point: Some(tan_point),
        }
    }

    pub fn sorted_holes(&self) -> Vec<Site> {
        let mut out: Vec<Site> = self.holes.iter().cloned().collect();
        out.sort();
        out
    }
}

/// First step at which the two engines disagree.
#[derive(Clone, Debug, Serialize)]
pub struct Divergence {
    pub step: u64,
    pub indexed: StepOutcome,
    pub naive: StepOutcome,
    pub indexed_holes: Vec<Site>,
    pub naive_holes: Vec<Site>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub seed: u64,
    pub dim: usize,
    pub steps: u64,
    pub equivalent: bool,
    pub divergence: Option<Divergence>,
}

/// Drives both engines with one direction sequence drawn from `seed` and
/// compares outcomes and full hole sets after every step.
pub fn replay_equivalence(seed: u64, steps: u64, dim: usize) -> Result<EquivalenceReport> {
    replay_equivalence_with_fault(seed, steps, dim, None)
}

/// As [`replay_equivalence`], with the indexed engine corrupted at the
/// given step (negative control).
#[doc(hidden)]
pub fn replay_equivalence_with_fault(
    seed: u64,
    steps: u64,
    dim: usize,
    skip_transfer_at: Option<u64>,
) -> Result<EquivalenceReport> {
    let mut rng = Xoshiro256pp::from_seed(seed);
    let mut indexed = WormState::new(dim, seed, true)?;
    if let Some(k) = skip_transfer_at {
        indexed.inject_skip_transfer_at(k);
    }
    let mut naive = NaiveState::new(dim)?;

    for k in 1..=steps {
        let dir = rng.draw_direction(dim);
        let a = indexed.apply_move(dir);
        let b = naive.apply_move(dir);
        let same_holes = indexed.holes().len() == naive.holes.len()
            && naive.holes.iter().all(|h| indexed.holes().contains(h));
        if a != b || !same_holes {
            return Ok(EquivalenceReport {
                seed,
                dim,
                steps,
                equivalent: false,
                divergence: Some(Divergence {
                    step: k,
                    indexed: a,
                    naive: b,
                    indexed_holes: indexed.holes_snapshot(),
                    naive_holes: naive.sorted_holes(),
                }),
            });
        }
    }
    Ok(EquivalenceReport {
        seed,
        dim,
        steps,
        equivalent: true,
        divergence: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Direction as D;

    #[test]
    fn hand_traces() {
        let mut s = NaiveState::new(2).unwrap();
        assert_eq!(s.apply_move(D::RIGHT).event, Event::Created);
        assert_eq!(s.apply_move(D::LEFT).event, Event::NoChange);

        let mut s = NaiveState::new(2).unwrap();
        for d in [D::UP, D::RIGHT, D::RIGHT, D::DOWN] {
            assert_eq!(s.apply_move(d).event, Event::Created);
        }
        let out = s.apply_move(D::LEFT);
        assert_eq!(
            out.event,
            Event::Transferred {
                from: Site::from([0, 0])
            }
        );
        assert_eq!(out.hole_count_after, 5);
    }

    #[test]
    fn zero_steps_is_equivalent() {
        assert!(replay_equivalence(9, 0, 2).unwrap().equivalent);
    }

    #[test]
    fn short_runs_agree() {
        for seed in 0..5 {
            assert!(replay_equivalence(seed, 1500, 2).unwrap().equivalent);
            assert!(replay_equivalence(seed, 500, 3).unwrap().equivalent);
        }
    }

    #[test]
    fn fault_is_detected_at_the_first_transfer_after_it() {
        let seed = 4;
        let mut probe = WormState::new(2, seed, false).unwrap();
        let first_transfer = (1..=5000u64)
            .find(|_| matches!(probe.step().event, Event::Transferred { .. }))
            .expect("no transfer in 5000 steps");
        let report = replay_equivalence_with_fault(seed, 5000, 2, Some(first_transfer)).unwrap();
        assert!(!report.equivalent);
        assert_eq!(report.divergence.unwrap().step, first_transfer);
    }
}
