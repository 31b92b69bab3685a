//! The worm-and-holes Markov chain.
//!
//! The worm performs a simple random walk on Z^d. Before each step, the hole
//! nearest to the worm strictly ahead in the direction of the step is looked
//! up. Then:
//!
//! * no hole ahead: the new position becomes a hole and the count grows;
//! * the nearest hole ahead is the new position itself: nothing changes;
//! * otherwise the nearest hole ahead is filled and the new position opens,
//!   i.e. the hole is transferred.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{HoleIndex, VisitIndex};
use crate::lattice::{Direction, Site};
use crate::rng::Xoshiro256pp;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Event {
    Created,
    Transferred { from: Site },
    NoChange,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepOutcome {
    pub direction: Direction,
    pub event: Event,
    pub new_position: Site,
    pub hole_count_after: u64,
    /// Whether no visited site lay strictly ahead before the move; present
    /// only when visits are tracked.
    pub tan_point: Option<bool>,
}

impl StepOutcome {
    /// The creation indicator for this step.
    pub fn created(&self) -> bool {
        self.event == Event::Created
    }
}

/// Result of [`WormState::run`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub dim: usize,
    pub steps: u64,
    pub s_n: u64,
    pub created_total: u64,
    pub tan_total: Option<u64>,
    /// `(k, S_k)` at every step count `k` that is a multiple of the
    /// recording interval.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub series: Vec<(u64, u64)>,
}

#[derive(Clone, Debug)]
pub struct WormState {
    dim: usize,
    position: Site,
    step_count: u64,
    holes: HoleIndex,
    visits: Option<VisitIndex>,
    hole_count: u64,
    rng: Xoshiro256pp,
    created_total: u64,
    tan_total: Option<u64>,
    tan_without_creation: u64,
    skip_transfer_at: Option<u64>,
}

impl WormState {
    /// Worm at the origin, which is the only hole.
    pub fn new(dim: usize, seed: u64, track_visits: bool) -> Result<Self> {
        Self::with_rng(dim, Xoshiro256pp::from_seed(seed), track_visits)
    }

    pub fn with_rng(dim: usize, rng: Xoshiro256pp, track_visits: bool) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let origin = Site::origin(dim);
        Ok(Self::single_hole(dim, origin, 0, rng, track_visits))
    }

    fn single_hole(
        dim: usize,
        position: Site,
        step_count: u64,
        rng: Xoshiro256pp,
        track_visits: bool,
    ) -> Self {
        let mut holes = HoleIndex::new(dim);
        holes.insert(position.clone());
        let visits = track_visits.then(|| {
            let mut v = VisitIndex::new(dim);
            v.insert(position.clone());
            v
        });
        WormState {
            dim,
            position,
            step_count,
            holes,
            visits,
            hole_count: 1,
            rng,
            created_total: 1,
            tan_total: track_visits.then_some(0),
            tan_without_creation: 0,
            skip_transfer_at: None,
        }
    }

    /// A worm at this worm's current position and time whose only hole is
    /// that position: every earlier hole is erased. The random stream is
    /// copied, so stepping both worms draws identical directions.
    pub fn restart(&self) -> WormState {
        Self::single_hole(
            self.dim,
            self.position.clone(),
            self.step_count,
            self.rng.clone(),
            self.visits.is_some(),
        )
    }

    /// Rebuilds a state from its serialized parts, checking the invariants.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        dim: usize,
        position: Site,
        step_count: u64,
        holes: Vec<Site>,
        visits: Option<Vec<Site>>,
        rng: Xoshiro256pp,
        created_total: u64,
        tan_total: Option<u64>,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let mut index = HoleIndex::new(dim);
        for h in holes {
            if h.dim() != dim {
                return Err(Error::Consistency(format!("hole {h} has wrong dimension")));
            }
            index.insert(h);
        }
        let visits = visits.map(|list| {
            let mut v = VisitIndex::new(dim);
            for s in list {
                v.insert(s);
            }
            v
        });
        let state = WormState {
            dim,
            position,
            step_count,
            hole_count: index.len() as u64,
            holes: index,
            visits,
            rng,
            created_total,
            tan_total,
            tan_without_creation: 0,
            skip_transfer_at: None,
        };
        state.check_invariants().map_err(Error::Consistency)?;
        Ok(state)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn position(&self) -> &Site {
        &self.position
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// S_n, the number of holes.
    pub fn hole_count(&self) -> u64 {
        self.hole_count
    }

    pub fn created_total(&self) -> u64 {
        self.created_total
    }

    pub fn tan_total(&self) -> Option<u64> {
        self.tan_total
    }

    /// Steps that were tan points in the drawn direction yet did not
    /// create a hole. Zero for a correct engine.
    pub fn tan_without_creation(&self) -> u64 {
        self.tan_without_creation
    }

    pub fn holes(&self) -> &HoleIndex {
        &self.holes
    }

    pub fn visits(&self) -> Option<&VisitIndex> {
        self.visits.as_ref()
    }

    pub fn tracks_visits(&self) -> bool {
        self.visits.is_some()
    }

    pub fn rng(&self) -> &Xoshiro256pp {
        &self.rng
    }

    /// Test hook: the transfer at step `step` (1-based) fills nothing,
    /// corrupting the hole set.
    #[doc(hidden)]
    pub fn inject_skip_transfer_at(&mut self, step: u64) {
        self.skip_transfer_at = Some(step);
    }

    pub fn nearest_hole_ahead(&self, dir: Direction) -> Option<Site> {
        self.holes.nearest_hole_ahead(&self.position, dir)
    }

    /// Whether no visited site lies strictly ahead of the worm along `dir`.
    pub fn is_tan_point(&self, dir: Direction) -> Result<bool> {
        let visits = self.visits.as_ref().ok_or(Error::TrackingDisabled)?;
        Ok(!visits.any_ahead(&self.position, dir))
    }

    /// Moves the worm one step along `dir` and updates the holes.
    pub fn apply_move(&mut self, dir: Direction) -> StepOutcome {
        debug_assert!(dir.axis() < self.dim);
        let ahead = self.holes.nearest_hole_ahead(&self.position, dir);
        let tan_point = self
            .visits
            .as_ref()
            .map(|v| !v.any_ahead(&self.position, dir));
        let new_position = self.position.step(dir);
        self.step_count += 1;

        let event = match ahead {
            None => {
                self.holes.insert(new_position.clone());
                self.hole_count += 1;
                self.created_total += 1;
                Event::Created
            }
            Some(q) if q == new_position => Event::NoChange,
            Some(q) => {
                if self.skip_transfer_at == Some(self.step_count) {
                    self.holes.insert(new_position.clone());
                } else {
                    self.holes.shift_along(&q, new_position.clone(), dir.axis());
                }
                Event::Transferred { from: q }
            }
        };

        if let Some(tan) = tan_point {
            if tan {
                if let Some(t) = self.tan_total.as_mut() {
                    *t += 1;
                }
                if event != Event::Created {
                    self.tan_without_creation += 1;
                }
            }
        }
        if let Some(v) = self.visits.as_mut() {
            v.insert(new_position.clone());
        }
        self.position = new_position.clone();

        StepOutcome {
            direction: dir,
            event,
            new_position,
            hole_count_after: self.hole_count,
            tan_point,
        }
    }

    /// Draws a uniform direction and moves.
    pub fn step(&mut self) -> StepOutcome {
        let dir = self.rng.draw_direction(self.dim);
        self.apply_move(dir)
    }

    /// Draws the next direction without moving.
    pub fn draw_direction(&mut self) -> Direction {
        self.rng.draw_direction(self.dim)
    }

    /// Advances `steps` steps.
    pub fn run(&mut self, steps: u64, record_every: Option<u64>) -> RunSummary {
        let start = self.step_count;
        let mut series = Vec::new();
        for _ in 0..steps {
            self.step();
            if let Some(every) = record_every.filter(|&e| e > 0) {
                if self.step_count.is_multiple_of(every) {
                    series.push((self.step_count, self.hole_count));
                }
            }
        }
        RunSummary {
            dim: self.dim,
            steps: self.step_count - start,
            s_n: self.hole_count,
            created_total: self.created_total,
            tan_total: self.tan_total,
            series,
        }
    }

    /// Holes in lexicographic order.
    pub fn holes_snapshot(&self) -> Vec<Site> {
        self.holes.sorted()
    }

    /// Checks every structural invariant of the state. Cost is linear in
    /// the number of holes and visits.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.position.dim() != self.dim {
            return Err(format!("position {} has wrong dimension", self.position));
        }
        if !self.holes.contains(&self.position) {
            return Err(format!("position {} is not a hole", self.position));
        }
        let len = self.holes.len() as u64;
        if len != self.hole_count || len != self.created_total {
            return Err(format!(
                "hole set has {len} sites, hole_count {}, created_total {}",
                self.hole_count, self.created_total
            ));
        }
        if self.hole_count < 1 || self.hole_count > self.step_count + 1 {
            return Err(format!(
                "hole_count {} outside [1, {}]",
                self.hole_count,
                self.step_count + 1
            ));
        }
        if let Some(visits) = &self.visits {
            if let Some(h) = self.holes.iter().find(|h| !visits.contains(h)) {
                return Err(format!("hole {h} was never visited"));
            }
        }
        self.holes.check_consistency()
    }
}

/// Convenience constructor matching the free-function style of the rest of
/// the crate.
pub fn new_state(dim: usize, seed: u64, track_visits: bool) -> Result<WormState> {
    WormState::new(dim, seed, track_visits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Direction as D;

    fn fresh() -> WormState {
        WormState::new(2, 0, true).unwrap()
    }

    fn sites(list: &[[i64; 2]]) -> Vec<Site> {
        let mut v: Vec<Site> = list.iter().map(|&c| Site::from(c)).collect();
        v.sort();
        v
    }

    #[test]
    fn initial_condition() {
        let s = WormState::new(2, 17, false).unwrap();
        assert_eq!(s.hole_count(), 1);
        assert_eq!(s.holes_snapshot(), sites(&[[0, 0]]));
        let s3 = WormState::new(3, 17, true).unwrap();
        assert_eq!(s3.visits().unwrap().sorted(), vec![Site::from([0, 0, 0])]);
        assert_eq!(s3.hole_count(), 1);
        assert!(matches!(
            WormState::new(1, 0, false),
            Err(Error::InvalidDimension(1))
        ));
    }

    #[test]
    fn first_move_creates() {
        let mut s = fresh();
        let out = s.apply_move(D::RIGHT);
        assert_eq!(out.event, Event::Created);
        assert_eq!(out.new_position, Site::from([1, 0]));
        assert_eq!(out.hole_count_after, 2);
    }

    #[test]
    fn back_and_forth_changes_nothing() {
        let mut s = fresh();
        s.apply_move(D::RIGHT);
        let out = s.apply_move(D::LEFT);
        assert_eq!(out.event, Event::NoChange);
        assert_eq!(s.hole_count(), 2);
    }

    #[test]
    fn five_move_transfer_trace() {
        let mut s = fresh();
        for d in [D::UP, D::RIGHT, D::RIGHT, D::DOWN] {
            assert_eq!(s.apply_move(d).event, Event::Created);
        }
        assert_eq!(
            s.holes_snapshot(),
            sites(&[[0, 0], [0, 1], [1, 1], [2, 1], [2, 0]])
        );
        let out = s.apply_move(D::LEFT);
        assert_eq!(
            out.event,
            Event::Transferred {
                from: Site::from([0, 0])
            }
        );
        assert_eq!(s.hole_count(), 5);
        assert_eq!(
            s.holes_snapshot(),
            sites(&[[1, 0], [0, 1], [1, 1], [2, 1], [2, 0]])
        );
        assert_eq!(
            s.holes_snapshot(),
            vec![
                Site::from([0, 1]),
                Site::from([1, 0]),
                Site::from([1, 1]),
                Site::from([2, 0]),
                Site::from([2, 1]),
            ]
        );
        s.check_invariants().unwrap();
    }

    #[test]
    fn tan_points() {
        let mut s = fresh();
        for d in Direction::all(2) {
            assert!(s.is_tan_point(d).unwrap());
        }
        s.apply_move(D::RIGHT);
        s.apply_move(D::RIGHT);
        assert!(!s.is_tan_point(D::LEFT).unwrap());
        assert!(s.is_tan_point(D::RIGHT).unwrap());
        let untracked = WormState::new(2, 0, false).unwrap();
        assert!(matches!(
            untracked.is_tan_point(D::UP),
            Err(Error::TrackingDisabled)
        ));
    }

    #[test]
    fn stepping_is_deterministic_and_increments_by_at_most_one() {
        let mut a = WormState::new(2, 5, false).unwrap();
        let mut b = WormState::new(2, 5, false).unwrap();
        assert!(a.step().created());
        b.step();
        for _ in 0..2000 {
            let before = a.hole_count();
            let oa = a.step();
            let ob = b.step();
            assert_eq!(oa, ob);
            assert!(oa.hole_count_after - before <= 1);
        }
        a.check_invariants().unwrap();
    }

    #[test]
    fn run_summary_and_series() {
        let mut s = WormState::new(2, 1, false).unwrap();
        let zero = s.run(0, None);
        assert_eq!(zero.s_n, 1);
        let sum = s.run(100, Some(25));
        assert_eq!(sum.steps, 100);
        assert_eq!(sum.s_n, s.hole_count());
        assert_eq!(
            sum.series.iter().map(|p| p.0).collect::<Vec<_>>(),
            vec![25, 50, 75, 100]
        );
        assert_eq!(sum.series.last().unwrap().1, sum.s_n);
    }

    #[test]
    fn restart_erases_old_holes() {
        let mut s = WormState::new(2, 11, false).unwrap();
        let same = s.restart();
        assert_eq!(same.holes_snapshot(), s.holes_snapshot());
        s.run(300, None);
        let r = s.restart();
        assert_eq!(r.hole_count(), 1);
        assert_eq!(r.position(), s.position());
        assert_eq!(r.step_count(), s.step_count());
        assert!(s.holes().contains(r.position()));
    }

    #[test]
    fn skipped_transfer_corrupts_the_hole_set() {
        let mut s = fresh();
        s.inject_skip_transfer_at(5);
        for d in [D::UP, D::RIGHT, D::RIGHT, D::DOWN, D::LEFT] {
            s.apply_move(d);
        }
        assert!(s.check_invariants().is_err());
    }
}
