//! Property tests for the indexed engine against the naive oracle.

use std::collections::BTreeSet;

use earthworm::oracle::NaiveState;
use earthworm::{Direction, Event, HoleIndex, Site, WormState};
use proptest::prelude::*;

fn moves(dim: usize, max_len: usize) -> impl Strategy<Value = Vec<Direction>> {
    prop::collection::vec((0..2 * dim).prop_map(Direction::from_index), 0..max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn indexed_engine_matches_oracle_in_the_plane(dirs in moves(2, 400)) {
        let mut fast = WormState::new(2, 0, true).unwrap();
        let mut slow = NaiveState::new(2).unwrap();
        for dir in dirs {
            let before = fast.hole_count();
            let ahead = fast.nearest_hole_ahead(dir);
            prop_assert_eq!(&ahead, &slow.nearest_hole_ahead(dir));
            let a = fast.apply_move(dir);
            let b = slow.apply_move(dir);
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(fast.holes_snapshot(), slow.sorted_holes());
            // increment is the creation indicator, and happens iff nothing was ahead
            prop_assert!(a.hole_count_after - before <= 1);
            prop_assert_eq!(a.hole_count_after - before == 1, ahead.is_none());
            prop_assert_eq!(a.created(), ahead.is_none());
            if a.tan_point == Some(true) {
                prop_assert_eq!(&a.event, &Event::Created);
            }
            if let Event::Transferred { from } = &a.event {
                prop_assert!(!fast.holes().contains(from));
                prop_assert_ne!(from, &a.new_position);
            }
            prop_assert!(fast.check_invariants().is_ok());
        }
    }

    #[test]
    fn indexed_engine_matches_oracle_in_three_dimensions(dirs in moves(3, 300)) {
        let mut fast = WormState::new(3, 0, true).unwrap();
        let mut slow = NaiveState::new(3).unwrap();
        for dir in dirs {
            prop_assert_eq!(fast.apply_move(dir), slow.apply_move(dir));
        }
        prop_assert_eq!(fast.holes_snapshot(), slow.sorted_holes());
        prop_assert!(fast.check_invariants().is_ok());
    }

    #[test]
    fn replaying_recorded_directions_reproduces_outcomes(seed in any::<u64>(), steps in 0u64..600) {
        let mut original = WormState::new(2, seed, true).unwrap();
        let outcomes: Vec<_> = (0..steps).map(|_| original.step()).collect();
        let mut replay = WormState::new(2, seed.wrapping_add(1), true).unwrap();
        for out in &outcomes {
            prop_assert_eq!(&replay.apply_move(out.direction), out);
        }
        prop_assert_eq!(replay.holes_snapshot(), original.holes_snapshot());
    }

    #[test]
    fn hole_index_tracks_a_plain_set(ops in prop::collection::vec((any::<bool>(), -6i64..6, -6i64..6, -6i64..6), 0..300)) {
        let mut index = HoleIndex::new(3);
        let mut model = BTreeSet::new();
        for (insert, x, y, z) in ops {
            let site = Site::from([x, y, z]);
            if insert {
                prop_assert_eq!(index.insert(site.clone()), model.insert(site));
            } else {
                prop_assert_eq!(index.remove(&site), model.remove(&site));
            }
            prop_assert!(index.check_consistency().is_ok());
        }
        prop_assert_eq!(index.sorted(), model.into_iter().collect::<Vec<_>>());
        for axis in 0..3 {
            prop_assert!(index.line_count(axis) <= index.len());
        }
    }

    #[test]
    fn nearest_ahead_matches_linear_scan(
        holes in prop::collection::btree_set((-8i64..8, -8i64..8), 0..60),
        px in -9i64..9, py in -9i64..9, d in 0usize..4,
    ) {
        let mut index = HoleIndex::new(2);
        for &(x, y) in &holes {
            index.insert(Site::from([x, y]));
        }
        let pos = Site::from([px, py]);
        let dir = Direction::from_index(d);
        let axis = dir.axis();
        let expected = holes
            .iter()
            .map(|&(x, y)| Site::from([x, y]))
            .filter(|h| h.coord(1 - axis) == pos.coord(1 - axis))
            .filter(|h| (h.coord(axis) - pos.coord(axis)) * dir.sign() > 0)
            .min_by_key(|h| (h.coord(axis) - pos.coord(axis)).abs());
        prop_assert_eq!(index.nearest_hole_ahead(&pos, dir), expected);
    }
}

#[test]
fn four_dimensional_walk_keeps_invariants() {
    let mut w = WormState::new(4, 9, true).unwrap();
    for _ in 0..5000 {
        let before = w.hole_count();
        let out = w.step();
        assert!(out.hole_count_after - before <= 1);
    }
    w.check_invariants().unwrap();
    assert_eq!(w.tan_without_creation(), 0);
}
