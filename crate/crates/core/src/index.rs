//! Point sets with per-axis line indexes.
//!
//! [`HoleIndex`] keeps, for every axis, a map from line to the sorted hole
//! coordinates on that line, so the nearest hole strictly ahead of a site is
//! a one-sided neighbour query by binary search. [`VisitIndex`] only ever grows, so
//! each line needs nothing beyond the extent of its visited coordinates.

use rustc_hash::{FxHashMap, FxHashSet};

use crate::lattice::{Direction, LineKey, Site};

#[derive(Clone, Debug)]
pub struct HoleIndex {
    dim: usize,
    canonical: FxHashSet<Site>,
    lines: Vec<FxHashMap<LineKey, Vec<i64>>>,
}

impl HoleIndex {
    pub fn new(dim: usize) -> Self {
        HoleIndex {
            dim,
            canonical: FxHashSet::default(),
            lines: (0..dim).map(|_| FxHashMap::default()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }

    pub fn contains(&self, site: &Site) -> bool {
        self.canonical.contains(site)
    }

    /// Returns false if the site was already present.
    pub fn insert(&mut self, site: Site) -> bool {
        debug_assert_eq!(site.dim(), self.dim);
        for (axis, lines) in self.lines.iter_mut().enumerate() {
            let line = lines.entry(site.line_key(axis)).or_default();
            let x = site.coord(axis);
            match line.binary_search(&x) {
                Ok(_) => return false,
                Err(at) => line.insert(at, x),
            }
        }
        self.canonical.insert(site);
        true
    }

    /// Returns false if the site was absent.
    pub fn remove(&mut self, site: &Site) -> bool {
        if !self.canonical.remove(site) {
            return false;
        }
        for (axis, lines) in self.lines.iter_mut().enumerate() {
            let key = site.line_key(axis);
            if let Some(set) = lines.get_mut(&key) {
                if let Ok(at) = set.binary_search(&site.coord(axis)) {
                    set.remove(at);
                }
                if set.is_empty() {
                    lines.remove(&key);
                }
            }
        }
        true
    }

    /// Moves the hole at `from` to `to`, where both lie on one line along
    /// `axis` and no hole lies strictly between them. On that line the sorted
    /// order is unchanged, so the coordinate is rewritten in place.
    pub(crate) fn shift_along(&mut self, from: &Site, to: Site, axis: usize) {
        debug_assert_eq!(from.line_key(axis), to.line_key(axis));
        debug_assert!(!self.canonical.contains(&to));
        let removed = self.canonical.remove(from);
        debug_assert!(removed);
        for (k, lines) in self.lines.iter_mut().enumerate() {
            if k == axis {
                let line = lines
                    .get_mut(&from.line_key(k))
                    .expect("line of an existing hole");
                let at = line.binary_search(&from.coord(k)).expect("indexed hole");
                line[at] = to.coord(k);
                debug_assert!(line.windows(2).all(|w| w[0] < w[1]));
                continue;
            }
            let key = from.line_key(k);
            let line = lines.get_mut(&key).expect("line of an existing hole");
            let at = line.binary_search(&from.coord(k)).expect("indexed hole");
            line.remove(at);
            if line.is_empty() {
                lines.remove(&key);
            }
            let line = lines.entry(to.line_key(k)).or_default();
            let x = to.coord(k);
            let at = line.binary_search(&x).unwrap_err();
            line.insert(at, x);
        }
        self.canonical.insert(to);
    }

    /// The hole on `pos`'s line along `dir` that is strictly ahead of `pos`
    /// and closest to it. `pos` itself is never returned.
    pub fn nearest_hole_ahead(&self, pos: &Site, dir: Direction) -> Option<Site> {
        let axis = dir.axis();
        let set = self.lines[axis].get(&pos.line_key(axis))?;
        let x = pos.coord(axis);
        let hit = if dir.is_positive() {
            let at = set.partition_point(|&v| v <= x);
            set.get(at)
        } else {
            let at = set.partition_point(|&v| v < x);
            at.checked_sub(1).map(|i| &set[i])
        };
        hit.map(|&v| pos.with_coord(axis, v))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Site> {
        self.canonical.iter()
    }

    /// Holes in lexicographic order.
    pub fn sorted(&self) -> Vec<Site> {
        let mut out: Vec<Site> = self.canonical.iter().cloned().collect();
        out.sort_unstable();
        out
    }

    /// Number of non-empty lines indexed along `axis`.
    pub fn line_count(&self, axis: usize) -> usize {
        self.lines[axis].len()
    }

    /// Checks that the canonical set and every per-axis index describe the
    /// same point set and that no empty line sets are retained.
    pub fn check_consistency(&self) -> Result<(), String> {
        for (axis, lines) in self.lines.iter().enumerate() {
            let mut total = 0usize;
            for (key, set) in lines {
                if set.is_empty() {
                    return Err(format!("axis {axis}: empty line set retained for {key:?}"));
                }
                total += set.len();
                if set.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(format!("axis {axis}: line {key:?} not strictly sorted"));
                }
                for &v in set {
                    let mut coords = key.fixed().to_vec();
                    coords.insert(axis, v);
                    let site = Site::new(&coords);
                    if !self.canonical.contains(&site) {
                        return Err(format!("axis {axis}: {site} indexed but not a hole"));
                    }
                }
            }
            if total != self.canonical.len() {
                return Err(format!(
                    "axis {axis}: {total} index entries for {} holes",
                    self.canonical.len()
                ));
            }
        }
        Ok(())
    }
}

impl PartialEq for HoleIndex {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.canonical == other.canonical
    }
}

impl Eq for HoleIndex {}

/// The set of visited sites with per-line extents.
#[derive(Clone, Debug)]
pub struct VisitIndex {
    dim: usize,
    canonical: FxHashSet<Site>,
    extents: Vec<FxHashMap<LineKey, (i64, i64)>>,
}

impl VisitIndex {
    pub fn new(dim: usize) -> Self {
        VisitIndex {
            dim,
            canonical: FxHashSet::default(),
            extents: (0..dim).map(|_| FxHashMap::default()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }

    pub fn contains(&self, site: &Site) -> bool {
        self.canonical.contains(site)
    }

    pub fn insert(&mut self, site: Site) -> bool {
        debug_assert_eq!(site.dim(), self.dim);
        if self.canonical.contains(&site) {
            return false;
        }
        for (axis, extents) in self.extents.iter_mut().enumerate() {
            let x = site.coord(axis);
            extents
                .entry(site.line_key(axis))
                .and_modify(|(lo, hi)| {
                    *lo = (*lo).min(x);
                    *hi = (*hi).max(x);
                })
                .or_insert((x, x));
        }
        self.canonical.insert(site);
        true
    }

    /// Whether some visited site lies strictly ahead of `pos` along `dir`.
    pub fn any_ahead(&self, pos: &Site, dir: Direction) -> bool {
        let axis = dir.axis();
        match self.extents[axis].get(&pos.line_key(axis)) {
            None => false,
            Some(&(lo, hi)) => {
                let x = pos.coord(axis);
                if dir.is_positive() {
                    hi > x
                } else {
                    lo < x
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Site> {
        self.canonical.iter()
    }

    pub fn sorted(&self) -> Vec<Site> {
        let mut out: Vec<Site> = self.canonical.iter().cloned().collect();
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(xs: &[i64]) -> HoleIndex {
        let mut idx = HoleIndex::new(2);
        for &x in xs {
            idx.insert(Site::from([x, 0]));
        }
        idx
    }

    #[test]
    fn nearest_ahead_on_a_row() {
        let idx = row(&[0, 3]);
        let at = |x| Site::from([x, 0]);
        assert_eq!(
            idx.nearest_hole_ahead(&at(1), Direction::RIGHT),
            Some(at(3))
        );
        assert_eq!(idx.nearest_hole_ahead(&at(3), Direction::RIGHT), None);
        assert_eq!(idx.nearest_hole_ahead(&at(3), Direction::LEFT), Some(at(0)));
        assert_eq!(idx.nearest_hole_ahead(&at(1), Direction::UP), None);
        assert_eq!(
            idx.nearest_hole_ahead(&Site::from([0, -4]), Direction::UP),
            Some(at(0))
        );
        assert_eq!(
            idx.nearest_hole_ahead(&Site::from([0, 4]), Direction::UP),
            None
        );
    }

    #[test]
    fn removal_drops_empty_lines() {
        let mut idx = row(&[0, 3]);
        assert_eq!(idx.line_count(0), 1);
        assert_eq!(idx.line_count(1), 2);
        assert!(idx.remove(&Site::from([3, 0])));
        assert!(!idx.remove(&Site::from([3, 0])));
        assert_eq!(idx.line_count(1), 1);
        assert!(idx.remove(&Site::from([0, 0])));
        assert_eq!(idx.line_count(0), 0);
        assert!(idx.is_empty());
        idx.check_consistency().unwrap();
    }

    #[test]
    fn duplicate_insert_is_a_no_op() {
        let mut idx = row(&[5]);
        assert!(!idx.insert(Site::from([5, 0])));
        assert_eq!(idx.len(), 1);
        idx.check_consistency().unwrap();
    }

    #[test]
    fn visit_extents() {
        let mut v = VisitIndex::new(2);
        for x in [0, 1, 2] {
            v.insert(Site::from([x, 0]));
        }
        let pos = Site::from([2, 0]);
        assert!(!v.any_ahead(&pos, Direction::RIGHT));
        assert!(v.any_ahead(&pos, Direction::LEFT));
        assert!(!v.any_ahead(&pos, Direction::UP));
        assert!(v.any_ahead(&Site::from([1, -3]), Direction::UP));
    }
}
