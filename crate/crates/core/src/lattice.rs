//! Lattice primitives: sites of Z^d, the 2d unit directions, and line keys.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Inline capacity for coordinates; higher dimensions spill to the heap.
pub(crate) const INLINE_DIM: usize = 4;

pub(crate) type Coords = SmallVec<[i64; INLINE_DIM]>;

/// A point of Z^d. Ordering is lexicographic in the coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Site(Coords);

impl Site {
    pub fn origin(dim: usize) -> Self {
        Site(smallvec::smallvec![0; dim])
    }

    pub fn new(coords: &[i64]) -> Self {
        Site(Coords::from_slice(coords))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    #[inline]
    pub fn coord(&self, axis: usize) -> i64 {
        self.0[axis]
    }

    /// The neighbouring site one unit step along `dir`.
    #[inline]
    pub fn step(&self, dir: Direction) -> Site {
        let mut next = self.clone();
        next.0[dir.axis()] += dir.sign();
        next
    }

    /// This site with coordinate `axis` replaced by `value`.
    #[inline]
    pub fn with_coord(&self, axis: usize, value: i64) -> Site {
        let mut next = self.clone();
        next.0[axis] = value;
        next
    }

    /// Key of the axis-parallel line through this site.
    #[inline]
    pub fn line_key(&self, axis: usize) -> LineKey {
        let mut fixed = Coords::with_capacity(self.0.len() - 1);
        fixed.extend_from_slice(&self.0[..axis]);
        fixed.extend_from_slice(&self.0[axis + 1..]);
        LineKey(fixed)
    }

    /// Whether the two sites differ by exactly one unit in one coordinate.
    pub fn is_lattice_neighbor(&self, other: &Site) -> bool {
        self.dim() == other.dim()
            && self
                .0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| (a - b).unsigned_abs())
                .sum::<u64>()
                == 1
    }
}

impl fmt::Debug for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<&[i64]> for Site {
    fn from(coords: &[i64]) -> Self {
        Site::new(coords)
    }
}

impl<const N: usize> From<[i64; N]> for Site {
    fn from(coords: [i64; N]) -> Self {
        Site::new(&coords)
    }
}

/// One of the 2d unit steps.
///
/// Encoded as a single index `2 * axis + (0 for +, 1 for -)`, so in two
/// dimensions 0, 1, 2, 3 are right, left, up, down.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Direction(u8);

impl Direction {
    pub const RIGHT: Direction = Direction(0);
    pub const LEFT: Direction = Direction(1);
    pub const UP: Direction = Direction(2);
    pub const DOWN: Direction = Direction(3);

    pub fn new(axis: usize, positive: bool) -> Self {
        Direction((2 * axis + usize::from(!positive)) as u8)
    }

    /// Direction with the given canonical index in `0..2d`.
    #[inline]
    pub fn from_index(index: usize) -> Self {
        Direction(index as u8)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn axis(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// +1 or -1.
    #[inline]
    pub fn sign(self) -> i64 {
        1 - 2 * i64::from(self.0 & 1)
    }

    #[inline]
    pub fn reversed(self) -> Self {
        Direction(self.0 ^ 1)
    }

    /// All 2d directions in canonical order.
    pub fn all(dim: usize) -> impl Iterator<Item = Direction> {
        (0..2 * dim).map(Direction::from_index)
    }
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.is_positive() { '+' } else { '-' };
        write!(f, "{sign}e{}", self.axis())
    }
}

/// Identifies an axis-parallel line: every coordinate except the free one.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LineKey(Coords);

impl LineKey {
    pub fn fixed(&self) -> &[i64] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_encoding_in_the_plane() {
        let names: Vec<_> = Direction::all(2).map(|d| (d.axis(), d.sign())).collect();
        assert_eq!(names, vec![(0, 1), (0, -1), (1, 1), (1, -1)]);
        assert_eq!(Direction::new(1, false), Direction::DOWN);
        assert_eq!(Direction::RIGHT.reversed(), Direction::LEFT);
        assert_eq!(Direction::all(3).count(), 6);
    }

    #[test]
    fn line_keys_match_iff_sites_differ_in_one_coordinate() {
        let a = Site::from([1, 2, 3]);
        let b = Site::from([7, 2, 3]);
        let c = Site::from([1, 5, 3]);
        assert_eq!(a.line_key(0), b.line_key(0));
        assert_ne!(a.line_key(1), b.line_key(1));
        assert_eq!(a.line_key(1), c.line_key(1));
        assert_ne!(a.line_key(0), c.line_key(0));
        assert_eq!(a.line_key(2).fixed(), &[1, 2]);
    }

    #[test]
    fn stepping_and_order() {
        let o = Site::origin(2);
        assert_eq!(o.step(Direction::LEFT), Site::from([-1, 0]));
        assert_eq!(o.step(Direction::UP), Site::from([0, 1]));
        assert!(Site::from([0, 5]) < Site::from([1, -5]));
        assert!(o.is_lattice_neighbor(&Site::from([0, -1])));
        assert!(!o.is_lattice_neighbor(&Site::from([1, 1])));
    }
}
