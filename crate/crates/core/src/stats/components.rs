use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Site;

/// Disjoint sets over `0..len` with union by size and path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Sizes of all sets, largest first.
    pub fn set_sizes(&mut self) -> Vec<u64> {
        let roots: Vec<usize> = (0..self.parent.len())
            .filter(|&i| self.find(i) == i)
            .collect();
        let mut sizes: Vec<u64> = roots.into_iter().map(|i| self.size[i] as u64).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Connectivity {
    /// Sites at lattice distance one (4-connectivity in the plane).
    #[default]
    Lattice,
    /// Sites differing by at most one in every coordinate (8-connectivity
    /// in the plane).
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentStats {
    /// Component sizes of the hole set, largest first.
    pub hole_sizes: Vec<u64>,
    /// Component sizes of visited sites that are not holes, largest first.
    pub complement_sizes: Option<Vec<u64>>,
}

fn neighbor_offsets(dim: usize, connectivity: Connectivity) -> Vec<Vec<i64>> {
    match connectivity {
        Connectivity::Lattice => (0..dim)
            .map(|axis| (0..dim).map(|k| i64::from(k == axis)).collect())
            .collect(),
        Connectivity::Full => {
            // Half of {-1,0,1}^d \ {0}: offsets whose first nonzero entry is +1.
            let mut out = Vec::new();
            let total = 3usize.pow(dim as u32);
            for code in 0..total {
                let mut c = code;
                let off: Vec<i64> = (0..dim)
                    .map(|_| {
                        let v = (c % 3) as i64 - 1;
                        c /= 3;
                        v
                    })
                    .collect();
                if off.iter().find(|&&v| v != 0) == Some(&1) {
                    out.push(off);
                }
            }
            out
        }
    }
}

fn component_sizes(sites: &[&Site], connectivity: Connectivity) -> Vec<u64> {
    if sites.is_empty() {
        return Vec::new();
    }
    let dim = sites[0].dim();
    let index: HashMap<&Site, usize> = sites.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let offsets = neighbor_offsets(dim, connectivity);
    let mut uf = UnionFind::new(sites.len());
    let mut coords = vec![0i64; dim];
    for (i, site) in sites.iter().enumerate() {
        for off in &offsets {
            for (k, c) in coords.iter_mut().enumerate() {
                *c = site.coord(k) + off[k];
            }
            if let Some(&j) = index.get(&Site::new(&coords)) {
                uf.union(i, j);
            }
        }
    }
    uf.set_sizes()
}

/// Connected components of the holes and, if `visited` is given, of the
/// visited sites that are not holes.
pub fn hole_components(
    holes: &[Site],
    visited: Option<&[Site]>,
    connectivity: Connectivity,
) -> Result<ComponentStats> {
    if holes.is_empty() {
        return Err(Error::Parameter("hole set is empty".into()));
    }
    let dim = holes[0].dim();
    if holes
        .iter()
        .chain(visited.unwrap_or(&[]))
        .any(|s| s.dim() != dim)
    {
        return Err(Error::Consistency("sites of mixed dimension".into()));
    }
    let mut hole_refs: Vec<&Site> = holes.iter().collect();
    hole_refs.sort_unstable();
    hole_refs.dedup();
    let hole_sizes = component_sizes(&hole_refs, connectivity);

    let complement_sizes = match visited {
        None => None,
        Some(visited) => {
            let visited_set: std::collections::HashSet<&Site> = visited.iter().collect();
            if let Some(h) = hole_refs.iter().find(|h| !visited_set.contains(*h)) {
                return Err(Error::Consistency(format!(
                    "hole {h} is not a visited site"
                )));
            }
            let hole_set: std::collections::HashSet<&Site> = hole_refs.iter().copied().collect();
            let mut rest: Vec<&Site> = visited_set
                .into_iter()
                .filter(|s| !hole_set.contains(s))
                .collect();
            rest.sort_unstable();
            Some(component_sizes(&rest, connectivity))
        }
    };
    Ok(ComponentStats {
        hole_sizes,
        complement_sizes,
    })
}
