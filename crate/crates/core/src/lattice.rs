//! Lattice geometry: site indexing, the graph metric, balls and complements.
//!
//! Sites are numbered row-major (`site = row * size + col`); in one
//! dimension the row is always 0. Qubit `k` of every full-lattice operator is
//! bit `k` of the basis-state index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

/// Sorted, duplicate-free set of site indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SiteSet(Vec<usize>);

impl SiteSet {
    pub fn new(sites: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = sites.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SiteSet(v)
    }

    pub fn empty() -> Self {
        SiteSet(Vec::new())
    }

    pub fn singleton(site: usize) -> Self {
        SiteSet(vec![site])
    }

    /// Contiguous range `start..end`.
    pub fn range(start: usize, end: usize) -> Self {
        SiteSet((start..end).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.0.binary_search(&site).is_ok()
    }

    /// Position of `site` inside the sorted set.
    pub fn position(&self, site: usize) -> Option<usize> {
        self.0.binary_search(&site).ok()
    }

    pub fn min_site(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn max_site(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn union(&self, other: &SiteSet) -> SiteSet {
        SiteSet::new(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &SiteSet) -> SiteSet {
        SiteSet(self.iter().filter(|&s| other.contains(s)).collect())
    }

    pub fn difference(&self, other: &SiteSet) -> SiteSet {
        SiteSet(self.iter().filter(|&s| !other.contains(s)).collect())
    }

    pub fn is_subset(&self, other: &SiteSet) -> bool {
        self.iter().all(|s| other.contains(s))
    }

    pub fn intersects(&self, other: &SiteSet) -> bool {
        self.iter().any(|s| other.contains(s))
    }

    /// Positions of the members of `self` inside `within` (which must contain them).
    pub fn positions_in(&self, within: &SiteSet) -> Option<Vec<usize>> {
        self.iter().map(|s| within.position(s)).collect()
    }
}

impl FromIterator<usize> for SiteSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        SiteSet::new(iter)
    }
}

impl From<Vec<usize>> for SiteSet {
    fn from(v: Vec<usize>) -> Self {
        SiteSet::new(v)
    }
}

/// A `D`-dimensional hypercubic lattice with `D` in {1, 2}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    dim: usize,
    size: usize,
    boundary: Boundary,
}

impl Lattice {
    pub fn new(dim: usize, size: usize, boundary: Boundary) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::Config(format!("lattice.dim must be 1 or 2, got {dim}")));
        }
        if size == 0 {
            return Err(Error::Config("lattice.size must be positive".into()));
        }
        Ok(Lattice { dim, size, boundary })
    }

    /// Open chain of `size` sites.
    pub fn chain(size: usize) -> Self {
        Lattice::new(1, size, Boundary::Open).expect("chain size must be positive")
    }

    pub fn square(size: usize, boundary: Boundary) -> Self {
        Lattice::new(2, size, boundary).expect("square size must be positive")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn num_sites(&self) -> usize {
        self.size.pow(self.dim as u32)
    }

    pub fn all_sites(&self) -> SiteSet {
        SiteSet::range(0, self.num_sites())
    }

    /// `(row, col)` of a site.
    pub fn coords(&self, site: usize) -> (usize, usize) {
        if self.dim == 1 {
            (0, site)
        } else {
            (site / self.size, site % self.size)
        }
    }

    pub fn site_at(&self, row: usize, col: usize) -> usize {
        if self.dim == 1 {
            col
        } else {
            row * self.size + col
        }
    }

    fn axis_distance(&self, a: usize, b: usize) -> usize {
        let d = a.abs_diff(b);
        match self.boundary {
            Boundary::Open => d,
            Boundary::Periodic => d.min(self.size - d),
        }
    }

    /// Manhattan distance between two sites, minimized over periodic images.
    pub fn site_distance(&self, i: usize, j: usize) -> usize {
        let (ri, ci) = self.coords(i);
        let (rj, cj) = self.coords(j);
        self.axis_distance(ri, rj) + self.axis_distance(ci, cj)
    }

    fn check_sites(&self, x: &SiteSet) -> Result<()> {
        match x.max_site() {
            Some(m) if m >= self.num_sites() => {
                Err(Error::domain(format!("site {m} outside lattice of {} sites", self.num_sites())))
            }
            _ => Ok(()),
        }
    }

    /// Minimum distance over pairs of sites.
    pub fn dist(&self, x: &SiteSet, y: &SiteSet) -> Result<usize> {
        if x.is_empty() || y.is_empty() {
            return Err(Error::domain("distance between sets requires non-empty sets"));
        }
        self.check_sites(x)?;
        self.check_sites(y)?;
        Ok(x.iter()
            .flat_map(|i| y.iter().map(move |j| (i, j)))
            .map(|(i, j)| self.site_distance(i, j))
            .min()
            .unwrap_or(0))
    }

    /// Distance from a single site to a set.
    pub fn dist_to(&self, site: usize, x: &SiteSet) -> usize {
        x.iter().map(|j| self.site_distance(site, j)).min().unwrap_or(usize::MAX)
    }

    /// Largest pairwise distance inside a set (0 for empty or singleton sets).
    pub fn diam(&self, x: &SiteSet) -> usize {
        x.iter()
            .flat_map(|i| x.iter().map(move |j| (i, j)))
            .map(|(i, j)| self.site_distance(i, j))
            .max()
            .unwrap_or(0)
    }

    /// Diameter of the whole lattice.
    pub fn diameter(&self) -> usize {
        let per_axis = match self.boundary {
            Boundary::Open => self.size - 1,
            Boundary::Periodic => self.size / 2,
        };
        per_axis * self.dim
    }

    /// All sites within distance `r` of `x`.
    pub fn ball(&self, x: &SiteSet, r: usize) -> SiteSet {
        (0..self.num_sites()).filter(|&j| self.dist_to(j, x) <= r).collect()
    }

    pub fn complement(&self, x: &SiteSet) -> SiteSet {
        (0..self.num_sites()).filter(|&j| !x.contains(j)).collect()
    }

    /// Nearest-neighbour bonds `(i, j)` with `i < j`, each listed once.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let n = self.num_sites();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.site_distance(i, j) == 1 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Bonds partitioned into groups of pairwise disjoint bonds (greedy edge
    /// colouring in bond order). Gates inside one group commute.
    pub fn bond_colors(&self) -> Vec<Vec<(usize, usize)>> {
        let mut colors: Vec<Vec<(usize, usize)>> = Vec::new();
        for bond in self.bonds() {
            let slot = colors
                .iter()
                .position(|group| group.iter().all(|&(a, b)| a != bond.0 && a != bond.1 && b != bond.0 && b != bond.1));
            match slot {
                Some(k) => colors[k].push(bond),
                None => colors.push(vec![bond]),
            }
        }
        colors
    }

    /// Smallest-index site at distance exactly `r` from `x`.
    pub fn site_at_distance(&self, x: &SiteSet, r: usize) -> Option<usize> {
        (0..self.num_sites()).find(|&j| self.dist_to(j, x) == r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_distance() {
        let l = Lattice::chain(10);
        assert_eq!(l.dist(&SiteSet::singleton(2), &SiteSet::singleton(7)).unwrap(), 5);
        let x = SiteSet::new([1, 4]);
        assert_eq!(l.dist(&x, &x).unwrap(), 0);
    }

    #[test]
    fn periodic_square_distance_matches_brute_force() {
        let l = Lattice::square(4, Boundary::Periodic);
        let a = l.site_at(0, 0);
        let b = l.site_at(3, 3);
        assert_eq!(l.dist(&SiteSet::singleton(a), &SiteSet::singleton(b)).unwrap(), 2);

        // brute force: shortest path length on the wrapped grid graph (BFS)
        let n = l.num_sites();
        let neighbours = |s: usize| {
            let (r, c) = (s / 4, s % 4);
            [((r + 1) % 4, c), ((r + 3) % 4, c), (r, (c + 1) % 4), (r, (c + 3) % 4)].map(|(r, c)| r * 4 + c)
        };
        for src in 0..n {
            let mut depth = vec![usize::MAX; n];
            depth[src] = 0;
            let mut queue = std::collections::VecDeque::from([src]);
            while let Some(s) = queue.pop_front() {
                for t in neighbours(s) {
                    if depth[t] == usize::MAX {
                        depth[t] = depth[s] + 1;
                        queue.push_back(t);
                    }
                }
            }
            for dst in 0..n {
                assert_eq!(l.site_distance(src, dst), depth[dst]);
            }
        }
    }

    #[test]
    fn empty_set_distance_is_an_error() {
        let l = Lattice::chain(4);
        assert!(l.dist(&SiteSet::empty(), &SiteSet::singleton(1)).is_err());
    }

    #[test]
    fn balls() {
        let l = Lattice::chain(10);
        assert_eq!(l.ball(&SiteSet::singleton(5), 0), SiteSet::singleton(5));
        assert_eq!(l.ball(&SiteSet::singleton(5), 2), SiteSet::new([3, 4, 5, 6, 7]));
        let sq = Lattice::square(5, Boundary::Open);
        let center = SiteSet::singleton(sq.site_at(2, 2));
        let brute = (0..25)
            .filter(|&s| {
                let (r, c): (usize, usize) = (s / 5, s % 5);
                r.abs_diff(2) + c.abs_diff(2) <= 2
            })
            .count();
        assert_eq!(brute, 13);
        assert_eq!(sq.ball(&center, 2).len(), brute);
    }

    #[test]
    fn ball_of_diameter_is_everything() {
        for l in [Lattice::chain(7), Lattice::square(3, Boundary::Open), Lattice::square(4, Boundary::Periodic)] {
            let x = SiteSet::singleton(0);
            assert_eq!(l.ball(&x, l.diameter()), l.all_sites());
        }
    }

    #[test]
    fn rejects_three_dimensions() {
        assert!(matches!(Lattice::new(3, 2, Boundary::Open), Err(Error::Config(_))));
    }

    #[test]
    fn bond_colouring_is_proper() {
        for l in [Lattice::chain(7), Lattice::new(1, 5, Boundary::Periodic).unwrap(), Lattice::square(3, Boundary::Periodic)] {
            let colors = l.bond_colors();
            let total: usize = colors.iter().map(Vec::len).sum();
            assert_eq!(total, l.bonds().len());
            for group in &colors {
                let sites: Vec<usize> = group.iter().flat_map(|&(a, b)| [a, b]).collect();
                assert_eq!(SiteSet::new(sites.clone()).len(), sites.len());
            }
        }
    }
}
