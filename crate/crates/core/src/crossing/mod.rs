//! Crossing graphs and exact crossing-family computation.
//!
//! The crossing graph has one vertex per segment of the point set and an
//! edge between two segments whenever their interiors cross. Crossing
//! families are exactly the cliques of this graph.

mod bitset;
mod brute;
mod clique;

use std::fmt;

pub(crate) use bitset::Bitset;
pub use brute::{brute_force_cf, BRUTE_FORCE_LIMIT};

use crate::error::{Error, Result};
use crate::geometry::{cross_by, orientation_i64, Orientation, PointSet};

/// Unordered pair of point indices, stored with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    pub a: usize,
    pub b: usize,
}

impl Segment {
    /// Panics if `a == b`.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "segment endpoints must differ");
        if a < b {
            Segment { a, b }
        } else {
            Segment { a: b, b: a }
        }
    }

    pub fn shares_endpoint(self, other: Segment) -> bool {
        self.a == other.a || self.a == other.b || self.b == other.a || self.b == other.b
    }

    pub fn is_incident(self, p: usize) -> bool {
        self.a == p || self.b == p
    }

    /// Position of this segment in the lexicographic listing of all
    /// segments over `n` points.
    pub fn index(self, n: usize) -> usize {
        self.a * n - self.a * (self.a + 1) / 2 + (self.b - self.a - 1)
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.a, self.b)
    }
}

/// All `C(n, 2)` segments in lexicographic order.
pub fn all_segments(n: usize) -> Vec<Segment> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            out.push(Segment { a, b });
        }
    }
    out
}

/// A set of pairwise crossing segments, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CrossingFamily {
    members: Vec<Segment>,
}

impl CrossingFamily {
    /// Builds a family without checking the crossing property; see
    /// [`CrossingFamily::validate`].
    pub fn new(mut members: Vec<Segment>) -> Self {
        members.sort();
        members.dedup();
        CrossingFamily { members }
    }

    pub fn members(&self) -> &[Segment] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Whether every pair of members crosses in `s`.
    pub fn validate(&self, s: &PointSet) -> Result<bool> {
        for (i, &s1) in self.members.iter().enumerate() {
            for &s2 in &self.members[i + 1..] {
                if !crate::geometry::segments_cross(s, s1, s2)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Cached orientation signs for every ordered triple of a point set.
#[derive(Clone, Debug)]
pub struct OrientationTable {
    n: usize,
    signs: Vec<i8>,
}

impl OrientationTable {
    pub fn from_points(s: &PointSet) -> Self {
        if let Some(coords) = s.to_i64_coords() {
            return Self::from_fn(s.len(), |i, j, k| {
                orientation_i64(coords[i], coords[j], coords[k])
            });
        }
        Self::from_fn(s.len(), |i, j, k| s.orientation(i, j, k))
    }

    pub fn from_i64(coords: &[(i64, i64)]) -> Self {
        Self::from_fn(coords.len(), |i, j, k| {
            orientation_i64(coords[i], coords[j], coords[k])
        })
    }

    fn from_fn(n: usize, mut orient: impl FnMut(usize, usize, usize) -> Orientation) -> Self {
        let mut t = OrientationTable {
            n,
            signs: vec![0; n * n * n],
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    t.store(i, j, k, orient(i, j, k).sign());
                }
            }
        }
        t
    }

    fn store(&mut self, i: usize, j: usize, k: usize, s: i8) {
        let n = self.n;
        let mut put = |a: usize, b: usize, c: usize, v: i8| self.signs[(a * n + b) * n + c] = v;
        put(i, j, k, s);
        put(j, k, i, s);
        put(k, i, j, s);
        put(j, i, k, -s);
        put(i, k, j, -s);
        put(k, j, i, -s);
    }

    /// Recomputes every triple containing `p` from integer coordinates.
    pub(crate) fn update_point_i64(&mut self, coords: &[(i64, i64)], p: usize) {
        let n = self.n;
        for j in 0..n {
            for k in j + 1..n {
                if j == p || k == p {
                    continue;
                }
                let s = orientation_i64(coords[p], coords[j], coords[k]).sign();
                self.store(p, j, k, s);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> Orientation {
        Orientation::from_sign(self.signs[(i * self.n + j) * self.n + k])
    }

    /// First collinear triple involving `p`.
    pub(crate) fn collinear_with(&self, p: usize) -> Option<(usize, usize)> {
        let n = self.n;
        for j in 0..n {
            for k in j + 1..n {
                if j != p && k != p && self.signs[(p * n + j) * n + k] == 0 {
                    return Some((j, k));
                }
            }
        }
        None
    }

    pub fn first_collinear(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if self.signs[(i * n + j) * n + k] == 0 {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    #[inline]
    pub fn crosses(&self, s1: Segment, s2: Segment) -> bool {
        !s1.shares_endpoint(s2) && cross_by(|i, j, k| self.get(i, j, k), s1, s2)
    }
}

/// Segments of a point set together with their crossing relation.
#[derive(Clone, Debug)]
pub struct CrossingGraph {
    n_points: usize,
    segments: Vec<Segment>,
    adj: Vec<Bitset>,
}

impl CrossingGraph {
    pub fn from_table(table: &OrientationTable) -> Self {
        let n = table.len();
        let segments = all_segments(n);
        let m = segments.len();
        let mut adj = vec![Bitset::new(m); m];
        for i in 0..m {
            for j in i + 1..m {
                if table.crosses(segments[i], segments[j]) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        CrossingGraph {
            n_points: n,
            segments,
            adj,
        }
    }

    /// Rebuilds the rows of all segments incident to point `p`.
    pub(crate) fn update_point(&mut self, table: &OrientationTable, p: usize) {
        let n = self.n_points;
        for q in 0..n {
            if q == p {
                continue;
            }
            let s = Segment::new(p, q);
            let i = s.index(n);
            for (j, &t) in self.segments.iter().enumerate() {
                if t.is_incident(p) {
                    continue;
                }
                let c = table.crosses(s, t);
                self.adj[i].set(j, c);
                self.adj[j].set(i, c);
            }
        }
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Bitset::count).sum::<usize>() / 2
    }

    fn family(&self, verts: &[usize]) -> CrossingFamily {
        CrossingFamily::new(verts.iter().map(|&v| self.segments[v]).collect())
    }

    /// Maximum crossing family, single-threaded and deterministic.
    pub fn max_family(&self) -> CrossingFamily {
        let solver = clique::CliqueSolver::new(&self.adj);
        self.family(&solver.maximum())
    }

    /// Maximum crossing family with the root branching split across threads.
    /// The size always equals [`CrossingGraph::max_family`]; the witness
    /// may differ.
    pub fn max_family_parallel(&self) -> CrossingFamily {
        let solver = clique::CliqueSolver::new(&self.adj);
        self.family(&solver.maximum_parallel())
    }

    /// A family of exactly `k` segments, if one exists.
    pub fn find_family(&self, k: usize) -> Option<CrossingFamily> {
        if k == 0 {
            return Some(CrossingFamily::default());
        }
        let solver = clique::CliqueSolver::new(&self.adj);
        solver.find(k).map(|v| self.family(&v))
    }

    /// Number of `k`-element crossing families.
    pub fn count_families(&self, k: usize) -> u64 {
        let all = Bitset::full(self.segments.len());
        clique::count_cliques(&self.adj, &all, k)
    }

    /// Number of `k`-families that contain a segment incident to `p`.
    ///
    /// A family has pairwise distinct endpoints, so each such family has
    /// exactly one segment at `p`.
    pub(crate) fn count_families_at(&self, p: usize, k: usize) -> u64 {
        if k == 0 {
            return 0;
        }
        let n = self.n_points;
        (0..n)
            .filter(|&q| q != p)
            .map(|q| {
                let i = Segment::new(p, q).index(n);
                clique::count_cliques(&self.adj, &self.adj[i], k - 1)
            })
            .sum()
    }
}

pub fn build_crossing_graph(s: &PointSet) -> Result<CrossingGraph> {
    let table = OrientationTable::from_points(s);
    if let Some((i, j, k)) = table.first_collinear() {
        return Err(Error::NotGeneralPosition(i, j, k));
    }
    Ok(CrossingGraph::from_table(&table))
}

/// `cf(S)` together with a witness family of that size.
pub fn max_crossing_family(s: &PointSet) -> Result<(usize, CrossingFamily)> {
    let f = build_crossing_graph(s)?.max_family();
    Ok((f.len(), f))
}

/// A crossing family of exactly `k` segments, or `None` when `cf(S) < k`.
pub fn has_k_family(s: &PointSet, k: usize) -> Result<Option<CrossingFamily>> {
    if k == 0 {
        return Err(Error::Parameter("family size must be at least 1".into()));
    }
    Ok(build_crossing_graph(s)?.find_family(k))
}

pub fn count_k_families(s: &PointSet, k: usize) -> Result<u64> {
    Ok(build_crossing_graph(s)?.count_families(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::convex_position;

    #[test]
    fn segment_index_matches_listing() {
        for n in 0..9 {
            for (i, s) in all_segments(n).into_iter().enumerate() {
                assert_eq!(s.index(n), i);
            }
        }
        assert_eq!(Segment::new(4, 1), Segment { a: 1, b: 4 });
    }

    #[test]
    #[should_panic]
    fn loop_segment_panics() {
        Segment::new(2, 2);
    }

    #[test]
    fn graph_examples() {
        let sq = PointSet::from_ints(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        let g = build_crossing_graph(&sq).unwrap();
        assert_eq!(g.segments().len(), 6);
        assert_eq!(g.edge_count(), 1);
        let i = Segment::new(0, 2).index(4);
        let j = Segment::new(1, 3).index(4);
        assert!(g.adjacent(i, j));

        let tri = PointSet::from_ints(&[(0, 0), (1, 0), (0, 1)]);
        let g = build_crossing_graph(&tri).unwrap();
        assert_eq!((g.segments().len(), g.edge_count()), (3, 0));

        let g = build_crossing_graph(&convex_position(5)).unwrap();
        assert_eq!((g.segments().len(), g.edge_count()), (10, 5));
    }

    #[test]
    fn rejects_collinear() {
        let s = PointSet::from_ints(&[(0, 0), (1, 1), (2, 2), (0, 1)]);
        assert!(matches!(
            build_crossing_graph(&s),
            Err(Error::NotGeneralPosition(0, 1, 2))
        ));
        assert!(max_crossing_family(&s).is_err());
        assert!(has_k_family(&s, 1).is_err());
        assert!(count_k_families(&s, 1).is_err());
    }

    #[test]
    fn two_points() {
        let s = PointSet::from_ints(&[(0, 0), (1, 3)]);
        let (k, w) = max_crossing_family(&s).unwrap();
        assert_eq!(k, 1);
        assert_eq!(w.members(), &[Segment::new(0, 1)]);
    }

    #[test]
    fn convex_families() {
        let s = convex_position(10);
        let (k, w) = max_crossing_family(&s).unwrap();
        assert_eq!(k, 5);
        assert!(w.validate(&s).unwrap());

        let s8 = convex_position(8);
        let w4 = has_k_family(&s8, 4).unwrap().expect("witness");
        assert_eq!(w4.len(), 4);
        assert!(w4.validate(&s8).unwrap());
        assert!(has_k_family(&s8, 5).unwrap().is_none());
        assert_eq!(has_k_family(&s8, 1).unwrap().unwrap().len(), 1);
        assert!(has_k_family(&s8, 0).is_err());
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_k_families(&convex_position(5), 2).unwrap(), 5);
        let tri = PointSet::from_ints(&[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(count_k_families(&tri, 2).unwrap(), 0);
        let sq = PointSet::from_ints(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert_eq!(count_k_families(&sq, 2).unwrap(), 1);
        assert_eq!(count_k_families(&sq, 1).unwrap(), 6);
        assert_eq!(count_k_families(&sq, 0).unwrap(), 1);
        // Convex hexagon: a 3-family uses all six points, one matching works.
        assert_eq!(count_k_families(&convex_position(6), 3).unwrap(), 1);
        assert_eq!(count_k_families(&convex_position(7), 3).unwrap(), 7);
    }

    #[test]
    fn parallel_agrees() {
        for n in 4..14 {
            let s = convex_position(n);
            let g = build_crossing_graph(&s).unwrap();
            let p = g.max_family_parallel();
            assert_eq!(p.len(), g.max_family().len());
            assert!(p.validate(&s).unwrap());
        }
    }

    #[test]
    fn incident_count_splits_total() {
        let s = PointSet::from_ints(&[
            (0, 0),
            (7, 1),
            (3, 9),
            (10, 8),
            (2, 4),
            (6, 5),
            (9, 2),
            (5, 13),
        ]);
        let g = build_crossing_graph(&s).unwrap();
        for k in 1..=4 {
            // Each k-family touches 2k points, so summing over points counts it 2k times.
            let total: u64 = (0..s.len()).map(|p| g.count_families_at(p, k)).sum();
            assert_eq!(total, 2 * k as u64 * g.count_families(k));
        }
    }
}
