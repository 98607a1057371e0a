//! Point replication: every point `(x, y)` of a set is replaced by `m`
//! copies `(x + i*eps, y + (i*eps)^2)`, `i = 0..m`.
//!
//! For small enough `eps` the copies of each point satisfy two separation
//! properties, checked exactly by [`verify_s1`] and [`verify_s2`]:
//!
//! * a segment between two copies of `p` only crosses segments that have an
//!   endpoint at another copy of `p`;
//! * if `p` is above (below) `q`, every line through two copies of `p` is
//!   above (below) every copy of `q`.
//!
//! Under both properties `cf(S') <= m * cf(S)` for the replicated set `S'`.

use std::fmt;

use crate::crossing::{all_segments, OrientationTable, Segment};
use crate::error::{Error, Result};
use crate::geometry::{has_distinct_xy, Coord, Orientation, Point, PointSet};

/// Maximum number of halvings tried by [`choose_epsilon`].
pub const MAX_HALVINGS: usize = 64;

/// Source point and copy number of every point of a replicated set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyMap {
    m: usize,
    source_n: usize,
    entries: Vec<(usize, usize)>,
}

impl CopyMap {
    /// Copy `i` of source point `j` gets index `j * m + i`.
    pub fn regular(source_n: usize, m: usize) -> Self {
        let entries = (0..source_n)
            .flat_map(|j| (0..m).map(move |i| (j, i)))
            .collect();
        CopyMap {
            m,
            source_n,
            entries,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn source_n(&self) -> usize {
        self.source_n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source(&self, i: usize) -> usize {
        self.entries[i].0
    }

    pub fn copy(&self, i: usize) -> usize {
        self.entries[i].1
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    /// Replicated indices of the copies of `src`, by copy number.
    pub fn copies_of(&self, src: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.entries.len())
            .filter(|&i| self.entries[i].0 == src)
            .collect();
        v.sort_by_key(|&i| self.entries[i].1);
        v
    }
}

/// Outcome of certifying a replicated set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplicationCertificate {
    pub epsilon: Coord,
    pub m: usize,
    pub source_n: usize,
    pub s1_ok: bool,
    pub s2_ok: bool,
}

impl fmt::Display for ReplicationCertificate {
    /// `key: value` lines.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "epsilon: {}", self.epsilon)?;
        writeln!(f, "m: {}", self.m)?;
        writeln!(f, "source_n: {}", self.source_n)?;
        writeln!(f, "s1_ok: {}", self.s1_ok)?;
        writeln!(f, "s2_ok: {}", self.s2_ok)
    }
}

/// Places `m` parabolic copies of every point.
///
/// Fails if the result is not in general position or has repeated x- or
/// y-coordinates. The separation properties are not checked here.
pub fn replicate(s: &PointSet, m: usize, epsilon: &Coord) -> Result<(PointSet, CopyMap)> {
    if m == 0 {
        return Err(Error::Parameter("copy count must be at least 1".into()));
    }
    if !epsilon.is_positive() {
        return Err(Error::Parameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let map = CopyMap::regular(s.len(), m);
    let points: PointSet = map
        .entries
        .iter()
        .map(|&(j, i)| {
            let p = s.point(j);
            let shift = &Coord::integer(i as i64) * epsilon;
            Point::new(&p.x + &shift, &p.y + &(&shift * &shift))
        })
        .collect();
    if let Some((a, b, c)) = points.first_collinear_triple() {
        return Err(Error::DegenerateEpsilon(
            epsilon.to_string(),
            format!("points {a}, {b}, {c} are collinear"),
        ));
    }
    if !has_distinct_xy(&points) {
        return Err(Error::DegenerateEpsilon(
            epsilon.to_string(),
            "repeated coordinates".into(),
        ));
    }
    Ok((points, map))
}

fn verify_s1_with(table: &OrientationTable, map: &CopyMap) -> bool {
    let n = table.len();
    let segments = all_segments(n);
    for src in 0..map.source_n {
        let copies = map.copies_of(src);
        for (x, &ci) in copies.iter().enumerate() {
            for &cj in &copies[x + 1..] {
                let inner = Segment::new(ci, cj);
                for &t in &segments {
                    if table.crosses(inner, t) && map.source(t.a) != src && map.source(t.b) != src {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Exhaustive exact check that a segment between two copies of a point only
/// crosses segments incident to another copy of that point.
pub fn verify_s1(replicated: &PointSet, map: &CopyMap) -> bool {
    verify_s1_with(&OrientationTable::from_points(replicated), map)
}

/// Exhaustive exact check that lines through two copies of `p` separate
/// the copies of every other point `q` according to the vertical order of
/// `p` and `q` in the source set. Equal source y-coordinates fail.
pub fn verify_s2(source: &PointSet, replicated: &PointSet, map: &CopyMap) -> bool {
    let copies: Vec<Vec<usize>> = (0..map.source_n).map(|j| map.copies_of(j)).collect();
    for p in 0..map.source_n {
        for (a, &ca) in copies[p].iter().enumerate() {
            for &cb in &copies[p][a + 1..] {
                let (left, right) = if replicated.point(ca).x < replicated.point(cb).x {
                    (ca, cb)
                } else {
                    (cb, ca)
                };
                for q in (0..map.source_n).filter(|&q| q != p) {
                    let want = match source.point(p).y.cmp(&source.point(q).y) {
                        std::cmp::Ordering::Greater => Orientation::Clockwise,
                        std::cmp::Ordering::Less => Orientation::CounterClockwise,
                        std::cmp::Ordering::Equal => return false,
                    };
                    if copies[q]
                        .iter()
                        .any(|&cq| replicated.orientation(left, right, cq) != want)
                    {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn min_coordinate_gap(s: &PointSet) -> Option<Coord> {
    let mut gap: Option<Coord> = None;
    for (i, p) in s.iter().enumerate() {
        for q in &s.points()[i + 1..] {
            for d in [(&p.x - &q.x).abs(), (&p.y - &q.y).abs()] {
                if gap.as_ref().is_none_or(|g| d < *g) {
                    gap = Some(d);
                }
            }
        }
    }
    gap
}

/// Largest `eps` of the form `gap / (4m * 2^h)`, `h <= 64`, for which the
/// replicated set is in general position with distinct coordinates and
/// passes both separation checks. `gap` is the smallest difference between
/// two x- or two y-coordinates of `s` (1 for a single point).
pub fn choose_epsilon(s: &PointSet, m: usize) -> Result<Coord> {
    if m == 0 {
        return Err(Error::Parameter("copy count must be at least 1".into()));
    }
    s.ensure_general_position()?;
    if !has_distinct_xy(s) {
        return Err(Error::Parameter(
            "source set must have distinct x- and y-coordinates".into(),
        ));
    }
    let gap = min_coordinate_gap(s).unwrap_or_else(Coord::one);
    let mut eps = &gap / &Coord::integer(4 * m as i64);
    let half = Coord::new(1, 2).expect("nonzero");
    for _ in 0..=MAX_HALVINGS {
        if let Ok((rep, map)) = replicate(s, m, &eps) {
            let table = OrientationTable::from_points(&rep);
            if verify_s1_with(&table, &map) && verify_s2(s, &rep, &map) {
                return Ok(eps);
            }
        }
        eps = &eps * &half;
    }
    Err(Error::EpsilonSearchExhausted(MAX_HALVINGS))
}

/// Replicates with a caller-chosen `eps` and records the verifier outcomes.
pub fn replicate_with_certificate(
    s: &PointSet,
    m: usize,
    epsilon: &Coord,
) -> Result<(PointSet, CopyMap, ReplicationCertificate)> {
    let (rep, map) = replicate(s, m, epsilon)?;
    let cert = ReplicationCertificate {
        epsilon: epsilon.clone(),
        m,
        source_n: s.len(),
        s1_ok: verify_s1(&rep, &map),
        s2_ok: verify_s2(s, &rep, &map),
    };
    Ok((rep, map, cert))
}

/// Replicates with a certified `eps`. `s` must already have distinct
/// coordinates (see [`crate::geometry::normalize_coordinates`]).
pub fn replicate_certified(
    s: &PointSet,
    m: usize,
) -> Result<(PointSet, CopyMap, ReplicationCertificate)> {
    let eps = choose_epsilon(s, m)?;
    replicate_with_certificate(s, m, &eps)
}

/// Drops points so that `target` remain: copy `m - 1` of the last
/// `m*n - target` source points is removed. Removing points keeps both
/// separation properties.
pub fn truncate(
    replicated: &PointSet,
    map: &CopyMap,
    target: usize,
) -> Result<(PointSet, CopyMap)> {
    let (n, m) = (map.source_n, map.m);
    let total = n * m;
    if target > total || (m > 0 && target + n < total) {
        return Err(Error::Parameter(format!(
            "cannot truncate {total} points ({n} sources, {m} copies) to {target}"
        )));
    }
    let drop = total - target;
    let keep: Vec<usize> = (0..map.len())
        .filter(|&i| {
            let (src, copy) = map.entries[i];
            !(copy + 1 == m && src >= n - drop)
        })
        .collect();
    let points = keep.iter().map(|&i| replicated.point(i).clone()).collect();
    let entries = keep.iter().map(|&i| map.entries[i]).collect();
    Ok((
        points,
        CopyMap {
            m,
            source_n: n,
            entries,
        },
    ))
}

/// Source-level segment set `{ pq : p_i q_j in F' }`, deduplicated.
///
/// A segment joining two copies of the same point is an error.
pub fn contract_family(
    replicated: &PointSet,
    map: &CopyMap,
    family: &[Segment],
) -> Result<Vec<Segment>> {
    let mut out = Vec::with_capacity(family.len());
    for &s in family {
        replicated.check_segment(s)?;
        let (p, q) = (map.source(s.a), map.source(s.b));
        if p == q {
            return Err(Error::SameSourceSegment(s.a, s.b));
        }
        out.push(Segment::new(p, q));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// A point set of `n` points whose largest crossing family has `k` segments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoundEntry {
    pub k: usize,
    pub n: usize,
}

/// Sizes of the largest known sets with a given maximum crossing family.
pub const LARGEST_KNOWN_SETS: [BoundEntry; 10] = [
    BoundEntry { k: 1, n: 4 },
    BoundEntry { k: 2, n: 9 },
    BoundEntry { k: 3, n: 14 },
    BoundEntry { k: 4, n: 20 },
    BoundEntry { k: 5, n: 25 },
    BoundEntry { k: 6, n: 29 },
    BoundEntry { k: 7, n: 34 },
    BoundEntry { k: 8, n: 41 },
    BoundEntry { k: 9, n: 45 },
    BoundEntry { k: 10, n: 50 },
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UpperBound {
    pub value: usize,
    /// Library entry achieving the bound; `None` when `floor(n/2)` is
    /// strictly smaller than every entry.
    pub entry: Option<BoundEntry>,
}

/// Smallest bound `cf(n) <= k * ceil(n / n_k)` over the library, where an
/// entry with `n <= n_k` gives `k` directly (subsets of the set). Ties go
/// to the earliest entry. The result never exceeds `floor(n/2)`.
pub fn best_known_upper_bound(n: usize, library: &[BoundEntry]) -> Result<UpperBound> {
    if library.is_empty() {
        return Err(Error::EmptyLibrary);
    }
    let mut best: Option<UpperBound> = None;
    for &e in library {
        if e.n == 0 {
            return Err(Error::Parameter("library entry with zero points".into()));
        }
        let value = if n <= e.n { e.k } else { e.k * n.div_ceil(e.n) };
        if best.is_none_or(|b| value < b.value) {
            best = Some(UpperBound {
                value,
                entry: Some(e),
            });
        }
    }
    let best = best.expect("non-empty library");
    if n / 2 < best.value {
        return Ok(UpperBound {
            value: n / 2,
            entry: None,
        });
    }
    Ok(best)
}
