//! Geometric thrackles and the cycle structure used when contracting
//! replicated crossing families.
//!
//! A geometric thrackle is a straight-line drawing in which every two edges
//! either share an endpoint or cross properly. Such drawings never contain
//! an even cycle; [`has_even_cycle`] and [`is_forest`] are purely
//! combinatorial and ignore the drawing.

use crate::crossing::{OrientationTable, Segment};
use crate::error::{Error, Result};
use crate::geometry::{Orientation, PointSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricGraph {
    points: PointSet,
    edges: Vec<Segment>,
}

impl GeometricGraph {
    /// Edges are sorted; duplicates and out-of-range endpoints are errors.
    pub fn new(points: PointSet, mut edges: Vec<Segment>) -> Result<Self> {
        for &e in &edges {
            if e.b >= points.len() {
                return Err(Error::InvalidSegment {
                    a: e.a,
                    b: e.b,
                    n: points.len(),
                });
            }
        }
        edges.sort();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Parameter(format!("repeated edge {}", w[0])));
        }
        Ok(GeometricGraph { points, edges })
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn edges(&self) -> &[Segment] {
        &self.edges
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.points.len()];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        adj
    }
}

/// Every pair of distinct edges shares an endpoint or crosses properly.
///
/// Two edges sharing an endpoint with all three points collinear overlap,
/// and are rejected.
pub fn is_geometric_thrackle(g: &GeometricGraph) -> bool {
    let table = OrientationTable::from_points(&g.points);
    let edges = &g.edges;
    for (i, &e) in edges.iter().enumerate() {
        for &f in &edges[i + 1..] {
            if e.shares_endpoint(f) {
                let (p, q) = if e.a == f.a || e.a == f.b {
                    (e.b, e.a)
                } else {
                    (e.a, e.b)
                };
                let r = if f.a == q { f.b } else { f.a };
                if table.get(p, q, r) == Orientation::Collinear {
                    return false;
                }
            } else if !table.crosses(e, f) {
                return false;
            }
        }
    }
    true
}

/// Whether the graph has a cycle of even length.
///
/// A block that is neither a bridge nor a single cycle contains two
/// vertices joined by three internally disjoint paths, two of which have
/// equal parity. So an even cycle exists iff some block has more edges
/// than vertices, or is itself an even cycle.
pub fn has_even_cycle(g: &GeometricGraph) -> bool {
    blocks(g.points.len(), &g.adjacency())
        .into_iter()
        .any(|(v, e)| e > v || (e == v && e % 2 == 0))
}

pub fn is_forest(g: &GeometricGraph) -> bool {
    let mut parent: Vec<usize> = (0..g.points.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in &g.edges {
        let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// Whether the graph is 2-colorable.
pub fn is_bipartite(g: &GeometricGraph) -> bool {
    let adj = g.adjacency();
    let mut color = vec![None; adj.len()];
    for s in 0..adj.len() {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let cu = color[u].unwrap();
            for &w in &adj[u] {
                match color[w] {
                    None => {
                        color[w] = Some(!cu);
                        stack.push(w);
                    }
                    Some(cw) if cw == cu => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// (vertex count, edge count) of every biconnected component, by an
/// iterative Hopcroft-Tarjan edge-stack traversal.
fn blocks(n: usize, adj: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut out = Vec::new();
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, parent, next neighbour position)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (u, parent, ref mut pos)) = stack.last_mut() {
            if *pos < adj[u].len() {
                let w = adj[u][*pos];
                *pos += 1;
                if disc[w] == usize::MAX {
                    edge_stack.push((u, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, u, 0));
                } else if w != parent && disc[w] < disc[u] {
                    edge_stack.push((u, w));
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        let mut verts = Vec::new();
                        let mut edges = 0;
                        while let Some(e) = edge_stack.pop() {
                            edges += 1;
                            verts.push(e.0);
                            verts.push(e.1);
                            if e == (p, u) {
                                break;
                            }
                        }
                        verts.sort_unstable();
                        verts.dedup();
                        out.push((verts.len(), edges));
                    }
                }
            }
        }
    }
    out
}

/// Star polygon drawing of the odd cycle `C_c` on a convex `c`-gon: point
/// `i` is joined to `i + (c-1)/2 (mod c)`.
pub fn star_polygon(c: usize) -> Result<GeometricGraph> {
    if c < 3 || c.is_multiple_of(2) {
        return Err(Error::Parameter(format!(
            "star polygon needs an odd c >= 3, got {c}"
        )));
    }
    let points = crate::geometry::convex_position(c);
    // Points on the parabola are in convex position in x-order, which is
    // also their cyclic order around the hull.
    let step = (c - 1) / 2;
    let edges = (0..c).map(|i| Segment::new(i, (i + step) % c)).collect();
    GeometricGraph::new(points, edges)
}
