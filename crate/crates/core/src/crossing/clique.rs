//! Bitset branch-and-bound maximum clique search with a greedy coloring
//! bound.
//!
//! Vertices are renumbered by a degeneracy ordering (the vertex removed
//! last comes first); coloring, branching and tie-breaking all follow this
//! ordering, so each search is deterministic.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::Bitset;

pub(crate) struct CliqueSolver {
    /// Adjacency in solver numbering.
    adj: Vec<Bitset>,
    /// Solver index -> caller vertex.
    order: Vec<usize>,
}

/// Degeneracy ordering, last removed vertex first. Ties go to the smaller
/// vertex index.
fn degeneracy_order(adj: &[Bitset]) -> Vec<usize> {
    let n = adj.len();
    let mut deg: Vec<usize> = adj.iter().map(Bitset::count).collect();
    let mut removed = vec![false; n];
    let mut seq = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("vertex left");
        removed[v] = true;
        seq.push(v);
        for u in adj[v].iter() {
            if !removed[u] {
                deg[u] -= 1;
            }
        }
    }
    seq.reverse();
    seq
}

impl CliqueSolver {
    pub fn new(adj: &[Bitset]) -> Self {
        let order = degeneracy_order(adj);
        let n = adj.len();
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let relabeled = order
            .iter()
            .map(|&v| {
                let mut row = Bitset::new(n);
                for u in adj[v].iter() {
                    row.insert(pos[u]);
                }
                row
            })
            .collect();
        CliqueSolver {
            adj: relabeled,
            order,
        }
    }

    fn to_caller(&self, clique: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = clique.iter().map(|&i| self.order[i]).collect();
        v.sort_unstable();
        v
    }

    /// Greedy sequential coloring of `cand`; returns vertices with their
    /// color, in non-decreasing color order. Vertices whose color is below
    /// `min_color` cannot lead to an improvement and are left out.
    fn color_sort(&self, cand: &Bitset, min_color: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(cand.count());
        let mut uncolored = cand.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                uncolored.remove(v);
                q.remove(v);
                q.and_not_assign(&self.adj[v]);
                if color >= min_color {
                    out.push((v, color));
                }
            }
        }
        out
    }

    fn expand(&self, clique: &mut Vec<usize>, mut cand: Bitset, search: &mut Search<'_>) {
        let min_color = (search.bound() + 1).saturating_sub(clique.len());
        let colored = self.color_sort(&cand, min_color);
        for &(v, color) in colored.iter().rev() {
            if clique.len() + color <= search.bound() {
                return;
            }
            clique.push(v);
            let next = cand.and(&self.adj[v]);
            if next.is_empty() || search.target == Some(clique.len()) {
                search.offer(clique);
            } else {
                self.expand(clique, next, search);
            }
            clique.pop();
            if search.done() {
                return;
            }
            cand.remove(v);
        }
    }

    pub fn maximum(&self) -> Vec<usize> {
        let n = self.adj.len();
        if n == 0 {
            return Vec::new();
        }
        let mut search = Search::new(0, None, None);
        self.expand(&mut Vec::new(), Bitset::full(n), &mut search);
        self.to_caller(&search.best)
    }

    /// Same optimum as [`CliqueSolver::maximum`]; root branches run in
    /// parallel and share the incumbent size.
    pub fn maximum_parallel(&self) -> Vec<usize> {
        let n = self.adj.len();
        if n == 0 {
            return Vec::new();
        }
        let colored = self.color_sort(&Bitset::full(n), 0);
        let shared = AtomicUsize::new(0);
        // Branch i sees the vertices that the sequential loop would still
        // hold when it reaches colored[i].
        let results: Vec<(usize, Vec<usize>)> = (0..colored.len())
            .into_par_iter()
            .rev()
            .filter_map(|i| {
                let (v, color) = colored[i];
                if color <= shared.load(Ordering::Relaxed) {
                    return None;
                }
                let mut cand = Bitset::new(n);
                for &(u, _) in &colored[..i] {
                    cand.insert(u);
                }
                let next = cand.and(&self.adj[v]);
                let mut search = Search::new(shared.load(Ordering::Relaxed), None, Some(&shared));
                let mut clique = vec![v];
                if next.is_empty() {
                    search.offer(&clique);
                } else {
                    self.expand(&mut clique, next, &mut search);
                }
                (!search.best.is_empty()).then_some((i, search.best))
            })
            .collect();
        let best = results
            .into_iter()
            .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(&a.0)))
            .map(|r| r.1)
            .unwrap_or_default();
        self.to_caller(&best)
    }

    /// First clique of exactly `k` vertices in search order.
    pub fn find(&self, k: usize) -> Option<Vec<usize>> {
        let n = self.adj.len();
        if k == 0 || n == 0 {
            return (k == 0).then(Vec::new);
        }
        let mut search = Search::new(k - 1, Some(k), None);
        self.expand(&mut Vec::new(), Bitset::full(n), &mut search);
        (search.best.len() >= k).then(|| self.to_caller(&search.best[..k]))
    }
}

struct Search<'a> {
    best: Vec<usize>,
    /// Size a new clique must exceed.
    floor: usize,
    target: Option<usize>,
    shared: Option<&'a AtomicUsize>,
}

impl<'a> Search<'a> {
    fn new(floor: usize, target: Option<usize>, shared: Option<&'a AtomicUsize>) -> Self {
        Search {
            best: Vec::new(),
            floor,
            target,
            shared,
        }
    }

    fn bound(&self) -> usize {
        let local = self.floor.max(self.best.len());
        match self.shared {
            Some(s) => local.max(s.load(Ordering::Relaxed)),
            None => local,
        }
    }

    fn offer(&mut self, clique: &[usize]) {
        if clique.len() > self.bound() {
            self.best = clique.to_vec();
            if let Some(s) = self.shared {
                s.fetch_max(clique.len(), Ordering::Relaxed);
            }
        }
    }

    fn done(&self) -> bool {
        self.target.is_some_and(|k| self.best.len() >= k)
    }
}

/// Number of `k`-cliques whose vertices all lie in `cand`.
pub(crate) fn count_cliques(adj: &[Bitset], cand: &Bitset, k: usize) -> u64 {
    match k {
        0 => 1,
        1 => cand.count() as u64,
        _ => {
            let mut rest = cand.clone();
            let mut total = 0;
            while let Some(v) = rest.first() {
                rest.remove(v);
                if rest.count() < k - 1 {
                    break;
                }
                let next = rest.and(&adj[v]);
                if next.count() >= k - 1 {
                    total += count_cliques(adj, &next, k - 1);
                }
            }
            total
        }
    }
}
