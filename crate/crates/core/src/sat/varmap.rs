use crate::crossing::Segment;

/// Ids of the orientation and crossing variables for `n` labelled points.
///
/// Triple variable `X_abc` (`a < b < c`) has id `1 + rank(a, b, c)`, the
/// lexicographic rank among all 3-subsets. Every 4-subset `w < x < y < z`
/// owns three consecutive crossing variables after the triple block, one
/// per segment pairing in the order `{wx, yz}`, `{wy, xz}`, `{wz, xy}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarMap {
    n: usize,
    binom: Vec<Vec<u64>>,
}

/// A decoded variable id.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Triple(usize, usize, usize),
    Pair(Segment, Segment),
}

impl VarMap {
    pub fn new(n: usize) -> Self {
        // Only k <= 4 is ever needed.
        let mut binom = vec![vec![0u64; 5]; n + 2];
        for row in binom.iter_mut() {
            row[0] = 1;
        }
        for m in 1..n + 2 {
            for k in 1..5 {
                binom[m][k] = binom[m - 1][k - 1] + binom[m - 1][k];
            }
        }
        VarMap { n, binom }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn c(&self, m: usize, k: usize) -> u64 {
        if m < k {
            0
        } else {
            self.binom[m][k]
        }
    }

    pub fn triple_count(&self) -> usize {
        self.c(self.n, 3) as usize
    }

    pub fn pair_count(&self) -> usize {
        3 * self.c(self.n, 4) as usize
    }

    pub fn num_vars(&self) -> usize {
        self.triple_count() + self.pair_count()
    }

    /// Lexicographic rank of a strictly increasing combination.
    fn rank(&self, comb: &[usize]) -> usize {
        let k = comb.len();
        let tail: u64 = comb
            .iter()
            .enumerate()
            .map(|(i, &c)| self.c(self.n - 1 - c, k - i))
            .sum();
        (self.c(self.n, k) - 1 - tail) as usize
    }

    fn unrank(&self, mut r: usize, k: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(k);
        let mut next = 0;
        for i in 0..k {
            let mut c = next;
            loop {
                // Combinations starting with c at this position.
                let block = self.c(self.n - 1 - c, k - 1 - i) as usize;
                if r < block {
                    break;
                }
                r -= block;
                c += 1;
            }
            out.push(c);
            next = c + 1;
        }
        out
    }

    /// Id of `X_abc` for sorted `a < b < c`.
    pub fn triple_var(&self, a: usize, b: usize, c: usize) -> usize {
        debug_assert!(a < b && b < c && c < self.n);
        1 + self.rank(&[a, b, c])
    }

    /// Signed literal asserting that `(a, b, c)` is counterclockwise, for
    /// any three distinct labels.
    pub fn orientation_literal(&self, a: usize, b: usize, c: usize) -> i32 {
        let mut t = [a, b, c];
        let mut odd = false;
        for i in 0..3 {
            for j in 0..2 - i {
                if t[j] > t[j + 1] {
                    t.swap(j, j + 1);
                    odd = !odd;
                }
            }
        }
        let v = self.triple_var(t[0], t[1], t[2]) as i32;
        if odd {
            -v
        } else {
            v
        }
    }

    /// Id of `Y_{s1,s2}` for two disjoint segments.
    pub fn pair_var(&self, s1: Segment, s2: Segment) -> usize {
        debug_assert!(!s1.shares_endpoint(s2));
        let mut q = [s1.a, s1.b, s2.a, s2.b];
        q.sort_unstable();
        let lo = s1.min(s2);
        let part = if lo.b == q[1] {
            0
        } else if lo.b == q[2] {
            1
        } else {
            2
        };
        self.triple_count() + 3 * self.rank(&q) + part + 1
    }

    /// The two segments of the pairing `part` (0, 1 or 2) of a sorted 4-set.
    pub fn pairing(q: [usize; 4], part: usize) -> (Segment, Segment) {
        let [w, x, y, z] = q;
        match part {
            0 => (Segment::new(w, x), Segment::new(y, z)),
            1 => (Segment::new(w, y), Segment::new(x, z)),
            _ => (Segment::new(w, z), Segment::new(x, y)),
        }
    }

    pub fn decode(&self, id: usize) -> Option<Var> {
        if id == 0 || id > self.num_vars() {
            return None;
        }
        let t = self.triple_count();
        if id <= t {
            let c = self.unrank(id - 1, 3);
            return Some(Var::Triple(c[0], c[1], c[2]));
        }
        let r = id - t - 1;
        let q = self.unrank(r / 3, 4);
        let (s1, s2) = Self::pairing([q[0], q[1], q[2], q[3]], r % 3);
        Some(Var::Pair(s1, s2))
    }
}

/// All `k`-subsets of `0..n` in lexicographic order, passed to `f`.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        f(&c);
        let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
            return;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}
