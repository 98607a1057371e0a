//! CNF encoding of "some `n`-point abstract order type has no `k`-crossing
//! family".
//!
//! Points are labelled `0..n` in x-order. Each sorted triple gets a
//! variable that is true iff the triple is counterclockwise; unsorted
//! triples use the sorted variable, negated for odd permutations. The
//! instance has three clause groups:
//!
//! 1. signotope axioms: for every 4-subset the sign sequence
//!    `(abc, abd, acd, bcd)` changes sign at most once, written as 8
//!    clauses forbidding `+-+` and `-+-` on every three positions;
//! 2. crossing definition: each pair variable is equivalent to "the two
//!    segments cross", 8 clauses per pair variable;
//! 3. no `k`-family: for every matching of `k` segments on `2k` points,
//!    some pair of them does not cross.

mod dimacs;
mod varmap;

use std::ops::Range;

use rayon::prelude::*;

pub use dimacs::{emit_dimacs, parse_dimacs, parse_model, write_dimacs_file};
pub use varmap::{Var, VarMap};

use crate::crossing::{OrientationTable, Segment};
use crate::error::{Error, Result};
use crate::geometry::{Orientation, PointSet};
use varmap::for_each_subset;

/// Sorted point labels `a < b < c`.
pub type Triple = (usize, usize, usize);

/// Clause database in flat storage.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    num_vars: usize,
    lits: Vec<i32>,
    starts: Vec<usize>,
    comments: Vec<String>,
}

impl Cnf {
    pub fn new(num_vars: usize) -> Self {
        Cnf {
            num_vars,
            lits: Vec::new(),
            starts: vec![0],
            comments: Vec::new(),
        }
    }

    pub fn from_clauses(num_vars: usize, clauses: &[Vec<i32>]) -> Result<Self> {
        let mut cnf = Cnf::new(num_vars);
        for c in clauses {
            cnf.try_push(c)?;
        }
        Ok(cnf)
    }

    /// Adds a clause, rejecting empty clauses, out-of-range or zero
    /// literals and repeated literals.
    pub fn try_push(&mut self, clause: &[i32]) -> Result<()> {
        if clause.is_empty() {
            return Err(Error::Parameter("empty clause".into()));
        }
        for (i, &l) in clause.iter().enumerate() {
            if l == 0 || l.unsigned_abs() as usize > self.num_vars {
                return Err(Error::Parameter(format!(
                    "literal {l} out of range 1..={}",
                    self.num_vars
                )));
            }
            if clause[..i].contains(&l) {
                return Err(Error::Parameter(format!("repeated literal {l}")));
            }
        }
        self.push(clause);
        Ok(())
    }

    fn push(&mut self, clause: &[i32]) {
        self.lits.extend_from_slice(clause);
        self.starts.push(self.lits.len());
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn clause(&self, i: usize) -> &[i32] {
        &self.lits[self.starts[i]..self.starts[i + 1]]
    }

    pub fn clauses(&self) -> impl Iterator<Item = &[i32]> + '_ {
        (0..self.num_clauses()).map(|i| self.clause(i))
    }

    /// `c` lines emitted ahead of the DIMACS header.
    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub fn set_comments(&mut self, comments: Vec<String>) {
        self.comments = comments;
    }
}

/// Truth value per variable, `1..=num_vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn all(num_vars: usize, value: bool) -> Self {
        Assignment {
            values: vec![value; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, var: usize) -> bool {
        self.values[var - 1]
    }

    pub fn set(&mut self, var: usize, v: bool) {
        self.values[var - 1] = v;
    }

    #[inline]
    pub fn satisfies(&self, lit: i32) -> bool {
        self.values[lit.unsigned_abs() as usize - 1] == (lit > 0)
    }

    /// Signed-literal listing `1 -2 3 ...` of the whole assignment.
    pub fn to_literals(&self) -> Vec<i32> {
        (1..=self.values.len())
            .map(|v| if self.value(v) { v as i32 } else { -(v as i32) })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    /// Index of the first clause, in clause order, that is false.
    Violated(usize),
}

/// Evaluates every clause. Clauses are checked in parallel; the reported
/// index is always the first violated one.
pub fn verify_assignment(cnf: &Cnf, asg: &Assignment) -> Result<Verdict> {
    if asg.num_vars() < cnf.num_vars() {
        return Err(Error::IncompleteModel(asg.num_vars() + 1));
    }
    let first = (0..cnf.num_clauses())
        .into_par_iter()
        .with_min_len(4096)
        .position_first(|i| !cnf.clause(i).iter().any(|&l| asg.satisfies(l)));
    Ok(first.map_or(Verdict::Satisfied, Verdict::Violated))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClauseGroup {
    Signotope,
    Crossing,
    NoFamily,
}

/// Clause index ranges of the three groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseGroups {
    pub signotope: Range<usize>,
    pub crossing: Range<usize>,
    pub no_family: Range<usize>,
}

impl ClauseGroups {
    pub fn group_of(&self, clause: usize) -> Option<ClauseGroup> {
        if self.signotope.contains(&clause) {
            Some(ClauseGroup::Signotope)
        } else if self.crossing.contains(&clause) {
            Some(ClauseGroup::Crossing)
        } else if self.no_family.contains(&clause) {
            Some(ClauseGroup::NoFamily)
        } else {
            None
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub cnf: Cnf,
    pub map: VarMap,
    pub groups: ClauseGroups,
}

/// The 8 signotope clauses of one sorted 4-subset.
fn signotope_clauses(map: &VarMap, q: &[usize], mut emit: impl FnMut(&[i32])) {
    let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
    let s = [
        map.triple_var(a, b, c) as i32,
        map.triple_var(a, b, d) as i32,
        map.triple_var(a, c, d) as i32,
        map.triple_var(b, c, d) as i32,
    ];
    for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        emit(&[-s[i], s[j], -s[k]]);
        emit(&[s[i], -s[j], s[k]]);
    }
}

/// The 8 clauses of `Y <-> (abc != abd) and (cda != cdb)`.
fn crossing_clauses(map: &VarMap, s1: Segment, s2: Segment, mut emit: impl FnMut(&[i32])) {
    let y = map.pair_var(s1, s2) as i32;
    let (a, b, c, d) = (s1.a, s1.b, s2.a, s2.b);
    let u = map.orientation_literal(a, b, c);
    let v = map.orientation_literal(a, b, d);
    let w = map.orientation_literal(c, d, a);
    let z = map.orientation_literal(c, d, b);
    emit(&[-y, u, v]);
    emit(&[-y, -u, -v]);
    emit(&[-y, w, z]);
    emit(&[-y, -w, -z]);
    for (su, sw) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        emit(&[-su * u, su * v, -sw * w, sw * z, y]);
    }
}

/// Perfect matchings of a sorted list: the first element is paired with
/// each later one in turn.
fn for_each_matching(points: &[usize], f: &mut impl FnMut(&[Segment])) {
    fn rec(rest: &mut Vec<usize>, acc: &mut Vec<Segment>, f: &mut impl FnMut(&[Segment])) {
        if rest.is_empty() {
            f(acc);
            return;
        }
        let first = rest.remove(0);
        for i in 0..rest.len() {
            let partner = rest.remove(i);
            acc.push(Segment::new(first, partner));
            rec(rest, acc, f);
            acc.pop();
            rest.insert(i, partner);
        }
        rest.insert(0, first);
    }
    rec(&mut points.to_vec(), &mut Vec::new(), f);
}

/// Builds the no-`k`-family instance on `n` points. Requires `k >= 2` and
/// `n >= 2k`.
pub fn encode_no_k_family(n: usize, k: usize) -> Result<Instance> {
    if k < 2 || n < 2 * k {
        return Err(Error::Parameter(format!(
            "need k >= 2 and n >= 2k, got n = {n}, k = {k}"
        )));
    }
    let map = VarMap::new(n);
    let mut cnf = Cnf::new(map.num_vars());

    for_each_subset(n, 4, |q| signotope_clauses(&map, q, |c| cnf.push(c)));
    let signotope = 0..cnf.num_clauses();

    for_each_subset(n, 4, |q| {
        for part in 0..3 {
            let (s1, s2) = VarMap::pairing([q[0], q[1], q[2], q[3]], part);
            crossing_clauses(&map, s1, s2, |c| cnf.push(c));
        }
    });
    let crossing = signotope.end..cnf.num_clauses();

    let mut clause = Vec::with_capacity(k * (k - 1) / 2);
    for_each_subset(n, 2 * k, |pts| {
        for_each_matching(pts, &mut |m: &[Segment]| {
            clause.clear();
            for i in 0..m.len() {
                for j in i + 1..m.len() {
                    clause.push(-(map.pair_var(m[i], m[j]) as i32));
                }
            }
            cnf.push(&clause);
        });
    });
    let no_family = crossing.end..cnf.num_clauses();

    cnf.set_comments(vec![
        format!("no {k}-crossing family on {n} points"),
        format!(
            "vars 1..{}: X_abc for a<b<c (lexicographic), true iff points a,b,c are counterclockwise; points labelled in x-order",
            map.triple_count()
        ),
        format!(
            "vars {}..{}: Y for disjoint segment pairs, three per 4-subset w<x<y<z in the order {{wx,yz}} {{wy,xz}} {{wz,xy}}; true iff the segments cross",
            map.triple_count() + 1,
            map.num_vars()
        ),
        format!("clauses 1..{}: signotope axioms, 8 per 4-subset", signotope.end),
        format!("clauses {}..{}: crossing equivalences, 8 per Y (both directions)", crossing.start + 1, crossing.end),
        format!("clauses {}..{}: no {k} pairwise crossing segments", no_family.start + 1, no_family.end),
    ]);
    Ok(Instance {
        cnf,
        map,
        groups: ClauseGroups {
            signotope,
            crossing,
            no_family,
        },
    })
}

/// Labels in x-order (ties by y): entry `i` is the original index of the
/// point labelled `i`. Lexicographic order equals x-order after an
/// infinitesimal rotation, which keeps every orientation.
pub fn signotope_labeling(s: &PointSet) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..s.len()).collect();
    idx.sort_by(|&i, &j| (&s.point(i).x, &s.point(i).y).cmp(&(&s.point(j).x, &s.point(j).y)));
    idx
}

/// Orientation and crossing values of a concrete point set, with points
/// relabelled by [`signotope_labeling`].
pub fn assignment_from_pointset(s: &PointSet, map: &VarMap) -> Result<Assignment> {
    if s.len() != map.n() {
        return Err(Error::SizeMismatch {
            expected: map.n(),
            got: s.len(),
        });
    }
    let labeled: PointSet = signotope_labeling(s)
        .into_iter()
        .map(|i| s.point(i).clone())
        .collect();
    let table = OrientationTable::from_points(&labeled);
    if let Some((i, j, k)) = table.first_collinear() {
        return Err(Error::NotGeneralPosition(i, j, k));
    }
    let mut asg = Assignment::all(map.num_vars(), false);
    let n = s.len();
    for_each_subset(n, 3, |t| {
        let ccw = table.get(t[0], t[1], t[2]) == Orientation::CounterClockwise;
        asg.set(map.triple_var(t[0], t[1], t[2]), ccw);
    });
    for_each_subset(n, 4, |q| {
        for part in 0..3 {
            let (s1, s2) = VarMap::pairing([q[0], q[1], q[2], q[3]], part);
            asg.set(map.pair_var(s1, s2), table.crosses(s1, s2));
        }
    });
    Ok(asg)
}

/// Signed sorted triples of an assignment satisfying the signotope axioms.
pub fn decode_order_type(asg: &Assignment, map: &VarMap) -> Result<Vec<(Triple, Orientation)>> {
    if asg.num_vars() < map.triple_count() {
        return Err(Error::IncompleteModel(asg.num_vars() + 1));
    }
    let mut index = 0;
    let mut violated = None;
    for_each_subset(map.n(), 4, |q| {
        signotope_clauses(map, q, |c| {
            if violated.is_none() && !c.iter().any(|&l| asg.satisfies(l)) {
                violated = Some(index);
            }
            index += 1;
        })
    });
    if let Some(i) = violated {
        return Err(Error::SignotopeViolation(i));
    }
    let mut out = Vec::with_capacity(map.triple_count());
    for_each_subset(map.n(), 3, |t| {
        let o = if asg.value(map.triple_var(t[0], t[1], t[2])) {
            Orientation::CounterClockwise
        } else {
            Orientation::Clockwise
        };
        out.push(((t[0], t[1], t[2]), o));
    });
    Ok(out)
}

/// `C(n, 3) + 3 C(n, 4)` variables; `8 C(n, 4)`, `24 C(n, 4)` and
/// `C(n, 2k) (2k-1)!!` clauses in the three groups.
pub fn closed_form_counts(n: usize, k: usize) -> (u64, [u64; 3]) {
    fn binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
    }
    let (n, k) = (n as u64, k as u64);
    let double_factorial: u64 = (1..2 * k).step_by(2).product();
    (
        binom(n, 3) + 3 * binom(n, 4),
        [
            8 * binom(n, 4),
            24 * binom(n, 4),
            binom(n, 2 * k) * double_factorial,
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::convex_position;

    #[test]
    fn smallest_instance() {
        let inst = encode_no_k_family(4, 2).unwrap();
        assert_eq!(inst.map.triple_count(), 4);
        assert_eq!(inst.map.pair_count(), 3);
        assert_eq!(inst.cnf.num_vars(), 7);
        assert_eq!(inst.groups.no_family.len(), 3);
        for i in inst.groups.no_family.clone() {
            let c = inst.cnf.clause(i);
            assert_eq!(c.len(), 1);
            assert!(c[0] < 0 && c[0].unsigned_abs() > 4);
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(encode_no_k_family(5, 3).is_err());
        assert!(encode_no_k_family(5, 1).is_err());
    }

    #[test]
    fn counts_match_closed_forms() {
        for n in 4..=12 {
            for k in 2..=n / 2 {
                let inst = encode_no_k_family(n, k).unwrap();
                let (vars, groups) = closed_form_counts(n, k);
                assert_eq!(inst.cnf.num_vars() as u64, vars);
                assert_eq!(inst.groups.signotope.len() as u64, groups[0]);
                assert_eq!(inst.groups.crossing.len() as u64, groups[1]);
                assert_eq!(inst.groups.no_family.len() as u64, groups[2], "n {n} k {k}");
            }
        }
    }

    #[test]
    fn matchings_of_six_points() {
        let mut all = Vec::new();
        for_each_matching(&[0, 1, 2, 3, 4, 5], &mut |m: &[Segment]| {
            all.push(m.to_vec())
        });
        assert_eq!(all.len(), 15);
        assert_eq!(
            all[0],
            vec![Segment::new(0, 1), Segment::new(2, 3), Segment::new(4, 5)]
        );
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 15);
    }

    #[test]
    fn verdicts() {
        let cnf = Cnf::from_clauses(1, &[vec![1]]).unwrap();
        assert_eq!(
            verify_assignment(&cnf, &Assignment::all(1, true)).unwrap(),
            Verdict::Satisfied
        );
        assert_eq!(
            verify_assignment(&cnf, &Assignment::all(1, false)).unwrap(),
            Verdict::Violated(0)
        );
        assert!(verify_assignment(&cnf, &Assignment::all(0, false)).is_err());
        assert!(Cnf::from_clauses(1, &[vec![]]).is_err());
        assert!(Cnf::from_clauses(1, &[vec![2]]).is_err());
        assert!(Cnf::from_clauses(2, &[vec![1, 1]]).is_err());
    }

    #[test]
    fn convex_pentagon_violates_family_clause() {
        let inst = encode_no_k_family(5, 2).unwrap();
        let asg = assignment_from_pointset(&convex_position(5), &inst.map).unwrap();
        match verify_assignment(&inst.cnf, &asg).unwrap() {
            Verdict::Violated(i) => {
                assert_eq!(inst.groups.group_of(i), Some(ClauseGroup::NoFamily))
            }
            Verdict::Satisfied => panic!("convex pentagon has a crossing pair"),
        }
    }

    #[test]
    fn decode_cup() {
        // Points on an upward parabola in x-order: every triple is counterclockwise.
        let map = VarMap::new(4);
        let asg = assignment_from_pointset(&convex_position(4), &map).unwrap();
        let ot = decode_order_type(&asg, &map).unwrap();
        assert_eq!(ot.len(), 4);
        assert!(ot.iter().all(|&(_, o)| o == Orientation::CounterClockwise));
    }

    #[test]
    fn decode_interior_point() {
        // Triangle with one interior point, decoded against coordinates.
        let s = PointSet::from_ints(&[(0, 0), (10, 1), (4, 9), (5, 3), (12, 8)]);
        let map = VarMap::new(5);
        let asg = assignment_from_pointset(&s, &map).unwrap();
        let labels = signotope_labeling(&s);
        for ((a, b, c), o) in decode_order_type(&asg, &map).unwrap() {
            assert_eq!(o, s.orientation(labels[a], labels[b], labels[c]));
        }
    }

    #[test]
    fn non_signotope_rejected() {
        let map = VarMap::new(4);
        // (+, -, +, +) on abc, abd, acd, bcd.
        let asg = Assignment::new(vec![true, false, true, true, false, false, false]);
        assert!(matches!(
            decode_order_type(&asg, &map),
            Err(Error::SignotopeViolation(_))
        ));
    }

    #[test]
    fn size_mismatch() {
        let map = VarMap::new(5);
        assert!(matches!(
            assignment_from_pointset(&convex_position(4), &map),
            Err(Error::SizeMismatch {
                expected: 5,
                got: 4
            })
        ));
    }

    #[test]
    fn flipping_a_pair_variable_breaks_the_crossing_group() {
        let s = PointSet::from_ints(&[(0, 0), (10, 1), (4, 9), (5, 3), (12, 8), (7, 13)]);
        let inst = encode_no_k_family(6, 2).unwrap();
        let asg = assignment_from_pointset(&s, &inst.map).unwrap();
        for var in inst.map.triple_count() + 1..=inst.map.num_vars() {
            let mut flipped = asg.clone();
            flipped.set(var, !asg.value(var));
            let broken = inst
                .groups
                .crossing
                .clone()
                .any(|i| !inst.cnf.clause(i).iter().any(|&l| flipped.satisfies(l)));
            assert!(broken, "var {var}");
        }
    }
}
