//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails. Run with
//!
//! ```text
//! cargo test -p crossfam --release --test acceptance -- --nocapture
//! ```

use std::io::{self, Write};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crossfam::crossing::{all_segments, brute_force_cf, max_crossing_family};
use crossfam::geometry::{convex_position, is_general_position, segments_cross, PointSet};
use crossfam::known::known_value;
use crossfam::replication::{
    best_known_upper_bound, contract_family, replicate_certified, truncate, verify_s1, verify_s2,
    LARGEST_KNOWN_SETS,
};
use crossfam::sat::{
    assignment_from_pointset, emit_dimacs, encode_no_k_family, verify_assignment, Verdict,
};
use crossfam::search::{anneal, random_convex_start, start_rng, SearchConfig};
use crossfam::thrackle::{star_polygon, GeometricGraph};
use crossfam::{has_k_family, normalize_coordinates, Segment};

const CRIT1_BUDGET: Duration = Duration::from_secs(60);
const CRIT2_PER_N: Duration = Duration::from_secs(1);
const CRIT4_BUDGET: Duration = Duration::from_secs(300);
const CRIT8_MIN_BYTES: u64 = 16_000_000;
const CRIT8_MAX_BYTES: u64 = 66_000_000;
const CRIT10_BUDGET: Duration = Duration::from_secs(600);
const CANDIDATE_BUDGET: Duration = Duration::from_secs(300);

type Outcome = Result<String, String>;

fn random_set(n: usize, bound: i64, rng: &mut ChaCha8Rng) -> PointSet {
    loop {
        let pts: Vec<(i64, i64)> = (0..n)
            .map(|_| (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound)))
            .collect();
        let s = PointSet::from_ints(&pts);
        if is_general_position(&s) {
            return s;
        }
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, budget: Duration, what: &str) -> Result<(), String> {
    check(elapsed < budget, || {
        format!("{what} took {elapsed:.2?}, budget {budget:?}")
    })
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let t = Instant::now();
    for i in 0..200 {
        let n = 4 + i % 6;
        let s = random_set(n, 1000, &mut rng);
        let (cf, f) = max_crossing_family(&s).map_err(|e| e.to_string())?;
        let oracle = brute_force_cf(&s).map_err(|e| e.to_string())?;
        check(
            cf == oracle && f.len() == cf && f.validate(&s).unwrap(),
            || format!("sample {i} (n = {n}): solver {cf}, brute force {oracle}"),
        )?;
    }
    within(t.elapsed(), CRIT1_BUDGET, "200 samples")?;
    Ok(format!("200 sets agree in {:.2?}", t.elapsed()))
}

fn criterion_2() -> Outcome {
    let mut worst = Duration::ZERO;
    for n in 4..=16 {
        let s = convex_position(n);
        let t = Instant::now();
        let (cf, f) = max_crossing_family(&s).map_err(|e| e.to_string())?;
        let dt = t.elapsed();
        worst = worst.max(dt);
        within(dt, CRIT2_PER_N, &format!("n = {n}"))?;
        check(cf == n / 2, || {
            format!("cf(convex {n}-gon) = {cf}, expected {}", n / 2)
        })?;
        // Independent witness: the long diagonals i -> i + n/2.
        let h = n / 2;
        let diag: Vec<Segment> = (0..h).map(|i| Segment::new(i, i + h)).collect();
        for (a, &s1) in diag.iter().enumerate() {
            for &s2 in &diag[a + 1..] {
                check(segments_cross(&s, s1, s2).unwrap(), || {
                    format!("long diagonals {s1} and {s2} miss")
                })?;
            }
        }
        check(f.validate(&s).unwrap(), || {
            format!("invalid witness for n = {n}")
        })?;
        if n <= 9 {
            let oracle = brute_force_cf(&s).unwrap();
            check(oracle == cf, || {
                format!("brute force gives {oracle} for n = {n}")
            })?;
        }
    }
    Ok(format!("n = 4..16 all floor(n/2), slowest {worst:.2?}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut min = usize::MAX;
    for i in 0..500 {
        let n = 5 + i % 8;
        let s = random_set(n, 10_000, &mut rng);
        let (cf, _) = max_crossing_family(&s).map_err(|e| e.to_string())?;
        check(cf >= 2, || format!("sample {i} (n = {n}) has cf = {cf}"))?;
        min = min.min(cf);
    }
    Ok(format!("500 sets with n = 5..12, minimum cf {min}"))
}

/// Convex 4- to 7-gons followed by 20 random sets with n <= 7.
fn replication_fixtures() -> Vec<PointSet> {
    let mut out: Vec<PointSet> = (4..=7).map(convex_position).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..20 {
        out.push(random_set(3 + i % 5, 100, &mut rng));
    }
    out
}

struct ReplicationCase {
    source: PointSet,
    replicated: PointSet,
    map: crossfam::replication::CopyMap,
    family: Vec<Segment>,
}

fn replication_cases() -> Result<Vec<ReplicationCase>, String> {
    let mut cases = Vec::new();
    for s in replication_fixtures() {
        let source = normalize_coordinates(&s);
        let (replicated, map, _) = replicate_certified(&source, 2).map_err(|e| e.to_string())?;
        let (_, f) = max_crossing_family(&replicated).map_err(|e| e.to_string())?;
        cases.push(ReplicationCase {
            source,
            replicated,
            map,
            family: f.members().to_vec(),
        });
    }
    Ok(cases)
}

fn criterion_4(cases: &[ReplicationCase], t: Instant) -> Outcome {
    for (i, c) in cases.iter().enumerate() {
        check(verify_s1(&c.replicated, &c.map), || {
            format!("fixture {i}: S1 fails")
        })?;
        check(verify_s2(&c.source, &c.replicated, &c.map), || {
            format!("fixture {i}: S2 fails")
        })?;
        let (cf_src, _) = max_crossing_family(&c.source).map_err(|e| e.to_string())?;
        let cf_rep = c.family.len();
        check(cf_rep <= 2 * cf_src, || {
            format!("fixture {i}: cf(S') = {cf_rep} > 2 * {cf_src}")
        })?;
    }
    within(t.elapsed(), CRIT4_BUDGET, "fixture suite")?;
    Ok(format!(
        "{} fixtures, m = 2, all within 2 cf(S)",
        cases.len()
    ))
}

fn criterion_5(cases: &[ReplicationCase]) -> Outcome {
    let mut checked = 0;
    for (i, c) in cases.iter().enumerate() {
        if c.family.len() <= 2 {
            continue;
        }
        checked += 1;
        let edges = contract_family(&c.replicated, &c.map, &c.family).map_err(|e| e.to_string())?;
        let g = GeometricGraph::new(c.source.clone(), edges).map_err(|e| e.to_string())?;
        check(crossfam::thrackle::is_geometric_thrackle(&g), || {
            format!("fixture {i}: contraction is not a thrackle")
        })?;
        check(crossfam::thrackle::is_forest(&g), || {
            format!("fixture {i}: contraction has a cycle")
        })?;
        check(!oracle_has_cycle(&g, |_| true), || {
            format!("fixture {i}: cycle oracle disagrees")
        })?;
    }
    check(checked > 0, || {
        "no fixture has a family larger than m".into()
    })?;
    Ok(format!(
        "{checked} contracted families are thrackle forests"
    ))
}

/// Depth-first enumeration of simple cycles; `accept` filters by length.
fn oracle_has_cycle(g: &GeometricGraph, accept: impl Fn(usize) -> bool) -> bool {
    let n = g.points().len();
    let mut adj = vec![vec![]; n];
    for e in g.edges() {
        adj[e.a].push(e.b);
        adj[e.b].push(e.a);
    }
    fn walk(
        adj: &[Vec<usize>],
        start: usize,
        v: usize,
        len: usize,
        seen: &mut [bool],
        accept: &dyn Fn(usize) -> bool,
    ) -> bool {
        for &w in &adj[v] {
            if w == start && len >= 3 && accept(len) {
                return true;
            }
            if w > start && !seen[w] {
                seen[w] = true;
                if walk(adj, start, w, len + 1, seen, accept) {
                    return true;
                }
                seen[w] = false;
            }
        }
        false
    }
    (0..n).any(|s| {
        let mut seen = vec![false; n];
        seen[s] = true;
        walk(&adj, s, s, 1, &mut seen, &accept)
    })
}

fn random_thrackle(rng: &mut ChaCha8Rng) -> GeometricGraph {
    let n = rng.gen_range(3..=10);
    let s = random_set(n, 1000, rng);
    let mut segs = all_segments(n);
    for i in (1..segs.len()).rev() {
        segs.swap(i, rng.gen_range(0..=i));
    }
    let mut edges: Vec<Segment> = Vec::new();
    for e in segs {
        if edges
            .iter()
            .all(|&f| f.shares_endpoint(e) || segments_cross(&s, e, f).unwrap())
        {
            edges.push(e);
        }
    }
    GeometricGraph::new(s, edges).unwrap()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut odd_cycles = 0;
    for i in 0..1000 {
        let g = random_thrackle(&mut rng);
        check(crossfam::thrackle::is_geometric_thrackle(&g), || {
            format!("sample {i} is not a thrackle")
        })?;
        check(!crossfam::thrackle::has_even_cycle(&g), || {
            format!("sample {i} has an even cycle")
        })?;
        check(!oracle_has_cycle(&g, |l| l % 2 == 0), || {
            format!("oracle finds an even cycle in sample {i}")
        })?;
        if oracle_has_cycle(&g, |_| true) {
            odd_cycles += 1;
        }
    }
    for c in [3, 5, 7, 9] {
        let g = star_polygon(c).map_err(|e| e.to_string())?;
        check(g.edges().len() == c, || {
            format!("C_{c} has {} edges", g.edges().len())
        })?;
        check(crossfam::thrackle::is_geometric_thrackle(&g), || {
            format!("C_{c} is not a thrackle")
        })?;
        check(!crossfam::thrackle::has_even_cycle(&g), || {
            format!("C_{c} reports an even cycle")
        })?;
    }
    Ok(format!(
        "1000 thrackles ({odd_cycles} with an odd cycle), star polygons C_3..C_9"
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut full = 0;
    for i in 0..100 {
        let n = 4 + i % 6;
        let s = random_set(n, 1000, &mut rng);
        let (cf, _) = max_crossing_family(&s).map_err(|e| e.to_string())?;
        for k in 2..=n / 2 {
            let inst = encode_no_k_family(n, k).map_err(|e| e.to_string())?;
            let asg = assignment_from_pointset(&s, &inst.map).map_err(|e| e.to_string())?;
            let structural = inst.groups.signotope.start..inst.groups.crossing.end;
            for c in structural {
                check(inst.cnf.clause(c).iter().any(|&l| asg.satisfies(l)), || {
                    format!("sample {i} (n = {n}, k = {k}): structural clause {c} false")
                })?;
            }
            let verdict = verify_assignment(&inst.cnf, &asg).map_err(|e| e.to_string())?;
            if cf < k {
                full += 1;
                check(verdict == Verdict::Satisfied, || {
                    format!("sample {i}: cf = {cf} < {k} but {verdict:?}")
                })?;
            } else {
                let in_family =
                    matches!(verdict, Verdict::Violated(c) if inst.groups.no_family.contains(&c));
                check(in_family, || {
                    format!("sample {i}: cf = {cf} >= {k} but {verdict:?}")
                })?;
            }
        }
    }
    Ok(format!("100 sets, {full} full instances satisfied"))
}

struct CountingSink(u64);

impl Write for CountingSink {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.0 += buf.len() as u64;
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_8() -> Outcome {
    let inst = encode_no_k_family(15, 4).map_err(|e| e.to_string())?;
    let mut sink = CountingSink(0);
    emit_dimacs(&inst.cnf, &mut sink).map_err(|e| e.to_string())?;
    let bytes = sink.0;
    check((CRIT8_MIN_BYTES..=CRIT8_MAX_BYTES).contains(&bytes), || {
        format!("{bytes} bytes")
    })?;
    let triples = inst.map.triple_count() as u64;
    let pairs = inst.map.pair_count() as u64;
    let family = inst.groups.no_family.len() as u64;
    // 8 points carry 7 * 5 * 3 * 1 = 105 perfect matchings.
    let expected = (binom(15, 3), 3 * binom(15, 4), binom(15, 8) * 105);
    check((triples, pairs, family) == expected, || {
        format!(
            "counts {:?}, expected {expected:?}",
            (triples, pairs, family)
        )
    })?;
    check(expected == (455, 4095, 675_675), || {
        "closed forms drifted".into()
    })?;
    check(inst.cnf.num_vars() as u64 == triples + pairs, || {
        "variable total".into()
    })?;
    let total = 8 * binom(15, 4) + 8 * pairs + family;
    check(inst.cnf.num_clauses() as u64 == total, || {
        format!("{} clauses, expected {total}", inst.cnf.num_clauses())
    })?;
    Ok(format!(
        "{:.1} MB, {triples} + {pairs} variables, {family} family clauses",
        bytes as f64 / 1e6
    ))
}

fn criterion_9() -> Outcome {
    let b41 = best_known_upper_bound(41, &LARGEST_KNOWN_SETS)
        .map_err(|e| e.to_string())?
        .value;
    let b24 = best_known_upper_bound(24, &LARGEST_KNOWN_SETS)
        .map_err(|e| e.to_string())?
        .value;
    let k15 = known_value(15);
    check(b41 == 8, || format!("bound(41) = {b41}"))?;
    check(b24 == 5, || format!("bound(24) = {b24}"))?;
    check(k15.lower() == 4 && k15.upper() == 4, || {
        format!("known(15) = {}", k15.summary())
    })?;
    Ok("bound(41) = 8, known(15) = 4, bound(24) = 5".into())
}

/// Three copies of every point of the bundled 14-point set, truncated to 41.
fn forty_one_point_candidate() -> Result<PointSet, String> {
    let base = crossfam::library::find("fourteen_cf3")
        .ok_or("missing bundled set")?
        .points();
    let (rep, map, _) =
        replicate_certified(&normalize_coordinates(&base), 3).map_err(|e| e.to_string())?;
    let (s, _) = truncate(&rep, &map, 41).map_err(|e| e.to_string())?;
    Ok(s)
}

fn criterion_10() -> Outcome {
    let t = Instant::now();
    let mut cfg = SearchConfig::new(8, 3);
    cfg.iterations = 2000;
    cfg.seed = 10;
    let start =
        random_convex_start(8, cfg.grid_bound, &mut start_rng(10)).map_err(|e| e.to_string())?;
    let a = anneal(&cfg, &start).map_err(|e| e.to_string())?;
    let b = anneal(&cfg, &start).map_err(|e| e.to_string())?;
    check(a == b, || "fixed-seed runs differ".into())?;

    let mut cfg = SearchConfig::new(7, 3);
    cfg.iterations = 100_000;
    let mut hits = 0;
    for seed in 0..8 {
        cfg.seed = seed;
        let start = random_convex_start(7, cfg.grid_bound, &mut start_rng(seed))
            .map_err(|e| e.to_string())?;
        let st = anneal(&cfg, &start).map_err(|e| e.to_string())?;
        check(
            st.trace
                .windows(2)
                .all(|w| w[1].best_objective <= w[0].best_objective),
            || format!("seed {seed}: trace increases"),
        )?;
        let recount = crossfam::count_k_families(&st.best, 3).map_err(|e| e.to_string())?;
        check(recount == st.best_objective, || {
            format!("seed {seed}: recount {recount} vs {}", st.best_objective)
        })?;
        if st.best_objective == 0 {
            hits += 1;
        }
    }
    check(hits >= 1, || "no seed reached 0".into())?;
    within(t.elapsed(), CRIT10_BUDGET, "search runs")?;

    let candidate = forty_one_point_candidate()?;
    let tc = Instant::now();
    let found = has_k_family(&candidate, 10).map_err(|e| e.to_string())?;
    let dt = tc.elapsed();
    check(found.is_none(), || {
        "tripled 14-point set has a 10-family".into()
    })?;
    within(dt, CANDIDATE_BUDGET, "41-point check")?;
    Ok(format!(
        "{hits}/8 seeds reach 0; 41-point candidate has no 10-family ({dt:.2?})"
    ))
}

#[test]
fn acceptance() {
    let replication_start = Instant::now();
    let cases = replication_cases();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 oracle equivalence", criterion_1()),
        ("2 convex position", criterion_2()),
        ("3 lower-bound floor", criterion_3()),
        (
            "4 replication bound",
            cases
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|c| criterion_4(c, replication_start)),
        ),
        (
            "5 contraction structure",
            cases
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|c| criterion_5(c)),
        ),
        ("6 thrackle cycles", criterion_6()),
        ("7 encoding soundness", criterion_7()),
        ("8 instance size", criterion_8()),
        ("9 bound calculator", criterion_9()),
        ("10 search", criterion_10()),
    ];
    let mut failed = Vec::new();
    for (name, r) in &results {
        match r {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
