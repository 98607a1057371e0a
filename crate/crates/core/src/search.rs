//! Simulated annealing over integer point configurations, minimizing the
//! number of `k`-crossing families.
//!
//! Each iteration moves one uniformly chosen point by a rounded Gaussian
//! offset (a Brownian step), rejecting moves that break general position,
//! and accepts by the Metropolis rule under exponential cooling. The
//! objective is updated incrementally: a family contains at most one
//! segment at the moved point, so only families through that point change.
//!
//! All randomness comes from ChaCha8 seeded with the configured 64-bit
//! seed, so runs are reproducible across platforms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::crossing::{CrossingGraph, OrientationTable};
use crate::error::{Error, Result};
use crate::geometry::{
    normalize_coordinates, orientation_i64, Coord, Orientation, Point, PointSet,
};
use crate::replication;

/// Attempts per move before giving up on finding a general-position spot.
pub const MAX_RETRIES: usize = 64;

/// Iterations between full objective recounts.
pub const RECOUNT_INTERVAL: u64 = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub iterations: u64,
    pub initial_temperature: f64,
    pub cooling_rate: f64,
    pub step_sigma: f64,
    pub grid_bound: i64,
}

impl SearchConfig {
    /// Defaults for everything but the problem size.
    pub fn new(n: usize, k: usize) -> Self {
        let grid_bound = ((n * n) as i64).max(1000);
        SearchConfig {
            n,
            k,
            seed: 0,
            iterations: 100_000,
            initial_temperature: 1.0,
            cooling_rate: 0.9999,
            step_sigma: grid_bound as f64 / 20.0,
            grid_bound,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.k == 0 || self.n < 2 * self.k {
            return bad(format!(
                "need n >= 2k >= 2, got n = {}, k = {}",
                self.n, self.k
            ));
        }
        if self.iterations < 1 {
            return bad("iterations must be at least 1".into());
        }
        if !(self.cooling_rate > 0.0 && self.cooling_rate < 1.0) {
            return bad(format!(
                "cooling_rate must lie in (0, 1), got {}",
                self.cooling_rate
            ));
        }
        if !(self.initial_temperature.is_finite() && self.initial_temperature > 0.0) {
            return bad(format!(
                "initial_temperature must be positive, got {}",
                self.initial_temperature
            ));
        }
        if !(self.step_sigma.is_finite() && self.step_sigma >= 0.0) {
            return bad(format!(
                "step_sigma must be non-negative, got {}",
                self.step_sigma
            ));
        }
        if self.grid_bound < (self.n * self.n) as i64 {
            return bad(format!(
                "grid_bound must be at least n^2 = {}",
                self.n * self.n
            ));
        }
        if self.grid_bound > 1 << 40 {
            return bad("grid_bound must not exceed 2^40".into());
        }
        Ok(())
    }

    /// `key = value` lines.
    pub fn to_text(&self) -> String {
        format!(
            "n = {}\nk = {}\nseed = {}\niterations = {}\ninitial_temperature = {}\ncooling_rate = {}\nstep_sigma = {}\ngrid_bound = {}\n",
            self.n,
            self.k,
            self.seed,
            self.iterations,
            self.initial_temperature,
            self.cooling_rate,
            self.step_sigma,
            self.grid_bound
        )
    }

    /// Reads `n` and `k` (required) and any of the other fields from a
    /// key-value map, removing the keys it consumes.
    fn from_map(map: &mut BTreeMap<String, (usize, String)>) -> Result<Self> {
        fn take<T: std::str::FromStr>(
            map: &mut BTreeMap<String, (usize, String)>,
            key: &str,
        ) -> Result<Option<T>> {
            match map.remove(key) {
                None => Ok(None),
                Some((line, v)) => v
                    .parse()
                    .map(Some)
                    .map_err(|_| Error::parse(line, format!("invalid value {v:?} for {key}"))),
            }
        }
        let n: usize = take(map, "n")?.ok_or_else(|| Error::Config("missing key n".into()))?;
        let k: usize = take(map, "k")?.ok_or_else(|| Error::Config("missing key k".into()))?;
        let mut cfg = SearchConfig::new(n, k);
        if let Some(v) = take(map, "grid_bound")? {
            cfg.grid_bound = v;
            cfg.step_sigma = v as f64 / 20.0;
        }
        if let Some(v) = take(map, "seed")? {
            cfg.seed = v;
        }
        if let Some(v) = take(map, "iterations")? {
            cfg.iterations = v;
        }
        if let Some(v) = take(map, "initial_temperature")? {
            cfg.initial_temperature = v;
        }
        if let Some(v) = take(map, "cooling_rate")? {
            cfg.cooling_rate = v;
        }
        if let Some(v) = take(map, "step_sigma")? {
            cfg.step_sigma = v;
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut map = parse_key_values(text)?;
        let cfg = Self::from_map(&mut map)?;
        if let Some((key, (line, _))) = map.into_iter().next() {
            return Err(Error::parse(line, format!("unknown key {key:?}")));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_key_values(text: &str) -> Result<BTreeMap<String, (usize, String)>> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (k, v) = t
            .split_once('=')
            .ok_or_else(|| Error::parse(i + 1, format!("expected key = value, found {t:?}")))?;
        let key = k.trim().to_string();
        if map
            .insert(key.clone(), (i + 1, v.trim().to_string()))
            .is_some()
        {
            return Err(Error::parse(i + 1, format!("duplicate key {key:?}")));
        }
    }
    Ok(map)
}

/// Where an annealing run starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Start {
    /// Random points on the parabola `y = x^2`.
    Convex,
    /// Uniform random points in general position.
    Random,
    /// A point-set file, optionally replicated `m` times first.
    File { path: String, double: usize },
}

/// A search job: configuration plus start, seeds and output prefix.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchJob {
    pub config: SearchConfig,
    pub start: Start,
    pub seeds: Vec<u64>,
    pub output: Option<String>,
}

impl SearchJob {
    /// Accepts the [`SearchConfig`] keys plus `start` (`convex`, `random`
    /// or a path), `double` (copy count for a file start), `seeds`
    /// (comma-separated, overriding `seed`) and `output`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = parse_key_values(text)?;
        let config = SearchConfig::from_map(&mut map)?;
        let start_value = map
            .remove("start")
            .map(|v| v.1)
            .unwrap_or_else(|| "convex".into());
        let double = match map.remove("double") {
            None => 1,
            Some((line, v)) => v
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid copy count {v:?}")))?,
        };
        let start = match start_value.as_str() {
            "convex" => Start::Convex,
            "random" => Start::Random,
            path => Start::File {
                path: path.to_string(),
                double,
            },
        };
        let seeds = match map.remove("seeds") {
            None => vec![config.seed],
            Some((line, v)) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::parse(line, format!("invalid seed {s:?}")))
                })
                .collect::<Result<Vec<u64>>>()?,
        };
        let output = map.remove("output").map(|v| v.1);
        if let Some((key, (line, _))) = map.into_iter().next() {
            return Err(Error::parse(line, format!("unknown key {key:?}")));
        }
        config.validate()?;
        Ok(SearchJob {
            config,
            start,
            seeds,
            output,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRow {
    pub iteration: u64,
    pub temperature: f64,
    pub current_objective: u64,
    pub best_objective: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchState {
    pub current: PointSet,
    pub best: PointSet,
    pub best_objective: u64,
    pub trace: Vec<TraceRow>,
}

impl SearchState {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iteration,temperature,current_objective,best_objective\n");
        for r in &self.trace {
            writeln!(
                out,
                "{},{},{},{}",
                r.iteration, r.temperature, r.current_objective, r.best_objective
            )
            .unwrap();
        }
        out
    }
}

/// Callbacks from a running search.
pub trait SearchObserver {
    fn on_improvement(&mut self, _iteration: u64, _best_objective: u64, _best: &PointSet) {}

    /// Polled once per iteration; `true` ends the run after the current
    /// iteration.
    fn should_stop(&mut self) -> bool {
        false
    }
}

pub struct NoObserver;

impl SearchObserver for NoObserver {}

fn integer_coords(s: &PointSet) -> Result<Vec<(i64, i64)>> {
    s.to_i64_coords()
        .ok_or_else(|| Error::Parameter("point set must have integer coordinates".into()))
}

fn from_coords(coords: &[(i64, i64)]) -> PointSet {
    PointSet::from_ints(coords)
}

fn collinear_with(coords: &[(i64, i64)], p: usize) -> bool {
    let n = coords.len();
    (0..n).any(|j| {
        j != p
            && (j + 1..n).any(|k| {
                k != p && orientation_i64(coords[p], coords[j], coords[k]) == Orientation::Collinear
            })
    })
}

struct Step {
    normal: Option<Normal<f64>>,
    grid_bound: i64,
}

impl Step {
    fn new(sigma: f64, grid_bound: i64) -> Result<Self> {
        let normal = if sigma > 0.0 {
            Some(Normal::new(0.0, sigma).map_err(|e| Error::Config(e.to_string()))?)
        } else {
            None
        };
        Ok(Step { normal, grid_bound })
    }

    /// Point index and its proposed new position.
    fn draw(&self, coords: &[(i64, i64)], rng: &mut ChaCha8Rng) -> (usize, (i64, i64)) {
        let p = rng.gen_range(0..coords.len());
        let Some(normal) = &self.normal else {
            return (p, coords[p]);
        };
        let b = self.grid_bound;
        let dx = normal.sample(rng).round() as i64;
        let dy = normal.sample(rng).round() as i64;
        let (x, y) = coords[p];
        (p, ((x + dx).clamp(-b, b), (y + dy).clamp(-b, b)))
    }
}

/// Moves one random point by a rounded Gaussian offset of scale `sigma`,
/// clamped to `[-grid_bound, grid_bound]`, retrying until the result is in
/// general position.
pub fn perturb(
    s: &PointSet,
    sigma: f64,
    grid_bound: i64,
    rng: &mut ChaCha8Rng,
) -> Result<PointSet> {
    let mut coords = integer_coords(s)?;
    if coords.is_empty() || sigma == 0.0 {
        return Ok(s.clone());
    }
    let step = Step::new(sigma, grid_bound)?;
    for _ in 0..MAX_RETRIES {
        let (p, pos) = step.draw(&coords, rng);
        let old = coords[p];
        coords[p] = pos;
        if !collinear_with(&coords, p) {
            return Ok(from_coords(&coords));
        }
        coords[p] = old;
    }
    Err(Error::RetryExhausted(MAX_RETRIES))
}

/// Annealing state over integer coordinates with cached orientations and
/// crossing graph.
struct Annealer {
    coords: Vec<(i64, i64)>,
    table: OrientationTable,
    graph: CrossingGraph,
    k: usize,
}

impl Annealer {
    fn new(coords: Vec<(i64, i64)>, k: usize) -> Result<Self> {
        let table = OrientationTable::from_i64(&coords);
        if let Some((i, j, l)) = table.first_collinear() {
            return Err(Error::NotGeneralPosition(i, j, l));
        }
        let graph = CrossingGraph::from_table(&table);
        Ok(Annealer {
            coords,
            table,
            graph,
            k,
        })
    }

    fn objective(&self) -> u64 {
        self.graph.count_families(self.k)
    }

    fn at(&self, p: usize) -> u64 {
        self.graph.count_families_at(p, self.k)
    }

    /// Moves `p`; returns false (and leaves the table inconsistent for
    /// `p`) if the new position breaks general position.
    fn try_place(&mut self, p: usize, pos: (i64, i64)) -> bool {
        self.coords[p] = pos;
        self.table.update_point_i64(&self.coords, p);
        self.table.collinear_with(p).is_none()
    }

    fn place(&mut self, p: usize, pos: (i64, i64)) {
        self.coords[p] = pos;
        self.table.update_point_i64(&self.coords, p);
        self.graph.update_point(&self.table, p);
    }
}

pub fn anneal(cfg: &SearchConfig, initial: &PointSet) -> Result<SearchState> {
    anneal_with(cfg, initial, &mut NoObserver)
}

pub fn anneal_with(
    cfg: &SearchConfig,
    initial: &PointSet,
    observer: &mut impl SearchObserver,
) -> Result<SearchState> {
    cfg.validate()?;
    if initial.len() != cfg.n {
        return Err(Error::Config(format!(
            "initial set has {} points, config says n = {}",
            initial.len(),
            cfg.n
        )));
    }
    let mut state = Annealer::new(integer_coords(initial)?, cfg.k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let step = Step::new(cfg.step_sigma, cfg.grid_bound)?;

    let mut current = state.objective();
    let mut best = current;
    let mut best_coords = state.coords.clone();
    let mut temperature = cfg.initial_temperature;
    let mut trace = vec![TraceRow {
        iteration: 0,
        temperature,
        current_objective: current,
        best_objective: best,
    }];

    let mut iteration = 0;
    while best > 0 && iteration < cfg.iterations {
        iteration += 1;
        let before = (0..MAX_RETRIES).find_map(|_| {
            let (p, pos) = step.draw(&state.coords, &mut rng);
            let old = state.coords[p];
            if pos == old {
                return Some((p, old, old));
            }
            let ok = state.try_place(p, pos);
            // Restore the table; the graph is still in the old state.
            state.coords[p] = old;
            state.table.update_point_i64(&state.coords, p);
            ok.then_some((p, old, pos))
        });
        let (p, old, pos) = before.ok_or(Error::RetryExhausted(MAX_RETRIES))?;

        if pos != old {
            let removed = state.at(p);
            state.place(p, pos);
            let proposed = current - removed + state.at(p);
            let delta = proposed as f64 - current as f64;
            let accept = delta <= 0.0 || rng.gen::<f64>() < (-delta / temperature).exp();
            if accept {
                current = proposed;
                if current < best {
                    best = current;
                    best_coords.clone_from(&state.coords);
                    observer.on_improvement(iteration, best, &from_coords(&best_coords));
                }
            } else {
                state.place(p, old);
            }
        }
        if iteration % RECOUNT_INTERVAL == 0 {
            let full = state.objective();
            debug_assert_eq!(full, current, "incremental objective drifted");
            current = full;
        }
        temperature *= cfg.cooling_rate;
        trace.push(TraceRow {
            iteration,
            temperature,
            current_objective: current,
            best_objective: best,
        });
        if observer.should_stop() {
            break;
        }
    }
    Ok(SearchState {
        current: from_coords(&state.coords),
        best: from_coords(&best_coords),
        best_objective: best,
        trace,
    })
}

/// Runs one annealing per seed in parallel. The winner has the smallest
/// best objective, ties broken by the smaller seed. Returns the winning
/// seed and all `(seed, state)` pairs in input order.
pub fn anneal_seeds(
    cfg: &SearchConfig,
    seeds: &[u64],
    initial: impl Fn(u64) -> Result<PointSet> + Sync,
) -> Result<(u64, Vec<(u64, SearchState)>)> {
    anneal_seeds_with(cfg, seeds, initial, |_| NoObserver)
}

/// [`anneal_seeds`] with one observer per seed.
pub fn anneal_seeds_with<O: SearchObserver>(
    cfg: &SearchConfig,
    seeds: &[u64],
    initial: impl Fn(u64) -> Result<PointSet> + Sync,
    observer: impl Fn(u64) -> O + Sync,
) -> Result<(u64, Vec<(u64, SearchState)>)> {
    if seeds.is_empty() {
        return Err(Error::Config("no seeds given".into()));
    }
    let runs = seeds
        .par_iter()
        .map(|&seed| {
            let mut c = cfg.clone();
            c.seed = seed;
            let start = initial(seed)?;
            anneal_with(&c, &start, &mut observer(seed)).map(|s| (seed, s))
        })
        .collect::<Result<Vec<_>>>()?;
    let winner = runs
        .iter()
        .min_by_key(|(seed, s)| (s.best_objective, *seed))
        .map(|(seed, _)| *seed)
        .expect("non-empty");
    Ok((winner, runs))
}

/// Writes `<prefix>.best.txt` (the best point set) and `<prefix>.trace.csv`.
pub fn write_checkpoint(state: &SearchState, k: usize, prefix: &str) -> Result<()> {
    let comments = vec![format!("k-families (k = {k}): {}", state.best_objective)];
    std::fs::write(
        format!("{prefix}.best.txt"),
        crate::io::format_pointset_with_comments(&state.best, &comments),
    )?;
    std::fs::write(format!("{prefix}.trace.csv"), state.trace_csv())?;
    Ok(())
}

/// Generator for start configurations, independent of the annealing stream.
pub fn start_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15)
}

/// `n` random points on `y = x^2` with distinct `|x| <= sqrt(grid_bound)`.
pub fn random_convex_start(n: usize, grid_bound: i64, rng: &mut ChaCha8Rng) -> Result<PointSet> {
    let r = (grid_bound as f64).sqrt().floor() as i64;
    if ((2 * r + 1) as usize) < n {
        return Err(Error::Config(format!(
            "grid_bound {grid_bound} too small for {n} convex points"
        )));
    }
    let mut xs: Vec<i64> = rand::seq::index::sample(rng, (2 * r + 1) as usize, n)
        .into_iter()
        .map(|i| i as i64 - r)
        .collect();
    xs.sort_unstable();
    Ok(xs.into_iter().map(|x| Point::from_ints(x, x * x)).collect())
}

/// `n` uniform random integer points in `[-grid_bound, grid_bound]^2`,
/// rejecting points that create a collinear triple.
pub fn random_general_position(
    n: usize,
    grid_bound: i64,
    rng: &mut ChaCha8Rng,
) -> Result<PointSet> {
    let mut coords: Vec<(i64, i64)> = Vec::with_capacity(n);
    let mut attempts = 0;
    while coords.len() < n {
        attempts += 1;
        if attempts > 1000 * (n + 1) {
            return Err(Error::RetryExhausted(attempts));
        }
        coords.push((
            rng.gen_range(-grid_bound..=grid_bound),
            rng.gen_range(-grid_bound..=grid_bound),
        ));
        let p = coords.len() - 1;
        let dup = coords[..p].contains(&coords[p]);
        if dup || collinear_with(&coords, p) {
            coords.pop();
        }
    }
    Ok(from_coords(&coords))
}

/// Scales a rational set by the least common multiple of its denominators.
/// A positive scaling keeps every orientation.
pub fn scale_to_integers(s: &PointSet) -> Result<PointSet> {
    let lcm = s.iter().fold(BigInt::one(), |acc, p| {
        acc.lcm(p.x.denom()).lcm(p.y.denom())
    });
    let factor = Coord::new(lcm, 1)?;
    s.iter()
        .map(|p| {
            let x = &p.x * &factor;
            let y = &p.y * &factor;
            match (x.numer().to_i64(), y.numer().to_i64()) {
                (Some(_), Some(_)) => Ok(Point::new(x, y)),
                _ => Err(Error::Parameter(
                    "scaled coordinates exceed the i64 range".into(),
                )),
            }
        })
        .collect()
}

/// Normalizes `s`, then replicates it `m` times with a certified epsilon.
pub fn seed_by_doubling(s: &PointSet, m: usize) -> Result<PointSet> {
    s.ensure_general_position()?;
    let normalized = normalize_coordinates(s);
    if m == 1 {
        return Ok(normalized);
    }
    let (rep, _, _) = replication::replicate_certified(&normalized, m)?;
    Ok(rep)
}
