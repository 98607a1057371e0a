use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crossfam::crossing::{build_crossing_graph, CrossingFamily};
use crossfam::geometry::{is_general_position, Coord, PointSet};
use crossfam::io::{
    format_pointset, format_pointset_with_comments, format_witness, load_graph, load_pointset,
    parse_witness,
};
use crossfam::known::known_value;
use crossfam::library;
use crossfam::replication::{
    best_known_upper_bound, replicate_certified, replicate_with_certificate, LARGEST_KNOWN_SETS,
};
use crossfam::sat::{
    assignment_from_pointset, encode_no_k_family, parse_dimacs, parse_model, verify_assignment,
    write_dimacs_file, ClauseGroup, Verdict,
};
use crossfam::search::{self, SearchJob, SearchObserver, Start};
use crossfam::thrackle::{has_even_cycle, is_bipartite, is_forest, is_geometric_thrackle};
use crossfam::{normalize_coordinates, Error};

const SCHEMA: &str = "crossfam/1";

#[derive(Parser)]
#[command(
    name = "crossfam",
    version,
    about = "Crossing families in planar point sets"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Largest crossing family and a witness.
    Cf { file: PathBuf },
    /// Find a crossing family of size k, or report none.
    Decide {
        file: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Number of crossing families of size k.
    Count {
        file: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Replicate every point m times along small parabolas.
    Double {
        file: PathBuf,
        #[arg(long)]
        m: usize,
        /// Fixed epsilon as p/q; chosen automatically when absent.
        #[arg(long)]
        epsilon: Option<Coord>,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Best known upper bound on cf(n).
    Bound { n: usize },
    /// Proven value or bounds for cf(n).
    Known {
        n: usize,
        #[arg(long)]
        verbose: bool,
    },
    /// Write the CNF asking for n points without a k-crossing family.
    Encode {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Check a solver model against a CNF file.
    VerifyModel { cnf: PathBuf, model: PathBuf },
    /// Check the assignment induced by a point set against the CNF for k.
    FromPoints {
        file: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Thrackle, even-cycle and forest checks for a geometric graph.
    Thrackle { file: PathBuf },
    /// Simulated annealing from a search configuration file.
    Search { config: PathBuf },
    /// List the bundled point sets, or print one of them.
    Library { name: Option<String> },
    /// SVG drawing of a point set.
    Plot {
        file: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Highlight a maximum crossing family.
        #[arg(long, conflicts_with = "witness")]
        family: bool,
        /// Highlight the family in a witness file.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
}

/// Text and JSON renderings of one command result.
struct Report {
    text: String,
    json: Value,
}

impl Report {
    fn new(command: &str, text: String, mut json: Value) -> Self {
        let obj = json.as_object_mut().expect("object");
        obj.insert("schema".into(), SCHEMA.into());
        obj.insert("command".into(), command.into());
        Report { text, json }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("serializable")
                );
            } else {
                print!("{}", report.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &Path) -> crossfam::Result<PointSet> {
    let s = load_pointset(path)?;
    if !is_general_position(&s) {
        eprintln!("warning: {} is not in general position", path.display());
    }
    Ok(s)
}

fn segments_json(f: &CrossingFamily) -> Value {
    f.members().iter().map(|s| json!([s.a, s.b])).collect()
}

fn run(command: Command) -> crossfam::Result<Report> {
    match command {
        Command::Cf { file } => {
            let s = load(&file)?;
            let f = build_crossing_graph(&s)?.max_family_parallel();
            Ok(Report::new(
                "cf",
                format_witness(&f),
                json!({ "n": s.len(), "cf": f.len(), "witness": segments_json(&f) }),
            ))
        }
        Command::Decide { file, k } => {
            let s = load(&file)?;
            let found = crossfam::has_k_family(&s, k)?;
            let text = found
                .as_ref()
                .map_or_else(|| "none\n".to_string(), format_witness);
            let witness = found.as_ref().map_or(Value::Null, segments_json);
            Ok(Report::new(
                "decide",
                text,
                json!({ "k": k, "found": found.is_some(), "witness": witness }),
            ))
        }
        Command::Count { file, k } => {
            let s = load(&file)?;
            let c = crossfam::count_k_families(&s, k)?;
            Ok(Report::new(
                "count",
                format!("{c}\n"),
                json!({ "k": k, "count": c }),
            ))
        }
        Command::Double {
            file,
            m,
            epsilon,
            output,
        } => double(&file, m, epsilon, &output),
        Command::Bound { n } => {
            let b = best_known_upper_bound(n, &LARGEST_KNOWN_SETS)?;
            let (how, entry) = match b.entry {
                Some(e) if n <= e.n => (
                    format!("subset of a {}-point set with cf = {}", e.n, e.k),
                    json!({ "k": e.k, "n": e.n }),
                ),
                Some(e) => (
                    format!(
                        "{} * ceil({n}/{}) from a {}-point set with cf = {}",
                        e.k, e.n, e.n, e.k
                    ),
                    json!({ "k": e.k, "n": e.n }),
                ),
                None => (format!("floor({n}/2)"), Value::Null),
            };
            let text = format!("cf({n}) <= {}\nvia: {how}\n", b.value);
            Ok(Report::new(
                "bound",
                text,
                json!({ "n": n, "upper": b.value, "entry": entry }),
            ))
        }
        Command::Known { n, verbose } => {
            let r = known_value(n);
            let mut text = format!("{}\n", r.summary());
            if verbose {
                for p in &r.provenance {
                    writeln!(text, "  {p}").unwrap();
                }
            }
            let exact = (r.lower() == r.upper()).then_some(r.lower());
            Ok(Report::new(
                "known",
                text,
                json!({ "n": n, "lower": r.lower(), "upper": r.upper(), "exact": exact, "provenance": r.provenance }),
            ))
        }
        Command::Encode { n, k, output } => {
            let inst = encode_no_k_family(n, k)?;
            write_dimacs_file(&inst.cnf, &output)?;
            let (v, c) = (inst.cnf.num_vars(), inst.cnf.num_clauses());
            Ok(Report::new(
                "encode",
                format!("variables = {v}\nclauses = {c}\n"),
                json!({ "n": n, "k": k, "variables": v, "clauses": c, "output": output.display().to_string() }),
            ))
        }
        Command::VerifyModel { cnf, model } => {
            let cnf = parse_dimacs(&std::fs::read_to_string(&cnf)?)?;
            let asg = parse_model(&std::fs::read_to_string(&model)?, cnf.num_vars())?;
            let verdict = verify_assignment(&cnf, &asg)?;
            let (text, violated) = match verdict {
                Verdict::Satisfied => ("satisfied\n".to_string(), Value::Null),
                Verdict::Violated(i) => (
                    format!(
                        "violated clause {}: {}\n",
                        i + 1,
                        clause_text(cnf.clause(i))
                    ),
                    json!(i + 1),
                ),
            };
            Ok(Report::new(
                "verify-model",
                text,
                json!({ "satisfied": violated.is_null(), "violated_clause": violated }),
            ))
        }
        Command::FromPoints { file, k } => {
            let s = load(&file)?;
            let inst = encode_no_k_family(s.len(), k)?;
            let asg = assignment_from_pointset(&s, &inst.map)?;
            let verdict = verify_assignment(&inst.cnf, &asg)?;
            let (text, violated, group) = match verdict {
                Verdict::Satisfied => ("satisfied\n".to_string(), Value::Null, Value::Null),
                Verdict::Violated(i) => {
                    let g = match inst.groups.group_of(i) {
                        Some(ClauseGroup::Signotope) => "signotope",
                        Some(ClauseGroup::Crossing) => "crossing",
                        _ => "no-family",
                    };
                    (
                        format!(
                            "violated clause {} ({g}): {}\n",
                            i + 1,
                            clause_text(inst.cnf.clause(i))
                        ),
                        json!(i + 1),
                        json!(g),
                    )
                }
            };
            Ok(Report::new(
                "from-points",
                text,
                json!({ "n": s.len(), "k": k, "satisfied": violated.is_null(), "violated_clause": violated, "group": group }),
            ))
        }
        Command::Thrackle { file } => {
            let g = load_graph(&file)?;
            let (t, e, f, b) = (
                is_geometric_thrackle(&g),
                has_even_cycle(&g),
                is_forest(&g),
                is_bipartite(&g),
            );
            let yn = |v: bool| if v { "yes" } else { "no" };
            let text = format!(
                "thrackle: {}\neven cycle: {}\nforest: {}\nbipartite: {}\n",
                yn(t),
                yn(e),
                yn(f),
                yn(b)
            );
            Ok(Report::new(
                "thrackle",
                text,
                json!({ "thrackle": t, "even_cycle": e, "forest": f, "bipartite": b }),
            ))
        }
        Command::Search { config } => run_search(&config),
        Command::Library { name: None } => {
            let mut text = String::new();
            for b in library::BUNDLED {
                writeln!(text, "{}: n = {}, cf = {}", b.name, b.n, b.cf).unwrap();
            }
            let sets: Vec<Value> = library::BUNDLED
                .iter()
                .map(|b| json!({ "name": b.name, "n": b.n, "cf": b.cf }))
                .collect();
            Ok(Report::new("library", text, json!({ "sets": sets })))
        }
        Command::Library { name: Some(name) } => {
            let b = library::find(&name)
                .ok_or_else(|| Error::Parameter(format!("no bundled set named {name:?}")))?;
            library::verify(b)?;
            Ok(Report::new(
                "library",
                b.text.to_string(),
                json!({ "name": b.name, "n": b.n, "cf": b.cf, "points": b.text }),
            ))
        }
        Command::Plot {
            file,
            output,
            family,
            witness,
        } => {
            let s = load(&file)?;
            let fam = match (family, witness) {
                (true, _) => Some(build_crossing_graph(&s)?.max_family_parallel()),
                (_, Some(w)) => {
                    let f = parse_witness(&std::fs::read_to_string(w)?)?;
                    for seg in f.members() {
                        if seg.b >= s.len() {
                            return Err(Error::InvalidSegment {
                                a: seg.a,
                                b: seg.b,
                                n: s.len(),
                            });
                        }
                    }
                    Some(f)
                }
                _ => None,
            };
            let svg = crossfam::svg::render(&s, fam.as_ref());
            match output {
                Some(path) => {
                    std::fs::write(&path, &svg)?;
                    let p = path.display().to_string();
                    Ok(Report::new(
                        "plot",
                        format!("wrote {p}\n"),
                        json!({ "output": p }),
                    ))
                }
                None => Ok(Report::new("plot", svg.clone(), json!({ "svg": svg }))),
            }
        }
    }
}

fn clause_text(clause: &[i32]) -> String {
    let mut s = String::new();
    for l in clause {
        write!(s, "{l} ").unwrap();
    }
    s.push('0');
    s
}

fn cert_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".cert");
    PathBuf::from(name)
}

fn double(
    file: &Path,
    m: usize,
    epsilon: Option<Coord>,
    output: &Path,
) -> crossfam::Result<Report> {
    let s = load(file)?;
    let normalized = normalize_coordinates(&s);
    let (rep, _, cert) = match &epsilon {
        Some(eps) => replicate_with_certificate(&normalized, m, eps)?,
        None => replicate_certified(&normalized, m)?,
    };
    if !(cert.s1_ok && cert.s2_ok) {
        return Err(Error::Parameter(format!(
            "epsilon {} fails the separation checks (s1_ok: {}, s2_ok: {})",
            cert.epsilon, cert.s1_ok, cert.s2_ok
        )));
    }
    let comments = vec![format!(
        "{m} copies of {} points, epsilon = {}",
        s.len(),
        cert.epsilon
    )];
    std::fs::write(output, format_pointset_with_comments(&rep, &comments))?;
    let cert_file = cert_path(output);
    std::fs::write(&cert_file, cert.to_string())?;
    let text = format!("wrote {} ({} points)\n{cert}", output.display(), rep.len());
    Ok(Report::new(
        "double",
        text,
        json!({
            "points": rep.len(),
            "epsilon": cert.epsilon.to_string(),
            "m": m,
            "s1_ok": cert.s1_ok,
            "s2_ok": cert.s2_ok,
            "output": output.display().to_string(),
            "certificate": cert_file.display().to_string(),
        }),
    ))
}

/// Streams improvements to stderr and stops on interrupt.
struct Progress {
    seed: u64,
    stop: Arc<AtomicBool>,
}

impl SearchObserver for Progress {
    fn on_improvement(&mut self, iteration: u64, best_objective: u64, _best: &PointSet) {
        eprintln!(
            "seed {} iteration {iteration}: best {best_objective}",
            self.seed
        );
    }

    fn should_stop(&mut self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }
}

fn run_search(config: &Path) -> crossfam::Result<Report> {
    let job = SearchJob::parse(&std::fs::read_to_string(config)?)?;
    let cfg = &job.config;
    let file_start = match &job.start {
        Start::File { path, double } => {
            let base = config.parent().unwrap_or(Path::new("")).join(path);
            let s = search::scale_to_integers(&search::seed_by_doubling(
                &load_pointset(base)?,
                *double,
            )?)?;
            Some(s)
        }
        _ => None,
    };
    let stop = Arc::new(AtomicBool::new(false));
    let flag = stop.clone();
    ctrlc::set_handler(move || flag.store(true, Ordering::Relaxed))
        .map_err(|e| Error::Config(e.to_string()))?;

    let initial = |seed: u64| match &job.start {
        Start::Convex => {
            search::random_convex_start(cfg.n, cfg.grid_bound, &mut search::start_rng(seed))
        }
        Start::Random => {
            search::random_general_position(cfg.n, cfg.grid_bound, &mut search::start_rng(seed))
        }
        Start::File { .. } => Ok(file_start.clone().expect("loaded above")),
    };
    let (winner, runs) = search::anneal_seeds_with(cfg, &job.seeds, initial, |seed| Progress {
        seed,
        stop: stop.clone(),
    })?;
    let best = &runs
        .iter()
        .find(|(s, _)| *s == winner)
        .expect("winner is a run")
        .1;
    if let Some(prefix) = &job.output {
        search::write_checkpoint(best, cfg.k, prefix)?;
    }
    let interrupted = stop.load(Ordering::Relaxed);
    let mut text = format!(
        "seed {winner}: {} families of size {}\n",
        best.best_objective, cfg.k
    );
    if interrupted {
        text.push_str("interrupted\n");
    }
    text.push_str(&format_pointset(&best.best));
    let per_seed: Vec<Value> = runs
        .iter()
        .map(|(seed, s)| json!({ "seed": seed, "best_objective": s.best_objective, "iterations": s.trace.len() - 1 }))
        .collect();
    let coords: Vec<Value> = best
        .best
        .iter()
        .map(|p| json!([p.x.to_string(), p.y.to_string()]))
        .collect();
    Ok(Report::new(
        "search",
        text,
        json!({
            "n": cfg.n,
            "k": cfg.k,
            "winner": winner,
            "best_objective": best.best_objective,
            "interrupted": interrupted,
            "runs": per_seed,
            "best": coords,
        }),
    ))
}
