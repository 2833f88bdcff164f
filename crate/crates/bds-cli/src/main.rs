//! `bds`: decision procedures for finite Boolean dynamical systems.
//!
//! Every subcommand reads a JSON document (see `bds-core::document`), prints
//! a deterministic report, and exits with a code that distinguishes "the
//! property fails" from "the run failed". Reports never include wall-clock
//! data unless `--timing` is passed, so equal inputs produce equal bytes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use bds_core::document::{parse_bds, parse_graph, render_bds};
use bds_core::dot::{ideal_lattice_dot, tail_space_dot};
use bds_core::sampling;
use bds_core::{
    boundary_construction, check_condition_l, corner_obstructions, decide_k_direct,
    decide_k_via_quotients, decide_k_via_tails, decide_strong_k, enumerate_hs_ideals,
    enumerate_maximal_tails, ideal_lattice, is_cyclic_tail, normalize_no_exit_cycle, prim_report,
    vertex_construction, AtomSet, Bds, BdsError, KMethod, Word,
};

/// Beyond this atom count the exponential cross-checks and corner reports are
/// skipped; the direct polynomial decider still answers.
const CROSS_CHECK_MAX_ATOMS: usize = 12;

const AFTER_HELP: &str = "Exit codes:
  0  success; the queried property holds
  1  the queried property fails
  2  invalid input (I/O, parse, or validation error)
  3  the system exceeds the enumeration size cap
  4  internal disagreement between independent deciders";

#[derive(Parser)]
#[command(name = "bds", version, about = "Decision procedures for finite Boolean dynamical systems", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Print elapsed wall-clock time to standard error.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the simulation-exit condition: does every cycle have an exit?
    CheckL {
        #[arg(value_name = "FILE")]
        file: PathBuf,
    },
    /// Decide Condition (K): does every quotient pass the exit condition?
    CheckK {
        #[arg(value_name = "FILE")]
        file: PathBuf,
    },
    /// Decide the strong form of Condition (K).
    StrongK {
        #[arg(value_name = "FILE")]
        file: PathBuf,
    },
    /// Enumerate maximal tails and flag the cyclic ones.
    Tails {
        #[arg(value_name = "FILE")]
        file: PathBuf,
    },
    /// Enumerate hereditary saturated ideals.
    Ideals {
        #[arg(value_name = "FILE")]
        file: PathBuf,
    },
    /// Report the primitive-ideal space: points, pairing, closure order.
    Prim {
        #[arg(value_name = "FILE")]
        file: PathBuf,
        /// Emit the tail space as Graphviz DOT (overrides --json).
        #[arg(long)]
        dot: bool,
    },
    /// Report the lattice of gauge-invariant ideals.
    Lattice {
        #[arg(value_name = "FILE")]
        file: PathBuf,
        /// Emit the lattice as Graphviz DOT (overrides --json).
        #[arg(long)]
        dot: bool,
    },
    /// Convert a graph document into a system document on standard output.
    FromGraph {
        #[arg(value_name = "FILE")]
        file: PathBuf,
        /// Which system to build from the graph.
        #[arg(long, value_enum)]
        construction: Construction,
    },
    /// Cross-check the three Condition (K) deciders on seeded random systems.
    OracleCompare {
        /// How many systems to generate.
        #[arg(long, default_value_t = 500)]
        count: u64,
        /// Base seed; system i uses seed + i, so results ignore --jobs.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    /// One atom per vertex; each edge acts on its range vertex.
    Vertex,
    /// One atom per boundary path; each edge prepends to paths it extends.
    Boundary,
}

enum CliError {
    Io(PathBuf, std::io::Error),
    Core(BdsError),
    Disagreement(String),
}

impl From<BdsError> for CliError {
    fn from(e: BdsError) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Disagreement(msg) => write!(f, "internal disagreement: {msg}"),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(..) => 2,
            CliError::Core(BdsError::SizeLimit { .. }) => 3,
            CliError::Core(BdsError::Internal(_)) => 4,
            CliError::Core(_) => 2,
            CliError::Disagreement(_) => 4,
        }
    }
}

struct Outcome {
    code: u8,
    text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let timer = Instant::now();
    let result = run(&cli);
    if cli.timing {
        eprintln!("elapsed: {:?}", timer.elapsed());
    }
    match result {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome.text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.code)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

struct SystemInput {
    path: String,
    sha256: String,
    sys: Bds,
}

fn load_system(path: &Path) -> Result<SystemInput, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| BdsError::InvalidSystem("input is not UTF-8".into()))?;
    Ok(SystemInput {
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
        sys: parse_bds(text)?,
    })
}

fn header(command: &str, input: &SystemInput) -> String {
    format!(
        "{command} {}\nsha256: {}\nsystem: {} atoms, {} labels\n",
        input.path,
        input.sha256,
        input.sys.atom_count(),
        input.sys.label_count()
    )
}

fn json_report(command: &str, input: &SystemInput, body: Value) -> String {
    let mut report = json!({
        "command": command,
        "input": input.path,
        "sha256": input.sha256,
        "atoms": input.sys.atom_count(),
        "labels": input.sys.label_count(),
    });
    report.as_object_mut().unwrap().extend(body.as_object().cloned().unwrap_or_default());
    pretty(&report)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serialization");
    s.push('\n');
    s
}

fn word_json(sys: &Bds, w: &Word) -> Value {
    json!({
        "rendered": sys.render_word(w),
        "labels": w.letters().iter().map(|&l| sys.label_id(l)).collect::<Vec<_>>(),
    })
}

fn set_json(sys: &Bds, s: &AtomSet) -> Value {
    json!(s.iter().map(|u| sys.atom_id(u)).collect::<Vec<_>>())
}

fn method_name(m: &KMethod) -> &'static str {
    match m {
        KMethod::Direct => "direct",
        KMethod::Quotients => "quotients",
        KMethod::Tails => "tails",
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::CheckL { file } => check_l(cli, file),
        Command::CheckK { file } => check_k(cli, file),
        Command::StrongK { file } => strong_k(cli, file),
        Command::Tails { file } => tails(cli, file),
        Command::Ideals { file } => ideals(cli, file),
        Command::Prim { file, dot } => prim(cli, file, *dot),
        Command::Lattice { file, dot } => lattice(cli, file, *dot),
        Command::FromGraph { file, construction } => from_graph(file, *construction),
        Command::OracleCompare { count, seed, jobs } => oracle_compare(cli, *count, *seed, *jobs),
    }
}

fn check_l(cli: &Cli, file: &Path) -> Result<Outcome, CliError> {
    let input = load_system(file)?;
    let sys = &input.sys;
    let verdict = check_condition_l(sys);
    let normalized = match &verdict.witness {
        Some(w) => Some(normalize_no_exit_cycle(sys, &w.word, &w.base)?),
        None => None,
    };

    let text = if cli.json {
        let witness = verdict.witness.as_ref().map(|w| {
            let (beta, base) = normalized.as_ref().unwrap();
            json!({
                "word": word_json(sys, &w.word),
                "base": set_json(sys, &w.base),
                "normalized_word": word_json(sys, beta),
                "normalized_base": set_json(sys, base),
            })
        });
        json_report("check-l", &input, json!({ "holds": verdict.holds, "witness": witness }))
    } else {
        let mut out = header("check-l", &input);
        if verdict.holds {
            out.push_str("condition (L): holds\n");
        } else {
            let w = verdict.witness.as_ref().unwrap();
            let (beta, base) = normalized.as_ref().unwrap();
            out.push_str("condition (L): FAILS\n");
            out.push_str(&format!(
                "witness exitless cycle: ({}, {})\n",
                sys.render_word(&w.word),
                sys.render_set(&w.base)
            ));
            out.push_str(&format!(
                "normalized: ({}, {})\n",
                sys.render_word(beta),
                sys.render_set(base)
            ));
        }
        out
    };
    Ok(Outcome { code: u8::from(!verdict.holds), text })
}

fn check_k(cli: &Cli, file: &Path) -> Result<Outcome, CliError> {
    let input = load_system(file)?;
    let sys = &input.sys;
    let direct = decide_k_direct(sys);
    let mut cross_checked = false;
    let mut corners = Vec::new();
    if sys.atom_count() <= CROSS_CHECK_MAX_ATOMS {
        let via_q = decide_k_via_quotients(sys)?;
        let via_t = decide_k_via_tails(sys)?;
        if via_q.satisfied != direct.satisfied || via_t.satisfied != direct.satisfied {
            return Err(CliError::Disagreement(format!(
                "Condition (K) deciders disagree on {}: direct={}, quotients={}, tails={}",
                input.path, direct.satisfied, via_q.satisfied, via_t.satisfied
            )));
        }
        cross_checked = true;
        corners = corner_obstructions(sys)?;
        if corners.is_empty() != direct.satisfied {
            return Err(CliError::Disagreement(format!(
                "corner scan and direct decider disagree on {}",
                input.path
            )));
        }
    }

    let text = if cli.json {
        let witness = direct.witness.as_ref().map(|w| {
            json!({
                "word": word_json(sys, &w.word),
                "atom": sys.atom_id(w.atom.index),
                "base": set_json(sys, &w.base),
                "tail_support": set_json(sys, &w.tail_support),
                "corner_n": w.corner_n,
            })
        });
        let corners_json: Vec<Value> = corners
            .iter()
            .map(|c| {
                json!({
                    "tail_support": set_json(sys, &c.tail_support),
                    "base": set_json(sys, &c.base),
                    "cycle": word_json(sys, &c.cycle),
                    "matrix_dim": c.matrix_dim,
                })
            })
            .collect();
        json_report(
            "check-k",
            &input,
            json!({
                "satisfied": direct.satisfied,
                "method": method_name(&direct.method),
                "cross_checked": cross_checked,
                "witness": witness,
                "corners": if cross_checked { Value::from(corners_json) } else { Value::Null },
            }),
        )
    } else {
        let mut out = header("check-k", &input);
        out.push_str(if direct.satisfied {
            "condition (K): satisfied\n"
        } else {
            "condition (K): FAILS\n"
        });
        if cross_checked {
            out.push_str("cross-check: direct, quotient, and tail-space deciders agree\n");
        }
        if let Some(w) = &direct.witness {
            out.push_str(&format!(
                "witness cycle: ({}, {}) at atom {} in the quotient onto tail {}\n",
                sys.render_word(&w.word),
                sys.render_set(&w.base),
                sys.atom_id(w.atom.index),
                sys.render_set(&w.tail_support)
            ));
        }
        if !corners.is_empty() {
            out.push_str(&format!("corner obstructions: {}\n", corners.len()));
            for c in &corners {
                out.push_str(&format!(
                    "  tail {}: cycle ({}) sweeps base {}, corner dimension {}\n",
                    sys.render_set(&c.tail_support),
                    sys.render_word(&c.cycle),
                    sys.render_set(&c.base),
                    c.matrix_dim
                ));
            }
            out.push_str(
                "note: each corner is a full matrix algebra of the listed dimension over \
                 circle functions (theory-implied, not computed)\n",
            );
        }
        out
    };
    Ok(Outcome { code: u8::from(!direct.satisfied), text })
}

fn strong_k(cli: &Cli, file: &Path) -> Result<Outcome, CliError> {
    let input = load_system(file)?;
    let satisfied = decide_strong_k(&input.sys);
    let text = if cli.json {
        json_report("strong-k", &input, json!({ "satisfied": satisfied }))
    } else {
        let mut out = header("strong-k", &input);
        out.push_str(if satisfied {
            "strong condition (K): satisfied\n"
        } else {
            "strong condition (K): FAILS\n"
        });
        out.push_str(
            "note: on powerset systems every ultrafilter is principal, so the strong and \
             plain forms coincide (theory-implied, not computed)\n",
        );
        out
    };
    Ok(Outcome { code: u8::from(!satisfied), text })
}

fn tails(cli: &Cli, file: &Path) -> Result<Outcome, CliError> {
    let input = load_system(file)?;
    let sys = &input.sys;
    let all = enumerate_maximal_tails(sys)?;
    let cyclic: Vec<_> =
        all.iter().map(|t| is_cyclic_tail(sys, t)).collect::<Result<_, _>>()?;

    let text = if cli.json {
        let list: Vec<Value> = all
            .iter()
            .zip(&cyclic)
            .map(|(t, c)| {
                json!({
                    "support": set_json(sys, &t.support),
                    "cyclic": c.as_ref().map(|w| json!({
                        "word": word_json(sys, &w.word),
                        "atom": sys.atom_id(w.atom.index),
                    })),
                })
            })
            .collect();
        json_report("tails", &input, json!({ "tails": list }))
    } else {
        let mut out = header("tails", &input);
        out.push_str(&format!("maximal tails: {}\n", all.len()));
        for (i, (t, c)) in all.iter().zip(&cyclic).enumerate() {
            let status = match c {
                Some(w) => format!(
                    "cyclic via ({} at {})",
                    sys.render_word(&w.word),
                    sys.atom_id(w.atom.index)
                ),
                None => "not cyclic".to_string(),
            };
            out.push_str(&format!("  [{i}] {} {status}\n", sys.render_set(&t.support)));
        }
        out
    };
    Ok(Outcome { code: 0, text })
}

fn ideals(cli: &Cli, file: &Path) -> Result<Outcome, CliError> {
    let input = load_system(file)?;
    let sys = &input.sys;
    let all = enumerate_hs_ideals(sys)?;
    let text = if cli.json {
        let list: Vec<Value> = all
            .iter()
            .map(|h| json!({ "atoms": set_json(sys, &h.atoms), "proper": h.proper }))
            .collect();
        json_report("ideals", &input, json!({ "ideals": list }))
    } else {
        let mut out = header("ideals", &input);
        out.push_str(&format!("hereditary saturated ideals: {}\n", all.len()));
        for (i, h) in all.iter().enumerate() {
            let kind = if h.proper { "proper" } else { "full" };
            out.push_str(&format!("  [{i}] {} ({kind})\n", sys.render_set(&h.atoms)));
        }
        out
    };
    Ok(Outcome { code: 0, text })
}

fn prim(cli: &Cli, file: &Path, dot: bool) -> Result<Outcome, CliError> {
    let input = load_system(file)?;
    let sys = &input.sys;
    let report = prim_report(sys)?;
    if dot {
        return Ok(Outcome { code: 0, text: tail_space_dot(sys, &report.space) });
    }

    let text = if cli.json {
        let points: Vec<Value> = report
            .space
            .tails()
            .iter()
            .enumerate()
            .map(|(i, t)| {
                json!({
                    "tail": set_json(sys, &t.support),
                    "ideal": set_json(sys, &report.ideals[report.pairing[i]].atoms),
                    "closure": report.space.closure_of(&[i]),
                })
            })
            .collect();
        json_report(
            "prim",
            &input,
            json!({
                "points": points,
                "order_consistent": report.order_consistent,
                "k_satisfied": report.k_satisfied,
                "warning": report.warning,
            }),
        )
    } else {
        let mut out = header("prim", &input);
        out.push_str(&format!("primitive-ideal space: {} points\n", report.space.len()));
        for (i, t) in report.space.tails().iter().enumerate() {
            let ideal = &report.ideals[report.pairing[i]].atoms;
            let closure: Vec<String> =
                report.space.closure_of(&[i]).iter().map(|p| format!("[{p}]")).collect();
            out.push_str(&format!(
                "  [{i}] tail {} ideal {} closure {}\n",
                sys.render_set(&t.support),
                sys.render_set(ideal),
                closure.join(" ")
            ));
        }
        out.push_str(&format!(
            "order consistent with reverse ideal inclusion: {}\n",
            if report.order_consistent { "yes" } else { "NO" }
        ));
        out.push_str(&format!(
            "condition (K): {}\n",
            if report.k_satisfied { "satisfied" } else { "FAILS" }
        ));
        if let Some(w) = &report.warning {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    };
    Ok(Outcome { code: 0, text })
}

fn lattice(cli: &Cli, file: &Path, dot: bool) -> Result<Outcome, CliError> {
    let input = load_system(file)?;
    let sys = &input.sys;
    let lat = ideal_lattice(sys)?;
    if dot {
        return Ok(Outcome { code: 0, text: ideal_lattice_dot(sys, &lat) });
    }

    let text = if cli.json {
        let ideals: Vec<Value> = lat
            .ideals
            .iter()
            .enumerate()
            .map(|(i, h)| {
                json!({
                    "atoms": set_json(sys, &h.atoms),
                    "proper": h.proper,
                    "prime": lat.prime[i],
                })
            })
            .collect();
        json_report(
            "lattice",
            &input,
            json!({
                "ideals": ideals,
                "covers": lat.covers,
                "complete": lat.complete,
                "description": lat.description,
            }),
        )
    } else {
        let mut out = header("lattice", &input);
        out.push_str(&format!("{}\n", lat.description));
        out.push_str(&format!("ideals: {}\n", lat.ideals.len()));
        for (i, h) in lat.ideals.iter().enumerate() {
            let prime = if lat.prime[i] { " prime" } else { "" };
            out.push_str(&format!("  [{i}] {}{prime}\n", sys.render_set(&h.atoms)));
        }
        out.push_str(&format!("covers: {}\n", lat.covers.len()));
        for (i, j) in &lat.covers {
            out.push_str(&format!(
                "  {} -> {}\n",
                sys.render_set(&lat.ideals[*i].atoms),
                sys.render_set(&lat.ideals[*j].atoms)
            ));
        }
        out
    };
    Ok(Outcome { code: 0, text })
}

fn from_graph(file: &Path, construction: Construction) -> Result<Outcome, CliError> {
    let bytes = fs::read(file).map_err(|e| CliError::Io(file.to_path_buf(), e))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| BdsError::InvalidSystem("input is not UTF-8".into()))?;
    let graph = parse_graph(text)?;
    let sys = match construction {
        Construction::Vertex => vertex_construction(&graph),
        Construction::Boundary => boundary_construction(&graph)?,
    };
    Ok(Outcome { code: 0, text: format!("{}\n", render_bds(&sys)) })
}

fn oracle_compare(
    cli: &Cli,
    count: u64,
    seed: Option<u64>,
    jobs: usize,
) -> Result<Outcome, CliError> {
    let seed = seed.unwrap_or(sampling::DEFAULT_SEED);
    let jobs = jobs.max(1);
    let mut disagreements: Vec<u64> = Vec::new();
    let mut k_failures = 0usize;
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|shard| {
                scope.spawn(move || {
                    let mut bad = Vec::new();
                    let mut failures = 0usize;
                    let mut i = shard as u64;
                    while i < count {
                        let sys = sampling::random_bds_from_seed(seed.wrapping_add(i), 6, 3);
                        let direct = decide_k_direct(&sys).satisfied;
                        let via_q = decide_k_via_quotients(&sys).unwrap().satisfied;
                        let via_t = decide_k_via_tails(&sys).unwrap().satisfied;
                        let any_cyclic = enumerate_maximal_tails(&sys)
                            .unwrap()
                            .iter()
                            .any(|t| is_cyclic_tail(&sys, t).unwrap().is_some());
                        if !(direct == via_q && direct == via_t && direct == !any_cyclic) {
                            bad.push(seed.wrapping_add(i));
                        }
                        if !direct {
                            failures += 1;
                        }
                        i += jobs as u64;
                    }
                    (bad, failures)
                })
            })
            .collect();
        for handle in handles {
            let (bad, failures) = handle.join().expect("worker thread");
            disagreements.extend(bad);
            k_failures += failures;
        }
    });
    disagreements.sort_unstable();

    if !disagreements.is_empty() {
        return Err(CliError::Disagreement(format!(
            "Condition (K) deciders disagree at seeds {disagreements:?}"
        )));
    }
    let text = if cli.json {
        pretty(&json!({
            "command": "oracle-compare",
            "count": count,
            "seed": seed,
            "jobs": jobs,
            "max_atoms": 6,
            "max_labels": 3,
            "k_failures": k_failures,
            "disagreements": disagreements,
        }))
    } else {
        format!(
            "oracle-compare: {count} systems, base seed {seed}, at most 6 atoms and 3 labels\n\
             failing condition (K): {k_failures} of {count}\n\
             disagreements: 0\n"
        )
    };
    Ok(Outcome { code: 0, text })
}
