//! The `qi` command line.
//!
//! Every command prints one JSON object with sorted keys: the command's own
//! fields plus `command`, `inputs` (shape and SHA-256 of each file),
//! `timing_ms` and `version`. `--plain` prints the resulting matrix in the
//! input text format instead. Indices in reports are 1-based.
//!
//! Exit codes: 0 success, 1 usage error, 2 parse or input errors, 3 solver failure.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::closure::closest_superset;
use crate::delay::DelayMatrix;
use crate::error::{QiError, Result};
use crate::heuristics::{close_subset, HeuristicConfig, Method, Schedule};
use crate::instances;
use crate::lp::LpInstance;
use crate::nearest::{build_lp, minplus_superset, solve_closest, Mode, NearestQuery, Norm, DEFAULT_TOLERANCE};
use crate::oracle::{exhaustive_maximal_subset, exhaustive_minimal_superset, rational_to_f64, solve_rational_lp, RationalLp};
use crate::pattern::BinaryPattern;
use crate::qi::{is_qi_delay_reduced, is_qi_delay_with_tolerance, is_qi_sparsity};
use crate::text::{format_delays, format_pattern, parse_matrix};

/// Environment variable overriding the solver feasibility tolerance.
pub const TOLERANCE_ENV: &str = "QI_TOLERANCE";

#[derive(Debug, Parser)]
#[command(name = "qi", version, about = "Quadratic invariance tests and nearest QI constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test quadratic invariance and list violating quadruples.
    Check(CheckArgs),
    /// Find the closest QI constraint.
    Closest(ClosestArgs),
    /// Brute-force and exact references (for testing).
    Oracle(OracleArgs),
    /// Recompute the bundled reference examples.
    Reproduce {
        #[arg(value_enum)]
        example: Example,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Sparsity,
    Delay,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Set,
    Subset,
    Superset,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "inf")]
    Inf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Weights,
    RelaxedLp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScheduleArg {
    Step,
    Pass,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolverArg {
    Auto,
    Minplus,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Example {
    SparsityExample,
    DelayTable,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OracleTask {
    /// Exhaustive sparsest QI superset.
    Superset,
    /// Exhaustive densest QI subset.
    Subset,
    /// Exact rational LP objective for a delay query.
    Lp,
}

#[derive(Debug, Args)]
struct Inputs {
    /// Plant file: sparsity pattern G or propagation delays p (measurements × inputs).
    #[arg(long)]
    plant: PathBuf,
    /// Controller file: pattern K or transmission delays t (inputs × measurements).
    #[arg(long)]
    controller: PathBuf,
    /// Read 0/1 files as delay matrices.
    #[arg(long)]
    as_delay: bool,
}

impl Inputs {
    fn patterns(&self, files: &mut Loaded) -> Result<(BinaryPattern, BinaryPattern)> {
        if self.as_delay {
            return Err(QiError::Parameter("--as-delay needs delay inputs".into()));
        }
        Ok((files.pattern("plant", &self.plant)?, files.pattern("controller", &self.controller)?))
    }

    fn delays(&self, files: &mut Loaded) -> Result<(DelayMatrix, DelayMatrix)> {
        Ok((files.delays("plant", &self.plant)?, files.delays("controller", &self.controller)?))
    }
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[command(flatten)]
    inputs: Inputs,
    /// Use the pairwise test `p >= t` (square, metric delays only).
    #[arg(long)]
    reduced: bool,
    /// Ignore delay violations with slack at most this value.
    #[arg(long, default_value_t = 0.0)]
    slack_tol: f64,
}

#[derive(Debug, Args)]
struct ClosestArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "1")]
    norm: NormArg,
    #[command(flatten)]
    inputs: Inputs,
    /// With `--norm inf`, minimize the 1-norm among the ∞-norm optima.
    #[arg(long = "tiebreak-1norm")]
    tiebreak: bool,
    /// Include the closure iterates.
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum, default_value = "weights")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "step")]
    schedule: ScheduleArg,
    /// Delay scale for the relaxed-LP heuristic.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// `minplus` solves delay supersets by closure instead of optimization.
    #[arg(long, value_enum, default_value = "auto")]
    solver: SolverArg,
    /// Print the resulting matrix as text instead of JSON.
    #[arg(long)]
    plain: bool,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(value_enum)]
    task: OracleTask,
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, value_enum, default_value = "set")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "1")]
    norm: NormArg,
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Loaded {
    digests: Vec<Value>,
}

impl Loaded {
    fn new() -> Self {
        Self { digests: Vec::new() }
    }

    fn read(&mut self, role: &str, path: &Path, as_delay: bool) -> Result<crate::text::Matrix> {
        let text = std::fs::read_to_string(path).map_err(|e| QiError::Parse {
            line: 0,
            column: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        let m = parse_matrix(&text, as_delay)?;
        let (r, c) = m.shape();
        let hash = Sha256::digest(text.as_bytes());
        self.digests.push(json!({
            "role": role,
            "path": path.display().to_string(),
            "shape": [r, c],
            "sha256": hash.iter().map(|b| format!("{b:02x}")).collect::<String>(),
        }));
        Ok(m)
    }

    fn pattern(&mut self, role: &str, path: &Path) -> Result<BinaryPattern> {
        self.read(role, path, false)?.into_binary()
    }

    fn delays(&mut self, role: &str, path: &Path) -> Result<DelayMatrix> {
        Ok(self.read(role, path, true)?.into_delay())
    }
}

enum Output {
    Json(Map<String, Value>),
    Plain(String),
}

fn to_map(v: impl Serialize) -> Map<String, Value> {
    match serde_json::to_value(v).expect("serializable") {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    }
}

fn pairs_one_based(pairs: &[(usize, usize)]) -> Value {
    json!(pairs.iter().map(|&(a, b)| [a + 1, b + 1]).collect::<Vec<_>>())
}

fn tolerance_from_env() -> Result<f64> {
    match std::env::var(TOLERANCE_ENV) {
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| QiError::Parameter(format!("{TOLERANCE_ENV}={s:?} is not a number"))),
        Err(_) => Ok(DEFAULT_TOLERANCE),
    }
}

fn mode_of(m: ModeArg) -> Mode {
    match m {
        ModeArg::Set => Mode::Set,
        ModeArg::Subset => Mode::Subset,
        ModeArg::Superset => Mode::Superset,
    }
}

fn norm_of(n: NormArg) -> Norm {
    match n {
        NormArg::One => Norm::One,
        NormArg::Two => Norm::Two,
        NormArg::Inf => Norm::Inf,
    }
}

fn check(args: &CheckArgs, files: &mut Loaded) -> Result<Output> {
    let report = match args.kind {
        Kind::Sparsity => {
            let (g, k) = args.inputs.patterns(files)?;
            if args.reduced {
                return Err(QiError::Parameter("--reduced applies to delay constraints only".into()));
            }
            is_qi_sparsity(&k, &g)?
        }
        Kind::Delay => {
            let (p, t) = args.inputs.delays(files)?;
            if args.reduced {
                is_qi_delay_reduced(&t, &p)?
            } else {
                is_qi_delay_with_tolerance(&t, &p, args.slack_tol)?
            }
        }
    };
    Ok(Output::Json(to_map(&report)))
}

fn closest(args: &ClosestArgs, files: &mut Loaded) -> Result<Output> {
    match args.kind {
        Kind::Sparsity => {
            let (g, k) = args.inputs.patterns(files)?;
            match args.mode {
                ModeArg::Superset => {
                    let (z, trace) = closest_superset(&k, &g)?;
                    if args.plain {
                        return Ok(Output::Plain(format_pattern(&z)));
                    }
                    let mut out = Map::new();
                    out.insert("hamming_distance".into(), json!(z.hamming(&k)));
                    out.insert("iterations".into(), json!(trace.iterations_used));
                    out.insert("added_links".into(), pairs_one_based(&trace.added_links));
                    if args.trace {
                        out.insert("iterates".into(), json!(trace.iterates));
                    }
                    out.insert("result".into(), json!(z));
                    Ok(Output::Json(out))
                }
                ModeArg::Subset => {
                    let cfg = HeuristicConfig {
                        method: match args.method {
                            MethodArg::Weights => Method::Weights,
                            MethodArg::RelaxedLp => Method::RelaxedLp,
                        },
                        schedule: match args.schedule {
                            ScheduleArg::Step => Schedule::PerDisconnection,
                            ScheduleArg::Pass => Schedule::PerPass,
                        },
                        scale: args.scale,
                    };
                    let r = close_subset(&k, &g, &cfg)?;
                    if args.plain {
                        return Ok(Output::Plain(format_pattern(&r.z)));
                    }
                    let mut out = to_map(&r);
                    out.insert("method".into(), json!(cfg.method));
                    out.insert("schedule".into(), json!(cfg.schedule));
                    Ok(Output::Json(out))
                }
                ModeArg::Set => Err(QiError::UnsupportedInput(
                    "closest sparsity set is not supported; use --mode superset or subset".into(),
                )),
            }
        }
        Kind::Delay => {
            let (p, t) = args.inputs.delays(files)?;
            let result = match args.solver {
                SolverArg::Minplus => {
                    if !matches!(args.mode, ModeArg::Superset) {
                        return Err(QiError::Parameter("--solver minplus needs --mode superset".into()));
                    }
                    let mut r = minplus_superset(&t, &p)?;
                    let norm = norm_of(args.norm);
                    r.objective = norm.apply(r.delta.iter().flatten().copied());
                    r.norm = norm;
                    r
                }
                SolverArg::Auto => {
                    let query = NearestQuery::new(mode_of(args.mode), norm_of(args.norm))
                        .with_tiebreak(args.tiebreak)
                        .with_tolerance(tolerance_from_env()?);
                    solve_closest(&t, &p, &query)?
                }
            };
            if args.plain {
                return Ok(Output::Plain(format_delays(&result.t_out)));
            }
            let mut out = to_map(&result);
            let t_out = out.remove("t_out").expect("field present");
            out.insert("result".into(), t_out);
            Ok(Output::Json(out))
        }
    }
}

fn oracle(args: &OracleArgs, files: &mut Loaded) -> Result<Output> {
    let mut out = Map::new();
    match args.task {
        OracleTask::Superset => {
            let (g, k) = args.inputs.patterns(files)?;
            let z = exhaustive_minimal_superset(&k, &g)?;
            out.insert("hamming_distance".into(), json!(z.hamming(&k)));
            out.insert("result".into(), json!(z));
        }
        OracleTask::Subset => {
            let (g, k) = args.inputs.patterns(files)?;
            let (z, d) = exhaustive_maximal_subset(&k, &g)?;
            out.insert("hamming_distance".into(), json!(d));
            out.insert("result".into(), json!(z));
        }
        OracleTask::Lp => {
            let (p, t) = args.inputs.delays(files)?;
            let query = NearestQuery::new(mode_of(args.mode), norm_of(args.norm));
            let lp: LpInstance = build_lp(&t, &p, &query)?;
            let sol = solve_rational_lp(&RationalLp::from_lp(&lp)?)?;
            out.insert("objective_exact".into(), json!(sol.objective.to_string()));
            out.insert("objective".into(), json!(rational_to_f64(&sol.objective)));
            out.insert("rows".into(), json!(lp.constraints.len()));
            out.insert("mode".into(), json!(query.mode));
            out.insert("norm".into(), json!(query.norm));
        }
    }
    Ok(Output::Json(out))
}

fn reproduce(example: Example) -> Result<Output> {
    let mut out = Map::new();
    match example {
        Example::SparsityExample => {
            let k = instances::block_diagonal();
            for (name, g) in [("plant_one", instances::plant_one()), ("plant_two", instances::plant_two())] {
                let (z, trace) = closest_superset(&k, &g)?;
                out.insert(
                    name.into(),
                    json!({
                        "plant": g,
                        "controller": k,
                        "result": z,
                        "iterations": trace.iterations_used,
                        "added_links": pairs_one_based(&trace.added_links),
                    }),
                );
            }
        }
        Example::DelayTable => {
            let p = instances::propagation_delays();
            let t = instances::transmission_delays();
            let mut cells = Vec::new();
            for norm in [Norm::One, Norm::Two, Norm::Inf] {
                for mode in [Mode::Subset, Mode::Set, Mode::Superset] {
                    let query = NearestQuery::new(mode, norm).with_tolerance(tolerance_from_env()?);
                    let r = solve_closest(&t, &p, &query)?;
                    cells.push(json!({
                        "mode": mode,
                        "norm": norm,
                        "objective": r.objective,
                        "delta": r.delta,
                        "solver": r.solver,
                    }));
                }
            }
            out.insert("cells".into(), Value::Array(cells));
        }
    }
    Ok(Output::Json(out))
}

fn exit_code(e: &QiError) -> i32 {
    match e {
        QiError::NonConvergence { .. } | QiError::Internal(_) | QiError::Unbounded => 3,
        _ => 2,
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: rendered, stderr: String::new() }
                }
                _ => Outcome { code: 1, stdout: String::new(), stderr: rendered },
            };
        }
    };
    let start = Instant::now();
    let mut files = Loaded::new();
    let result = match &cli.command {
        Command::Check(a) => check(a, &mut files),
        Command::Closest(a) => closest(a, &mut files),
        Command::Oracle(a) => oracle(a, &mut files),
        Command::Reproduce { example } => reproduce(*example),
    };
    match result {
        Ok(Output::Plain(text)) => Outcome { code: 0, stdout: text, stderr: String::new() },
        Ok(Output::Json(mut map)) => {
            let command: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
            map.insert("command".into(), json!(command));
            map.insert("inputs".into(), Value::Array(files.digests));
            map.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
            map.insert("timing_ms".into(), json!(start.elapsed().as_secs_f64() * 1e3));
            let mut stdout = serde_json::to_string_pretty(&Value::Object(map)).expect("serializable");
            stdout.push('\n');
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
