//! The `earthworm` command-line tool.
//!
//! Exit codes: 0 success, 1 runtime or check failure, 2 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::checkpoint::{self, Checkpoint};
use crate::coupling::{verify_coupling_in, CouplingReport};
use crate::dynamics::WormState;
use crate::error::{Error, Result};
use crate::lattice::{Direction, Site};
use crate::montecarlo::{run_sweep, run_sweep_resumable, ExperimentPlan, SampleTable};
use crate::oracle::{replay_equivalence_with_fault, EquivalenceReport};
use crate::stats::{self, Connectivity};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "earthworm", version, about = "Earthworm hole dynamics on Z^d")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one trajectory and write its summary as JSON.
    Simulate(SimulateArgs),
    /// Run replicas over a grid of run lengths and write a sample CSV.
    Sweep(SweepArgs),
    /// Run one trajectory and write its holes, one site per line.
    HolesDump(HolesDumpArgs),
    /// Check the indexed engine against the naive one, or the coupling.
    Verify(VerifyArgs),
    /// Statistics over sample tables and hole dumps.
    #[command(subcommand)]
    Stats(StatsCommand),
}

fn parse_dim(s: &str) -> std::result::Result<usize, String> {
    let d: usize = s.parse().map_err(|e| format!("{e}"))?;
    if d < 2 {
        return Err("dimension must be at least 2".into());
    }
    Ok(d)
}

fn parse_positive(s: &str) -> std::result::Result<u64, String> {
    let v: u64 = s.parse().map_err(|e| format!("{e}"))?;
    if v == 0 {
        return Err("must be at least 1".into());
    }
    Ok(v)
}

fn parse_parallelism(s: &str) -> std::result::Result<usize, String> {
    parse_positive(s).map(|v| v as usize)
}

#[derive(Debug, Clone, Args)]
pub struct TrajectoryArgs {
    #[arg(long, default_value = "2", value_parser = parse_dim)]
    pub dim: usize,
    /// Total number of steps.
    #[arg(long, default_value_t = 0)]
    pub steps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub track_visits: bool,
    /// Explicit moves instead of random steps: comma-separated direction
    /// indices, or R,L,U,D in the plane.
    #[arg(long, hide = true, value_delimiter = ',')]
    pub moves: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub run: TrajectoryArgs,
    #[arg(long, value_parser = parse_positive)]
    pub record_every: Option<u64>,
    /// Summary path; stdout if omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write the holes dump here.
    #[arg(long)]
    pub holes: Option<PathBuf>,
    /// Resume from this checkpoint if it exists, and keep it updated.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, value_parser = parse_positive, requires = "checkpoint")]
    pub checkpoint_every: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value = "2", value_parser = parse_dim)]
    pub dim: usize,
    /// Comma-separated, strictly increasing run lengths.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_grid: Vec<u64>,
    #[arg(long, default_value = "10", value_parser = parse_positive)]
    pub replicas: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub track_visits: bool,
    /// Worker threads; defaults to EARTHWORM_THREADS, then the core count.
    #[arg(long, env = "EARTHWORM_THREADS", value_parser = parse_parallelism)]
    pub parallelism: Option<usize>,
    /// CSV path; stdout if omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Replicas per checkpoint write.
    #[arg(long, value_parser = parse_positive, requires = "checkpoint")]
    pub checkpoint_every: Option<u64>,
}

#[derive(Debug, Args)]
pub struct HolesDumpArgs {
    #[command(flatten)]
    pub run: TrajectoryArgs,
    /// Holes path; stdout if omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write the visited sites here (enables visit tracking).
    #[arg(long)]
    pub visited_output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Oracle,
    Coupling,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Inclusive seed range `a..b`, or a single seed.
    #[arg(long, default_value = "1..100", value_parser = parse_seed_range)]
    pub seeds: SeedRange,
    #[arg(long, default_value_t = 1000)]
    pub steps: u64,
    #[arg(long, default_value = "2", value_parser = parse_dim)]
    pub dim: usize,
    /// Restart times for the coupling suite.
    #[arg(long, value_delimiter = ',', default_value = "1,10,100")]
    pub restart_at: Vec<u64>,
    /// JSON report path; stdout if omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Negative control: the indexed engine skips the transfer at this step.
    #[arg(long, hide = true)]
    pub inject_skip_transfer: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedRange {
    pub first: u64,
    pub last: u64,
}

fn parse_seed_range(s: &str) -> std::result::Result<SeedRange, String> {
    let (first, last) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|e| format!("{e}"))?,
            b.trim_start_matches('=')
                .trim()
                .parse()
                .map_err(|e| format!("{e}"))?,
        ),
        None => {
            let v = s.trim().parse().map_err(|e| format!("{e}"))?;
            (v, v)
        }
    };
    if first > last {
        return Err(format!("empty seed range {s}"));
    }
    Ok(SeedRange { first, last })
}

#[derive(Debug, Subcommand)]
pub enum StatsCommand {
    /// Log-log fit of mean S_n against n.
    Regress {
        #[arg(long)]
        input: PathBuf,
        /// Write plot-ready points and fitted line as CSV.
        #[arg(long)]
        plot_output: Option<PathBuf>,
    },
    /// KS normality test of S_n at one grid point.
    Ks {
        #[arg(long)]
        input: PathBuf,
        /// Grid point; the largest n by default.
        #[arg(long)]
        n: Option<u64>,
    },
    /// Empirical P(S_n > theta * mean) against (1 - theta)^2 / 2.
    Pz {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
        theta: Vec<f64>,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Log-log fit of the per-step tan-point frequency against n.
    Tanpoints {
        #[arg(long)]
        input: PathBuf,
    },
    /// Connected components of a holes dump.
    Components {
        #[arg(long)]
        holes: PathBuf,
        #[arg(long)]
        visited: Option<PathBuf>,
        /// Count diagonal neighbours as adjacent.
        #[arg(long)]
        full: bool,
    },
    /// Fraction of samples with S_n >= delta * n^(3/4).
    Theorem {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        n: Option<u64>,
    },
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::HolesDump(a) => cmd_holes_dump(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Stats(s) => cmd_stats(&s),
    };
    match result {
        Ok(code) => code,
        Err(Error::InvalidDimension(_) | Error::Parameter(_)) => {
            // Still a usage problem even when detected after parsing.
            eprintln!("error: {}", result.err().unwrap());
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, contents)?,
        None => std::io::stdout().write_all(contents.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn parse_moves(tokens: &[String], dim: usize) -> Result<Vec<Direction>> {
    tokens
        .iter()
        .map(|t| {
            let t = t.trim();
            let idx = match (dim, t) {
                (2, "R" | "r") => 0,
                (2, "L" | "l") => 1,
                (2, "U" | "u") => 2,
                (2, "D" | "d") => 3,
                _ => t
                    .parse::<usize>()
                    .map_err(|_| Error::Parameter(format!("bad move {t:?}")))?,
            };
            if idx >= 2 * dim {
                return Err(Error::Parameter(format!(
                    "move {idx} out of range for d={dim}"
                )));
            }
            Ok(Direction::from_index(idx))
        })
        .collect()
}

/// Runs a trajectory per `args`, optionally resuming from and updating a
/// checkpoint. `--steps` is the total step count including resumed steps.
fn drive(
    args: &TrajectoryArgs,
    track_visits: bool,
    record_every: Option<u64>,
    checkpoint: Option<(&Path, Option<u64>)>,
) -> Result<(WormState, Vec<(u64, u64)>)> {
    let mut state = match checkpoint {
        Some((path, _)) if path.exists() => {
            let s = checkpoint::load_state(path)?;
            if s.dim() != args.dim {
                return Err(Error::Checkpoint {
                    field: "dim".into(),
                    reason: format!("checkpoint has d={}, requested d={}", s.dim(), args.dim),
                });
            }
            s
        }
        _ => WormState::new(args.dim, args.seed, track_visits)?,
    };
    let mut series = Vec::new();
    let mut record = |s: &WormState| {
        if let Some(every) = record_every {
            if s.step_count().is_multiple_of(every) {
                series.push((s.step_count(), s.hole_count()));
            }
        }
    };

    if let Some(moves) = &args.moves {
        for dir in parse_moves(moves, args.dim)? {
            state.apply_move(dir);
            record(&state);
        }
        return Ok((state, series));
    }

    let save_every = checkpoint.and_then(|(_, every)| every);
    while state.step_count() < args.steps {
        state.step();
        record(&state);
        if let (Some((path, _)), Some(every)) = (checkpoint, save_every) {
            if state.step_count() % every == 0 {
                checkpoint::save_state(&state, path)?;
            }
        }
    }
    if let Some((path, _)) = checkpoint {
        checkpoint::save_state(&state, path)?;
    }
    Ok((state, series))
}

fn holes_text(sites: &[Site]) -> String {
    let mut out = String::with_capacity(sites.len() * 12);
    for s in sites {
        let line: Vec<String> = s.coords().iter().map(i64::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_sites(path: &Path) -> Result<Vec<Site>> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let coords = l
                .split_whitespace()
                .map(str::parse::<i64>)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Format(format!("{}:{}: {e}", path.display(), i + 1)))?;
            Ok(Site::new(&coords))
        })
        .collect()
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<i32> {
    let checkpoint = a.checkpoint.as_deref().map(|p| (p, a.checkpoint_every));
    let (state, series) = drive(&a.run, a.run.track_visits, a.record_every, checkpoint)?;
    let summary = json!({
        "dim": state.dim(),
        "seed": a.run.seed,
        "steps": state.step_count(),
        "s_n": state.hole_count(),
        "created_total": state.created_total(),
        "tan_total": state.tan_total(),
        "position": state.position(),
        "series": series,
    });
    emit(a.output.as_deref(), &to_json(&summary))?;
    if let Some(path) = &a.holes {
        std::fs::write(path, holes_text(&state.holes_snapshot()))?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<i32> {
    let plan = ExperimentPlan {
        dim: a.dim,
        n_grid: a.n_grid.clone(),
        replicas: a.replicas,
        seed_base: a.seed,
        track_visits: a.track_visits,
        record_every: None,
    };
    plan.validate()?;
    let parallelism = a.parallelism.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    let table = match &a.checkpoint {
        Some(path) => {
            let batch = a.checkpoint_every.map_or(parallelism, |b| b as usize);
            run_sweep_resumable(&plan, parallelism, path, batch)?
        }
        None => run_sweep(&plan, parallelism)?,
    };
    let mut buf = Vec::new();
    table.write_csv(&mut buf)?;
    emit(
        a.output.as_deref(),
        std::str::from_utf8(&buf).expect("ascii csv"),
    )?;
    Ok(EXIT_OK)
}

pub fn cmd_holes_dump(a: &HolesDumpArgs) -> Result<i32> {
    let track = a.run.track_visits || a.visited_output.is_some();
    let (state, _) = drive(&a.run, track, None, None)?;
    emit(a.output.as_deref(), &holes_text(&state.holes_snapshot()))?;
    if let (Some(path), Some(visits)) = (&a.visited_output, state.visits()) {
        std::fs::write(path, holes_text(&visits.sorted()))?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    suite: &'a str,
    dim: usize,
    steps: u64,
    seeds: [u64; 2],
    runs: u64,
    passed: bool,
    failures: Vec<serde_json::Value>,
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let mut runs = 0;
    let mut failures = Vec::new();
    let seeds = a.seeds.first..=a.seeds.last;
    match a.suite {
        Suite::Oracle => {
            for seed in seeds {
                runs += 1;
                let r: EquivalenceReport =
                    replay_equivalence_with_fault(seed, a.steps, a.dim, a.inject_skip_transfer)?;
                if !r.equivalent {
                    failures.push(serde_json::to_value(&r).expect("serializable"));
                }
            }
        }
        Suite::Coupling => {
            if let Some(&i) = a.restart_at.iter().find(|&&i| i > a.steps) {
                return Err(Error::Parameter(format!(
                    "restart time {i} exceeds --steps"
                )));
            }
            for seed in seeds {
                for &i in &a.restart_at {
                    runs += 1;
                    let r: CouplingReport = verify_coupling_in(a.dim, seed, a.steps, i)?;
                    if !r.passed() {
                        failures.push(serde_json::to_value(&r).expect("serializable"));
                    }
                }
            }
        }
    }
    let passed = failures.is_empty();
    // Only the first divergence is reported in full.
    failures.truncate(1);
    let report = VerifyReport {
        suite: match a.suite {
            Suite::Oracle => "oracle",
            Suite::Coupling => "coupling",
        },
        dim: a.dim,
        steps: a.steps,
        seeds: [a.seeds.first, a.seeds.last],
        runs,
        passed,
        failures,
    };
    emit(a.report.as_deref(), &to_json(&report))?;
    Ok(if passed { EXIT_OK } else { EXIT_FAILURE })
}

fn grid_point(table: &SampleTable, n: Option<u64>) -> Result<u64> {
    let grid = table.grid();
    match n {
        Some(n) if grid.contains(&n) => Ok(n),
        Some(n) => Err(Error::Parameter(format!(
            "n={n} not in table grid {grid:?}"
        ))),
        None => grid
            .last()
            .copied()
            .ok_or_else(|| Error::Format("empty table".into())),
    }
}

pub fn cmd_stats(cmd: &StatsCommand) -> Result<i32> {
    match cmd {
        StatsCommand::Regress { input, plot_output } => {
            let table = SampleTable::load(input)?;
            let pairs: Vec<(f64, f64)> = table
                .means()
                .into_iter()
                .map(|(n, m)| (n as f64, m))
                .collect();
            let fit = stats::ols_loglog(&pairs)?;
            if let Some(path) = plot_output {
                let mut csv = String::from("# schema=1\nn,mean_s_n,ln_n,ln_mean,ln_fitted\n");
                for &(n, m) in &pairs {
                    csv.push_str(&format!(
                        "{},{},{},{},{}\n",
                        n,
                        m,
                        n.ln(),
                        m.ln(),
                        fit.predict(n.ln())
                    ));
                }
                std::fs::write(path, csv)?;
            }
            emit(None, &to_json(&json!({ "means": pairs, "fit": fit })))?;
            Ok(EXIT_OK)
        }
        StatsCommand::Ks { input, n } => {
            let table = SampleTable::load(input)?;
            let n = grid_point(&table, *n)?;
            let ks = stats::ks_normal(&table.samples(n))?;
            emit(None, &to_json(&json!({ "n": n, "ks": ks })))?;
            Ok(EXIT_OK)
        }
        StatsCommand::Pz { input, theta, n } => {
            let table = SampleTable::load(input)?;
            let n = grid_point(&table, *n)?;
            let samples = table.samples(n);
            let checks = theta
                .iter()
                .map(|&t| stats::paley_zygmund_check(&samples, t))
                .collect::<Result<Vec<_>>>()?;
            let ok = checks.iter().all(|c| c.holds());
            emit(
                None,
                &to_json(&json!({ "n": n, "checks": checks, "passed": ok })),
            )?;
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
        StatsCommand::Tanpoints { input } => {
            let table = SampleTable::load(input)?;
            let fit = stats::tan_point_exponent(&table)?;
            emit(None, &to_json(&json!({ "fit": fit })))?;
            Ok(EXIT_OK)
        }
        StatsCommand::Components {
            holes,
            visited,
            full,
        } => {
            let holes = read_sites(holes)?;
            let visited = visited.as_deref().map(read_sites).transpose()?;
            let conn = if *full {
                Connectivity::Full
            } else {
                Connectivity::Lattice
            };
            let c = stats::hole_components(&holes, visited.as_deref(), conn)?;
            emit(None, &to_json(&c))?;
            Ok(EXIT_OK)
        }
        StatsCommand::Theorem { input, delta, n } => {
            let table = SampleTable::load(input)?;
            let n = grid_point(&table, *n)?;
            let frac = stats::theorem_fraction(&table.samples(n), n, *delta)?;
            emit(
                None,
                &to_json(&json!({ "n": n, "delta": delta, "fraction": frac })),
            )?;
            Ok(EXIT_OK)
        }
    }
}

/// Writes a run checkpoint for `state`; used by examples and tests.
pub fn write_checkpoint(state: &WormState, path: &Path) -> Result<()> {
    Checkpoint::for_run(state).save(path)
}
