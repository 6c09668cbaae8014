use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use csrap_core::harness::{run_sweep, SweepSpec};
use csrap_core::model::{verify_schedule, Scenario};
use csrap_core::scenario::{generate_scenario, load_scenario, save_scenario, ScenarioConfig};
use csrap_core::solvers::{
    baseline_schedule, bound_params, exact_solve_with_budget, greedy_based_reference, load_schedule,
    m_mramc, mramc, save_schedule, ExactMode, SolverResult, DEFAULT_NODE_BUDGET,
};
use csrap_core::Error;

const EXIT_INFEASIBLE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "csrap", version, about = "Coverage-aware uplink RB allocation for camera networks")]
struct Cli {
    /// Seed overriding the one in the config or sweep spec.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Suppress summaries and the CSV timestamp line.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a scenario document from a config (defaults if omitted).
    Generate {
        config: Option<PathBuf>,
    },
    /// Solve a scenario and emit a schedule document.
    Solve {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Mramc)]
        algo: Algo,
        /// Cameras wanted per target (m_mramc only).
        #[arg(long, default_value_t = 2)]
        multiplicity: usize,
        /// Node budget for the exact solver.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Check a schedule against a scenario; exit 0 iff it is feasible.
    Verify {
        scenario: PathBuf,
        schedule: PathBuf,
    },
    /// Run a sweep spec and emit CSV.
    Sweep {
        spec: PathBuf,
        /// Override the trial count of the spec.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Approximation-bound parameters of a scenario.
    Bounds {
        scenario: PathBuf,
        /// Node budget for computing the exact optimum.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
#[value(rename_all = "snake_case")]
enum Algo {
    Baseline,
    Mramc,
    MMramc,
    Exact,
    GreedyBased,
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::InvalidConfig(_) | Error::Parse { .. } | Error::Io(_) => {
                EXIT_USAGE
            }
            Error::ResourceLimit { .. } | Error::Verification { .. } => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            message: format!("{e:#}"),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let res = match out {
        Some(p) => fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|e| Failure {
        code: EXIT_INTERNAL,
        message: format!("cannot write output: {e}"),
    })
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn load(path: &Path) -> Result<Scenario<f64>, Failure> {
    Ok(load_scenario(&read(path)?)?)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Generate { config } => {
            let mut cfg: ScenarioConfig = match config {
                Some(p) => ScenarioConfig::from_json(&read(&p)?)?,
                None => ScenarioConfig::default(),
            };
            if let Some(seed) = cli.seed {
                cfg.rng_seed = seed;
            }
            let scenario = generate_scenario(&cfg)?;
            emit(out, &with_newline(save_scenario(&scenario)?))?;
            if !cli.quiet {
                let uncovered = scenario.uncovered_targets();
                eprintln!(
                    "{} cameras, {} targets, {} uncoverable",
                    scenario.cameras.len(),
                    scenario.targets.len(),
                    uncovered.len()
                );
            }
            Ok(0)
        }
        Command::Solve {
            scenario,
            algo,
            multiplicity,
            budget,
        } => {
            let s = load(&scenario)?;
            let result = solve(&s, algo, multiplicity, budget)?;
            emit(out, &with_newline(save_schedule(&result)?))?;
            if !cli.quiet {
                eprintln!(
                    "{}: {} RBs over {} cameras",
                    result.status.as_str(),
                    result.total_rbs(),
                    result.schedule.assignments.len()
                );
            }
            Ok(if result.is_feasible() { 0 } else { EXIT_INFEASIBLE })
        }
        Command::Verify { scenario, schedule } => {
            let s = load(&scenario)?;
            let doc = load_schedule::<f64>(&read(&schedule)?)?;
            let report = verify_schedule(&doc.to_schedule(), &s)?;
            let summary = VerifyReport {
                feasible: report.is_feasible(),
                claimed_total_rbs: report.claimed_total_rbs,
                recomputed_total_rbs: report.recomputed_total_rbs,
                checks: report
                    .checks
                    .iter()
                    .map(|c| CheckLine {
                        constraint: format!("{:?}", c.constraint),
                        passed: c.passed(),
                        violations: c.violations.iter().map(|v| format!("{v:?}")).collect(),
                    })
                    .collect(),
            };
            let text = serde_json::to_string_pretty(&summary).map_err(anyhow::Error::from)?;
            emit(out, &with_newline(text))?;
            Ok(if report.is_feasible() { 0 } else { EXIT_INFEASIBLE })
        }
        Command::Sweep { spec, trials } => {
            let mut spec = SweepSpec::from_json(&read(&spec)?)?;
            if let Some(seed) = cli.seed {
                spec.base.rng_seed = seed;
            }
            if let Some(t) = trials {
                spec.trials = t;
            }
            let result = run_sweep(&spec)?;
            let stamp = (!cli.quiet).then(|| {
                let secs = SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0);
                format!("generated at unix time {secs}")
            });
            emit(out, &result.to_csv(stamp.as_deref()))?;
            if !cli.quiet && !result.bound_violations.is_empty() {
                eprintln!("{} bound violations", result.bound_violations.len());
            }
            Ok(0)
        }
        Command::Bounds { scenario, budget } => {
            let s = load(&scenario)?;
            let p = bound_params(&s)?;
            let exact = match exact_solve_with_budget(&s, ExactMode::WithExclusivity, budget) {
                Ok(r) if r.is_feasible() => Some(r.total_rbs()),
                Ok(_) => None,
                Err(Error::ResourceLimit { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let ratio = p.rate_ratio()?;
            let report = BoundsReport {
                d_star: p.d_star,
                h_d_star: p.h_d_star.to_string(),
                r_max: p.r_max,
                r_min: p.r_min,
                rate_ratio: ratio.to_string(),
                exact_rbs: exact,
                bound: exact.map(|z| p.relocation_bound_f64(z)).transpose()?,
            };
            let text = serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?;
            emit(out, &with_newline(text))?;
            Ok(0)
        }
    }
}

fn solve(s: &Scenario<f64>, algo: Algo, multiplicity: usize, budget: u64) -> Result<SolverResult<f64>, Failure> {
    Ok(match algo {
        Algo::Baseline => baseline_schedule(s)?,
        Algo::Mramc => mramc(s)?,
        Algo::GreedyBased => greedy_based_reference(s)?,
        Algo::Exact => exact_solve_with_budget(s, ExactMode::WithExclusivity, budget)?,
        Algo::MMramc => {
            let wanted: BTreeMap<_, _> = s.target_ids().into_iter().map(|y| (y, multiplicity)).collect();
            let m = m_mramc(s, &wanted)?;
            for u in &m.unmet {
                eprintln!(
                    "target {}: {} of {} cameras ({:?})",
                    u.target, u.achieved, u.desired, u.reason
                );
            }
            m.result
        }
    })
}

#[derive(Serialize)]
struct CheckLine {
    constraint: String,
    passed: bool,
    violations: Vec<String>,
}

#[derive(Serialize)]
struct VerifyReport {
    feasible: bool,
    claimed_total_rbs: usize,
    recomputed_total_rbs: usize,
    checks: Vec<CheckLine>,
}

#[derive(Serialize)]
struct BoundsReport {
    d_star: usize,
    h_d_star: String,
    r_max: f64,
    r_min: f64,
    rate_ratio: String,
    exact_rbs: Option<usize>,
    bound: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
