//! Seeded parameter sweeps over generated scenarios.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{verify_schedule, Scenario};
use crate::scenario::{generate_scenario_with_seeds, CameraKind, Deployment, ScenarioConfig};
use crate::solvers::{
    baseline_schedule, bound_params, exact_solve_with_budget, greedy_based_reference, m_mramc, mramc,
    ExactMode, SolverResult, DEFAULT_NODE_BUDGET,
};

pub const CSV_HEADER: &str = "axis,value,algorithm,mean_rbs,std_rbs,infeasible,trials";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    NumTargets,
    ViewDistance,
    Fov,
    Deployment,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::NumTargets => "num_targets",
            Axis::ViewDistance => "view_distance",
            Axis::Fov => "fov",
            Axis::Deployment => "deployment",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisValue {
    Number(f64),
    Deployment(Deployment),
}

impl fmt::Display for AxisValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisValue::Number(v) => write!(f, "{v}"),
            AxisValue::Deployment(d) => f.write_str(d.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Baseline,
    Mramc,
    MMramc,
    Exact,
    GreedyBased,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Baseline => "baseline",
            Algorithm::Mramc => "mramc",
            Algorithm::MMramc => "m_mramc",
            Algorithm::Exact => "exact",
            Algorithm::GreedyBased => "greedy_based",
        }
    }
}

fn default_trials() -> usize {
    200
}

fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::Baseline, Algorithm::Mramc, Algorithm::GreedyBased]
}

fn default_budget() -> u64 {
    DEFAULT_NODE_BUDGET
}

fn default_multiplicity() -> usize {
    2
}

/// A sweep over one axis. Trial `i` uses seed `base.rng_seed + i` for every
/// axis value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub base: ScenarioConfig,
    pub axis: Axis,
    pub values: Vec<AxisValue>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    /// Keep the placement seed at `base.rng_seed` so only shadowing varies.
    #[serde(default)]
    pub freeze_placement: bool,
    /// Node budget for the exact solver; trials over budget are skipped.
    #[serde(default = "default_budget")]
    pub exact_budget: u64,
    /// Cameras per target requested from m_mramc.
    #[serde(default = "default_multiplicity")]
    pub multiplicity: usize,
}

impl SweepSpec {
    pub fn new(base: ScenarioConfig, axis: Axis, values: Vec<AxisValue>) -> Self {
        Self {
            base,
            axis,
            values,
            trials: default_trials(),
            algorithms: default_algorithms(),
            freeze_placement: false,
            exact_budget: default_budget(),
            multiplicity: default_multiplicity(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::config("trials must be at least 1"));
        }
        if self.values.is_empty() {
            return Err(Error::config("axis values must not be empty"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::config("no algorithms selected"));
        }
        if self.multiplicity == 0 {
            return Err(Error::config("multiplicity must be at least 1"));
        }
        for v in &self.values {
            self.config_at(v)?.validate()?;
        }
        Ok(())
    }

    /// Base config with the axis set to `value`.
    pub fn config_at(&self, value: &AxisValue) -> Result<ScenarioConfig> {
        let mut cfg = self.base.clone();
        match (self.axis, value) {
            (Axis::NumTargets, AxisValue::Number(v)) if v.fract() == 0.0 && *v >= 0.0 => {
                cfg.num_targets = *v as usize;
            }
            (Axis::ViewDistance, AxisValue::Number(v)) => {
                cfg.camera_geometry = cfg.camera_geometry.with_view_distance(*v);
            }
            (Axis::Fov, AxisValue::Number(v)) => {
                cfg.camera_geometry.kind = CameraKind::Directional;
                cfg.camera_geometry.fov = *v;
            }
            (Axis::Deployment, AxisValue::Deployment(d)) => cfg.deployment = *d,
            (axis, v) => {
                return Err(Error::config(format!("value {v} does not fit axis {}", axis.name())));
            }
        }
        Ok(cfg)
    }

    /// Parses a JSON sweep spec, naming the offending field on failure.
    pub fn from_json(text: &str) -> Result<Self> {
        crate::scenario::from_json(text)
    }

    fn seeds(&self, trial: usize) -> (u64, u64) {
        let seed = self.base.rng_seed.wrapping_add(trial as u64);
        if self.freeze_placement {
            (self.base.rng_seed, seed)
        } else {
            (seed, seed)
        }
    }
}

/// Outcome of one algorithm on one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrialOutcome {
    Feasible(usize),
    Infeasible,
    /// The exact solver exceeded its budget.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResult {
    pub value: AxisValue,
    pub algorithm: Algorithm,
    /// Per trial, in trial order.
    pub outcomes: Vec<TrialOutcome>,
    /// Over feasible trials; `NaN` when there are none.
    pub mean_rbs: f64,
    /// Sample standard deviation over feasible trials.
    pub std_rbs: f64,
    pub infeasible: usize,
    /// Trials the algorithm actually ran (budget skips excluded).
    pub trials: usize,
}

impl PointResult {
    fn new(value: AxisValue, algorithm: Algorithm, outcomes: Vec<TrialOutcome>) -> Self {
        let rbs: Vec<f64> = outcomes
            .iter()
            .filter_map(|o| match o {
                TrialOutcome::Feasible(z) => Some(*z as f64),
                _ => None,
            })
            .collect();
        let (mean_rbs, std_rbs) = mean_std(&rbs);
        Self {
            value,
            algorithm,
            mean_rbs,
            std_rbs,
            infeasible: outcomes.iter().filter(|o| **o == TrialOutcome::Infeasible).count(),
            trials: outcomes.iter().filter(|o| **o != TrialOutcome::Skipped).count(),
            outcomes,
        }
    }

    pub fn feasible_count(&self) -> usize {
        self.trials - self.infeasible
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        let n = self.feasible_count();
        if n == 0 {
            f64::NAN
        } else {
            self.std_rbs / (n as f64).sqrt()
        }
    }
}

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// A trial where mramc exceeded its guarantee against the exact optimum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundViolation {
    pub value: AxisValue,
    pub trial: usize,
    pub mramc: usize,
    pub exact: usize,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub axis: Axis,
    /// Axis values in spec order, algorithms in spec order within each value.
    pub points: Vec<PointResult>,
    pub bound_violations: Vec<BoundViolation>,
    /// Mean wall-clock milliseconds per trial, keyed like `points`.
    #[serde(skip)]
    pub mean_ms: Vec<f64>,
}

impl SweepResult {
    pub fn point(&self, value: &AxisValue, algorithm: Algorithm) -> Option<&PointResult> {
        self.points
            .iter()
            .find(|p| p.value == *value && p.algorithm == algorithm)
    }

    /// Writes the CSV table. `comment` becomes a leading `# ` line.
    pub fn write_csv(&self, out: &mut impl Write, comment: Option<&str>) -> std::io::Result<()> {
        if let Some(c) = comment {
            writeln!(out, "# {c}")?;
        }
        writeln!(out, "{CSV_HEADER}")?;
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{:.4},{:.4},{},{}",
                self.axis.name(),
                p.value,
                p.algorithm.name(),
                p.mean_rbs,
                p.std_rbs,
                p.infeasible,
                p.trials
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self, comment: Option<&str>) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, comment).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is UTF-8")
    }
}

struct TrialRecord {
    outcomes: Vec<TrialOutcome>,
    violation: Option<BoundViolation>,
    elapsed_ms: f64,
}

fn check<R: crate::scalar::Rate>(
    result: &SolverResult<R>,
    scenario: &Scenario<R>,
    algorithm: Algorithm,
) -> Result<TrialOutcome> {
    if !result.is_feasible() {
        return Ok(TrialOutcome::Infeasible);
    }
    let report = verify_schedule(&result.schedule, scenario)?;
    if !report.is_feasible() {
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| format!("{:?}", c.violations))
            .collect();
        return Err(Error::Verification {
            seed: scenario.seed,
            algorithm: algorithm.name().into(),
            detail: failed.join("; "),
        });
    }
    Ok(TrialOutcome::Feasible(result.total_rbs()))
}

fn run_trial(spec: &SweepSpec, cfg: &ScenarioConfig, value: AxisValue, trial: usize) -> Result<TrialRecord> {
    let (placement, channel) = spec.seeds(trial);
    let scenario = generate_scenario_with_seeds(cfg, placement, channel)?;
    let start = Instant::now();
    let mut outcomes = Vec::with_capacity(spec.algorithms.len());
    let mut mramc_rbs = None;
    let mut exact_rbs = None;
    for &algorithm in &spec.algorithms {
        let result = match algorithm {
            Algorithm::Baseline => baseline_schedule(&scenario)?,
            Algorithm::Mramc => mramc(&scenario)?,
            Algorithm::GreedyBased => greedy_based_reference(&scenario)?,
            Algorithm::MMramc => {
                let wanted: BTreeMap<_, _> = scenario
                    .target_ids()
                    .into_iter()
                    .map(|y| (y, spec.multiplicity))
                    .collect();
                m_mramc(&scenario, &wanted)?.result
            }
            Algorithm::Exact => {
                match exact_solve_with_budget(&scenario, ExactMode::WithExclusivity, spec.exact_budget) {
                    Ok(r) => r,
                    Err(Error::ResourceLimit { .. }) => {
                        outcomes.push(TrialOutcome::Skipped);
                        continue;
                    }
                    Err(e) => return Err(e),
                }
            }
        };
        let outcome = check(&result, &scenario, algorithm)?;
        if let TrialOutcome::Feasible(z) = outcome {
            match algorithm {
                Algorithm::Mramc => mramc_rbs = Some(z),
                Algorithm::Exact => exact_rbs = Some(z),
                _ => {}
            }
        }
        outcomes.push(outcome);
    }
    let violation = match (mramc_rbs, exact_rbs) {
        (Some(m), Some(z)) => {
            let bound = bound_params(&scenario)?.relocation_bound(z)?;
            let exceeded = m < z || num_rational::BigRational::from_integer(m.into()) > bound;
            exceeded.then(|| BoundViolation {
                value,
                trial,
                mramc: m,
                exact: z,
                bound: num_traits::ToPrimitive::to_f64(&bound).unwrap_or(f64::NAN),
            })
        }
        _ => None,
    };
    Ok(TrialRecord {
        outcomes,
        violation,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Runs every (axis value, trial) pair in parallel. The result depends only
/// on the spec. Any schedule marked feasible that fails verification aborts
/// the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let configs: Vec<ScenarioConfig> = spec
        .values
        .iter()
        .map(|v| spec.config_at(v))
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..spec.values.len())
        .flat_map(|v| (0..spec.trials).map(move |t| (v, t)))
        .collect();
    let records: Vec<TrialRecord> = jobs
        .par_iter()
        .map(|&(v, t)| run_trial(spec, &configs[v], spec.values[v], t))
        .collect::<Result<_>>()?;

    let mut points = Vec::new();
    let mut mean_ms = Vec::new();
    let mut bound_violations = Vec::new();
    for (v, value) in spec.values.iter().enumerate() {
        let block = &records[v * spec.trials..(v + 1) * spec.trials];
        let ms = block.iter().map(|r| r.elapsed_ms).sum::<f64>() / spec.trials as f64;
        for (a, &algorithm) in spec.algorithms.iter().enumerate() {
            let outcomes = block.iter().map(|r| r.outcomes[a]).collect();
            points.push(PointResult::new(*value, algorithm, outcomes));
            mean_ms.push(ms);
        }
        bound_violations.extend(block.iter().filter_map(|r| r.violation.clone()));
    }
    Ok(SweepResult {
        axis: spec.axis,
        points,
        bound_violations,
        mean_ms,
    })
}
