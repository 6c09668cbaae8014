//! Branch-and-bound solver for the allocation ILP.

use crate::error::{Error, Result};
use crate::model::{CandidateAllocation, Scenario, Schedule};
use crate::scalar::Rate;
use crate::solvers::common::{CandidatePools, Occupancy, Phase, SolverResult, Status, TraceStep};
use crate::solvers::mramc::{greedy_with_pools, relocate_with_pools};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExactMode {
    /// Full problem: RB exclusivity and per-slot capacity.
    WithExclusivity,
    /// Coverage and one allocation per camera only. Allocations in the result
    /// may share RBs.
    WithoutExclusivity,
}

pub fn exact_solve<R: Rate>(scenario: &Scenario<R>, mode: ExactMode) -> Result<SolverResult<R>> {
    exact_solve_with_budget(scenario, mode, DEFAULT_NODE_BUDGET)
}

/// Like [`exact_solve`] with an explicit node budget. Exceeding the budget is
/// an [`Error::ResourceLimit`], never a partial answer.
pub fn exact_solve_with_budget<R: Rate>(
    scenario: &Scenario<R>,
    mode: ExactMode,
    budget: u64,
) -> Result<SolverResult<R>> {
    let pools = CandidatePools::build(scenario)?;
    let widest = pools.iter().map(|(_, p)| p.len()).max().unwrap_or(0) as u64;
    let size = scenario.cameras.len() as u64 * widest;
    if size > budget {
        return Err(Error::ResourceLimit { expanded: size, budget });
    }

    let target_index = |id| scenario.targets.iter().position(|t| t.id == id);
    let cameras: Vec<Cam<R>> = scenario
        .cameras
        .iter()
        .map(|c| {
            let pool = pools.pool(c.id).to_vec();
            Cam {
                covers: c.coverage.iter().filter_map(|&y| target_index(y)).collect(),
                min_len: pool.first().map_or(usize::MAX, |a| a.length),
                pool,
            }
        })
        .collect();
    let mut coverers = vec![Vec::new(); scenario.targets.len()];
    for (k, cam) in cameras.iter().enumerate() {
        if cam.pool.is_empty() {
            continue;
        }
        for &y in &cam.covers {
            coverers[y].push(k);
        }
    }
    if coverers.iter().any(Vec::is_empty) {
        return Ok(SolverResult {
            schedule: Schedule::default(),
            status: Status::InfeasibleCoverage,
            diagnostics: Vec::new(),
        });
    }

    // Seed the incumbent with the greedy heuristic.
    let greedy = greedy_with_pools(scenario, &pools);
    let incumbent = match mode {
        ExactMode::WithExclusivity => {
            let r = relocate_with_pools(&greedy, scenario, &pools);
            r.is_feasible().then_some(r.schedule.assignments)
        }
        ExactMode::WithoutExclusivity => greedy.status.is_feasible().then_some(greedy.tentative),
    };

    let mut search = Search {
        cameras: &cameras,
        coverers: &coverers,
        exclusive: mode == ExactMode::WithExclusivity,
        covered: vec![0; scenario.targets.len()],
        uncovered: scenario.targets.len(),
        blocked: vec![false; cameras.len()],
        chosen: Vec::new(),
        occupancy: Occupancy::new(&scenario.grid),
        best_cost: incumbent.as_ref().map_or(usize::MAX, |a| a.iter().map(|c| c.length).sum()),
        best: incumbent,
        expanded: 0,
        budget,
    };
    search.dfs(0)?;

    Ok(match search.best {
        Some(assignments) => {
            let diagnostics = assignments
                .iter()
                .map(|a| TraceStep::new(Phase::Exact, a.camera_id, Some(*a)))
                .collect();
            SolverResult {
                schedule: Schedule::new(assignments, scenario),
                status: Status::Feasible,
                diagnostics,
            }
        }
        // Every target has a coverer, so only packing can have failed.
        None => SolverResult {
            schedule: Schedule::default(),
            status: Status::InfeasibleCapacity,
            diagnostics: Vec::new(),
        },
    })
}

struct Cam<R> {
    covers: Vec<usize>,
    pool: Vec<CandidateAllocation<R>>,
    min_len: usize,
}

struct Search<'a, R> {
    cameras: &'a [Cam<R>],
    coverers: &'a [Vec<usize>],
    exclusive: bool,
    covered: Vec<usize>,
    uncovered: usize,
    /// Chosen, or excluded by an earlier sibling branch.
    blocked: Vec<bool>,
    chosen: Vec<CandidateAllocation<R>>,
    occupancy: Occupancy,
    best: Option<Vec<CandidateAllocation<R>>>,
    best_cost: usize,
    expanded: u64,
    budget: u64,
}

impl<R: Rate> Search<'_, R> {
    fn gain(&self, k: usize) -> usize {
        self.cameras[k].covers.iter().filter(|&&y| self.covered[y] == 0).count()
    }

    /// Each uncovered target pays at least the cheapest per-target share
    /// among the cameras still able to cover it.
    fn lower_bound(&self) -> Option<f64> {
        let gains: Vec<usize> = (0..self.cameras.len())
            .map(|k| if self.blocked[k] { 0 } else { self.gain(k) })
            .collect();
        let mut lb = 0.0;
        for (y, ks) in self.coverers.iter().enumerate() {
            if self.covered[y] > 0 {
                continue;
            }
            let share = ks
                .iter()
                .filter(|&&k| gains[k] > 0)
                .map(|&k| self.cameras[k].min_len as f64 / gains[k] as f64)
                .fold(f64::INFINITY, f64::min);
            if share.is_infinite() {
                return None;
            }
            lb += share;
        }
        Some(lb)
    }

    fn dfs(&mut self, cost: usize) -> Result<()> {
        self.expanded += 1;
        if self.expanded > self.budget {
            return Err(Error::ResourceLimit {
                expanded: self.expanded,
                budget: self.budget,
            });
        }
        if self.uncovered == 0 {
            if cost < self.best_cost {
                self.best_cost = cost;
                self.best = Some(self.chosen.clone());
            }
            return Ok(());
        }
        let Some(lb) = self.lower_bound() else {
            return Ok(());
        };
        if cost + (lb - 1e-9).ceil() as usize >= self.best_cost {
            return Ok(());
        }

        // Branch on the uncovered target with the fewest remaining options.
        let target = (0..self.covered.len())
            .filter(|&y| self.covered[y] == 0)
            .min_by_key(|&y| self.coverers[y].iter().filter(|&&k| !self.blocked[k]).count())
            .expect("some target is uncovered");
        let mut options: Vec<usize> = self.coverers[target]
            .iter()
            .copied()
            .filter(|&k| !self.blocked[k])
            .collect();
        // Promising cameras first: lowest min_len / gain, then lowest id.
        let gains: Vec<usize> = options.iter().map(|&k| self.gain(k)).collect();
        let mut order: Vec<usize> = (0..options.len()).collect();
        order.sort_by(|&a, &b| {
            let (ka, kb) = (options[a], options[b]);
            (self.cameras[ka].min_len * gains[b])
                .cmp(&(self.cameras[kb].min_len * gains[a]))
                .then(ka.cmp(&kb))
        });
        options = order.into_iter().map(|i| options[i]).collect();

        let mut excluded = Vec::new();
        for k in options {
            self.blocked[k] = true;
            self.cover(k, true);
            let candidates = if self.exclusive {
                self.cameras[k].pool.len()
            } else {
                1
            };
            for i in 0..candidates {
                let cand = self.cameras[k].pool[i];
                if cost + cand.length >= self.best_cost {
                    break;
                }
                if self.exclusive {
                    if !self.occupancy.fits(&cand) {
                        continue;
                    }
                    self.occupancy.take(&cand);
                }
                self.chosen.push(cand);
                let r = self.dfs(cost + cand.length);
                self.chosen.pop();
                if self.exclusive {
                    self.occupancy.release(&cand);
                }
                r?;
            }
            self.cover(k, false);
            // Later siblings search without k; those solutions were covered here.
            excluded.push(k);
        }
        for k in excluded {
            self.blocked[k] = false;
        }
        Ok(())
    }

    fn cover(&mut self, k: usize, add: bool) {
        for &y in &self.cameras[k].covers {
            if add {
                if self.covered[y] == 0 {
                    self.uncovered -= 1;
                }
                self.covered[y] += 1;
            } else {
                self.covered[y] -= 1;
                if self.covered[y] == 0 {
                    self.uncovered += 1;
                }
            }
        }
    }
}
