#![allow(dead_code)]

use std::collections::BTreeSet;

use csrap_core::model::{CameraNode, FrameGrid, Scenario};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct Limits {
    pub cameras: u32,
    pub targets: u32,
    pub subchannels: usize,
    pub slots: usize,
}

pub const SMALL: Limits = Limits {
    cameras: 6,
    targets: 8,
    subchannels: 6,
    slots: 2,
};

/// Random abstract instance with integer rates drawn from {0, 2, 4, 6, 8}.
pub fn random_instance(rng: &mut ChaCha8Rng, lim: &Limits) -> Scenario<u32> {
    let k = rng.gen_range(1..=lim.cameras);
    let y = rng.gen_range(1..=lim.targets);
    let m = rng.gen_range(1..=lim.subchannels);
    let t = rng.gen_range(1..=lim.slots);
    let caps: Vec<usize> = (0..t)
        .map(|_| if rng.gen_bool(0.2) { rng.gen_range(0..=m) } else { m })
        .collect();
    let grid = FrameGrid::with_capacity(m, caps, 10.0).unwrap();
    let cams = (1..=k)
        .map(|id| {
            let rates: Vec<u32> = (0..m)
                .map(|_| if rng.gen_bool(0.1) { 0 } else { 2 * rng.gen_range(1..=4) })
                .collect();
            let req = rng.gen_range(2..=16);
            let cover: BTreeSet<u32> = (1..=y).filter(|_| rng.gen_bool(0.35)).collect();
            CameraNode::abstract_camera(id, req, rates, cover)
        })
        .collect();
    Scenario::abstract_instance(grid, cams, y).unwrap()
}

/// `(slot, start, length, rate)` runs meeting the just-achieves inequality,
/// by direct search over every run.
pub fn brute_candidates(cam: &CameraNode<u32>, grid: &FrameGrid) -> Vec<(usize, usize, usize, u32)> {
    let m = grid.num_subchannels();
    let mut out = Vec::new();
    for slot in 1..=grid.num_slots() {
        for start in 1..=m {
            for len in 1..=(m - start + 1) {
                let run = &cam.rates_in_slot(slot)[start - 1..start - 1 + len];
                let rate = *run.iter().min().unwrap();
                if rate > 0 && rate * (len as u32 - 1) < cam.rate_requirement && cam.rate_requirement <= rate * len as u32 {
                    out.push((slot, start, len, rate));
                }
            }
        }
    }
    out
}

fn usable(s: &Scenario<u32>) -> Vec<Vec<(usize, usize, usize, u32)>> {
    s.cameras
        .iter()
        .map(|c| {
            brute_candidates(c, &s.grid)
                .into_iter()
                .filter(|r| r.2 <= s.grid.capacity(r.0))
                .collect()
        })
        .collect()
}

/// Minimum total RBs over every camera subset and every allocation choice,
/// with RB exclusivity and slot capacity. `None` if nothing is feasible.
pub fn exhaustive_optimum(s: &Scenario<u32>) -> Option<usize> {
    let cands = usable(s);
    let targets: BTreeSet<u32> = s.targets.iter().map(|t| t.id).collect();
    let mut grid = vec![vec![false; s.grid.num_subchannels()]; s.grid.num_slots()];
    let mut used = vec![0usize; s.grid.num_slots()];
    let mut best = None;
    fn go(
        i: usize,
        cost: usize,
        chosen: &mut Vec<usize>,
        s: &Scenario<u32>,
        cands: &[Vec<(usize, usize, usize, u32)>],
        targets: &BTreeSet<u32>,
        grid: &mut Vec<Vec<bool>>,
        used: &mut Vec<usize>,
        best: &mut Option<usize>,
    ) {
        if best.is_some_and(|b| cost >= b) {
            return;
        }
        if i == s.cameras.len() {
            let seen: BTreeSet<u32> = chosen
                .iter()
                .flat_map(|&k| s.cameras[k].coverage.iter().copied())
                .collect();
            if targets.is_subset(&seen) {
                *best = Some(cost);
            }
            return;
        }
        go(i + 1, cost, chosen, s, cands, targets, grid, used, best);
        for &(slot, start, len, _) in &cands[i] {
            let row = slot - 1;
            if used[row] + len > s.grid.capacity(slot) {
                continue;
            }
            if grid[row][start - 1..start - 1 + len].iter().any(|&b| b) {
                continue;
            }
            grid[row][start - 1..start - 1 + len].iter_mut().for_each(|b| *b = true);
            used[row] += len;
            chosen.push(i);
            go(i + 1, cost + len, chosen, s, cands, targets, grid, used, best);
            chosen.pop();
            used[row] -= len;
            grid[row][start - 1..start - 1 + len].iter_mut().for_each(|b| *b = false);
        }
    }
    go(0, 0, &mut Vec::new(), s, &cands, &targets, &mut grid, &mut used, &mut best);
    best
}

/// Minimum over camera subsets of the summed smallest allocation sizes,
/// ignoring RB sharing.
pub fn relaxed_optimum(s: &Scenario<u32>) -> Option<usize> {
    let cands = usable(s);
    let targets: BTreeSet<u32> = s.targets.iter().map(|t| t.id).collect();
    let k = s.cameras.len();
    let mut best: Option<usize> = None;
    for mask in 0u32..(1 << k) {
        let mut cost = 0;
        let mut seen = BTreeSet::new();
        let mut ok = true;
        for i in 0..k {
            if mask & (1 << i) == 0 {
                continue;
            }
            match cands[i].iter().map(|c| c.2).min() {
                Some(phi) => cost += phi,
                None => ok = false,
            }
            seen.extend(s.cameras[i].coverage.iter().copied());
        }
        if ok && targets.is_subset(&seen) && best.is_none_or(|b| cost < b) {
            best = Some(cost);
        }
    }
    best
}
