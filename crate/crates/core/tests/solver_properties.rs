mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{brute_candidates, exhaustive_optimum, random_instance, relaxed_optimum, SMALL};
use csrap_core::model::{verify_schedule, CameraNode, Constraint, FrameGrid, Scenario};
use csrap_core::scenario::{generate_scenario, Deployment, ScenarioConfig};
use csrap_core::solvers::{
    baseline_schedule, joint_schedule, m_mramc, mramc, mramc_greedy, selection_round,
    surveillance_items, weighted_set_cover_greedy, TrafficItem, WeightedSet,
};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn harmonic(n: usize) -> Ratio<i64> {
    (1..=n as i64).map(|i| Ratio::new(1, i)).sum()
}

/// `(d*, r_max, r_min)` from coverage sizes and brute-force usable runs.
fn bound_inputs(s: &Scenario<u32>) -> Option<(usize, u32, u32)> {
    let rates: Vec<u32> = s
        .cameras
        .iter()
        .flat_map(|c| brute_candidates(c, &s.grid))
        .filter(|r| r.2 <= s.grid.capacity(r.0))
        .map(|r| r.3)
        .collect();
    let d = s.cameras.iter().map(|c| c.coverage.len()).max()?;
    Some((d, *rates.iter().max()?, *rates.iter().min()?))
}

#[test]
fn approximation_bounds_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut checked = (0, 0);
    for _ in 0..1000 {
        let s = random_instance(&mut rng, &SMALL);
        let Some((d, r_max, r_min)) = bound_inputs(&s) else { continue };
        let h = harmonic(d);

        let greedy = mramc_greedy(&s).unwrap();
        if greedy.status.is_feasible() {
            let z = relaxed_optimum(&s).unwrap();
            assert!(Ratio::from(greedy.total_rbs() as i64) <= h * z as i64, "{s:?}");
            checked.0 += 1;
        }
        let full = mramc(&s).unwrap();
        if full.is_feasible() {
            let z = exhaustive_optimum(&s).unwrap();
            let bound = Ratio::new(r_max as i64, r_min as i64) * h * z as i64;
            assert!(Ratio::from(full.total_rbs() as i64) <= bound, "{s:?}");
            assert!(full.total_rbs() >= z);
            checked.1 += 1;
        }
    }
    assert!(checked.0 > 100 && checked.1 > 100, "{checked:?}");
}

#[test]
fn unit_candidates_reduce_to_set_cover() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let k = rng.gen_range(1..=8u32);
        let y = rng.gen_range(1..=10u32);
        let m = rng.gen_range(1..=4usize);
        let cams: Vec<CameraNode<u32>> = (1..=k)
            .map(|id| {
                let cover: BTreeSet<u32> = (1..=y).filter(|_| rng.gen_bool(0.3)).collect();
                CameraNode::abstract_camera(id, 4, vec![4; m], cover)
            })
            .collect();
        let sets: Vec<WeightedSet> = cams
            .iter()
            .map(|c| WeightedSet { id: c.id, weight: 1, elements: c.coverage.clone() })
            .collect();
        let s = Scenario::abstract_instance(FrameGrid::new(m, 1, 10.0).unwrap(), cams, y).unwrap();
        let universe: BTreeSet<u32> = (1..=y).collect();
        let greedy = mramc_greedy(&s).unwrap();
        assert_eq!(greedy.camera_sequence(), weighted_set_cover_greedy(&universe, &sets));
    }
}

#[test]
fn generation_and_solving_are_deterministic() {
    for deployment in [Deployment::OverallGrid, Deployment::PartialRandom, Deployment::CellEdge] {
        let cfg = ScenarioConfig { deployment, rng_seed: 77, ..Default::default() };
        let a = generate_scenario(&cfg).unwrap();
        let b = generate_scenario(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(mramc(&a).unwrap(), mramc(&b).unwrap());
        assert_eq!(baseline_schedule(&a).unwrap(), baseline_schedule(&b).unwrap());
    }
}

#[test]
fn multi_coverage_rounds_grow_and_stay_feasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut multi_round = 0;
    for _ in 0..1000 {
        let s = random_instance(&mut rng, &SMALL);
        let wanted: BTreeMap<u32, usize> =
            s.target_ids().into_iter().map(|y| (y, rng.gen_range(1..=3))).collect();
        let m = m_mramc(&s, &wanted).unwrap();
        if !m.result.is_feasible() {
            continue;
        }
        multi_round += usize::from(m.rounds.len() > 1);
        for w in m.rounds.windows(2) {
            for a in &w[0].assignments {
                assert!(w[1].assignments.contains(a));
            }
            assert!(w[1].assignments.len() > w[0].assignments.len());
        }
        for round in &m.rounds {
            let r = verify_schedule(round, &s).unwrap();
            for c in [Constraint::SlotCapacity, Constraint::RbExclusivity, Constraint::OnePerCamera] {
                assert!(r.passed(c), "{c:?}");
            }
            assert!(r.passed(Constraint::AllocationDomain));
        }
        assert_eq!(m.rounds.last().unwrap(), &m.result.schedule);
        for u in &m.unmet {
            assert!(u.achieved < u.desired);
        }
    }
    assert!(multi_round > 40, "{multi_round}");
}

#[test]
fn priority_moves_traditional_traffic_earlier() {
    let cfg = ScenarioConfig {
        deployment: Deployment::PartialRandom,
        num_cameras: 30,
        num_targets: 20,
        rng_seed: 8,
        ..Default::default()
    };
    let s = generate_scenario(&cfg).unwrap();
    let mut last = usize::MAX;
    for alpha in [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 50.0] {
        let mut items = surveillance_items(&s);
        items.push(TrafficItem::traditional(1000, 12.0, vec![6.0; s.grid.num_subchannels()], alpha));
        let r = joint_schedule(&items, &s.grid, &s.target_ids()).unwrap();
        let round = selection_round(&r, 1000).unwrap();
        assert!(round <= last, "alpha {alpha}: {round} > {last}");
        last = round;
    }
    assert_eq!(last, 0);

    let plain = joint_schedule(&surveillance_items(&s), &s.grid, &s.target_ids()).unwrap();
    assert_eq!(plain.schedule, mramc(&s).unwrap().schedule);
}
