mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{brute_candidates, random_instance, SMALL};
use csrap_core::model::{verify_schedule, CandidateAllocation, Constraint, Scenario, Schedule};
use csrap_core::solvers::{
    baseline_schedule, exact_solve, greedy_based_reference, m_mramc, mramc, ExactMode,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Allocations with in-range runs that may still break any constraint.
fn random_schedule(s: &Scenario<u32>, rng: &mut ChaCha8Rng) -> Schedule<u32> {
    let m = s.grid.num_subchannels();
    let n = rng.gen_range(0..=s.cameras.len() + 1);
    let assignments = (0..n)
        .map(|_| {
            let cam = &s.cameras[rng.gen_range(0..s.cameras.len())];
            let slot = rng.gen_range(1..=s.grid.num_slots());
            let start = rng.gen_range(1..=m);
            let length = rng.gen_range(1..=m - start + 1);
            let min = *cam.rates_in_slot(slot)[start - 1..start - 1 + length].iter().min().unwrap();
            let robust_rate = if rng.gen_bool(0.1) { min + 1 } else { min };
            CandidateAllocation { camera_id: cam.id, slot, start, length, robust_rate }
        })
        .collect();
    Schedule::new(assignments, s)
}

struct Expected {
    coverage: bool,
    capacity: bool,
    exclusivity: bool,
    one_per_camera: bool,
    domain: bool,
}

fn evaluate(s: &Scenario<u32>, sched: &Schedule<u32>) -> Expected {
    let seen: BTreeSet<u32> = sched
        .assignments
        .iter()
        .flat_map(|a| s.camera(a.camera_id).unwrap().coverage.iter().copied())
        .collect();
    let coverage = s.targets.iter().all(|t| seen.contains(&t.id));

    let mut per_slot = vec![0usize; s.grid.num_slots()];
    let mut uses = vec![vec![0u32; s.grid.num_subchannels()]; s.grid.num_slots()];
    for a in &sched.assignments {
        per_slot[a.slot - 1] += a.length;
        for i in a.start..a.start + a.length {
            uses[a.slot - 1][i - 1] += 1;
        }
    }
    let capacity = (1..=s.grid.num_slots()).all(|t| per_slot[t - 1] <= s.grid.capacity(t));
    let exclusivity = uses.iter().flatten().all(|&n| n <= 1);

    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for a in &sched.assignments {
        *counts.entry(a.camera_id).or_default() += 1;
    }
    let one_per_camera = counts.values().all(|&n| n == 1);

    let domain = sched.assignments.iter().all(|a| {
        brute_candidates(s.camera(a.camera_id).unwrap(), &s.grid)
            .contains(&(a.slot, a.start, a.length, a.robust_rate))
    });
    Expected { coverage, capacity, exclusivity, one_per_camera, domain }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn verifier_agrees_with_direct_constraint_checks(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_instance(&mut rng, &SMALL);
        let sched = random_schedule(&s, &mut rng);
        let report = verify_schedule(&sched, &s).unwrap();
        let e = evaluate(&s, &sched);
        prop_assert_eq!(report.passed(Constraint::Coverage), e.coverage);
        prop_assert_eq!(report.passed(Constraint::SlotCapacity), e.capacity);
        prop_assert_eq!(report.passed(Constraint::RbExclusivity), e.exclusivity);
        prop_assert_eq!(report.passed(Constraint::OnePerCamera), e.one_per_camera);
        prop_assert_eq!(report.passed(Constraint::AllocationDomain), e.domain);
        prop_assert_eq!(
            report.is_feasible(),
            e.coverage && e.capacity && e.exclusivity && e.one_per_camera && e.domain
        );
    }

    #[test]
    fn feasible_solver_outputs_pass_direct_checks(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_instance(&mut rng, &SMALL);
        let wanted: BTreeMap<u32, usize> = s.target_ids().into_iter().map(|y| (y, 2)).collect();
        let results = [
            baseline_schedule(&s).unwrap(),
            greedy_based_reference(&s).unwrap(),
            mramc(&s).unwrap(),
            m_mramc(&s, &wanted).unwrap().result,
            exact_solve(&s, ExactMode::WithExclusivity).unwrap(),
        ];
        for r in results.iter().filter(|r| r.is_feasible()) {
            let e = evaluate(&s, &r.schedule);
            prop_assert!(e.coverage && e.capacity && e.exclusivity && e.one_per_camera && e.domain);
            prop_assert!(verify_schedule(&r.schedule, &s).unwrap().is_feasible());
        }
    }
}
