use proptest::prelude::*;

use tfnp_reductions::campaign::gen::{mix, random_instance, rng_for};
use tfnp_reductions::campaign::{run_roundtrip, Generator, RoundtripConfig};
use tfnp_reductions::problems::{
    brute_force, enumerate_solutions, verify, Instance, Problem, Solution, VerifyOptions,
};
use tfnp_reductions::reductions::{chain_path, parse_path, reduce, Outcome, ReductionId, PWPP_CYCLE};
use tfnp_reductions::Error;

fn any_reduction() -> impl Strategy<Value = ReductionId> {
    prop::sample::select(ReductionId::ALL.to_vec())
}

/// Every target solution pulls back to an accepted source solution, and no
/// target solution lands in a case the reduction rules out.
fn check_all_solutions(id: ReductionId, src: &Instance) -> Result<usize, TestCaseError> {
    let r = match reduce(id, src).unwrap() {
        Outcome::Solved(sol) => {
            prop_assert!(verify(src, &sol).unwrap().is_accepted(), "{id}: direct {sol:?}");
            return Ok(1);
        }
        Outcome::Reduced(r) => r,
    };
    let sols = enumerate_solutions(r.target(), VerifyOptions::default(), None).unwrap();
    prop_assert!(!sols.is_empty(), "{id}: target without solutions");
    for sol in &sols {
        prop_assert!(!id.impossible_cases().contains(&sol.case()), "{id}: {sol:?}");
        let back = r.pull_back(sol);
        prop_assert!(back.is_ok(), "{id}: {sol:?} → {back:?}");
        let back = back.unwrap();
        prop_assert!(verify(src, &back).unwrap().is_accepted(), "{id}: {sol:?} → {back:?}");
    }
    Ok(sols.len())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn every_target_solution_pulls_back(id in any_reduction(), n in 1usize..=3, seed in any::<u64>()) {
        let src = random_instance(id.source(), n, &mut rng_for(seed)).unwrap();
        check_all_solutions(id, &src)?;
    }

    #[test]
    fn target_sizes_stay_under_ceiling(id in any_reduction(), n in 1usize..=5, seed in any::<u64>()) {
        let src = random_instance(id.source(), n, &mut rng_for(seed)).unwrap();
        if let Outcome::Reduced(r) = reduce(id, &src).unwrap() {
            prop_assert!(r.target().gate_count() as u64 <= id.gate_ceiling(&src));
        }
    }

    #[test]
    fn pwpp_cycle_round_trip(n in 2usize..=3, seed in any::<u64>()) {
        let src = random_instance(Problem::Collision, n, &mut rng_for(seed)).unwrap();
        let sol = match chain_path(&PWPP_CYCLE, &src).unwrap() {
            Outcome::Solved(sol) => sol,
            Outcome::Reduced(r) => {
                prop_assert_eq!(r.name(), "collision_to_dove>dove_to_dlog>dlog_to_general_claw>general_claw_to_collision");
                let end = brute_force(r.target()).unwrap();
                r.pull_back(&end).unwrap()
            }
        };
        prop_assert!(matches!(sol, Solution::Collision(..)));
        prop_assert!(verify(&src, &sol).unwrap().is_accepted());
    }

    #[test]
    fn pigeon_paths_round_trip(n in 1usize..=2, seed in any::<u64>()) {
        let src = random_instance(Problem::Pigeon, n, &mut rng_for(seed)).unwrap();
        for path in ["pigeon_to_index>index_to_pigeon", "pigeon_to_blichfeldt"] {
            let sol = match chain_path(&parse_path(path).unwrap(), &src).unwrap() {
                Outcome::Solved(sol) => sol,
                Outcome::Reduced(r) => r.pull_back(&brute_force(r.target()).unwrap()).unwrap(),
            };
            prop_assert!(verify(&src, &sol).unwrap().is_accepted(), "{path}: {sol:?}");
        }
    }
}

#[test]
fn exhaustive_small_sources() {
    let cfg = RoundtripConfig {
        n_min: 1,
        n_max: 2,
        generator: Generator::Exhaustive,
        per_case_limit: None,
        ..RoundtripConfig::default()
    };
    for id in [
        ReductionId::PigeonToIndex,
        ReductionId::PigeonToBlichfeldt,
        ReductionId::CollisionToDove,
        ReductionId::CollisionToClaw,
        ReductionId::CollisionToPrefix,
        ReductionId::PrefixToCollision,
        ReductionId::DoveToDlog,
    ] {
        let report = run_roundtrip(&[id], &cfg).unwrap();
        assert!(report.is_clean(), "{id}: {:?}", report.failures.first());
        let t = &report.entries[id.name()];
        assert!(t.instances > 0);
        assert!(t.impossible_case_hits.values().all(|&k| k == 0), "{id}: {t:?}");
    }
}

#[test]
fn exhaustive_dlogp_widths() {
    let cfg = RoundtripConfig {
        n_min: 2,
        n_max: 4,
        generator: Generator::Exhaustive,
        per_case_limit: None,
        ..RoundtripConfig::default()
    };
    let report = run_roundtrip(&[ReductionId::DlogpToDlog], &cfg).unwrap();
    assert!(report.is_clean());
    let t = &report.entries["dlogp_to_dlog"];
    // Only case 1 may appear.
    assert!(t.solutions_by_case.keys().all(|&c| c == 1), "{t:?}");
}

#[test]
fn seeded_campaigns_replay() {
    let cfg = RoundtripConfig { seed: 99, count: 30, ..RoundtripConfig::default() };
    let path = parse_path("collision_to_claw>claw_to_general_claw>general_claw_to_collision").unwrap();
    let a = run_roundtrip(&path, &cfg).unwrap();
    assert!(a.is_clean(), "{:?}", a.failures.first());
    assert_eq!(a.to_json(), run_roundtrip(&path, &cfg).unwrap().to_json());
}

#[test]
fn chains_check_problem_types() {
    let src = random_instance(Problem::Pigeon, 2, &mut rng_for(mix(1, 2, 3))).unwrap();
    let path = parse_path("pigeon_to_index>collision_to_dove").unwrap();
    assert!(matches!(chain_path(&path, &src), Err(Error::ChainMismatch { .. })));
    assert!(reduce(ReductionId::DoveToDlog, &src).is_err());
    assert!(parse_path("pigeon_to_nowhere").is_err());
}
