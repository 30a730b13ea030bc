use std::collections::BTreeSet;

use proptest::prelude::*;
use tpath::addition::{
    decompose, solve_addition_dp, solve_addition_dp_with_stats, solve_addition_exhaustive, AdditionInstance, Candidate,
    PathWithDetours,
};
use tpath::error::ModelError;
use tpath::generate::{path_instance, path_with_tau, random_path_with_detours, rng};
use tpath::model::PlanningModel;
use tpath::rational::{int, ratio};

fn instance(seed: u64) -> PathWithDetours {
    random_path_with_detours(&mut rng(seed), 10, 10, 3)
}

fn with_budget(pwd: &PathWithDetours, k: usize) -> PathWithDetours {
    let inst = pwd.instance();
    let again = AdditionInstance::new(inst.model.clone(), k, inst.prescribed.clone(), inst.pool.clone()).unwrap();
    PathWithDetours::new(again).unwrap()
}

#[test]
fn a_cheap_detour_keeps_the_agent_going() {
    // Bare path costs 3 + 3 + 3; the agent at v0 perceives 3 + 6β = 6 > βr = 5.
    let bare = path_instance(&[3, 3, 3], vec![], 1, ratio(1, 2), int(10));
    assert!(solve_addition_dp(&bare).is_none());
    let pool = vec![Candidate::new("c0", "v1", "v3", int(0))];
    let helped = path_instance(&[3, 3, 3], pool, 1, ratio(1, 2), int(10));
    assert!(solve_addition_exhaustive(helped.instance()).is_none());
    let pool = vec![Candidate::new("c0", "v1", "v3", int(0)), Candidate::new("c1", "v0", "v2", int(3))];
    let helped = path_instance(&[3, 3, 3], pool, 2, ratio(1, 2), int(10));
    assert_eq!(solve_addition_exhaustive(helped.instance()).is_some(), solve_addition_dp(&helped).is_some());
}

#[test]
fn pool_validation() {
    let model = path_instance(&[1, 1], vec![], 0, ratio(1, 2), int(5)).into_instance().model;
    let t = model.graph().arc_ids();
    let dup = vec![Candidate::new("c", "v0", "v2", int(1)), Candidate::new("c", "v0", "v1", int(1))];
    assert_eq!(
        AdditionInstance::new(model.clone(), 1, t.clone(), dup).unwrap_err(),
        ModelError::DuplicateCandidate("c".into())
    );
    let back = vec![Candidate::new("b", "v2", "v0", int(1))];
    assert_eq!(
        AdditionInstance::new(model.clone(), 1, t.clone(), back).unwrap_err(),
        ModelError::CyclicPool("b".into())
    );
    let clash = vec![Candidate::new("p0", "v0", "v2", int(1))];
    assert!(AdditionInstance::new(model, 1, t, clash).is_err());
}

#[test]
fn subset_counter_scales_with_tau() {
    let mut r = rng(5);
    for tau in 0..=8 {
        let pwd = path_with_tau(&mut r, tau, 3);
        let (_, stats) = solve_addition_dp_with_stats(&pwd);
        assert_eq!(stats.tau, tau);
        let base = 1u64 << tau;
        assert!(stats.subsets_enumerated >= base);
        assert!(stats.subsets_enumerated <= stats.segments as u64 * base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn dp_agrees_with_exhaustive(seed in any::<u64>()) {
        let pwd = instance(seed);
        let ex = solve_addition_exhaustive(pwd.instance());
        let dp = solve_addition_dp(&pwd);
        prop_assert_eq!(ex.is_some(), dp.is_some());
        for sol in [ex, dp].into_iter().flatten() {
            prop_assert!(sol.selected.len() <= pwd.instance().k);
            prop_assert!(sol.selected.is_subset(&pwd.instance().candidate_ids()));
            prop_assert_eq!(pwd.instance().verify(&sol.selected), Some(sol.witness));
        }
    }

    #[test]
    fn components_partition_the_pool(seed in any::<u64>()) {
        let pwd = instance(seed);
        let dec = decompose(&pwd);
        prop_assert_eq!(dec.cuts.first().copied(), Some(0));
        prop_assert_eq!(dec.cuts.last().copied(), Some(pwd.len() - 1));
        prop_assert!(dec.cuts.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(dec.components.len(), dec.cuts.len() - 1);
        let all: BTreeSet<String> = dec.components.iter().flatten().cloned().collect();
        prop_assert_eq!(all.len(), dec.components.iter().map(Vec::len).sum::<usize>());
        prop_assert_eq!(all, pwd.instance().candidate_ids());
    }

    #[test]
    fn more_budget_never_hurts(seed in any::<u64>()) {
        let pwd = instance(seed);
        if solve_addition_dp(&pwd).is_some() {
            prop_assert!(solve_addition_dp(&with_budget(&pwd, pwd.instance().k + 1)).is_some());
        }
    }

    #[test]
    fn dp_solution_is_a_real_answer_for_any_budget(seed in any::<u64>(), k in 0usize..4) {
        let pwd = with_budget(&instance(seed), k);
        let ex = solve_addition_exhaustive(pwd.instance());
        prop_assert_eq!(ex.is_some(), solve_addition_dp(&pwd).is_some());
    }
}
