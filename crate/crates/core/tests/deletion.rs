use std::collections::BTreeSet;

use proptest::prelude::*;
use tpath::deletion::{
    branching_node_bound, longest_st_path, relevant_subgraph, solve_deletion_branching_with_stats,
    solve_deletion_exhaustive, DeletionInstance,
};
use tpath::figures::figure1_deletion;
use tpath::generate::{random_deletion, rng, GraphShape};
use tpath::model::PlanningModel;

fn instance(seed: u64) -> DeletionInstance {
    random_deletion(&mut rng(seed), GraphShape::default(), 3)
}

#[test]
fn figure_instance_deletes_de() {
    let inst = figure1_deletion(1);
    let sol = solve_deletion_exhaustive(&inst).unwrap();
    assert_eq!(sol.deleted, BTreeSet::from(["de".to_string()]));
    assert_eq!(sol.witness.steps, ["sa", "ad", "dt"]);
    assert!(solve_deletion_exhaustive(&figure1_deletion(0)).is_none());
}

#[test]
fn node_bound_values() {
    assert_eq!(branching_node_bound(3, 0), 1);
    assert_eq!(branching_node_bound(3, 1), 10);
    assert_eq!(branching_node_bound(2, 2), 21);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn branching_agrees_with_exhaustive(seed in any::<u64>()) {
        let inst = instance(seed);
        let ex = solve_deletion_exhaustive(&inst);
        let (br, stats) = solve_deletion_branching_with_stats(&inst);
        prop_assert_eq!(ex.is_some(), br.is_some());
        for sol in [ex, br].into_iter().flatten() {
            prop_assert!(sol.deleted.len() <= inst.k);
            prop_assert!(sol.deleted.is_disjoint(&inst.prescribed));
            prop_assert_eq!(inst.verify(&sol.deleted), Some(sol.witness));
        }
        let bound = branching_node_bound(longest_st_path(&inst.model), inst.k);
        prop_assert!(u128::from(stats.nodes) <= bound);
    }

    #[test]
    fn exhaustive_solutions_are_minimum(seed in any::<u64>()) {
        let inst = instance(seed);
        if let Some(sol) = solve_deletion_exhaustive(&inst) {
            if let Some(smaller) = sol.deleted.len().checked_sub(1) {
                let tighter = DeletionInstance::new(inst.model.clone(), smaller, inst.prescribed.clone()).unwrap();
                prop_assert!(solve_deletion_exhaustive(&tighter).is_none());
            }
        }
    }

    #[test]
    fn arcs_outside_relevant_subgraph_do_not_matter(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let inst = instance(seed);
        let h = relevant_subgraph(&inst.model);
        let outside: Vec<String> = inst.model.graph().arc_ids().difference(&h).cloned().collect();
        if !outside.is_empty() {
            let arc = pick.get(&outside).clone();
            let before = inst.model.simulate();
            let after = inst.model.without_arcs(&BTreeSet::from([arc])).simulate();
            prop_assert_eq!(before.steps, after.steps);
            prop_assert_eq!(before.outcome, after.outcome);
        }
    }

    #[test]
    fn budget_is_monotone(seed in any::<u64>()) {
        let inst = instance(seed);
        if solve_deletion_exhaustive(&inst).is_some() {
            let looser = DeletionInstance::new(inst.model.clone(), inst.k + 1, inst.prescribed.clone()).unwrap();
            prop_assert!(solve_deletion_exhaustive(&looser).is_some());
        }
    }
}
