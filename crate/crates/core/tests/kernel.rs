use proptest::prelude::*;
use tpath::deletion::{solve_deletion_exhaustive, DeletionInstance};
use tpath::figures::figure1_deletion;
use tpath::generate::{random_deletion, rng, GraphShape};
use tpath::kernel::{
    apply_rules, replay, solve_deletion_via_kernel, solve_deletion_via_kernel_with_stats, to_false_promises,
    verify_kernel_size, Kernelized, RuleApplication,
};
use tpath::model::PlanningModel;

fn instance(seed: u64) -> DeletionInstance {
    random_deletion(&mut rng(seed), GraphShape::default(), 3)
}

#[test]
fn figure_instance_kernelizes_and_lifts() {
    let inst = figure1_deletion(1);
    let (kernel, trace) = apply_rules(&to_false_promises(&inst));
    let Kernelized::Kernel(kernel) = kernel else { panic!("figure instance is a yes instance") };
    assert!(verify_kernel_size(&kernel));
    assert!(!trace.0.is_empty());
    let sol = solve_deletion_via_kernel(&inst).unwrap();
    assert_eq!(inst.verify(&sol.deleted), Some(sol.witness));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn kernel_route_agrees_with_exhaustive(seed in any::<u64>()) {
        let inst = instance(seed);
        let ex = solve_deletion_exhaustive(&inst);
        let (ke, stats) = solve_deletion_via_kernel_with_stats(&inst);
        prop_assert_eq!(ex.is_some(), ke.is_some());
        if let (Some(ex), Some(ke)) = (ex, ke) {
            // Lifting keeps the cardinality, and both minimise it.
            prop_assert_eq!(ex.deleted.len(), ke.deleted.len());
            prop_assert!(ke.deleted.is_disjoint(&inst.prescribed));
            prop_assert_eq!(inst.verify(&ke.deleted), Some(ke.witness));
        }
        if !stats.trivial_no {
            prop_assert!(stats.kernel_arcs <= inst.model.graph().arc_count());
        }
    }

    #[test]
    fn kernel_size_on_connected_inputs(seed in any::<u64>()) {
        let inst = instance(seed);
        prop_assume!(inst.model.graph().is_weakly_connected());
        if let (Kernelized::Kernel(kernel), _) = apply_rules(&to_false_promises(&inst)) {
            let g = kernel.model.graph();
            let fes = g.feedback_edge_number();
            prop_assert!(verify_kernel_size(&kernel));
            prop_assert!(g.vertex_count() <= 8 * fes + 3 && g.arc_count() <= 9 * fes + 2);
        }
    }

    #[test]
    fn kernel_is_a_fixpoint(seed in any::<u64>()) {
        let inst = instance(seed);
        if let (Kernelized::Kernel(kernel), _) = apply_rules(&to_false_promises(&inst)) {
            let (again, trace) = apply_rules(&kernel);
            prop_assert!(trace.0.is_empty(), "rule still applies: {:?}", trace.0.first());
            prop_assert_eq!(again, Kernelized::Kernel(kernel));
        }
    }

    #[test]
    fn replaying_the_trace_rebuilds_the_kernel(seed in any::<u64>()) {
        let fp = to_false_promises(&instance(seed));
        let (kernel, trace) = apply_rules(&fp);
        prop_assert_eq!(replay(&fp, &trace), kernel.clone());
        let trivial = trace.0.iter().any(|r| matches!(r, RuleApplication::Rule1TrivialNo { .. } | RuleApplication::Rule2TrivialNo));
        prop_assert_eq!(trivial, kernel == Kernelized::TrivialNo);
    }

    #[test]
    fn false_promise_view_is_equivalent(seed in any::<u64>()) {
        let inst = instance(seed);
        let fp = to_false_promises(&inst);
        prop_assert_eq!(fp.model.simulate(), inst.model.simulate());
        if let Some(sol) = solve_deletion_exhaustive(&inst) {
            prop_assert_eq!(fp.verify(&sol.deleted), Some(sol.witness));
        }
    }
}
