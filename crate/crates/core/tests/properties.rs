use proptest::prelude::*;
use tpath::generate::{random_beta, random_dag, random_reward, rng, GraphShape};
use tpath::graph::{ArcSpec, TaskGraph};
use tpath::model::{FPModel, Model, Outcome, PlanningModel};
use tpath::rational::{int, Cost, Rational};

fn random_model(seed: u64) -> Model {
    let mut r = rng(seed);
    let (graph, s, t) = random_dag(&mut r, GraphShape::default());
    let beta = random_beta(&mut r);
    let reward = random_reward(&mut r, 40, 2);
    Model::new(graph, &s, &t, beta, reward).unwrap()
}

/// All paths from `v` to `t` as arc-weight sequences, by plain DFS.
fn all_paths(g: &TaskGraph, v: usize, t: usize) -> Vec<Vec<Rational>> {
    if v == t {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for &a in g.out_arcs(v) {
        let arc = g.arc(a);
        for mut rest in all_paths(g, arc.head, t) {
            rest.insert(0, arc.weight.clone());
            out.push(rest);
        }
    }
    out
}

/// Perceived cost by enumeration: first arc at full weight, the rest discounted.
fn zeta_oracle(m: &Model, v: usize) -> Cost {
    if v == m.target() {
        return Cost::Finite(int(0));
    }
    all_paths(m.graph(), v, m.target())
        .into_iter()
        .map(|p| {
            let rest: Rational = p[1..].iter().sum();
            &p[0] + m.beta() * rest
        })
        .min()
        .map_or(Cost::Infinite, Cost::Finite)
}

fn scaled(m: &Model, c: i64) -> Model {
    let specs: Vec<ArcSpec> =
        m.graph().arc_specs().into_iter().map(|a| ArcSpec::new(a.id, a.tail, a.head, a.weight * int(c))).collect();
    let g = TaskGraph::new(m.graph().vertices().to_vec(), specs).unwrap();
    Model::new(g, m.source_id(), m.target_id(), m.beta().clone(), m.reward() * int(c)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn perceived_cost_matches_path_enumeration(seed in any::<u64>()) {
        let m = random_model(seed);
        for (v, id) in m.graph().vertices().iter().enumerate() {
            prop_assert_eq!(m.perceived_cost(id).unwrap(), zeta_oracle(&m, v), "vertex {}", id);
        }
    }

    #[test]
    fn walk_follows_perceived_arcs_and_threshold(seed in any::<u64>()) {
        let m = random_model(seed);
        let run = m.simulate();
        let threshold = m.beta() * m.reward();
        prop_assert_eq!(run.perceived_at.len(), run.steps.len() + 1);
        for (i, visit) in run.perceived_at.iter().enumerate() {
            prop_assert_eq!(&visit.zeta, &m.perceived_cost(&visit.vertex).unwrap());
            if i < run.steps.len() {
                prop_assert!(!visit.zeta.exceeds(&threshold));
                prop_assert_eq!(&run.steps[i], &m.perceived_next_arc(&visit.vertex).unwrap());
            }
        }
        match &run.outcome {
            Outcome::Reached => prop_assert_eq!(
                m.graph().arc_by_id(run.steps.last().unwrap()).map(|a| a.head),
                Some(m.target())
            ),
            Outcome::Abandoned { at } => {
                let last = run.perceived_at.last().unwrap();
                prop_assert_eq!(&last.vertex, at);
                prop_assert!(last.zeta.exceeds(&threshold));
            }
        }
    }

    #[test]
    fn simulation_is_deterministic(seed in any::<u64>()) {
        let m = random_model(seed);
        prop_assert_eq!(m.simulate(), m.clone().simulate());
    }

    #[test]
    fn larger_reward_never_hurts(seed in any::<u64>(), extra in 0i64..20) {
        let m = random_model(seed);
        let more = m.with_reward(m.reward() + int(extra)).unwrap();
        let (a, b) = (m.simulate(), more.simulate());
        if a.reached() {
            prop_assert!(b.reached());
            prop_assert_eq!(a.steps, b.steps);
        }
    }

    #[test]
    fn unbiased_agent_takes_a_shortest_path(seed in any::<u64>()) {
        let m = random_model(seed);
        let unbiased = Model::new(m.graph().clone(), m.source_id(), m.target_id(), int(1), int(1_000_000)).unwrap();
        let run = unbiased.simulate();
        let dist = &unbiased.distances()[unbiased.source()];
        if let Cost::Finite(d) = dist {
            prop_assert!(run.reached());
            let walked: Rational = run.steps.iter().map(|id| unbiased.graph().arc_by_id(id).unwrap().weight.clone()).sum();
            prop_assert_eq!(&walked, d);
        } else {
            prop_assert!(!run.reached());
        }
    }

    #[test]
    fn scaling_weights_and_reward_keeps_the_walk(seed in any::<u64>(), c in 1i64..7) {
        let m = random_model(seed);
        let (a, b) = (m.simulate(), scaled(&m, c).simulate());
        prop_assert_eq!(a.steps, b.steps);
        prop_assert_eq!(a.outcome, b.outcome);
    }

    #[test]
    fn uniform_rewards_lift_to_false_promises(seed in any::<u64>()) {
        let m = random_model(seed);
        prop_assert_eq!(FPModel::from_uniform(&m).simulate(), m.simulate());
    }

    #[test]
    fn threshold_is_strict(seed in any::<u64>()) {
        let m = random_model(seed);
        if let Cost::Finite(z) = m.perceived_cost(m.source_id()).unwrap() {
            let exact = m.with_reward(&z / m.beta()).unwrap().simulate();
            prop_assert!(!exact.steps.is_empty() || exact.reached());
            let below = &z / m.beta() - Rational::new(1.into(), 1000.into());
            if below >= int(0) {
                let short = m.with_reward(below).unwrap().simulate();
                prop_assert_eq!(short.outcome, Outcome::Abandoned { at: m.source_id().to_string() });
            }
        }
    }
}
