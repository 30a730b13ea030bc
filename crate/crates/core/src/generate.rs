//! Seeded random instances for tests, benchmarks and the CLI.
//!
//! Every generator is a pure function of its parameters and the RNG state,
//! so a seed reproduces an instance exactly.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::addition::{AdditionInstance, Candidate, PathWithDetours};
use crate::deletion::DeletionInstance;
use crate::graph::{ArcSpec, TaskGraph};
use crate::model::{Model, PlanningModel};
use crate::rational::{int, ratio, Rational};
use crate::reductions::{KsumInstance, SpmveInstance};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits for random graphs.
#[derive(Clone, Copy, Debug)]
pub struct GraphShape {
    pub max_vertices: usize,
    pub max_arcs: usize,
    pub max_weight: i64,
    pub min_weight: i64,
}

impl Default for GraphShape {
    fn default() -> Self {
        GraphShape { max_vertices: 8, max_arcs: 14, max_weight: 10, min_weight: 0 }
    }
}

const NAMES: [&str; 12] = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "p", "q"];

/// A random DAG with vertex ids shuffled against the hidden topological
/// order, so the lexicographic tie-break is exercised. Returns the graph and
/// the ids of its first and last vertex in that hidden order.
pub fn random_dag(rng: &mut impl Rng, shape: GraphShape) -> (TaskGraph, String, String) {
    let n = rng.gen_range(2..=shape.max_vertices.max(2));
    let mut names: Vec<&str> = NAMES[..n.max(2)].to_vec();
    names.shuffle(rng);
    let ids: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let arc_count = rng.gen_range(1..=shape.max_arcs);
    let mut arcs = Vec::with_capacity(arc_count);
    // A backbone keeps most instances connected from first to last.
    if rng.gen_bool(0.7) {
        let mut at = 0;
        while at < n - 1 && arcs.len() < arc_count {
            let next = rng.gen_range(at + 1..n);
            arcs.push((at, next));
            at = next;
        }
    }
    while arcs.len() < arc_count {
        let i = rng.gen_range(0..n - 1);
        let j = rng.gen_range(i + 1..n);
        arcs.push((i, j));
    }
    let specs = arcs
        .into_iter()
        .enumerate()
        .map(|(num, (i, j))| {
            let w = rng.gen_range(shape.min_weight..=shape.max_weight);
            ArcSpec::new(format!("{}{}{num}", ids[i], ids[j]), ids[i].clone(), ids[j].clone(), int(w))
        })
        .collect();
    let s = ids[0].clone();
    let t = ids[n - 1].clone();
    let mut vertices = ids;
    vertices.sort();
    (TaskGraph::new(vertices, specs).expect("arcs point forward"), s, t)
}

/// `p/q` with `1 <= p <= q <= 6`.
pub fn random_beta(rng: &mut impl Rng) -> Rational {
    let q = rng.gen_range(1..=6);
    ratio(rng.gen_range(1..=q), q)
}

/// A reward between 0 and `max` in steps of `1/denom`.
pub fn random_reward(rng: &mut impl Rng, max: i64, denom: i64) -> Rational {
    ratio(rng.gen_range(0..=max * denom), denom)
}

/// Random T-Path-Deletion instance within `shape`, budget at most `max_k`.
pub fn random_deletion(rng: &mut impl Rng, shape: GraphShape, max_k: usize) -> DeletionInstance {
    let (graph, s, t) = random_dag(rng, shape);
    let beta = random_beta(rng);
    let reward = random_reward(rng, 40, 3);
    let ids: Vec<String> = graph.arc_ids().into_iter().collect();
    let t_size = rng.gen_range(0..=2.min(ids.len()));
    let prescribed: BTreeSet<String> = ids.choose_multiple(rng, t_size).cloned().collect();
    let model = Model::new(graph, &s, &t, beta, reward).expect("valid random model");
    DeletionInstance::new(model, rng.gen_range(0..=max_k), prescribed).expect("T drawn from arcs")
}

/// Random SP-MVE instance with positive weights. With `even_ell` the
/// threshold is even and at least 4.
pub fn random_spmve(
    rng: &mut impl Rng,
    max_vertices: usize,
    max_k: usize,
    max_ell: u64,
    even_ell: bool,
) -> SpmveInstance {
    let shape = GraphShape { max_vertices, max_arcs: 10, max_weight: 5, min_weight: 1 };
    let (graph, s, t) = random_dag(rng, shape);
    let ell = if even_ell { 2 * rng.gen_range(2..=(max_ell / 2).max(2)) } else { rng.gen_range(1..=max_ell) };
    SpmveInstance::new(graph, &s, &t, rng.gen_range(0..=max_k), ell).expect("positive weights")
}

/// Random path with forward detours: `n <= max_len` vertices, at most
/// `max_pool` candidates, budget at most `max_k`.
pub fn random_path_with_detours(rng: &mut impl Rng, max_len: usize, max_pool: usize, max_k: usize) -> PathWithDetours {
    let n = rng.gen_range(2..=max_len.max(2));
    let weights: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(0..=10)).collect();
    let pool_size = rng.gen_range(0..=max_pool);
    let pool: Vec<Candidate> = (0..pool_size)
        .map(|num| {
            let i = rng.gen_range(0..n - 1);
            let j = rng.gen_range(i + 1..n);
            Candidate::new(format!("c{num}"), format!("v{i}"), format!("v{j}"), int(rng.gen_range(0..=10)))
        })
        .collect();
    let total: i64 = weights.iter().sum();
    let beta = random_beta(rng);
    // Rewards near the bare path's threshold keep both answers common.
    let reward = ratio(rng.gen_range(0..=12 * total.max(1)), 10) / &beta;
    path_instance(&weights, pool, rng.gen_range(0..=max_k), beta, reward)
}

/// Path `v0 … v_{n-1}` with arcs `p0 …` of the given weights.
pub fn path_instance(
    weights: &[i64],
    pool: Vec<Candidate>,
    k: usize,
    beta: Rational,
    reward: Rational,
) -> PathWithDetours {
    let n = weights.len() + 1;
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let arcs: Vec<ArcSpec> = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| ArcSpec::new(format!("p{i}"), format!("v{i}"), format!("v{}", i + 1), int(w)))
        .collect();
    let graph = TaskGraph::new(vertices, arcs).expect("a path is acyclic");
    let model = Model::new(graph, "v0", &format!("v{}", n - 1), beta, reward).expect("valid path model");
    let prescribed = model.graph().arc_ids();
    let inst = AdditionInstance::new(model, k, prescribed, pool).expect("forward candidates");
    PathWithDetours::new(inst).expect("path with forward candidates")
}

/// A path with detours whose largest intersection component has exactly
/// `tau` candidates, spread over `segments` components, with budget `tau`.
pub fn path_with_tau(rng: &mut impl Rng, tau: usize, segments: usize) -> PathWithDetours {
    let segments = segments.max(1);
    let seg_len = 3;
    let n = segments * seg_len + 1;
    let weights: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(1..=6)).collect();
    let mut pool = Vec::new();
    for seg in 0..segments {
        let from = seg * seg_len;
        let to = from + seg_len;
        let size = if seg == 0 { tau } else { rng.gen_range(0..=tau) };
        for _ in 0..size {
            // One arc over the whole segment keeps it a single component.
            let (i, j) = if pool.len() % 2 == 0 { (from, to) } else { (rng.gen_range(from..to), to) };
            let id = format!("c{}", pool.len());
            pool.push(Candidate::new(id, format!("v{i}"), format!("v{j}"), int(rng.gen_range(0..=12))));
        }
    }
    let total: i64 = weights.iter().sum();
    let beta = ratio(1, 2);
    path_instance(&weights, pool, tau, beta, int(total))
}

/// Random Modified k-Sum instance; roughly half are built around a real
/// solution.
pub fn random_ksum(rng: &mut impl Rng, k: usize, max_set: usize, max_elem: u64) -> KsumInstance {
    let sets: Vec<Vec<u64>> =
        (0..k).map(|_| (0..rng.gen_range(1..=max_set)).map(|_| rng.gen_range(1..=max_elem)).collect()).collect();
    let z = if rng.gen_bool(0.5) {
        sets.iter().map(|set| *set.choose(rng).expect("nonempty set")).sum()
    } else {
        rng.gen_range(k as u64..=k as u64 * max_elem)
    };
    KsumInstance::new(sets, z).expect("positive numbers")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::addition::decompose;

    #[test]
    fn seeds_reproduce() {
        let a = random_deletion(&mut rng(7), GraphShape::default(), 3);
        let b = random_deletion(&mut rng(7), GraphShape::default(), 3);
        assert_eq!(a, b);
    }

    #[test]
    fn shapes_respected() {
        let mut r = rng(1);
        for _ in 0..200 {
            let inst = random_deletion(&mut r, GraphShape::default(), 3);
            let g = inst.model.graph();
            assert!(g.vertex_count() <= 8 && g.arc_count() <= 14 && inst.k <= 3);
            assert!(g.arcs().iter().all(|a| a.weight <= int(10)));
        }
    }

    #[test]
    fn tau_is_exact() {
        let mut r = rng(3);
        for tau in 0..=6 {
            let pwd = path_with_tau(&mut r, tau, 3);
            assert_eq!(decompose(&pwd).tau(), tau);
        }
    }
}
