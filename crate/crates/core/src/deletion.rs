//! T-Path-Deletion: remove at most `k` arcs so that the agent reaches the
//! target along a path containing every prescribed arc.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::ModelError;
use crate::graph::TaskGraph;
use crate::model::{best_arc, distances_to, Model, PlanningModel, TraversalResult};
use crate::rational::Cost;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletionInstance {
    pub model: Model,
    pub k: usize,
    pub prescribed: BTreeSet<String>,
}

impl DeletionInstance {
    pub fn new(model: Model, k: usize, prescribed: BTreeSet<String>) -> Result<Self, ModelError> {
        if let Some(missing) = prescribed.iter().find(|a| !model.graph().contains_arc(a)) {
            return Err(ModelError::UnknownArc(missing.clone()));
        }
        Ok(DeletionInstance { model, k, prescribed })
    }

    /// Checks a proposed deletion set and returns the agent's walk on the
    /// reduced model when it is a valid solution.
    pub fn verify(&self, deleted: &BTreeSet<String>) -> Option<TraversalResult> {
        let valid_set = deleted.len() <= self.k
            && deleted.is_disjoint(&self.prescribed)
            && deleted.iter().all(|a| self.model.graph().contains_arc(a));
        if !valid_set {
            return None;
        }
        let run = self.model.without_arcs(deleted).simulate();
        run.is_t_path(&self.prescribed).then_some(run)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletionSolution {
    pub deleted: BTreeSet<String>,
    pub witness: TraversalResult,
}

/// Work counters reported by the solvers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Search-tree nodes (branching) or candidate sets tried (enumeration).
    pub nodes: u64,
    pub simulations: u64,
}

/// First subset of `candidates` (size 0, then 1, ... up to `max_size`; each
/// size in lexicographic order of the given slice) accepted by `accept`.
pub(crate) fn first_subset(
    candidates: &[String],
    max_size: usize,
    stats: &mut SearchStats,
    mut accept: impl FnMut(&BTreeSet<String>) -> bool,
) -> Option<BTreeSet<String>> {
    for size in 0..=max_size.min(candidates.len()) {
        for combo in candidates.iter().combinations(size) {
            let set: BTreeSet<String> = combo.into_iter().cloned().collect();
            stats.nodes += 1;
            stats.simulations += 1;
            if accept(&set) {
                return Some(set);
            }
        }
    }
    None
}

pub fn solve_deletion_exhaustive(inst: &DeletionInstance) -> Option<DeletionSolution> {
    solve_deletion_exhaustive_with_stats(inst).0
}

/// Tries every arc set of size at most `k` that avoids the prescribed arcs
/// (a deleted prescribed arc could never lie on the agent's path).
pub fn solve_deletion_exhaustive_with_stats(inst: &DeletionInstance) -> (Option<DeletionSolution>, SearchStats) {
    let candidates: Vec<String> = inst.model.graph().arc_ids().difference(&inst.prescribed).cloned().collect();
    let mut stats = SearchStats::default();
    let mut witness = None;
    let found = first_subset(&candidates, inst.k, &mut stats, |set| {
        let run = inst.model.without_arcs(set).simulate();
        let ok = run.is_t_path(&inst.prescribed);
        if ok {
            witness = Some(run);
        }
        ok
    });
    let solution =
        found.map(|deleted| DeletionSolution { deleted, witness: witness.expect("set accepted with a run") });
    (solution, stats)
}

/// A minimum-perceived-cost path from `v`: the agent's chosen first arc,
/// then a shortest path (ties by head order, then arc id).
pub(crate) fn perceived_path(
    graph: &TaskGraph,
    beta: &crate::rational::Rational,
    dist: &[Cost],
    v: usize,
    target: usize,
) -> Vec<usize> {
    let Some((first, _)) = best_arc(graph, beta, dist, v) else { return Vec::new() };
    let mut path = vec![first];
    let mut at = graph.arc(first).head;
    while at != target {
        let next = graph
            .out_arcs(at)
            .iter()
            .copied()
            .filter(|&a| {
                let arc = graph.arc(a);
                dist[at] == &dist[arc.head] + &arc.weight
            })
            .min_by(|&a, &b| {
                let (x, y) = (graph.arc(a), graph.arc(b));
                (graph.rank(x.head), &x.id).cmp(&(graph.rank(y.head), &y.id))
            })
            .expect("finite distance has a tight arc");
        path.push(next);
        at = graph.arc(next).head;
    }
    path
}

/// Arcs of every perceived path at every vertex the agent stands on (the
/// walk itself is the union of their first arcs). Deleting an arc outside
/// this set cannot change the agent's walk.
pub fn relevant_subgraph<M: PlanningModel>(model: &M) -> BTreeSet<String> {
    let graph = model.graph();
    let run = model.simulate();
    let dist = distances_to(graph, model.target());
    let mut arcs: BTreeSet<String> = run.steps.iter().cloned().collect();
    for visit in &run.perceived_at {
        let v = graph.vertex_index(&visit.vertex).expect("visited vertex exists");
        if v == model.target() {
            continue;
        }
        for a in perceived_path(graph, model.beta(), &dist, v, model.target()) {
            arcs.insert(graph.arc(a).id.clone());
        }
    }
    arcs
}

pub fn solve_deletion_branching(inst: &DeletionInstance) -> Option<DeletionSolution> {
    solve_deletion_branching_with_stats(inst).0
}

/// Bounded search tree: while the agent misbehaves, some deleted arc must
/// lie on one of its perceived paths, so branch on each such arc.
pub fn solve_deletion_branching_with_stats(inst: &DeletionInstance) -> (Option<DeletionSolution>, SearchStats) {
    let mut stats = SearchStats::default();
    let found = branch(&inst.model, inst.k, &inst.prescribed, &mut stats);
    let solution = found.map(|deleted| {
        let witness = inst.model.without_arcs(&deleted).simulate();
        DeletionSolution { deleted, witness }
    });
    (solution, stats)
}

fn branch(
    model: &Model,
    budget: usize,
    prescribed: &BTreeSet<String>,
    stats: &mut SearchStats,
) -> Option<BTreeSet<String>> {
    stats.nodes += 1;
    stats.simulations += 1;
    if model.follows_t_path(prescribed) {
        return Some(BTreeSet::new());
    }
    if budget == 0 {
        return None;
    }
    let relevant = relevant_subgraph(model);
    for arc in relevant.difference(prescribed) {
        let removed: BTreeSet<String> = [arc.clone()].into();
        if let Some(mut deleted) = branch(&model.without_arcs(&removed), budget - 1, prescribed, stats) {
            deleted.insert(arc.clone());
            return Some(deleted);
        }
    }
    None
}

/// Upper bound on search-tree nodes: `sum_{i<=k} (m^2)^i`, where `m` is the
/// largest number of arcs on an `s`-`t` path.
pub fn branching_node_bound(longest_path: usize, k: usize) -> u128 {
    let arity = (longest_path as u128).pow(2);
    (0..=k as u32).map(|i| arity.pow(i)).sum()
}

pub fn longest_st_path<M: PlanningModel>(model: &M) -> usize {
    model.graph().longest_path_arcs(model.source(), model.target()).unwrap_or(0)
}
