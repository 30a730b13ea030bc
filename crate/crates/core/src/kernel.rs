//! Kernelization of T-Path-Deletion with per-vertex ("false promise")
//! rewards, parameterized by the feedback edge number of the underlying
//! undirected graph.
//!
//! Three rules are applied to a fixpoint, in this priority:
//!
//! 1. a vertex other than `s`, `t` with no in-arcs or no out-arcs is removed
//!    (if it touches a prescribed arc the instance is a trivial no);
//! 2. if `t` is unreachable from `s` the instance is a trivial no;
//! 3. a path `x→y→z` where `x` has one out-arc and `y` one in-arc and one
//!    out-arc is contracted to a single arc `xz` of summed weight, and the
//!    reward at `x` becomes
//!    `min{ r(x) + (1-β)/β · w(yz),  r(y) + w(xy)/β }`.
//!
//! Every application is recorded in a [`KernelTrace`] so a solution of the
//! kernel can be mapped back onto the original arcs.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use num_traits::One;
use serde::{Serialize, Serializer};

use crate::deletion::{first_subset, DeletionInstance, DeletionSolution, SearchStats};
use crate::error::{KernelError, ModelError};
use crate::graph::{ArcSpec, TaskGraph};
use crate::model::{FPModel, PlanningModel, TraversalResult};
use crate::rational::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FPDeletionInstance {
    pub model: FPModel,
    pub k: usize,
    pub prescribed: BTreeSet<String>,
}

impl FPDeletionInstance {
    pub fn new(model: FPModel, k: usize, prescribed: BTreeSet<String>) -> Result<Self, ModelError> {
        if let Some(missing) = prescribed.iter().find(|a| !model.graph().contains_arc(a)) {
            return Err(ModelError::UnknownArc(missing.clone()));
        }
        Ok(FPDeletionInstance { model, k, prescribed })
    }

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

/// The uniform-reward problem as a false-promises instance with `r(v) = r`.
pub fn to_false_promises(inst: &DeletionInstance) -> FPDeletionInstance {
    FPDeletionInstance { model: FPModel::from_uniform(&inst.model), k: inst.k, prescribed: inst.prescribed.clone() }
}

fn ser_rational<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&format_rational(value))
}

fn ser_rational_pair<S: Serializer>(value: &(Rational, Rational), serializer: S) -> Result<S::Ok, S::Error> {
    [format_rational(&value.0), format_rational(&value.1)].serialize(serializer)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule")]
#[allow(clippy::large_enum_variant)]
pub enum RuleApplication {
    Rule1Removed {
        vertex: String,
        removed_arcs: Vec<String>,
    },
    /// Rule 1 hit a vertex incident to a prescribed arc.
    Rule1TrivialNo {
        vertex: String,
        arc: String,
    },
    Rule2TrivialNo,
    Rule3Merged {
        x: String,
        y: String,
        z: String,
        old_arcs: (String, String),
        new_arc: String,
        #[serde(serialize_with = "ser_rational")]
        new_weight: Rational,
        #[serde(serialize_with = "ser_rational_pair")]
        old_rewards: (Rational, Rational),
        #[serde(serialize_with = "ser_rational")]
        new_reward: Rational,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct KernelTrace(pub Vec<RuleApplication>);

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Kernelized {
    Kernel(FPDeletionInstance),
    TrivialNo,
}

#[derive(Clone, Debug)]
struct WorkArc {
    id: String,
    tail: usize,
    head: usize,
    weight: Rational,
}

/// Mutable working copy of an instance while rules are applied.
struct Work {
    vertices: Vec<String>,
    vertex_pos: HashMap<String, usize>,
    alive: Vec<bool>,
    arcs: Vec<Option<WorkArc>>,
    arc_slot: HashMap<String, usize>,
    out: Vec<BTreeSet<usize>>,
    inc: Vec<BTreeSet<usize>>,
    rewards: Vec<Rational>,
    prescribed: BTreeSet<String>,
    used_ids: HashSet<String>,
    ranks: HashMap<String, usize>,
    by_rank: Vec<usize>,
    source: usize,
    target: usize,
    beta: Rational,
    k: usize,
}

impl Work {
    fn new(inst: &FPDeletionInstance) -> Self {
        let model = &inst.model;
        let graph = model.graph();
        let n = graph.vertex_count();
        let mut work = Work {
            vertices: graph.vertices().to_vec(),
            vertex_pos: graph.vertices().iter().cloned().enumerate().map(|(i, v)| (v, i)).collect(),
            alive: vec![true; n],
            arcs: Vec::new(),
            arc_slot: HashMap::new(),
            out: vec![BTreeSet::new(); n],
            inc: vec![BTreeSet::new(); n],
            rewards: (0..n).map(|v| model.reward_at(v).clone()).collect(),
            prescribed: inst.prescribed.clone(),
            used_ids: graph.arcs().iter().map(|a| a.id.clone()).collect(),
            ranks: graph.ranks_by_id(),
            by_rank: graph.order().to_vec(),
            source: model.source(),
            target: model.target(),
            beta: model.beta().clone(),
            k: inst.k,
        };
        for arc in graph.arcs() {
            work.add_arc(arc.id.clone(), arc.tail, arc.head, arc.weight.clone());
        }
        work
    }

    fn add_arc(&mut self, id: String, tail: usize, head: usize, weight: Rational) {
        let slot = self.arcs.len();
        self.out[tail].insert(slot);
        self.inc[head].insert(slot);
        self.arc_slot.insert(id.clone(), slot);
        self.used_ids.insert(id.clone());
        self.arcs.push(Some(WorkArc { id, tail, head, weight }));
    }

    fn remove_arc(&mut self, slot: usize) -> WorkArc {
        let arc = self.arcs[slot].take().expect("arc is live");
        self.out[arc.tail].remove(&slot);
        self.inc[arc.head].remove(&slot);
        self.arc_slot.remove(&arc.id);
        arc
    }

    fn arc(&self, slot: usize) -> &WorkArc {
        self.arcs[slot].as_ref().expect("arc is live")
    }

    fn pos(&self, id: &str) -> usize {
        self.vertex_pos[id]
    }

    fn fresh_id(&self, xy: &str, yz: &str) -> String {
        let mut id = format!("{xy}+{yz}");
        while self.used_ids.contains(&id) {
            id.push('\'');
        }
        id
    }

    fn next_rule1(&self) -> Option<RuleApplication> {
        let v = self.by_rank.iter().copied().find(|&v| {
            self.alive[v] && v != self.source && v != self.target && (self.inc[v].is_empty() || self.out[v].is_empty())
        })?;
        let incident: Vec<usize> = self.inc[v].iter().chain(self.out[v].iter()).copied().collect();
        if let Some(&slot) = incident.iter().find(|&&slot| self.prescribed.contains(&self.arc(slot).id)) {
            return Some(RuleApplication::Rule1TrivialNo {
                vertex: self.vertices[v].clone(),
                arc: self.arc(slot).id.clone(),
            });
        }
        let mut removed_arcs: Vec<String> = incident.iter().map(|&slot| self.arc(slot).id.clone()).collect();
        removed_arcs.sort();
        Some(RuleApplication::Rule1Removed { vertex: self.vertices[v].clone(), removed_arcs })
    }

    fn target_reachable(&self) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([self.source]);
        seen[self.source] = true;
        while let Some(v) = queue.pop_front() {
            if v == self.target {
                return true;
            }
            for &slot in &self.out[v] {
                let head = self.arc(slot).head;
                if !seen[head] {
                    seen[head] = true;
                    queue.push_back(head);
                }
            }
        }
        false
    }

    fn next_rule3(&self) -> Option<RuleApplication> {
        for &y in &self.by_rank {
            if !self.alive[y] || y == self.source || y == self.target {
                continue;
            }
            if self.inc[y].len() != 1 || self.out[y].len() != 1 {
                continue;
            }
            let xy = self.arc(*self.inc[y].iter().next().expect("one in-arc"));
            let yz = self.arc(*self.out[y].iter().next().expect("one out-arc"));
            let (x, z) = (xy.tail, yz.head);
            if self.out[x].len() != 1 {
                continue;
            }
            let beta = &self.beta;
            let via_x = &self.rewards[x] + (Rational::one() - beta) / beta * &yz.weight;
            let via_y = &self.rewards[y] + &xy.weight / beta;
            return Some(RuleApplication::Rule3Merged {
                x: self.vertices[x].clone(),
                y: self.vertices[y].clone(),
                z: self.vertices[z].clone(),
                old_arcs: (xy.id.clone(), yz.id.clone()),
                new_arc: self.fresh_id(&xy.id, &yz.id),
                new_weight: &xy.weight + &yz.weight,
                old_rewards: (self.rewards[x].clone(), self.rewards[y].clone()),
                new_reward: via_x.min(via_y),
            });
        }
        None
    }

    /// Applies one rule; returns false when the instance became a trivial no.
    fn apply(&mut self, step: &RuleApplication) -> bool {
        match step {
            RuleApplication::Rule1Removed { vertex, removed_arcs } => {
                for id in removed_arcs {
                    let slot = self.arc_slot[id];
                    self.remove_arc(slot);
                }
                let v = self.pos(vertex);
                self.alive[v] = false;
                true
            }
            RuleApplication::Rule1TrivialNo { .. } | RuleApplication::Rule2TrivialNo => false,
            RuleApplication::Rule3Merged { x, y, z, old_arcs, new_arc, new_weight, new_reward, .. } => {
                let (x, y, z) = (self.pos(x), self.pos(y), self.pos(z));
                self.remove_arc(self.arc_slot[&old_arcs.0]);
                self.remove_arc(self.arc_slot[&old_arcs.1]);
                self.alive[y] = false;
                self.add_arc(new_arc.clone(), x, z, new_weight.clone());
                let was_prescribed = self.prescribed.remove(&old_arcs.0) | self.prescribed.remove(&old_arcs.1);
                if was_prescribed {
                    self.prescribed.insert(new_arc.clone());
                }
                self.rewards[x] = new_reward.clone();
                true
            }
        }
    }

    fn next(&self) -> Option<RuleApplication> {
        if let Some(step) = self.next_rule1() {
            return Some(step);
        }
        if !self.target_reachable() {
            return Some(RuleApplication::Rule2TrivialNo);
        }
        self.next_rule3()
    }

    fn finish(self) -> FPDeletionInstance {
        let vertices: Vec<String> =
            (0..self.vertices.len()).filter(|&v| self.alive[v]).map(|v| self.vertices[v].clone()).collect();
        let arcs: Vec<ArcSpec> = self
            .arcs
            .iter()
            .flatten()
            .map(|a| {
                ArcSpec::new(
                    a.id.clone(),
                    self.vertices[a.tail].clone(),
                    self.vertices[a.head].clone(),
                    a.weight.clone(),
                )
            })
            .collect();
        let graph = TaskGraph::with_ranks(vertices, arcs, &self.ranks).expect("rules preserve the vertex order");
        let rewards: BTreeMap<String, Rational> = (0..self.vertices.len())
            .filter(|&v| self.alive[v])
            .map(|v| (self.vertices[v].clone(), self.rewards[v].clone()))
            .collect();
        let model = FPModel::new(graph, &self.vertices[self.source], &self.vertices[self.target], self.beta, &rewards)
            .expect("kernel keeps s, t and all rewards");
        FPDeletionInstance { model, k: self.k, prescribed: self.prescribed }
    }
}

/// Applies the three rules exhaustively (rule 1 first, then 2, then 3,
/// re-checking from rule 1 after every change).
pub fn apply_rules(inst: &FPDeletionInstance) -> (Kernelized, KernelTrace) {
    let mut work = Work::new(inst);
    let mut trace = Vec::new();
    while let Some(step) = work.next() {
        let alive = work.apply(&step);
        trace.push(step);
        if !alive {
            return (Kernelized::TrivialNo, KernelTrace(trace));
        }
    }
    (Kernelized::Kernel(work.finish()), KernelTrace(trace))
}

/// Re-applies a recorded trace to the instance it came from.
pub fn replay(inst: &FPDeletionInstance, trace: &KernelTrace) -> Kernelized {
    let mut work = Work::new(inst);
    for step in &trace.0 {
        if !work.apply(step) {
            return Kernelized::TrivialNo;
        }
    }
    Kernelized::Kernel(work.finish())
}

/// Kernel size check: `|V| <= 8·fes + 3` and `|E| <= 9·fes + 2`.
pub fn verify_kernel_size(kernel: &FPDeletionInstance) -> bool {
    let graph = kernel.model.graph();
    let fes = graph.feedback_edge_number();
    graph.vertex_count() <= 8 * fes + 3 && graph.arc_count() <= 9 * fes + 2
}

/// Maps a kernel solution back to arcs of the original graph by undoing the
/// contractions in reverse: a deleted `xz` becomes a deleted `xy`.
pub fn lift_solution(trace: &KernelTrace, kernel_solution: &BTreeSet<String>) -> Result<BTreeSet<String>, KernelError> {
    let mut working = kernel_solution.clone();
    for step in trace.0.iter().rev() {
        match step {
            RuleApplication::Rule3Merged { old_arcs: (xy, yz), new_arc, .. } => {
                if let Some(stale) = [xy, yz].into_iter().find(|a| working.contains(*a)) {
                    return Err(KernelError::Untraceable(stale.clone()));
                }
                if working.remove(new_arc) {
                    working.insert(xy.clone());
                }
            }
            RuleApplication::Rule1Removed { removed_arcs, .. } => {
                if let Some(stale) = removed_arcs.iter().find(|a| working.contains(*a)) {
                    return Err(KernelError::Untraceable(stale.clone()));
                }
            }
            RuleApplication::Rule1TrivialNo { .. } | RuleApplication::Rule2TrivialNo => {}
        }
    }
    Ok(working)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KernelStats {
    pub trivial_no: bool,
    pub kernel_vertices: usize,
    pub kernel_arcs: usize,
    pub feedback_edges: usize,
    pub search: SearchStats,
}

pub fn solve_deletion_via_kernel(inst: &DeletionInstance) -> Option<DeletionSolution> {
    solve_deletion_via_kernel_with_stats(inst).0
}

/// Kernelize, enumerate deletion sets on the kernel, lift the first hit.
pub fn solve_deletion_via_kernel_with_stats(inst: &DeletionInstance) -> (Option<DeletionSolution>, KernelStats) {
    let mut stats = KernelStats::default();
    let (kernel, trace) = apply_rules(&to_false_promises(inst));
    let Kernelized::Kernel(kernel) = kernel else {
        stats.trivial_no = true;
        return (None, stats);
    };
    let graph = kernel.model.graph();
    stats.kernel_vertices = graph.vertex_count();
    stats.kernel_arcs = graph.arc_count();
    stats.feedback_edges = graph.feedback_edge_number();
    let candidates: Vec<String> = graph.arc_ids().difference(&kernel.prescribed).cloned().collect();
    let found = first_subset(&candidates, kernel.k, &mut stats.search, |set| {
        kernel.model.without_arcs(set).follows_t_path(&kernel.prescribed)
    });
    let solution = found.map(|kernel_deleted| {
        let deleted = lift_solution(&trace, &kernel_deleted).expect("kernel arcs trace back to the original");
        let witness = inst.model.without_arcs(&deleted).simulate();
        DeletionSolution { deleted, witness }
    });
    (solution, stats)
}
