//! The time-inconsistent planning model and its present-biased agent.
//!
//! An agent standing at `v` values a `v`-`t` path as the weight of its first
//! arc plus `beta` times the weight of the rest. Its perceived cost `ζ(v)` is
//! the smallest such value. Because the remainder of an optimal perceived
//! path is an ordinary shortest path, `ζ(v)` reduces to a one-arc lookahead:
//!
//! ```text
//! ζ(v) = min over arcs v→u of  w(vu) + beta · dist(u, t)
//! ```
//!
//! The agent abandons at `v` when `ζ(v) > beta · r(v)`; equality proceeds.
//! Ties between arcs go to the head that comes first in the graph's fixed
//! topological order, then to the smallest arc id.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::error::ModelError;
use crate::graph::TaskGraph;
use crate::rational::{format_rational, in_unit_interval, is_nonnegative, Cost, Rational};

/// Exact shortest `v`-`t` distances for every vertex, indexed by position.
pub fn distances_to(graph: &TaskGraph, target: usize) -> Vec<Cost> {
    let mut dist = vec![Cost::Infinite; graph.vertex_count()];
    dist[target] = Cost::zero();
    for &v in graph.order().iter().rev() {
        if v == target {
            continue;
        }
        let best = graph
            .out_arcs(v)
            .iter()
            .map(|&a| {
                let arc = graph.arc(a);
                &dist[arc.head] + &arc.weight
            })
            .min();
        if let Some(best) = best {
            dist[v] = best;
        }
    }
    dist
}

/// The out-arc an agent at `v` would take, with its perceived value.
///
/// Only arcs whose head can still reach the target are candidates.
pub(crate) fn best_arc(graph: &TaskGraph, beta: &Rational, dist: &[Cost], v: usize) -> Option<(usize, Rational)> {
    let mut best: Option<(usize, Rational)> = None;
    for &a in graph.out_arcs(v) {
        let arc = graph.arc(a);
        let Some(rest) = dist[arc.head].finite() else { continue };
        let value = &arc.weight + beta * rest;
        let better = match &best {
            None => true,
            Some((cur, cur_value)) => {
                let cur_arc = graph.arc(*cur);
                (&value, graph.rank(arc.head), &arc.id) < (cur_value, graph.rank(cur_arc.head), &cur_arc.id)
            }
        };
        if better {
            best = Some((a, value));
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Reached,
    Abandoned { at: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VisitRecord {
    pub vertex: String,
    pub zeta: Cost,
}

/// What the agent did: the arcs it walked, how it ended, and the perceived
/// cost it saw at every vertex it stood on (in visiting order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraversalResult {
    pub steps: Vec<String>,
    pub outcome: Outcome,
    pub perceived_at: Vec<VisitRecord>,
}

impl TraversalResult {
    pub fn reached(&self) -> bool {
        self.outcome == Outcome::Reached
    }

    pub fn traverses_all(&self, arcs: &BTreeSet<String>) -> bool {
        arcs.iter().all(|a| self.steps.contains(a))
    }

    /// True iff the walk reached the target through every arc of `prescribed`.
    pub fn is_t_path(&self, prescribed: &BTreeSet<String>) -> bool {
        self.reached() && self.traverses_all(prescribed)
    }
}

/// Shared behaviour of the uniform-reward and per-vertex-reward models.
pub trait PlanningModel {
    fn graph(&self) -> &TaskGraph;
    fn source(&self) -> usize;
    fn target(&self) -> usize;
    fn beta(&self) -> &Rational;
    /// Reward an agent standing at vertex position `v` expects.
    fn reward_at(&self, v: usize) -> &Rational;

    fn source_id(&self) -> &str {
        self.graph().vertex_id(self.source())
    }

    fn target_id(&self) -> &str {
        self.graph().vertex_id(self.target())
    }

    fn vertex(&self, id: &str) -> Result<usize, ModelError> {
        self.graph().vertex_index(id).ok_or_else(|| ModelError::UnknownVertex(id.to_string()))
    }

    fn distances(&self) -> Vec<Cost> {
        distances_to(self.graph(), self.target())
    }

    /// Shortest undiscounted distance to the target, keyed by vertex id.
    fn dist_to_target(&self) -> BTreeMap<String, Cost> {
        let graph = self.graph();
        self.distances().into_iter().enumerate().map(|(v, d)| (graph.vertex_id(v).to_string(), d)).collect()
    }

    fn perceived_cost(&self, v: &str) -> Result<Cost, ModelError> {
        let v = self.vertex(v)?;
        if v == self.target() {
            return Ok(Cost::zero());
        }
        let dist = self.distances();
        Ok(best_arc(self.graph(), self.beta(), &dist, v).map_or(Cost::Infinite, |(_, value)| Cost::Finite(value)))
    }

    fn perceived_next_arc(&self, v: &str) -> Result<String, ModelError> {
        let pos = self.vertex(v)?;
        if pos == self.target() {
            return Err(ModelError::NoNextArc(v.to_string()));
        }
        let dist = self.distances();
        best_arc(self.graph(), self.beta(), &dist, pos)
            .map(|(a, _)| self.graph().arc(a).id.clone())
            .ok_or_else(|| ModelError::NoNextArc(v.to_string()))
    }

    /// Perceived cost of one explicit path: first weight plus `beta` times the rest.
    fn perceived_path_cost(&self, arcs: &[&str]) -> Result<Rational, ModelError> {
        let graph = self.graph();
        let mut total = Rational::zero();
        let mut at: Option<usize> = None;
        for (i, id) in arcs.iter().enumerate() {
            let arc = graph.arc_by_id(id).ok_or_else(|| ModelError::UnknownArc(id.to_string()))?;
            if at.is_some_and(|v| v != arc.tail) {
                return Err(ModelError::NotAPath(format!("`{id}` does not continue the path")));
            }
            at = Some(arc.head);
            total += if i == 0 { arc.weight.clone() } else { self.beta() * &arc.weight };
        }
        Ok(total)
    }

    /// Runs the agent from the source until it reaches the target or quits.
    fn simulate(&self) -> TraversalResult {
        let graph = self.graph();
        let dist = self.distances();
        let mut v = self.source();
        let mut steps = Vec::new();
        let mut perceived_at = Vec::new();
        loop {
            let vertex = graph.vertex_id(v).to_string();
            if v == self.target() {
                perceived_at.push(VisitRecord { vertex, zeta: Cost::zero() });
                return TraversalResult { steps, outcome: Outcome::Reached, perceived_at };
            }
            let choice = best_arc(graph, self.beta(), &dist, v);
            let zeta = choice.as_ref().map_or(Cost::Infinite, |(_, value)| Cost::Finite(value.clone()));
            let quits = zeta.exceeds(&(self.beta() * self.reward_at(v)));
            perceived_at.push(VisitRecord { vertex: vertex.clone(), zeta });
            match choice {
                Some((arc, _)) if !quits => {
                    steps.push(graph.arc(arc).id.clone());
                    v = graph.arc(arc).head;
                }
                _ => {
                    return TraversalResult { steps, outcome: Outcome::Abandoned { at: vertex }, perceived_at };
                }
            }
        }
    }

    fn follows_t_path(&self, prescribed: &BTreeSet<String>) -> bool {
        self.simulate().is_t_path(prescribed)
    }
}

/// A task graph with start, target, present bias and one reward for reaching
/// the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    graph: TaskGraph,
    source: usize,
    target: usize,
    beta: Rational,
    reward: Rational,
}

fn check_endpoints(graph: &TaskGraph, s: &str, t: &str, beta: &Rational) -> Result<(usize, usize), ModelError> {
    let source = graph.vertex_index(s).ok_or_else(|| ModelError::UnknownVertex(s.to_string()))?;
    let target = graph.vertex_index(t).ok_or_else(|| ModelError::UnknownVertex(t.to_string()))?;
    if source == target {
        return Err(ModelError::SourceIsTarget(s.to_string()));
    }
    if !in_unit_interval(beta) {
        return Err(ModelError::BetaOutOfRange(format_rational(beta)));
    }
    Ok((source, target))
}

impl Model {
    pub fn new(graph: TaskGraph, s: &str, t: &str, beta: Rational, reward: Rational) -> Result<Self, ModelError> {
        let (source, target) = check_endpoints(&graph, s, t, &beta)?;
        if !is_nonnegative(&reward) {
            return Err(ModelError::NegativeReward(format_rational(&reward)));
        }
        Ok(Model { graph, source, target, beta, reward })
    }

    pub fn reward(&self) -> &Rational {
        &self.reward
    }

    /// The same model on another graph over (a superset of) the same endpoints.
    pub fn with_graph(&self, graph: TaskGraph) -> Result<Model, ModelError> {
        Model::new(graph, self.source_id(), self.target_id(), self.beta.clone(), self.reward.clone())
    }

    pub fn with_reward(&self, reward: Rational) -> Result<Model, ModelError> {
        Model::new(self.graph.clone(), self.source_id(), self.target_id(), self.beta.clone(), reward)
    }

    /// The model after the principal deletes `removed`.
    pub fn without_arcs(&self, removed: &BTreeSet<String>) -> Model {
        Model { graph: self.graph.without_arcs(removed), ..self.clone() }
    }
}

impl PlanningModel for Model {
    fn graph(&self) -> &TaskGraph {
        &self.graph
    }
    fn source(&self) -> usize {
        self.source
    }
    fn target(&self) -> usize {
        self.target
    }
    fn beta(&self) -> &Rational {
        &self.beta
    }
    fn reward_at(&self, _v: usize) -> &Rational {
        &self.reward
    }
}

/// A model with "false promises": every vertex carries its own reward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FPModel {
    graph: TaskGraph,
    source: usize,
    target: usize,
    beta: Rational,
    rewards: Vec<Rational>,
}

impl FPModel {
    pub fn new(
        graph: TaskGraph,
        s: &str,
        t: &str,
        beta: Rational,
        reward_of: &BTreeMap<String, Rational>,
    ) -> Result<Self, ModelError> {
        let (source, target) = check_endpoints(&graph, s, t, &beta)?;
        let mut rewards = Vec::with_capacity(graph.vertex_count());
        for id in graph.vertices() {
            let r = reward_of.get(id).ok_or_else(|| ModelError::MissingReward(id.clone()))?;
            if !is_nonnegative(r) {
                return Err(ModelError::NegativeReward(format_rational(r)));
            }
            rewards.push(r.clone());
        }
        if let Some(extra) = reward_of.keys().find(|id| graph.vertex_index(id).is_none()) {
            return Err(ModelError::UnknownVertex(extra.clone()));
        }
        Ok(FPModel { graph, source, target, beta, rewards })
    }

    /// Lifts a uniform-reward model: `r(v) = r` everywhere.
    pub fn from_uniform(model: &Model) -> Self {
        FPModel {
            graph: model.graph.clone(),
            source: model.source,
            target: model.target,
            beta: model.beta.clone(),
            rewards: vec![model.reward.clone(); model.graph.vertex_count()],
        }
    }

    pub fn reward_of(&self, id: &str) -> Option<&Rational> {
        self.graph.vertex_index(id).map(|v| &self.rewards[v])
    }

    pub fn rewards_by_id(&self) -> BTreeMap<String, Rational> {
        self.graph.vertices().iter().cloned().zip(self.rewards.iter().cloned()).collect()
    }

    pub fn without_arcs(&self, removed: &BTreeSet<String>) -> FPModel {
        FPModel { graph: self.graph.without_arcs(removed), ..self.clone() }
    }
}

impl PlanningModel for FPModel {
    fn graph(&self) -> &TaskGraph {
        &self.graph
    }
    fn source(&self) -> usize {
        self.source
    }
    fn target(&self) -> usize {
        self.target
    }
    fn beta(&self) -> &Rational {
        &self.beta
    }
    fn reward_at(&self, v: usize) -> &Rational {
        &self.rewards[v]
    }
}
