//! T-Path-Addition: add at most `k` candidate arcs so that the agent reaches
//! the target along a path containing every prescribed arc.
//!
//! Besides plain enumeration, instances whose graph is a single path with
//! forward "detour" candidates are solved by a dynamic program over the
//! intersection components of the pool.

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use serde::Serialize;

use crate::deletion::{first_subset, SearchStats};
use crate::error::ModelError;
use crate::graph::{ArcSpec, TaskGraph};
use crate::model::{Model, PlanningModel, TraversalResult};
use crate::rational::{is_nonnegative, Cost, Rational};

/// An arc the principal may add.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub weight: Rational,
}

impl Candidate {
    pub fn new(id: impl Into<String>, tail: impl Into<String>, head: impl Into<String>, weight: Rational) -> Self {
        Candidate { id: id.into(), tail: tail.into(), head: head.into(), weight }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditionInstance {
    pub model: Model,
    pub k: usize,
    pub prescribed: BTreeSet<String>,
    pub pool: Vec<Candidate>,
    /// The graph with every candidate present. Its vertex order is the one
    /// used for tie-breaking under any selection.
    combined: TaskGraph,
}

impl AdditionInstance {
    pub fn new(model: Model, k: usize, prescribed: BTreeSet<String>, pool: Vec<Candidate>) -> Result<Self, ModelError> {
        let graph = model.graph();
        if let Some(missing) = prescribed.iter().find(|a| !graph.contains_arc(a)) {
            return Err(ModelError::UnknownArc(missing.clone()));
        }
        let mut seen: HashSet<&str> = graph.arcs().iter().map(|a| a.id.as_str()).collect();
        for cand in &pool {
            if !seen.insert(&cand.id) {
                return Err(ModelError::DuplicateCandidate(cand.id.clone()));
            }
            for end in [&cand.tail, &cand.head] {
                if graph.vertex_index(end).is_none() {
                    return Err(ModelError::UnknownVertex(end.clone()));
                }
            }
            if cand.tail == cand.head {
                return Err(ModelError::CyclicPool(cand.id.clone()));
            }
            if !is_nonnegative(&cand.weight) {
                return Err(crate::error::GraphError::NegativeWeight(cand.id.clone()).into());
            }
        }
        let combined = combine(graph, &pool, pool.len()).map_err(|_| {
            // Name the first candidate whose addition closes a cycle.
            let culprit = (1..=pool.len()).find(|&n| combine(graph, &pool, n).is_err()).expect("full pool is cyclic");
            ModelError::CyclicPool(pool[culprit - 1].id.clone())
        })?;
        Ok(AdditionInstance { model, k, prescribed, pool, combined })
    }

    pub fn candidate_ids(&self) -> BTreeSet<String> {
        self.pool.iter().map(|c| c.id.clone()).collect()
    }

    /// The model after the principal adds exactly the candidates in `selected`.
    pub fn with_selection(&self, selected: &BTreeSet<String>) -> Model {
        let base = self.model.graph();
        let graph = self.combined.subgraph(|_| true, |a| base.contains_arc(&a.id) || selected.contains(&a.id));
        self.model.with_graph(graph).expect("selection keeps endpoints and parameters")
    }

    pub fn verify(&self, selected: &BTreeSet<String>) -> Option<TraversalResult> {
        let known = self.candidate_ids();
        if selected.len() > self.k || !selected.is_subset(&known) {
            return None;
        }
        let run = self.with_selection(selected).simulate();
        run.is_t_path(&self.prescribed).then_some(run)
    }
}

fn combine(graph: &TaskGraph, pool: &[Candidate], take: usize) -> Result<TaskGraph, crate::error::GraphError> {
    let mut arcs = graph.arc_specs();
    arcs.extend(
        pool[..take].iter().map(|c| ArcSpec::new(c.id.clone(), c.tail.clone(), c.head.clone(), c.weight.clone())),
    );
    TaskGraph::new(graph.vertices().to_vec(), arcs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditionSolution {
    pub selected: BTreeSet<String>,
    pub witness: TraversalResult,
}

pub fn solve_addition_exhaustive(inst: &AdditionInstance) -> Option<AdditionSolution> {
    solve_addition_exhaustive_with_stats(inst).0
}

/// Tries candidate sets by size, then lexicographically by id.
pub fn solve_addition_exhaustive_with_stats(inst: &AdditionInstance) -> (Option<AdditionSolution>, SearchStats) {
    let candidates: Vec<String> = inst.candidate_ids().into_iter().collect();
    let mut stats = SearchStats::default();
    let mut witness = None;
    let found = first_subset(&candidates, inst.k, &mut stats, |set| {
        let run = inst.with_selection(set).simulate();
        let ok = run.is_t_path(&inst.prescribed);
        if ok {
            witness = Some(run);
        }
        ok
    });
    let solution =
        found.map(|selected| AdditionSolution { selected, witness: witness.expect("accepted set has a run") });
    (solution, stats)
}

/// An addition instance whose graph is one path `v_1 … v_n` from `s` to
/// `t`, whose prescribed set is the whole path, and whose candidates all
/// jump forward along it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathWithDetours {
    inst: AdditionInstance,
    /// Vertex positions along the path.
    path: Vec<usize>,
    /// `path_arcs[i]` joins `path[i]` and `path[i + 1]`.
    path_arcs: Vec<usize>,
    /// Path index of every vertex, by graph position.
    index: Vec<usize>,
}

impl PathWithDetours {
    pub fn new(inst: AdditionInstance) -> Result<Self, ModelError> {
        let bad = |why: &str| ModelError::NotPathWithDetours(why.to_string());
        let graph = inst.model.graph();
        let n = graph.vertex_count();
        if graph.arc_count() + 1 != n {
            return Err(bad("the graph must have exactly one arc fewer than vertices"));
        }
        let mut path = vec![inst.model.source()];
        let mut path_arcs = Vec::new();
        let mut at = inst.model.source();
        if !graph.in_arcs(at).is_empty() {
            return Err(bad("the source has an in-arc"));
        }
        while let &[arc] = graph.out_arcs(at) {
            path_arcs.push(arc);
            at = graph.arc(arc).head;
            path.push(at);
        }
        if !graph.out_arcs(at).is_empty() {
            return Err(bad("a vertex has more than one out-arc"));
        }
        if path.len() != n || at != inst.model.target() {
            return Err(bad("the arcs do not form a single s-t path through every vertex"));
        }
        let all: BTreeSet<String> = graph.arc_ids();
        if inst.prescribed != all {
            return Err(bad("the prescribed set must be every path arc"));
        }
        let mut index = vec![0; n];
        for (i, &v) in path.iter().enumerate() {
            index[v] = i;
        }
        for cand in &inst.pool {
            let (i, j) =
                (index[graph.vertex_index(&cand.tail).unwrap()], index[graph.vertex_index(&cand.head).unwrap()]);
            if i >= j {
                return Err(bad(&format!("candidate `{}` does not point forward along the path", cand.id)));
            }
        }
        Ok(PathWithDetours { inst, path, path_arcs, index })
    }

    pub fn instance(&self) -> &AdditionInstance {
        &self.inst
    }

    pub fn into_instance(self) -> AdditionInstance {
        self.inst
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    /// Path indices (0-based) of a candidate's endpoints.
    fn span(&self, cand: &Candidate) -> (usize, usize) {
        let graph = self.inst.model.graph();
        let pos = |id: &str| self.index[graph.vertex_index(id).expect("validated endpoint")];
        (pos(&cand.tail), pos(&cand.head))
    }
}

/// Cut indices along the path and the candidates between consecutive cuts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentDecomposition {
    /// 0-based path indices `0 = c_0 < … < c_m = n - 1`.
    pub cuts: Vec<usize>,
    /// `components[l]` holds the ids of the candidates inside
    /// `[cuts[l], cuts[l + 1]]`, sorted.
    pub components: Vec<Vec<String>>,
}

impl ComponentDecomposition {
    /// Size of the largest component.
    pub fn tau(&self) -> usize {
        self.components.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Makes every index that no candidate jumps over a cut.
pub fn decompose(pwd: &PathWithDetours) -> ComponentDecomposition {
    let n = pwd.len();
    let mut spanned = vec![false; n];
    let spans: Vec<(usize, usize)> = pwd.inst.pool.iter().map(|c| pwd.span(c)).collect();
    for &(i, j) in &spans {
        for flag in &mut spanned[i + 1..j] {
            *flag = true;
        }
    }
    let cuts: Vec<usize> = (0..n).filter(|&c| !spanned[c]).collect();
    let mut components = vec![Vec::new(); cuts.len() - 1];
    for (cand, &(i, _)) in pwd.inst.pool.iter().zip(&spans) {
        let l = cuts.partition_point(|&c| c <= i) - 1;
        components[l].push(cand.id.clone());
    }
    for comp in &mut components {
        comp.sort();
    }
    ComponentDecomposition { cuts, components }
}

/// Work counters of the dynamic program.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DpStats {
    pub tau: usize,
    pub segments: usize,
    /// Candidate subsets visited across all components.
    pub subsets_enumerated: u64,
    pub segment_simulations: u64,
}

pub fn solve_addition_dp(pwd: &PathWithDetours) -> Option<AdditionSolution> {
    solve_addition_dp_with_stats(pwd).0
}

/// `d[l][κ]` is the smallest distance from the `l`-th cut to `t` over
/// selections of at most `κ` candidates from components `l..` under which
/// the agent walks the whole remaining path. A segment is checked by
/// simulating it alone with reward `r - d[l + 1][κ - |S|]`.
pub fn solve_addition_dp_with_stats(pwd: &PathWithDetours) -> (Option<AdditionSolution>, DpStats) {
    let inst = &pwd.inst;
    let decomposition = decompose(pwd);
    let m = decomposition.components.len();
    let k = inst.k;
    let mut stats = DpStats { tau: decomposition.tau(), segments: m, ..DpStats::default() };

    let mut d: Vec<Vec<Cost>> = vec![vec![Cost::Infinite; k + 1]; m + 1];
    d[m] = vec![Cost::zero(); k + 1];
    let mut choice: Vec<Vec<Option<Vec<String>>>> = vec![vec![None; k + 1]; m];

    for l in (0..m).rev() {
        let (from, to) = (decomposition.cuts[l], decomposition.cuts[l + 1]);
        let component = &decomposition.components[l];
        for size in 0..=component.len() {
            for subset in component.iter().combinations(size) {
                stats.subsets_enumerated += 1;
                if size > k {
                    continue;
                }
                let selected: BTreeSet<String> = subset.into_iter().cloned().collect();
                let segment = pwd.segment_graph(from, to, &selected);
                let Some(length) = segment_length(&segment, pwd, from, to) else { continue };
                for kappa in size..=k {
                    let Some(rest) = d[l + 1][kappa - size].finite().cloned() else { continue };
                    let total = Cost::Finite(&length + &rest);
                    if total >= d[l][kappa] {
                        continue;
                    }
                    stats.segment_simulations += 1;
                    if pwd.segment_followed(&segment, from, to, &(inst.model.reward() - &rest)) {
                        d[l][kappa] = total;
                        choice[l][kappa] = Some(selected.iter().cloned().collect());
                    }
                }
            }
        }
    }

    if !d[0][k].is_finite() {
        return (None, stats);
    }
    let mut selected = BTreeSet::new();
    let mut budget = k;
    for step in choice.iter().take(m) {
        let part = step[budget].as_ref().expect("finite entry has a choice");
        budget -= part.len();
        selected.extend(part.iter().cloned());
    }
    let witness = inst.with_selection(&selected).simulate();
    assert!(witness.is_t_path(&inst.prescribed), "dynamic-program witness fails on the full instance");
    (Some(AdditionSolution { selected, witness }), stats)
}

fn segment_length(segment: &TaskGraph, pwd: &PathWithDetours, from: usize, to: usize) -> Option<Rational> {
    let source = segment.vertex_index(pwd.vertex_id(from)).expect("segment holds its cut");
    let target = segment.vertex_index(pwd.vertex_id(to)).expect("segment holds its cut");
    crate::model::distances_to(segment, target)[source].finite().cloned()
}

impl PathWithDetours {
    fn vertex_id(&self, i: usize) -> &str {
        self.inst.model.graph().vertex_id(self.path[i])
    }

    /// Path vertices `from..=to` with their path arcs and the chosen
    /// candidates, ordered as in the full instance.
    fn segment_graph(&self, from: usize, to: usize, selected: &BTreeSet<String>) -> TaskGraph {
        let combined = &self.inst.combined;
        let inside: HashSet<&str> = (from..=to).map(|i| self.vertex_id(i)).collect();
        let path_arcs: HashSet<&str> =
            self.path_arcs[from..to].iter().map(|&a| self.inst.model.graph().arc(a).id.as_str()).collect();
        combined.subgraph(
            |v| inside.contains(combined.vertex_id(v)),
            |a| path_arcs.contains(a.id.as_str()) || selected.contains(&a.id),
        )
    }

    /// True iff an agent with the given reward walks every path arc of the
    /// segment from its first cut to its last.
    fn segment_followed(&self, segment: &TaskGraph, from: usize, to: usize, reward: &Rational) -> bool {
        if !is_nonnegative(reward) {
            return false;
        }
        let model = Model::new(
            segment.clone(),
            self.vertex_id(from),
            self.vertex_id(to),
            self.inst.model.beta().clone(),
            reward.clone(),
        )
        .expect("segment model is valid");
        let path: BTreeSet<String> =
            self.path_arcs[from..to].iter().map(|&a| self.inst.model.graph().arc(a).id.clone()).collect();
        model.follows_t_path(&path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::rational::{int, ratio};

    fn path_instance(weights: &[i64], pool: Vec<Candidate>, k: usize, reward: Rational) -> PathWithDetours {
        let mut b = GraphBuilder::new();
        for (i, &w) in weights.iter().enumerate() {
            b = b.arc(&format!("p{i}"), &format!("v{i}"), &format!("v{}", i + 1), int(w));
        }
        let g = b.build().unwrap();
        let t = format!("v{}", weights.len());
        let model = Model::new(g, "v0", &t, ratio(1, 2), reward).unwrap();
        let prescribed = model.graph().arc_ids();
        PathWithDetours::new(AdditionInstance::new(model, k, prescribed, pool).unwrap()).unwrap()
    }

    #[test]
    fn empty_pool_every_index_is_a_cut() {
        let pwd = path_instance(&[1, 2, 3], vec![], 1, int(100));
        let dec = decompose(&pwd);
        assert_eq!(dec.cuts, vec![0, 1, 2, 3]);
        assert_eq!(dec.tau(), 0);
        let (sol, stats) = solve_addition_dp_with_stats(&pwd);
        assert!(sol.unwrap().selected.is_empty());
        assert_eq!(stats.subsets_enumerated, 3);
    }

    #[test]
    fn full_span_single_component() {
        let pwd = path_instance(&[1, 2, 3], vec![Candidate::new("x", "v0", "v3", int(50))], 1, int(100));
        let dec = decompose(&pwd);
        assert_eq!(dec.cuts, vec![0, 3]);
        assert_eq!(dec.components, vec![vec!["x".to_string()]]);
    }

    #[test]
    fn split_into_two_components() {
        let pool = vec![
            Candidate::new("a", "v0", "v2", int(9)),
            Candidate::new("b", "v2", "v4", int(9)),
            Candidate::new("c", "v3", "v4", int(9)),
        ];
        let pwd = path_instance(&[1, 1, 1, 1], pool, 2, int(10));
        let dec = decompose(&pwd);
        assert_eq!(dec.cuts, vec![0, 2, 4]);
        assert_eq!(dec.components, vec![vec!["a".to_string()], vec!["b".to_string(), "c".to_string()]]);
    }

    #[test]
    fn shortcut_motivates_the_agent() {
        // Path weight 10 with beta = 1/2 and r = 8: the agent at v0 sees
        // 1 + 9/2 = 5.5 > 4 and quits. A cheap shortcut v1→v3 lowers the
        // remaining distance; it is only ever a perceived plan.
        let pool = vec![Candidate::new("short", "v1", "v3", int(4))];
        let pwd = path_instance(&[1, 1, 8], pool.clone(), 1, int(8));
        assert!(!pwd.instance().model.simulate().reached());
        let sol = solve_addition_exhaustive(pwd.instance());
        let dp = solve_addition_dp(&pwd);
        assert_eq!(sol.is_some(), dp.is_some());
        if let Some(dp) = dp {
            assert!(pwd.instance().verify(&dp.selected).is_some());
        }
    }

    #[test]
    fn rejects_backward_candidate_and_cycles() {
        let g = GraphBuilder::new().arc("p0", "v0", "v1", int(1)).arc("p1", "v1", "v2", int(1)).build().unwrap();
        let model = Model::new(g, "v0", "v2", ratio(1, 2), int(10)).unwrap();
        let back = vec![Candidate::new("back", "v2", "v0", int(1))];
        assert_eq!(
            AdditionInstance::new(model.clone(), 1, BTreeSet::new(), back),
            Err(ModelError::CyclicPool("back".into()))
        );
        let dup = vec![Candidate::new("p0", "v0", "v2", int(1))];
        assert!(matches!(
            AdditionInstance::new(model, 1, BTreeSet::new(), dup),
            Err(ModelError::DuplicateCandidate(_))
        ));
    }

    #[test]
    fn non_path_graph_rejected() {
        let model = crate::figures::figure1(int(10));
        let all = model.graph().arc_ids();
        let inst = AdditionInstance::new(model, 1, all, vec![]).unwrap();
        assert!(PathWithDetours::new(inst).is_err());
    }

    #[test]
    fn zero_budget_and_abandoning_agent() {
        let pool = vec![Candidate::new("short", "v1", "v3", int(0))];
        let pwd = path_instance(&[5, 5, 5], pool, 0, int(1));
        assert!(solve_addition_exhaustive(pwd.instance()).is_none());
        assert!(solve_addition_dp(&pwd).is_none());
    }
}
