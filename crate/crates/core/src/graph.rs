//! Directed acyclic task multigraphs with identified, weighted arcs.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use crate::error::GraphError;
use crate::rational::{is_nonnegative, Rational};

/// An arc as written in an instance: endpoints named by vertex id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcSpec {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub weight: Rational,
}

impl ArcSpec {
    pub fn new(id: impl Into<String>, tail: impl Into<String>, head: impl Into<String>, weight: Rational) -> Self {
        ArcSpec { id: id.into(), tail: tail.into(), head: head.into(), weight }
    }
}

/// A stored arc; endpoints are vertex positions in the owning graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskArc {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub weight: Rational,
}

/// A weighted DAG whose arcs are tasks.
///
/// Parallel arcs are allowed and told apart by id. The graph carries a fixed
/// topological order used for tie-breaking. A freshly built graph uses the
/// lexicographically smallest order (Kahn's algorithm, smallest ready id
/// first); graphs derived by deleting or contracting keep the order of the
/// graph they came from, so that removing an unrelated arc never changes how
/// ties are broken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskGraph {
    vertices: Vec<String>,
    vertex_index: HashMap<String, usize>,
    arcs: Vec<TaskArc>,
    arc_index: HashMap<String, usize>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl TaskGraph {
    pub fn new(vertices: Vec<String>, arcs: Vec<ArcSpec>) -> Result<Self, GraphError> {
        Self::assemble(vertices, arcs, None)
    }

    /// Builds a graph whose tie-breaking order follows `ranks` (smaller first)
    /// instead of the lexicographic default. Every arc must point forward.
    pub fn with_ranks(
        vertices: Vec<String>,
        arcs: Vec<ArcSpec>,
        ranks: &HashMap<String, usize>,
    ) -> Result<Self, GraphError> {
        Self::assemble(vertices, arcs, Some(ranks))
    }

    fn assemble(
        vertices: Vec<String>,
        specs: Vec<ArcSpec>,
        ranks: Option<&HashMap<String, usize>>,
    ) -> Result<Self, GraphError> {
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (pos, id) in vertices.iter().enumerate() {
            if vertex_index.insert(id.clone(), pos).is_some() {
                return Err(GraphError::DuplicateVertex(id.clone()));
            }
        }
        let mut arcs = Vec::with_capacity(specs.len());
        let mut arc_index = HashMap::with_capacity(specs.len());
        let mut out_arcs = vec![Vec::new(); vertices.len()];
        let mut in_arcs = vec![Vec::new(); vertices.len()];
        for spec in specs {
            let endpoint = |v: &String| {
                vertex_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| GraphError::UnknownVertex { arc: spec.id.clone(), vertex: v.clone() })
            };
            let tail = endpoint(&spec.tail)?;
            let head = endpoint(&spec.head)?;
            if tail == head {
                return Err(GraphError::SelfLoop(spec.id));
            }
            if !is_nonnegative(&spec.weight) {
                return Err(GraphError::NegativeWeight(spec.id));
            }
            let pos = arcs.len();
            if arc_index.insert(spec.id.clone(), pos).is_some() {
                return Err(GraphError::DuplicateArc(spec.id));
            }
            out_arcs[tail].push(pos);
            in_arcs[head].push(pos);
            arcs.push(TaskArc { id: spec.id, tail, head, weight: spec.weight });
        }

        let order = match ranks {
            None => kahn_lexicographic(&vertices, &arcs, &out_arcs, &in_arcs)?,
            Some(ranks) => {
                let mut order: Vec<usize> = (0..vertices.len()).collect();
                order.sort_by_key(|&v| (ranks.get(&vertices[v]).copied().unwrap_or(usize::MAX), vertices[v].clone()));
                order
            }
        };
        let mut rank = vec![0; vertices.len()];
        for (pos, &v) in order.iter().enumerate() {
            rank[v] = pos;
        }
        if ranks.is_some() {
            if let Some(arc) = arcs.iter().find(|a| rank[a.tail] >= rank[a.head]) {
                return Err(GraphError::OrderViolation(arc.id.clone()));
            }
        }
        Ok(TaskGraph { vertices, vertex_index, arcs, arc_index, out_arcs, in_arcs, order, rank })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn arcs(&self) -> &[TaskArc] {
        &self.arcs
    }

    pub fn arc(&self, pos: usize) -> &TaskArc {
        &self.arcs[pos]
    }

    pub fn arc_position(&self, id: &str) -> Option<usize> {
        self.arc_index.get(id).copied()
    }

    pub fn arc_by_id(&self, id: &str) -> Option<&TaskArc> {
        self.arc_position(id).map(|pos| &self.arcs[pos])
    }

    pub fn contains_arc(&self, id: &str) -> bool {
        self.arc_index.contains_key(id)
    }

    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out_arcs[v]
    }

    pub fn in_arcs(&self, v: usize) -> &[usize] {
        &self.in_arcs[v]
    }

    /// Position of `v` in the fixed topological order.
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    /// The fixed topological order, as vertex positions.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn topological_order(&self) -> Vec<&str> {
        self.order.iter().map(|&v| self.vertices[v].as_str()).collect()
    }

    /// Vertex id → position in the fixed order; feed to [`TaskGraph::with_ranks`].
    pub fn ranks_by_id(&self) -> HashMap<String, usize> {
        self.vertices.iter().cloned().zip(self.rank.iter().copied()).collect()
    }

    pub fn arc_specs(&self) -> Vec<ArcSpec> {
        self.arcs
            .iter()
            .map(|a| ArcSpec {
                id: a.id.clone(),
                tail: self.vertices[a.tail].clone(),
                head: self.vertices[a.head].clone(),
                weight: a.weight.clone(),
            })
            .collect()
    }

    /// Keeps the selected vertices and arcs (arcs lose their place when an
    /// endpoint is dropped). The result inherits this graph's order.
    pub fn subgraph(&self, keep_vertex: impl Fn(usize) -> bool, keep_arc: impl Fn(&TaskArc) -> bool) -> TaskGraph {
        let kept: Vec<usize> = (0..self.vertices.len()).filter(|&v| keep_vertex(v)).collect();
        let mut remap = vec![usize::MAX; self.vertices.len()];
        for (new, &old) in kept.iter().enumerate() {
            remap[old] = new;
        }
        let vertices: Vec<String> = kept.iter().map(|&v| self.vertices[v].clone()).collect();
        let vertex_index = vertices.iter().cloned().enumerate().map(|(i, id)| (id, i)).collect();
        let mut arcs = Vec::new();
        let mut arc_index = HashMap::new();
        let mut out_arcs = vec![Vec::new(); kept.len()];
        let mut in_arcs = vec![Vec::new(); kept.len()];
        for arc in &self.arcs {
            let (tail, head) = (remap[arc.tail], remap[arc.head]);
            if tail == usize::MAX || head == usize::MAX || !keep_arc(arc) {
                continue;
            }
            let pos = arcs.len();
            arc_index.insert(arc.id.clone(), pos);
            out_arcs[tail].push(pos);
            in_arcs[head].push(pos);
            arcs.push(TaskArc { id: arc.id.clone(), tail, head, weight: arc.weight.clone() });
        }
        let order: Vec<usize> = self.order.iter().map(|&v| remap[v]).filter(|&v| v != usize::MAX).collect();
        let mut rank = vec![0; kept.len()];
        for (pos, &v) in order.iter().enumerate() {
            rank[v] = pos;
        }
        TaskGraph { vertices, vertex_index, arcs, arc_index, out_arcs, in_arcs, order, rank }
    }

    pub fn without_arcs(&self, removed: &BTreeSet<String>) -> TaskGraph {
        self.subgraph(|_| true, |a| !removed.contains(&a.id))
    }

    pub fn arc_ids(&self) -> BTreeSet<String> {
        self.arcs.iter().map(|a| a.id.clone()).collect()
    }

    /// Number of weakly connected components.
    pub fn weak_components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        let mut components = self.vertices.len();
        for arc in &self.arcs {
            let (a, b) = (find(&mut parent, arc.tail), find(&mut parent, arc.head));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components
    }

    pub fn is_weakly_connected(&self) -> bool {
        self.weak_components() <= 1
    }

    /// Cyclomatic number of the underlying undirected multigraph:
    /// `|E| - |V| + #components`.
    pub fn feedback_edge_number(&self) -> usize {
        self.arcs.len() + self.weak_components() - self.vertices.len()
    }

    /// Largest number of arcs on a `from`-`to` path, if any path exists.
    pub fn longest_path_arcs(&self, from: usize, to: usize) -> Option<usize> {
        let mut best: Vec<Option<usize>> = vec![None; self.vertices.len()];
        best[to] = Some(0);
        for &v in self.order.iter().rev() {
            if v == to {
                continue;
            }
            best[v] = self.out_arcs[v].iter().filter_map(|&a| best[self.arcs[a].head].map(|len| len + 1)).max();
        }
        best[from]
    }
}

fn kahn_lexicographic(
    vertices: &[String],
    arcs: &[TaskArc],
    out_arcs: &[Vec<usize>],
    in_arcs: &[Vec<usize>],
) -> Result<Vec<usize>, GraphError> {
    let mut indegree: Vec<usize> = in_arcs.iter().map(Vec::len).collect();
    let mut ready: BinaryHeap<Reverse<(&str, usize)>> =
        indegree.iter().enumerate().filter(|(_, &d)| d == 0).map(|(v, _)| Reverse((vertices[v].as_str(), v))).collect();
    let mut order = Vec::with_capacity(vertices.len());
    while let Some(Reverse((_, v))) = ready.pop() {
        order.push(v);
        for &a in &out_arcs[v] {
            let head = arcs[a].head;
            indegree[head] -= 1;
            if indegree[head] == 0 {
                ready.push(Reverse((vertices[head].as_str(), head)));
            }
        }
    }
    if order.len() < vertices.len() {
        let stuck = (0..vertices.len()).find(|&v| indegree[v] > 0).unwrap_or(0);
        return Err(GraphError::Cycle(vertices[stuck].clone()));
    }
    Ok(order)
}

/// Small fluent helper for building graphs in code and tests.
#[derive(Default)]
pub struct GraphBuilder {
    vertices: Vec<String>,
    arcs: Vec<ArcSpec>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: &str) -> Self {
        self.touch(id);
        self
    }

    /// Adds an arc, creating missing endpoints in order of first mention.
    pub fn arc(mut self, id: &str, tail: &str, head: &str, weight: Rational) -> Self {
        self.touch(tail);
        self.touch(head);
        self.arcs.push(ArcSpec::new(id, tail, head, weight));
        self
    }

    fn touch(&mut self, id: &str) {
        if !self.vertices.iter().any(|v| v == id) {
            self.vertices.push(id.to_string());
        }
    }

    pub fn build(self) -> Result<TaskGraph, GraphError> {
        TaskGraph::new(self.vertices, self.arcs)
    }
}
