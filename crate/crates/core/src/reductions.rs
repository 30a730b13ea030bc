//! Instance generators built from hardness reductions, with brute-force
//! oracles for their source problems.
//!
//! * Shortest Path Most Vital Edges (delete at most `k` arcs so the shortest
//!   `s`-`t` distance is at least `ell`) maps to T-Path-Deletion in two ways:
//!   one for any bias, one that pins the bias and also works with `T = ∅`.
//! * Modified k-Sum (pick one element per set, hitting `Z` exactly) maps to
//!   T-Path-Addition on a path with detours.

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::addition::{AdditionInstance, Candidate};
use crate::deletion::DeletionInstance;
use crate::error::{ModelError, ReductionError};
use crate::graph::{ArcSpec, TaskGraph};
use crate::model::{distances_to, Model};
use crate::rational::{format_rational, in_unit_interval, int, ratio, Cost, Rational};

/// Shortest Path Most Vital Edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpmveInstance {
    pub graph: TaskGraph,
    pub s: String,
    pub t: String,
    pub k: usize,
    pub ell: u64,
}

impl SpmveInstance {
    pub fn new(graph: TaskGraph, s: &str, t: &str, k: usize, ell: u64) -> Result<Self, ReductionError> {
        for v in [s, t] {
            if graph.vertex_index(v).is_none() {
                return Err(ModelError::UnknownVertex(v.to_string()).into());
            }
        }
        if s == t {
            return Err(ModelError::SourceIsTarget(s.to_string()).into());
        }
        if ell == 0 {
            return Err(ReductionError::InvalidSource("ell must be positive".into()));
        }
        if let Some(arc) = graph.arcs().iter().find(|a| !a.weight.is_integer() || a.weight <= Rational::zero()) {
            return Err(ReductionError::InvalidSource(format!("arc `{}` must have a positive integer weight", arc.id)));
        }
        Ok(SpmveInstance { graph, s: s.to_string(), t: t.to_string(), k, ell })
    }

    fn distance_after(&self, removed: &BTreeSet<String>) -> Cost {
        let graph = self.graph.without_arcs(removed);
        let s = graph.vertex_index(&self.s).expect("validated");
        let t = graph.vertex_index(&self.t).expect("validated");
        distances_to(&graph, t)[s].clone()
    }
}

/// True iff deleting some `≤ k` arcs pushes the `s`-`t` distance to `ell`
/// or beyond (disconnecting counts).
pub fn spmve_bruteforce(inst: &SpmveInstance) -> bool {
    let ell = Cost::Finite(int(inst.ell as i64));
    let ids: Vec<String> = inst.graph.arc_ids().into_iter().collect();
    (0..=inst.k.min(ids.len())).any(|size| {
        ids.iter().combinations(size).any(|combo| {
            let removed: BTreeSet<String> = combo.into_iter().cloned().collect();
            inst.distance_after(&removed) >= ell
        })
    })
}

/// Hands out vertex and arc names that do not clash with an existing graph.
struct Namer {
    taken: HashSet<String>,
}

impl Namer {
    fn new(graph: &TaskGraph) -> Self {
        let mut taken: HashSet<String> = graph.vertices().iter().cloned().collect();
        taken.extend(graph.arcs().iter().map(|a| a.id.clone()));
        Namer { taken }
    }

    fn fresh(&mut self, base: &str) -> String {
        let mut name = base.to_string();
        while self.taken.contains(&name) {
            name.push('\'');
        }
        self.taken.insert(name.clone());
        name
    }
}

struct Gadget {
    vertices: Vec<String>,
    arcs: Vec<ArcSpec>,
    namer: Namer,
}

impl Gadget {
    fn new(graph: &TaskGraph, scale: &Rational) -> Self {
        let arcs = graph.arc_specs().into_iter().map(|a| ArcSpec { weight: &a.weight * scale, ..a }).collect();
        Gadget { vertices: graph.vertices().to_vec(), arcs, namer: Namer::new(graph) }
    }

    fn vertex(&mut self, base: &str) -> String {
        let v = self.namer.fresh(base);
        self.vertices.push(v.clone());
        v
    }

    fn arc(&mut self, tail: &str, head: &str, weight: Rational) -> String {
        let id = self.namer.fresh(&format!("{tail}{head}"));
        self.arcs.push(ArcSpec::new(id.clone(), tail, head, weight));
        id
    }

    /// `copies` parallel arcs named `<tail><head>#i`.
    fn arcs(&mut self, tail: &str, head: &str, weight: Rational, copies: usize) {
        for i in 0..copies {
            let id = self.namer.fresh(&format!("{tail}{head}#{i}"));
            self.arcs.push(ArcSpec::new(id, tail, head, weight.clone()));
        }
    }

    fn build(self) -> Result<TaskGraph, ReductionError> {
        TaskGraph::new(self.vertices, self.arcs).map_err(|e| ReductionError::Model(e.into()))
    }
}

/// Works for any bias: weights of `G` are doubled and a decoy path of
/// perceived length `β(2ell − 1)` competes with the route through `G`.
pub fn reduce_spmve_thm1(inst: &SpmveInstance, beta: &Rational) -> Result<DeletionInstance, ReductionError> {
    if !in_unit_interval(beta) {
        return Err(ModelError::BetaOutOfRange(format_rational(beta)).into());
    }
    let ell = int(inst.ell as i64);
    let mut g = Gadget::new(&inst.graph, &int(2));
    let s0 = g.vertex("s'");
    let v1 = g.vertex("v1");
    let t0 = g.vertex("t'");
    let decoy = g.arc(&s0, &v1, int(0));
    g.arc(&v1, &t0, &ell * int(2) - int(1));
    g.arcs(&s0, &inst.s, int(0), inst.k + 1);
    g.arcs(&inst.t, &t0, int(0), inst.k + 1);
    let reward = &ell * int(2) / beta;
    let model = Model::new(g.build()?, &s0, &t0, beta.clone(), reward)?;
    Ok(DeletionInstance::new(model, inst.k, [decoy].into())?)
}

/// The bias interval for the pinned-bias reduction: `((ell−2)/(4ell), (ell−2)/(4ell−2))`.
pub fn thm2_beta_interval(ell: u64) -> (Rational, Rational) {
    let ell = ell as i64;
    (ratio(ell - 2, 4 * ell), ratio(ell - 2, 4 * ell - 2))
}

/// Pins `β` to the middle of its interval and `r = ell/β`. With `empty_t`
/// the prescribed set is empty instead of `{s'v1}`.
pub fn reduce_spmve_thm2(inst: &SpmveInstance, empty_t: bool) -> Result<DeletionInstance, ReductionError> {
    if inst.ell < 4 || !inst.ell.is_multiple_of(2) {
        return Err(ReductionError::OddOrSmallEll(inst.ell));
    }
    let (low, high) = thm2_beta_interval(inst.ell);
    let beta = (low + high) / int(2);
    let ell = int(inst.ell as i64);
    let mut g = Gadget::new(&inst.graph, &Rational::one());
    let s0 = g.vertex("s'");
    let v1 = g.vertex("v1");
    let v2 = g.vertex("v2");
    let t0 = g.vertex("t'");
    let decoy = g.arc(&s0, &v1, &ell / int(2));
    g.arc(&v1, &t0, int(1));
    g.arcs(&s0, &v2, int(1), inst.k + 1);
    g.arcs(&v2, &inst.s, ell.clone(), inst.k + 1);
    g.arcs(&inst.t, &t0, int(1), inst.k + 1);
    let reward = &ell / &beta;
    let model = Model::new(g.build()?, &s0, &t0, beta, reward)?;
    let prescribed = if empty_t { BTreeSet::new() } else { [decoy].into() };
    Ok(DeletionInstance::new(model, inst.k, prescribed)?)
}

/// Modified k-Sum: choose one element from each set so they sum to `z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KsumInstance {
    pub sets: Vec<Vec<u64>>,
    pub z: u64,
}

impl KsumInstance {
    pub fn new(sets: Vec<Vec<u64>>, z: u64) -> Result<Self, ReductionError> {
        if z == 0 || sets.iter().flatten().any(|&x| x == 0) {
            return Err(ReductionError::InvalidSource("all numbers must be positive".into()));
        }
        if sets.iter().any(Vec::is_empty) {
            return Err(ReductionError::InvalidSource("every set needs an element".into()));
        }
        Ok(KsumInstance { sets, z })
    }
}

pub fn ksum_bruteforce(inst: &KsumInstance) -> bool {
    inst.sets.iter().multi_cartesian_product().any(|pick| pick.into_iter().sum::<u64>() == inst.z)
}

/// An addition instance built from a k-Sum instance, with the constants
/// chosen during construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KsumReduction {
    pub instance: AdditionInstance,
    /// Whether the two helper arcs sit in the graph or in the pool.
    pub green_in_graph: bool,
    /// Shift added to every element.
    pub b: u64,
    /// Target after the shift.
    pub z: u64,
    pub a: u64,
    pub c: u64,
    pub y: u64,
    pub beta: Rational,
    pub epsilon: Rational,
    pub reward: Rational,
    /// Candidate ids of the gadget arcs, per set, in element order.
    pub gadget_arcs: Vec<Vec<String>>,
    pub green_arcs: [String; 2],
}

fn require(holds: bool, what: &str) -> Result<(), ReductionError> {
    if holds {
        Ok(())
    } else {
        Err(ReductionError::Inequality(what.to_string()))
    }
}

/// Builds the path `v1 … v_{2k+4}` with one gadget per set.
///
/// Elements are shifted by `b = max(max element, ⌈Z/k⌉)` so they lie in
/// `[b, 2b]` and `Z ≤ 2kb`. Constants: `c = 2k`, `a = 2k²b + 1`,
/// `β = 1/(2k+1)`, `ε = 1/2`, `r = Z + 2 + a/β − ε`, and `y` is the least
/// integer above both `Z − kb + 2 − ε` and `1/β`. The helper arcs are
/// `v2→v4` (weight 1) and `v3→t` (weight `Z + 1/β − 1/2`). Every inequality
/// the construction relies on is checked before the instance is returned.
///
/// With `green_in_graph` the helper arcs are part of the graph and the
/// budget is `k`; otherwise they are candidates and the budget is `k + 2`.
pub fn reduce_ksum(inst: &KsumInstance, green_in_graph: bool) -> Result<KsumReduction, ReductionError> {
    let k = inst.sets.len();
    if k < 2 {
        return Err(ReductionError::TooFewSets(k));
    }
    let kk = k as u64;
    let max_elem = inst.sets.iter().flatten().copied().max().expect("sets are nonempty");
    let b = max_elem.max(inst.z.div_ceil(kk));
    let sets: Vec<Vec<u64>> = inst.sets.iter().map(|set| set.iter().map(|x| x + b).collect()).collect();
    let z = inst.z + kk * b;
    let c = 2 * kk;
    let a = 2 * kk * kk * b + 1;
    let beta = ratio(1, 2 * k as i64 + 1);
    let epsilon = ratio(1, 2);
    let q = |n: u64| Rational::from_integer(n.into());
    let reward = q(z) + int(2) + q(a) / &beta - &epsilon;
    let lower_y = (q(z) - q(kk * b) + int(2) - &epsilon).max(Rational::one() / &beta);
    let y = (lower_y.floor() + Rational::one()).to_integer().to_u64().expect("y is a positive integer");
    let green_weight = q(z) + Rational::one() / &beta - ratio(1, 2);

    let br = &beta * &reward;
    let perceived = |first: Rational, rest: Rational| first + &beta * rest;
    let (zq, yq, cb, kb) = (q(z), q(y), q(c * b), q(kk * b));
    require(perceived(q(a), q(1) + q(kk * c * b)) > br, "no move at s via v2→v4 and the bare gadgets")?;
    require(perceived(q(a), &yq + q(kk * c * b)) > br, "no move at s via v3 and the bare gadgets")?;
    require(perceived(q(a), green_weight.clone()) > br, "no move at s via v3→t")?;
    require(perceived(q(a), q(1) + &zq) <= br, "upper bound admits a detour path of cost Z")?;
    require(perceived(q(a), q(2) + &zq) > br, "upper bound rejects a detour path of cost Z+1")?;
    if 2 * kk * b > z {
        require(perceived(q(a), q(1) + q(2 * kk * b)) > br, "upper bound rejects a detour path of cost 2kb")?;
    }
    require(
        perceived(q(1), zq.clone()) > &beta * &green_weight,
        "lower bound: at v2 the path beats v2→v4 when cost is Z",
    )?;
    require(perceived(q(1), &zq - q(1)) < &beta * &green_weight, "lower bound: v2→v4 wins when cost is Z−1")?;
    require(perceived(yq.clone(), zq.clone()) < green_weight, "at v3 the path beats v3→t")?;
    require(beta < Rational::one() / q(c), "gadget choice: beta < 1/c")?;
    require(perceived(q(a), &yq + &kb) > br, "y1: no move at s before v2→v4 is added")?;
    require(&beta * &yq > Rational::one(), "y2: at v2 the agent prefers v2→v4 over v2→v3→t")?;
    require(z <= c * b, "bare gadget arcs cost at least Z")?;
    require(c * b + (kk - 1) * (b + 1) > z, "a detour path of cost Z uses one candidate per gadget")?;
    require(perceived(yq.clone(), zq.clone()) <= br, "no abandonment at v3")?;
    require(perceived(cb.clone(), zq.clone()) <= br, "no abandonment inside a gadget")?;
    require(sets.iter().flatten().all(|&x| b <= x && x <= 2 * b), "shifted elements lie in [b, 2b]")?;

    let n = 2 * k + 4;
    let name = |i: usize| format!("v{i}");
    let vertices: Vec<String> = (1..=n).map(name).collect();
    let mut arcs = Vec::new();
    let mut path = BTreeSet::new();
    let mut push_path = |arcs: &mut Vec<ArcSpec>, i: usize, w: Rational| {
        let id = format!("e{i}");
        path.insert(id.clone());
        arcs.push(ArcSpec::new(id, name(i), name(i + 1), w));
    };
    push_path(&mut arcs, 1, q(a));
    push_path(&mut arcs, 2, int(0));
    push_path(&mut arcs, 3, yq.clone());
    for i in 1..=k {
        push_path(&mut arcs, 2 * i + 2, int(0));
        push_path(&mut arcs, 2 * i + 3, cb.clone());
    }

    let mut pool = Vec::new();
    let mut gadget_arcs = Vec::new();
    for (i, set) in sets.iter().enumerate() {
        let gadget = i + 1;
        let ids: Vec<String> = (0..set.len()).map(|j| format!("x{gadget}_{}", j + 1)).collect();
        for (id, &x) in ids.iter().zip(set) {
            pool.push(Candidate::new(id.clone(), name(2 * gadget + 2), name(2 * gadget + 4), q(x)));
        }
        gadget_arcs.push(ids);
    }
    let greens =
        [Candidate::new("g24", name(2), name(4), int(1)), Candidate::new("g3t", name(3), name(n), green_weight)];
    let green_arcs = [greens[0].id.clone(), greens[1].id.clone()];
    if green_in_graph {
        arcs.extend(greens.into_iter().map(|c| ArcSpec::new(c.id, c.tail, c.head, c.weight)));
    } else {
        pool.extend(greens);
    }
    let graph = TaskGraph::new(vertices, arcs).map_err(|e| ReductionError::Model(e.into()))?;
    let model = Model::new(graph, &name(1), &name(n), beta.clone(), reward.clone())?;
    let budget = if green_in_graph { k } else { k + 2 };
    let instance = AdditionInstance::new(model, budget, path, pool)?;
    Ok(KsumReduction { instance, green_in_graph, b, z, a, c, y, beta, epsilon, reward, gadget_arcs, green_arcs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::addition::solve_addition_exhaustive;
    use crate::deletion::solve_deletion_exhaustive;
    use crate::graph::GraphBuilder;
    use crate::model::PlanningModel;

    fn spmve(arcs: &[(&str, &str, &str, i64)], k: usize, ell: u64) -> SpmveInstance {
        let mut b = GraphBuilder::new();
        for &(id, u, v, w) in arcs {
            b = b.arc(id, u, v, int(w));
        }
        SpmveInstance::new(b.build().unwrap(), "s", "t", k, ell).unwrap()
    }

    #[test]
    fn bruteforce_basics() {
        assert!(spmve_bruteforce(&spmve(&[("st", "s", "t", 1)], 1, 2)));
        assert!(!spmve_bruteforce(&spmve(&[("st", "s", "t", 1)], 0, 2)));
        assert!(spmve_bruteforce(&spmve(&[("st", "s", "t", 3)], 0, 2)));
        assert!(!spmve_bruteforce(&spmve(&[("a", "s", "t", 1), ("b", "s", "t", 1)], 1, 2)));
    }

    #[test]
    fn thm1_counts_and_decoy_cost() {
        let src = spmve(&[("sx", "s", "x", 1), ("xt", "x", "t", 2), ("st", "s", "t", 4)], 2, 4);
        let out = reduce_spmve_thm1(&src, &ratio(1, 3)).unwrap();
        let g = out.model.graph();
        assert_eq!(g.vertex_count(), 3 + 3);
        assert_eq!(g.arc_count(), 3 + 2 * 2 + 4);
        let cost = out.model.perceived_path_cost(&["s'v1", "v1t'"]).unwrap();
        assert_eq!(cost, ratio(1, 3) * int(7));
        assert_eq!(solve_deletion_exhaustive(&out).is_some(), spmve_bruteforce(&src));
    }

    #[test]
    fn thm2_parameters() {
        let src = spmve(&[("st", "s", "t", 3), ("sx", "s", "x", 1), ("xt", "x", "t", 1)], 1, 10);
        let out = reduce_spmve_thm2(&src, false).unwrap();
        assert_eq!(out.model.beta(), &ratio(39, 190));
        let r = out.model.reward();
        assert!(r > &ratio(95, 2) && r < &int(50));
        let g = out.model.graph();
        assert_eq!(g.vertex_count(), 3 + 4);
        assert_eq!(g.arc_count(), 3 + 3 + 5);
        assert!(matches!(
            reduce_spmve_thm2(&spmve(&[("st", "s", "t", 1)], 1, 5), true),
            Err(ReductionError::OddOrSmallEll(5))
        ));
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let src = spmve(&[("sv1", "s", "v1", 1), ("v1t", "v1", "t", 1)], 1, 4);
        let out = reduce_spmve_thm1(&src, &ratio(1, 2)).unwrap();
        let g = out.model.graph();
        assert!(g.vertex_index("v1'").is_some());
        assert_eq!(g.vertex_count(), 6);
    }

    #[test]
    fn ksum_oracle() {
        let yes = KsumInstance::new(vec![vec![1], vec![2]], 3).unwrap();
        let no = KsumInstance::new(vec![vec![1], vec![2]], 4).unwrap();
        assert!(ksum_bruteforce(&yes));
        assert!(!ksum_bruteforce(&no));
    }

    #[test]
    fn ksum_structure_and_answers() {
        let yes = KsumInstance::new(vec![vec![1, 3], vec![2, 5]], 8).unwrap();
        let red = reduce_ksum(&yes, false).unwrap();
        let g = red.instance.model.graph();
        assert_eq!(g.vertex_count(), 2 * 2 + 4);
        assert_eq!(g.arc_count(), 2 * 2 + 3);
        assert_eq!(red.instance.pool.len(), 4 + 2);
        let sol = solve_addition_exhaustive(&red.instance).unwrap();
        assert!(sol.selected.contains("x1_2") && sol.selected.contains("x2_2"));

        let no = KsumInstance::new(vec![vec![1, 3], vec![2, 5]], 7).unwrap();
        for green in [false, true] {
            assert!(solve_addition_exhaustive(&reduce_ksum(&no, green).unwrap().instance).is_none());
        }
        assert!(solve_addition_exhaustive(&reduce_ksum(&yes, true).unwrap().instance).is_some());
    }

    #[test]
    fn ksum_needs_two_sets() {
        let one = KsumInstance::new(vec![vec![1]], 1).unwrap();
        assert_eq!(reduce_ksum(&one, true), Err(ReductionError::TooFewSets(1)));
    }
}
