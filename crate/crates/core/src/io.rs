//! JSON instance documents.
//!
//! One document format covers every instance kind. Rationals are written as
//! strings (`"1/3"`, `"24"`) and read from strings or JSON integers; floats
//! are rejected. Unknown fields, and known fields that do not belong to the
//! declared kind, are errors. Every error carries the line it refers to.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "kind": "deletion",
//!   "vertices": ["s", "a", "t"],
//!   "arcs": [{"id": "sa", "tail": "s", "head": "a", "weight": "2"}, …],
//!   "s": "s", "t": "t", "beta": "1/3", "reward": "24",
//!   "k": 1, "T": ["at"]
//! }
//! ```
//!
//! Optional `"order"` lists the vertices in the topological order used for
//! tie-breaking; it is written only when that order differs from the
//! lexicographic default (kernels inherit the order of their source).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::addition::{AdditionInstance, Candidate};
use crate::deletion::DeletionInstance;
use crate::graph::{ArcSpec, TaskGraph};
use crate::kernel::FPDeletionInstance;
use crate::model::{FPModel, Model, PlanningModel};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::reductions::{KsumInstance, SpmveInstance};

pub const FORMAT_VERSION: u32 = 1;

/// An exact rational as it appears in a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Num(pub Rational);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct NumVisitor;
        impl Visitor<'_> for NumVisitor {
            type Value = Num;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as a \"p/q\" string or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
                parse_rational(v).map(Num).ok_or_else(|| E::custom(format!("`{v}` is not a rational \"p/q\"")))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
                Ok(Num(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Num, E> {
                Ok(Num(Rational::from_integer(v.into())))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Num, E> {
                Err(E::custom(format!("float {v} is not allowed; write rationals as \"p/q\"")))
            }
        }
        deserializer.deserialize_any(NumVisitor)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Model,
    Deletion,
    FpDeletion,
    Addition,
    Spmve,
    Ksum,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Model => "model",
            Kind::Deletion => "deletion",
            Kind::FpDeletion => "fp_deletion",
            Kind::Addition => "addition",
            Kind::Spmve => "spmve",
            Kind::Ksum => "ksum",
        }
    }

    /// (required, optional) fields besides `format_version` and `kind`.
    fn fields(self) -> (&'static [&'static str], &'static [&'static str]) {
        const GRAPH: [&str; 6] = ["vertices", "arcs", "s", "t", "beta", "reward"];
        match self {
            Kind::Model => (&GRAPH, &["order"]),
            Kind::Deletion | Kind::FpDeletion => {
                (&["vertices", "arcs", "s", "t", "beta", "reward", "k"], &["order", "T"])
            }
            Kind::Addition => (&["vertices", "arcs", "s", "t", "beta", "reward", "k", "pool"], &["order", "T"]),
            Kind::Spmve => (&["vertices", "arcs", "s", "t", "k", "ell"], &["order"]),
            Kind::Ksum => (&["sets", "Z"], &[]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcDoc {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub weight: Num,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RewardDoc {
    Uniform(Num),
    PerVertex(BTreeMap<String, Num>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub format_version: u32,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arcs: Option<Vec<ArcDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reward: Option<RewardDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, rename = "T", skip_serializing_if = "Option::is_none")]
    pub prescribed: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pool: Option<Vec<ArcDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<Vec<u64>>>,
    #[serde(default, rename = "Z", skip_serializing_if = "Option::is_none")]
    pub z: Option<u64>,
}

impl InstanceDocument {
    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut mark = |name, set: bool| {
            if set {
                out.push(name)
            }
        };
        mark("vertices", self.vertices.is_some());
        mark("order", self.order.is_some());
        mark("arcs", self.arcs.is_some());
        mark("s", self.s.is_some());
        mark("t", self.t.is_some());
        mark("beta", self.beta.is_some());
        mark("reward", self.reward.is_some());
        mark("k", self.k.is_some());
        mark("T", self.prescribed.is_some());
        mark("pool", self.pool.is_some());
        mark("ell", self.ell.is_some());
        mark("sets", self.sets.is_some());
        mark("Z", self.z.is_some());
        out
    }
}

/// A validated instance of any kind.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Instance {
    Model(Model),
    Deletion(DeletionInstance),
    FpDeletion(FPDeletionInstance),
    Addition(AdditionInstance),
    Spmve(SpmveInstance),
    Ksum(KsumInstance),
}

impl Instance {
    pub fn kind(&self) -> Kind {
        match self {
            Instance::Model(_) => Kind::Model,
            Instance::Deletion(_) => Kind::Deletion,
            Instance::FpDeletion(_) => Kind::FpDeletion,
            Instance::Addition(_) => Kind::Addition,
            Instance::Spmve(_) => Kind::Spmve,
            Instance::Ksum(_) => Kind::Ksum,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

/// Parses and validates a document.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let doc: InstanceDocument =
        serde_json::from_str(text).map_err(|e| ParseError { line: e.line().max(1), message: e.to_string() })?;
    from_document(&doc).map_err(|(token, message)| ParseError { line: locate(text, &token), message })
}

/// Line of the first occurrence of a quoted token (or bare key), else 1.
fn locate(text: &str, token: &str) -> usize {
    let quoted = format!("\"{token}\"");
    text.lines().position(|l| l.contains(&quoted)).map_or(1, |i| i + 1)
}

/// The failing token (for line lookup) and a message.
type Invalid = (String, String);

fn invalid(token: impl Into<String>, message: impl Into<String>) -> Invalid {
    (token.into(), message.into())
}

fn required<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T, Invalid> {
    field.as_ref().ok_or_else(|| invalid("kind", format!("missing field `{name}`")))
}

pub fn from_document(doc: &InstanceDocument) -> Result<Instance, Invalid> {
    if doc.format_version != FORMAT_VERSION {
        return Err(invalid(
            "format_version",
            format!("unsupported format_version {} (expected {FORMAT_VERSION})", doc.format_version),
        ));
    }
    let (req, opt) = doc.kind.fields();
    let present = doc.present();
    if let Some(extra) = present.iter().find(|f| !req.contains(f) && !opt.contains(f)) {
        return Err(invalid(*extra, format!("field `{extra}` does not belong to kind `{}`", doc.kind.name())));
    }
    if let Some(missing) = req.iter().find(|f| !present.contains(f)) {
        return Err(invalid("kind", format!("kind `{}` requires field `{missing}`", doc.kind.name())));
    }

    if doc.kind == Kind::Ksum {
        let sets = required(&doc.sets, "sets")?.clone();
        return KsumInstance::new(sets, *required(&doc.z, "Z")?)
            .map(Instance::Ksum)
            .map_err(|e| invalid("sets", e.to_string()));
    }

    let graph = build_graph(doc)?;
    let s = required(&doc.s, "s")?;
    let t = required(&doc.t, "t")?;
    let k = doc.k.unwrap_or(0);
    let prescribed: BTreeSet<String> = doc.prescribed.iter().flatten().cloned().collect();
    if let Some(list) = &doc.prescribed {
        if list.len() != prescribed.len() {
            return Err(invalid("T", "`T` lists an arc twice"));
        }
    }
    if let Some(arc) = prescribed.iter().find(|a| !graph.contains_arc(a)) {
        return Err(invalid(arc.clone(), format!("prescribed arc `{arc}` is not an arc of the graph")));
    }
    let model_err = |e: crate::error::ModelError| invalid(model_token(&e, s), e.to_string());

    match doc.kind {
        Kind::Spmve => SpmveInstance::new(graph, s, t, k, *required(&doc.ell, "ell")?)
            .map(Instance::Spmve)
            .map_err(|e| invalid("arcs", e.to_string())),
        Kind::FpDeletion => {
            let RewardDoc::PerVertex(map) = required(&doc.reward, "reward")? else {
                return Err(invalid("reward", "kind `fp_deletion` needs a per-vertex reward map"));
            };
            let rewards: BTreeMap<String, Rational> = map.iter().map(|(v, r)| (v.clone(), r.0.clone())).collect();
            let beta = required(&doc.beta, "beta")?.0.clone();
            let model = FPModel::new(graph, s, t, beta, &rewards).map_err(model_err)?;
            FPDeletionInstance::new(model, k, prescribed).map(Instance::FpDeletion).map_err(model_err)
        }
        _ => {
            let RewardDoc::Uniform(reward) = required(&doc.reward, "reward")? else {
                return Err(invalid("reward", format!("kind `{}` needs a single reward", doc.kind.name())));
            };
            let beta = required(&doc.beta, "beta")?.0.clone();
            let model = Model::new(graph, s, t, beta, reward.0.clone()).map_err(model_err)?;
            match doc.kind {
                Kind::Model => Ok(Instance::Model(model)),
                Kind::Deletion => {
                    DeletionInstance::new(model, k, prescribed).map(Instance::Deletion).map_err(model_err)
                }
                Kind::Addition => {
                    let pool = required(&doc.pool, "pool")?
                        .iter()
                        .map(|a| Candidate::new(a.id.clone(), a.tail.clone(), a.head.clone(), a.weight.0.clone()))
                        .collect();
                    AdditionInstance::new(model, k, prescribed, pool).map(Instance::Addition).map_err(model_err)
                }
                _ => unreachable!("handled above"),
            }
        }
    }
}

fn model_token(err: &crate::error::ModelError, s: &str) -> String {
    use crate::error::ModelError as E;
    match err {
        E::UnknownVertex(v) | E::MissingReward(v) => v.clone(),
        E::UnknownArc(a) | E::CyclicPool(a) | E::DuplicateCandidate(a) => a.clone(),
        E::SourceIsTarget(_) => s.to_string(),
        E::BetaOutOfRange(_) => "beta".into(),
        E::NegativeReward(_) => "reward".into(),
        E::Graph(g) => graph_token(g),
        _ => "kind".into(),
    }
}

fn graph_token(err: &crate::error::GraphError) -> String {
    use crate::error::GraphError as G;
    match err {
        G::DuplicateVertex(v) | G::Cycle(v) => v.clone(),
        G::DuplicateArc(a) | G::SelfLoop(a) | G::NegativeWeight(a) | G::OrderViolation(a) => a.clone(),
        G::UnknownVertex { arc, .. } => arc.clone(),
    }
}

fn build_graph(doc: &InstanceDocument) -> Result<TaskGraph, Invalid> {
    let vertices = required(&doc.vertices, "vertices")?.clone();
    let arcs: Vec<ArcSpec> = required(&doc.arcs, "arcs")?
        .iter()
        .map(|a| ArcSpec::new(a.id.clone(), a.tail.clone(), a.head.clone(), a.weight.0.clone()))
        .collect();
    let built = match &doc.order {
        None => TaskGraph::new(vertices, arcs),
        Some(order) => {
            let listed: BTreeSet<&String> = order.iter().collect();
            let all: BTreeSet<&String> = vertices.iter().collect();
            if listed != all || order.len() != vertices.len() {
                return Err(invalid("order", "`order` must list every vertex exactly once"));
            }
            let ranks = order.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
            TaskGraph::with_ranks(vertices, arcs, &ranks)
        }
    };
    built.map_err(|e| invalid(graph_token(&e), format!("invalid graph: {e}")))
}

fn arc_docs(graph: &TaskGraph) -> Vec<ArcDoc> {
    graph
        .arc_specs()
        .into_iter()
        .map(|a| ArcDoc { id: a.id, tail: a.tail, head: a.head, weight: Num(a.weight) })
        .collect()
}

/// `Some(order)` when the graph's tie-breaking order is not the default.
fn explicit_order(graph: &TaskGraph) -> Option<Vec<String>> {
    let default = TaskGraph::new(graph.vertices().to_vec(), graph.arc_specs()).expect("graph is valid");
    (default.order() != graph.order()).then(|| graph.topological_order().into_iter().map(String::from).collect())
}

fn graph_document(kind: Kind, graph: &TaskGraph, s: &str, t: &str) -> InstanceDocument {
    InstanceDocument {
        format_version: FORMAT_VERSION,
        kind,
        vertices: Some(graph.vertices().to_vec()),
        order: explicit_order(graph),
        arcs: Some(arc_docs(graph)),
        s: Some(s.to_string()),
        t: Some(t.to_string()),
        beta: None,
        reward: None,
        k: None,
        prescribed: None,
        pool: None,
        ell: None,
        sets: None,
        z: None,
    }
}

fn model_document<M: PlanningModel>(kind: Kind, model: &M, reward: RewardDoc) -> InstanceDocument {
    InstanceDocument {
        beta: Some(Num(model.beta().clone())),
        reward: Some(reward),
        ..graph_document(kind, model.graph(), model.source_id(), model.target_id())
    }
}

pub fn to_document(inst: &Instance) -> InstanceDocument {
    let sorted = |set: &BTreeSet<String>| Some(set.iter().cloned().collect());
    match inst {
        Instance::Model(m) => model_document(Kind::Model, m, RewardDoc::Uniform(Num(m.reward().clone()))),
        Instance::Deletion(d) => InstanceDocument {
            k: Some(d.k),
            prescribed: sorted(&d.prescribed),
            ..model_document(Kind::Deletion, &d.model, RewardDoc::Uniform(Num(d.model.reward().clone())))
        },
        Instance::FpDeletion(d) => {
            let map = d.model.rewards_by_id().into_iter().map(|(v, r)| (v, Num(r))).collect();
            InstanceDocument {
                k: Some(d.k),
                prescribed: sorted(&d.prescribed),
                ..model_document(Kind::FpDeletion, &d.model, RewardDoc::PerVertex(map))
            }
        }
        Instance::Addition(a) => InstanceDocument {
            k: Some(a.k),
            prescribed: sorted(&a.prescribed),
            pool: Some(
                a.pool
                    .iter()
                    .map(|c| ArcDoc {
                        id: c.id.clone(),
                        tail: c.tail.clone(),
                        head: c.head.clone(),
                        weight: Num(c.weight.clone()),
                    })
                    .collect(),
            ),
            ..model_document(Kind::Addition, &a.model, RewardDoc::Uniform(Num(a.model.reward().clone())))
        },
        Instance::Spmve(p) => {
            InstanceDocument { k: Some(p.k), ell: Some(p.ell), ..graph_document(Kind::Spmve, &p.graph, &p.s, &p.t) }
        }
        Instance::Ksum(q) => InstanceDocument {
            format_version: FORMAT_VERSION,
            kind: Kind::Ksum,
            vertices: None,
            order: None,
            arcs: None,
            s: None,
            t: None,
            beta: None,
            reward: None,
            k: None,
            prescribed: None,
            pool: None,
            ell: None,
            sets: Some(q.sets.clone()),
            z: Some(q.z),
        },
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn serialize_document(doc: &InstanceDocument) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents always serialize");
    text.push('\n');
    text
}

pub fn serialize_instance(inst: &Instance) -> String {
    serialize_document(&to_document(inst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures::{figure1, figure1_deletion};
    use crate::rational::{int, ratio};

    #[test]
    fn figure1_round_trip() {
        let text = serialize_instance(&Instance::Model(figure1(int(100))));
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, Instance::Model(figure1(int(100))));
        assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn one_third_is_exact() {
        let text = serialize_instance(&Instance::Deletion(figure1_deletion(1)));
        assert!(text.contains("\"1/3\""));
        let Instance::Deletion(d) = parse_instance(&text).unwrap() else { panic!() };
        assert_eq!(d.model.beta(), &ratio(1, 3));
    }

    #[test]
    fn integers_accepted_floats_rejected() {
        let base = serialize_instance(&Instance::Model(figure1(int(100))));
        let with_int = base.replace("\"reward\": \"100\"", "\"reward\": 100");
        assert_eq!(parse_instance(&with_int).unwrap(), Instance::Model(figure1(int(100))));
        let with_float = base.replace("\"reward\": \"100\"", "\"reward\": 100.5");
        assert!(parse_instance(&with_float).is_err());
    }

    #[test]
    fn cycle_is_rejected_with_line() {
        let text = r#"{
  "format_version": 1,
  "kind": "model",
  "vertices": ["s", "t"],
  "arcs": [
    {"id": "st", "tail": "s", "head": "t", "weight": "1"},
    {"id": "ts", "tail": "t", "head": "s", "weight": "1"}
  ],
  "s": "s", "t": "t", "beta": "1/2", "reward": "3"
}"#;
        let err = parse_instance(text).unwrap_err();
        assert!(err.message.contains("not acyclic"), "{err}");
        assert!(err.line >= 1);
    }

    #[test]
    fn unknown_and_misplaced_fields() {
        let base = serialize_instance(&Instance::Model(figure1(int(100))));
        let unknown = base.replacen("{", "{\n  \"colour\": 1,", 1);
        let err = parse_instance(&unknown).unwrap_err();
        assert!(err.message.contains("unknown field"), "{err}");
        assert_eq!(err.line, 2);
        let misplaced = base.replacen("{", "{\n  \"k\": 1,", 1);
        let err = parse_instance(&misplaced).unwrap_err();
        assert!(err.message.contains("does not belong"), "{err}");
    }

    #[test]
    fn unsupported_version() {
        let base = serialize_instance(&Instance::Model(figure1(int(100))));
        let err = parse_instance(&base.replace("\"format_version\": 1", "\"format_version\": 9")).unwrap_err();
        assert!(err.message.contains("unsupported"));
        assert_eq!(err.line, 2);
    }

    #[test]
    fn bad_prescribed_arc_points_at_its_line() {
        let base = serialize_instance(&Instance::Deletion(figure1_deletion(1)));
        let text = base.replace("\"dt\"\n", "\"zz\"\n");
        let err = parse_instance(&text).unwrap_err();
        assert!(err.message.contains("zz"));
        assert_eq!(text.lines().nth(err.line - 1).unwrap().trim(), "\"zz\"");
    }
}
