//! Graphviz export.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::graph::TaskGraph;
use crate::io::Instance;
use crate::model::PlanningModel;
use crate::rational::format_rational;

fn quote(text: &str) -> String {
    format!("\"{}\"", text.replace('\\', "\\\\").replace('"', "\\\""))
}

struct Drawing<'a> {
    graph: &'a TaskGraph,
    s: &'a str,
    t: &'a str,
    prescribed: BTreeSet<String>,
    pool: Vec<(String, String, String, String)>,
}

impl Drawing<'_> {
    fn render(&self) -> String {
        let mut out = String::from("digraph task_graph {\n  rankdir=LR;\n");
        for v in self.graph.topological_order() {
            let label = if v == self.s {
                format!("{v} (s)")
            } else if v == self.t {
                format!("{v} (t)")
            } else {
                v.to_string()
            };
            let shape = if v == self.s || v == self.t { "doublecircle" } else { "circle" };
            writeln!(out, "  {} [label={}, shape={shape}];", quote(v), quote(&label)).unwrap();
        }
        for arc in self.graph.arcs() {
            let style = if self.prescribed.contains(&arc.id) { ", style=bold" } else { "" };
            writeln!(
                out,
                "  {} -> {} [id={}, label={}{style}];",
                quote(self.graph.vertex_id(arc.tail)),
                quote(self.graph.vertex_id(arc.head)),
                quote(&arc.id),
                quote(&format_rational(&arc.weight)),
            )
            .unwrap();
        }
        for (id, tail, head, weight) in &self.pool {
            writeln!(
                out,
                "  {} -> {} [id={}, label={}, style=dashed];",
                quote(tail),
                quote(head),
                quote(id),
                quote(weight)
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// DOT text: weights as labels, prescribed arcs bold, candidate arcs dashed,
/// `s` and `t` marked. Vertices follow the topological order and arcs the
/// instance order, so equal inputs give equal text.
pub fn export_dot(inst: &Instance) -> String {
    let drawing = match inst {
        Instance::Model(m) => Drawing {
            graph: m.graph(),
            s: m.source_id(),
            t: m.target_id(),
            prescribed: BTreeSet::new(),
            pool: Vec::new(),
        },
        Instance::Deletion(d) => Drawing {
            graph: d.model.graph(),
            s: d.model.source_id(),
            t: d.model.target_id(),
            prescribed: d.prescribed.clone(),
            pool: Vec::new(),
        },
        Instance::FpDeletion(d) => Drawing {
            graph: d.model.graph(),
            s: d.model.source_id(),
            t: d.model.target_id(),
            prescribed: d.prescribed.clone(),
            pool: Vec::new(),
        },
        Instance::Addition(a) => Drawing {
            graph: a.model.graph(),
            s: a.model.source_id(),
            t: a.model.target_id(),
            prescribed: a.prescribed.clone(),
            pool: a
                .pool
                .iter()
                .map(|c| (c.id.clone(), c.tail.clone(), c.head.clone(), format_rational(&c.weight)))
                .collect(),
        },
        Instance::Spmve(p) => {
            Drawing { graph: &p.graph, s: &p.s, t: &p.t, prescribed: BTreeSet::new(), pool: Vec::new() }
        }
        Instance::Ksum(q) => {
            let mut out = String::from("digraph ksum {\n");
            for (i, set) in q.sets.iter().enumerate() {
                let items: Vec<String> = set.iter().map(u64::to_string).collect();
                writeln!(out, "  X{} [shape=box, label={}];", i + 1, quote(&items.join(", "))).unwrap();
            }
            writeln!(out, "  Z [shape=box, label={}];", quote(&q.z.to_string())).unwrap();
            out.push_str("}\n");
            return out;
        }
    };
    drawing.render()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deletion::DeletionInstance;
    use crate::figures::{figure1, figure1_deletion};
    use crate::rational::int;

    #[test]
    fn figure1_nodes_edges_labels() {
        let text = export_dot(&Instance::Model(figure1(int(24))));
        assert_eq!(text.lines().filter(|l| l.contains("shape=")).count(), 7);
        assert_eq!(text.lines().filter(|l| l.contains("->")).count(), 8);
        let mut labels: Vec<&str> = text
            .lines()
            .filter(|l| l.contains("->"))
            .map(|l| l.split("label=\"").nth(1).unwrap().split('"').next().unwrap())
            .collect();
        labels.sort();
        assert_eq!(labels, vec!["1", "2", "2", "2", "3", "6", "6", "7"]);
        assert!(text.contains("\"s (s)\"") && text.contains("\"t (t)\""));
    }

    #[test]
    fn bold_only_for_prescribed() {
        let with_t = export_dot(&Instance::Deletion(figure1_deletion(1)));
        assert_eq!(with_t.matches("style=bold").count(), 1);
        let empty = DeletionInstance::new(figure1(int(24)), 1, BTreeSet::new()).unwrap();
        let text = export_dot(&Instance::Deletion(empty.clone()));
        assert!(!text.contains("bold"));
        assert_eq!(text, export_dot(&Instance::Deletion(empty)));
    }
}
