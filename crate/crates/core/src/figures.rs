//! The worked example task graph: a student choosing between three routes
//! to a degree, with present bias 1/3.
//!
//! ```text
//!        2     2     2
//!   s ─6─ a ── b ── c ── t
//!         │              │
//!         1             6│
//!         └─ d ──────────┘
//!             \─3─ e ─7─┘
//! ```

use std::collections::BTreeSet;

use crate::deletion::DeletionInstance;
use crate::graph::GraphBuilder;
use crate::model::Model;
use crate::rational::{int, ratio, Rational};

fn build(with_de: bool, reward: Rational) -> Model {
    let mut g = GraphBuilder::new()
        .arc("sa", "s", "a", int(6))
        .arc("ab", "a", "b", int(2))
        .arc("bc", "b", "c", int(2))
        .arc("ct", "c", "t", int(2))
        .arc("ad", "a", "d", int(1))
        .arc("dt", "d", "t", int(6));
    if with_de {
        g = g.arc("de", "d", "e", int(3)).arc("et", "e", "t", int(7));
    } else {
        g = g.vertex("e").arc("et", "e", "t", int(7));
    }
    Model::new(g.build().expect("figure graph is a DAG"), "s", "t", ratio(1, 3), reward).expect("valid model")
}

/// Three routes; the biased agent ends up on `s a d e t`.
pub fn figure1(reward: Rational) -> Model {
    build(true, reward)
}

/// The first figure with task `de` removed; the agent follows `s a d t`.
pub fn figure2(reward: Rational) -> Model {
    build(false, reward)
}

/// Force the agent through `dt` with one deletion, reward 24.
pub fn figure1_deletion(k: usize) -> DeletionInstance {
    let prescribed: BTreeSet<String> = ["dt".to_string()].into();
    DeletionInstance::new(figure1(int(24)), k, prescribed).expect("dt is an arc")
}
