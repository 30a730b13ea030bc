//! Present-biased agents on task graphs.
//!
//! The crate models an agent that plans over a weighted DAG but discounts
//! every task after the next one by a factor `beta`, and solves the two
//! principal problems built on it: deleting at most `k` arcs, or adding at
//! most `k` candidate arcs, so that the agent reaches the target along a path
//! containing a prescribed arc set.

pub mod addition;
pub mod cli;
pub mod deletion;
pub mod dot;
pub mod error;
pub mod figures;
pub mod generate;
pub mod graph;
pub mod io;
pub mod kernel;
pub mod model;
pub mod rational;
pub mod reductions;

pub use addition::{AdditionInstance, AdditionSolution, Candidate, ComponentDecomposition, DpStats, PathWithDetours};
pub use deletion::{DeletionInstance, DeletionSolution, SearchStats};
pub use error::{GraphError, KernelError, ModelError, ReductionError};
pub use graph::{ArcSpec, GraphBuilder, TaskArc, TaskGraph};
pub use io::{parse_instance, serialize_instance, Instance, ParseError};
pub use kernel::{FPDeletionInstance, KernelTrace, Kernelized, RuleApplication};
pub use model::{FPModel, Model, Outcome, PlanningModel, TraversalResult, VisitRecord};
pub use rational::{Cost, Rational};
pub use reductions::{KsumInstance, KsumReduction, SpmveInstance};
