use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arc id `{0}`")]
    DuplicateArc(String),
    #[error("arc `{arc}` references unknown vertex `{vertex}`")]
    UnknownVertex { arc: String, vertex: String },
    #[error("arc `{0}` is a self-loop")]
    SelfLoop(String),
    #[error("arc `{0}` has a negative weight")]
    NegativeWeight(String),
    #[error("graph is not acyclic: cycle through vertex `{0}`")]
    Cycle(String),
    #[error("inherited vertex order is not topological at arc `{0}`")]
    OrderViolation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arc `{0}`")]
    UnknownArc(String),
    #[error("source and target must differ (both `{0}`)")]
    SourceIsTarget(String),
    #[error("present bias must satisfy 0 < beta <= 1, got {0}")]
    BetaOutOfRange(String),
    #[error("reward must be nonnegative, got {0}")]
    NegativeReward(String),
    #[error("missing reward for vertex `{0}`")]
    MissingReward(String),
    #[error("no next arc from `{0}`: it is the target or the target is unreachable")]
    NoNextArc(String),
    #[error("arcs do not form a path: {0}")]
    NotAPath(String),
    #[error("candidate arc `{0}` would create a directed cycle")]
    CyclicPool(String),
    #[error("candidate id `{0}` collides with another arc or candidate")]
    DuplicateCandidate(String),
    #[error("not a path with detours: {0}")]
    NotPathWithDetours(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("arc `{0}` in kernel solution cannot be traced back to the original graph")]
    Untraceable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid source instance: {0}")]
    InvalidSource(String),
    #[error("threshold ell must be even and at least 4, got {0}")]
    OddOrSmallEll(u64),
    #[error("k-Sum reduction needs at least two sets, got {0}")]
    TooFewSets(usize),
    #[error("construction inequality violated: {0}")]
    Inequality(String),
}
