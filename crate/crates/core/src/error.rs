use thiserror::Error;

use crate::graph::Side;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: expected two vertex ids, got {content:?}")]
    MalformedLine { line: usize, content: String },

    #[error("line {line}: loop edge at vertex {vertex}")]
    LoopEdge { line: usize, vertex: usize },

    #[error("edge ({0}, {1}) references a vertex outside 0..n")]
    VertexOutOfRange(usize, usize),

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("graph is disconnected: vertex {unreached} is not reachable from vertex 0")]
    Disconnected { unreached: usize },

    #[error("graph is not bipartite: odd cycle {cycle:?}")]
    NotBipartite { cycle: Vec<usize> },

    #[error("side {side:?} is not regular: vertex {u} has degree {deg_u}, vertex {v} has degree {deg_v}")]
    NotSemiregular {
        side: Side,
        u: usize,
        deg_u: usize,
        v: usize,
        deg_v: usize,
    },

    #[error("graph is not regular: vertex {u} has degree {deg_u}, vertex {v} has degree {deg_v}")]
    NotRegular {
        u: usize,
        deg_u: usize,
        v: usize,
        deg_v: usize,
    },

    #[error("eigenvalues {lo} and {hi} are {gap:e} apart: inside the guard band of the clustering tolerance")]
    AmbiguousClustering { lo: f64, hi: f64, gap: f64 },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("Perron vector entry at vertex {vertex} is {value:e}")]
    NonPositiveEntry { vertex: usize, value: f64 },

    #[error("measure is degenerate: only {rank} of {support} support points are independent")]
    DegenerateMeasure { rank: usize, support: usize },

    #[error("orthogonal polynomial of degree {degree} vanishes at the largest eigenvalue")]
    ZeroAtLambda { degree: usize },

    #[error("bipartite block check failed: {0}")]
    CheckFailed(String),

    #[error("certificate support mismatch at vertex {vertex}: {detail}")]
    SupportMismatch { vertex: usize, detail: String },

    #[error("vertices {u} and {v} have eccentricities {ecc_u} and {ecc_v}")]
    UnequalEccentricities {
        u: usize,
        ecc_u: usize,
        v: usize,
        ecc_v: usize,
    },

    #[error("{eigenvalues} distinct eigenvalues do not fit diameter {diameter}")]
    EigenvalueCountMismatch { eigenvalues: usize, diameter: usize },

    #[error("girth {girth:?} is below the required {required}")]
    GirthTooSmall { girth: Option<usize>, required: usize },

    #[error("routes disagree on {property}: {detail}")]
    RouteDisagreement { property: String, detail: String },

    #[error("unknown graph family {0:?}")]
    UnknownFamily(String),

    #[error("bad parameters for {family}: {detail}")]
    BadParams { family: String, detail: String },

    #[error("fixture {family} failed its gate: {detail}")]
    FixtureGateFailed { family: String, detail: String },
}

impl Error {
    /// Variant name, for structured error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedLine { .. } => "MalformedLine",
            Error::LoopEdge { .. } => "LoopEdge",
            Error::VertexOutOfRange(..) => "VertexOutOfRange",
            Error::EmptyGraph => "EmptyGraph",
            Error::Disconnected { .. } => "Disconnected",
            Error::NotBipartite { .. } => "NotBipartite",
            Error::NotSemiregular { .. } => "NotSemiregular",
            Error::NotRegular { .. } => "NotRegular",
            Error::AmbiguousClustering { .. } => "AmbiguousClustering",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::NonPositiveEntry { .. } => "NonPositiveEntry",
            Error::DegenerateMeasure { .. } => "DegenerateMeasure",
            Error::ZeroAtLambda { .. } => "ZeroAtLambda",
            Error::CheckFailed(_) => "CheckFailed",
            Error::SupportMismatch { .. } => "SupportMismatch",
            Error::UnequalEccentricities { .. } => "UnequalEccentricities",
            Error::EigenvalueCountMismatch { .. } => "EigenvalueCountMismatch",
            Error::GirthTooSmall { .. } => "GirthTooSmall",
            Error::RouteDisagreement { .. } => "RouteDisagreement",
            Error::UnknownFamily(_) => "UnknownFamily",
            Error::BadParams { .. } => "BadParams",
            Error::FixtureGateFailed { .. } => "FixtureGateFailed",
        }
    }

    /// Errors that mean the implementation, not the input, is at fault.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::RouteDisagreement { .. } | Error::InvariantViolation(_) | Error::SupportMismatch { .. }
        )
    }
}
