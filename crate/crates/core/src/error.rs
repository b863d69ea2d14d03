use thiserror::Error;

use crate::genio::format::ParseError;
use crate::interchange::StuckReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a hypergraph needs at least one vertex")]
    NoVertices,

    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),

    #[error("vertex id {0} is out of range")]
    UnknownVertex(usize),

    #[error("edge {edge} lists vertex `{label}` more than once")]
    RepeatedVertex { edge: usize, label: String },

    #[error("covering hypergraphs are defined for k >= 3, got k = {0}")]
    UniformityTooSmall(usize),

    #[error("expected a {expected}-uniform hypergraph")]
    NotUniform { expected: usize },

    #[error("not a covering {k}-hypergraph")]
    NotCovering { k: usize },

    #[error("edge {0} has fewer than two vertices and can never be traversed")]
    InfeasibleDegree(usize),

    #[error("certificate violation: {0}")]
    CertificateViolation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a cycle of the incidence graph: {0}")]
    NotACycle(String),

    #[error("interchange budget of {budget} steps exhausted")]
    BudgetExhausted {
        budget: usize,
        report: Box<StuckReport>,
    },

    #[error("search budget exceeded: {0}")]
    SearchBudget(String),

    #[error("{0} is not an admissible Steiner triple system order")]
    InadmissibleOrder(usize),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}
