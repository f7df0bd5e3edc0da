use crate::graph::{Edge, Vertex};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("edge endpoint {0} is not a listed vertex")]
    DanglingEndpoint(Vertex),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("({}, {}) is not an edge", .0.0, .0.1)]
    NotAnEdge(Edge),
    #[error("unit sphere is neither a cycle nor a path")]
    NotCycleOrPath,
    #[error("graph is not a 2-graph (with or without boundary)")]
    NotASurface,
    #[error("graph is not a closed 2-graph")]
    NotClosed2Graph,
    #[error("graph is not a 2-ball: {0}")]
    NotABall(String),
    #[error("refinement budget of {0} cuts exceeded")]
    CutBudgetExceeded(usize),
    #[error("interior vertex {0} has odd degree; flow undefined")]
    OddInteriorVertex(Vertex),
    #[error("coloring conflict at vertex {0}")]
    ColoringConflict(Vertex),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("local geometry too narrow around vertex {0}")]
    LocalGeometryTooNarrow(Vertex),
    #[error("bad fixture parameters: {0}")]
    BadParams(String),
    #[error("malformed graph json: {0}")]
    Json(String),
}

impl CoreError {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            CoreError::SelfLoop(_) => "SelfLoop",
            CoreError::DanglingEndpoint(_) => "DanglingEndpoint",
            CoreError::UnknownVertex(_) => "UnknownVertex",
            CoreError::NotAnEdge(_) => "NotAnEdge",
            CoreError::NotCycleOrPath => "NotCycleOrPath",
            CoreError::NotASurface => "NotASurface",
            CoreError::NotClosed2Graph => "NotClosed2Graph",
            CoreError::NotABall(_) => "NotABall",
            CoreError::CutBudgetExceeded(_) => "CutBudgetExceeded",
            CoreError::OddInteriorVertex(_) => "OddInteriorVertex",
            CoreError::ColoringConflict(_) => "ColoringConflict",
            CoreError::PreconditionViolated(_) => "PreconditionViolated",
            CoreError::LocalGeometryTooNarrow(_) => "LocalGeometryTooNarrow",
            CoreError::BadParams(_) => "BadParams",
            CoreError::Json(_) => "Json",
        }
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
