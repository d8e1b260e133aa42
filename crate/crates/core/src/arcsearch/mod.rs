//! Classification of complete arcs in Hjelmslev geometries.

mod arc;
mod checkpoint;
mod classify;
mod hyperoval;

pub use arc::{addable_points, arc_graph, is_degenerate, Arc, PointMult};
pub(crate) use arc::field_rank;
pub use checkpoint::Checkpoint;
pub use classify::{
    canonical_deletion, classify, resume, ArcClass, CensusEntry, ClassificationResult, SearchOptions, Status,
};
pub use hyperoval::{
    check_quadrangle, collineations, complete_to_hyperoval, hyperoval_census, hyperoval_completions, hyperoval_size, point_orbit,
    HyperovalCensus,
};

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("u must be at least 2, got {0}")]
    InvalidU(usize),
    #[error("budget exhausted before the search tree could be split")]
    BudgetTooSmall,
    #[error("checkpoint does not match the requested search: {0}")]
    CheckpointMismatch(String),
    #[error("not a quadrangle: {0}")]
    NotQuadrangle(String),
    #[error("no hyperoval contains the given quadrangle")]
    NoCompletion,
    #[error("hyperovals need a plane, got dimension {0}")]
    NotPlane(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
