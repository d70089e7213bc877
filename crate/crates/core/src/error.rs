use thiserror::Error;

/// Errors produced while loading inputs or evaluating templates.
#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to parse topology: {0}")]
    TopologyParse(#[from] serde_json::Error),
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("topology is disconnected: node {0} is unreachable from {1}")]
    Disconnected(String, String),
    #[error("duplicate edge {0} - {1}")]
    DuplicateEdge(String, String),
    #[error("edge {0} - {1} has invalid cost {2}")]
    InvalidCost(String, String, f64),
    #[error("node {0} has no coordinates")]
    MissingCoordinates(String),
    #[error("node {0} has no population")]
    MissingPopulation(String),
    #[error("nodes {0} and {1} are at zero distance")]
    ZeroDistance(String, String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("dimension mismatch: expected {expected} nodes, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid demand model: {0}")]
    InvalidModel(String),
    #[error("node sets overlap at node {0}")]
    OverlappingSets(usize),
    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
    #[error("time series error: {0}")]
    Series(String),
    #[error("horizon {horizon} outside series of length {length}")]
    Horizon { horizon: usize, length: usize },
    #[error("invalid hub tree: {0}")]
    InvalidHubTree(String),
    #[error("tree edge {0} has no capacity")]
    MissingCapacity(usize),
    #[error("invalid routing template: {0}")]
    InvalidTemplate(String),
    #[error("not a spanning tree: {0}")]
    NotSpanningTree(String),
    #[error("{0}")]
    Empty(&'static str),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
