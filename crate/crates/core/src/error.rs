//! Error type shared by the crate.

use alloc::string::String;
use core::fmt;

use crate::Direction;

/// Errors reported by graph construction, the dense oracle, training, and
/// evaluation. All variants are recoverable caller errors; numerical
/// blow-ups during training surface as [`CoreError::NonFiniteLoss`].
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Graph construction was handed an empty edge list.
    EmptyEdgeList,
    /// An edge carried a weight that is not a positive finite real.
    NonPositiveWeight { src: String, dst: String, weight: f64 },
    /// A node index was outside `[0, node_count)`.
    NodeOutOfRange { index: usize, node_count: usize },
    /// The variation coefficient must satisfy `alpha > 0`.
    InvalidAlpha(f64),
    /// The largest walk step count must satisfy `k >= 1`.
    InvalidWalkSteps,
    /// The dense oracle refuses graphs above its configured node limit.
    GraphTooLarge { node_count: usize, limit: usize },
    /// A node's hop-weighted distribution has zero mass in this direction
    /// (forward: fully dangling within `k` hops; backward: unreachable).
    ZeroMass { node: usize, direction: Direction },
    /// Matrix dimensions do not line up.
    DimensionMismatch { expected: usize, got: usize, what: &'static str },
    /// A train/test ratio outside the open interval (0, 1), or a split that
    /// would leave one side empty.
    InvalidSplit(String),
    /// A configuration field failed validation.
    InvalidConfig(String),
    /// The mean epoch loss stopped being finite.
    NonFiniteLoss { epoch: usize },
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::EmptyEdgeList => write!(f, "edge list is empty"),
            CoreError::NonPositiveWeight { src, dst, weight } => {
                write!(f, "edge {src} -> {dst} has non-positive weight {weight}")
            }
            CoreError::NodeOutOfRange { index, node_count } => {
                write!(f, "node index {index} out of range for {node_count} nodes")
            }
            CoreError::InvalidAlpha(a) => write!(f, "variation coefficient must be > 0, got {a}"),
            CoreError::InvalidWalkSteps => write!(f, "largest walk step count must be >= 1"),
            CoreError::GraphTooLarge { node_count, limit } => {
                write!(f, "dense oracle limited to {limit} nodes, graph has {node_count}")
            }
            CoreError::ZeroMass { node, direction } => {
                let dir = match direction {
                    Direction::Forward => "forward",
                    Direction::Backward => "backward",
                };
                write!(f, "node {node} has zero {dir} mass within k hops")
            }
            CoreError::DimensionMismatch { expected, got, what } => {
                write!(f, "dimension mismatch for {what}: expected {expected}, got {got}")
            }
            CoreError::InvalidSplit(msg) => write!(f, "invalid split: {msg}"),
            CoreError::InvalidConfig(msg) => write!(f, "invalid config: {msg}"),
            CoreError::NonFiniteLoss { epoch } => {
                write!(f, "training diverged: non-finite loss at epoch {epoch}")
            }
        }
    }
}

impl core::error::Error for CoreError {}

pub type Result<T> = core::result::Result<T, CoreError>;
