use thiserror::Error;

use crate::network::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed network document: {0}")]
    Schema(String),

    #[error("edge ({tx}, {rx}) references undeclared node {missing}")]
    UnknownNode { tx: NodeId, rx: NodeId, missing: NodeId },

    #[error("node {0} is not declared")]
    UndeclaredNode(NodeId),

    #[error("node {node} has antenna count {antennas}; at least 1 is required")]
    AntennaCount { node: NodeId, antennas: u32 },

    #[error("node {0} is declared more than once")]
    DuplicateNode(NodeId),

    #[error("edge ({0}, {1}) is declared more than once")]
    DuplicateEdge(NodeId, NodeId),

    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),

    #[error("no directed path from node {from} to node {to}")]
    Unreachable { from: NodeId, to: NodeId },

    #[error("invalid cut-set: {0}")]
    InvalidCut(String),

    #[error("node {0} is the source or destination, not a relay")]
    NotRelay(NodeId),

    #[error("{count} senders exceed the subset-enumeration cap of {cap} (2^M constraints)")]
    TooManySenders { count: usize, cap: usize },

    #[error("invalid terminal list: {0}")]
    InvalidTerminals(String),

    #[error("rate vector has length {got}, region has {expected} senders")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid rate vector: {0}")]
    InvalidRates(String),

    #[error("invalid AF configuration: {0}")]
    Config(String),

    #[error("network has {nodes} nodes; simple-path search is capped at {cap}")]
    PathSearchCap { nodes: usize, cap: usize },

    #[error("path enumeration exceeded the cap of {0} paths")]
    EnumerationCap(usize),

    #[error("network is not layered; single-block mode needs equal-length source-destination paths")]
    NotLayered,

    #[error("noise covariance is not positive definite")]
    NotPositiveDefinite,

    #[error("invalid sweep: {0}")]
    Sweep(String),

    #[error("time slots T = {time_slots} is below the longest simple path length l_G = {longest}; need T >= l_G")]
    TooFewSlots { time_slots: usize, longest: usize },

    #[error("path family is inconsistent with the network: {0}")]
    InconsistentPaths(String),
}
