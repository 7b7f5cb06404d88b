//! Maximum multiplexing gain of multi-antenna wireless relay networks.
//!
//! The gain of a network equals the minimum vertex cut of its connectivity
//! graph, where each node is weighted by its antenna count. This crate
//! computes that number by max flow on a per-antenna split graph, extracts
//! the vertex-disjoint path families that witness it, and checks
//! achievability by traditional amplify-and-forward relaying two ways:
//! exact rank certificates on 0/1 channel realizations, and Monte Carlo
//! ergodic-capacity slopes over Rayleigh fading.
//!
//! Modules:
//! - [`network`]: graph model, JSON document format, cut-set helpers.
//! - [`mincut`]: split graph, max flow, minimum vertex cut, disjoint paths,
//!   multicast gain and the multi-access region.
//! - [`af`]: channel sampling and the amplify-forward equivalent channel.
//! - [`capacity`]: mutual information, ergodic capacity and slope estimates.
//! - [`certify`]: rank certificates built from disjoint paths.

pub mod af;
pub mod capacity;
pub mod certify;
pub mod error;
pub mod mincut;
pub mod network;

pub use error::{Error, Result};
pub use network::{parse_network, CutSet, Network, NetworkDoc, NodeId, NodeSpec, VertexCut};
