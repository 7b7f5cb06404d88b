//! Multiplexing gain as a minimum vertex cut, computed by max flow on the
//! split graph, plus the vertex-disjoint path families that witness it.

mod flow;
mod paths;
mod region;
mod split;

pub use flow::{max_flow, MaxFlow};
pub use paths::{family_is_valid, vertex_disjoint_paths, vertex_disjoint_paths_in, DisjointPathFamily, OuterHop};
pub use region::{multiaccess_region, region_contains, MuxConstraint, MuxRegion, DEFAULT_MAX_SENDERS};
pub use split::{split_graph, EdgeKind, SplitEdge, SplitGraph, SplitNode, SINK, SOURCE};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::network::{Network, NodeId, VertexCut};

/// Minimum vertex cut between the network's source and destination.
///
/// The cut is read off the source-minimal minimum cut of the split graph
/// (everything reachable from `s` in the residual graph): each crossing
/// edge is an inner edge of a relay, a source terminal edge or a
/// destination terminal edge, and crossing edges always come in whole
/// per-node bundles.
pub fn min_vertex_cut(net: &Network) -> VertexCut {
    min_vertex_cut_in(&split_graph(net), net)
}

pub(crate) fn min_vertex_cut_in(g: &SplitGraph, net: &Network) -> VertexCut {
    let f = max_flow(g);
    let mut members = BTreeSet::new();
    for e in g.edges() {
        if f.source_side[e.from] && !f.source_side[e.to] {
            let v = match e.kind {
                EdgeKind::Inner | EdgeKind::SinkTerminal => g.node(e.from).node(),
                EdgeKind::SourceTerminal => g.node(e.to).node(),
                EdgeKind::Outer => unreachable!("outer edges have infinite capacity"),
            };
            members.insert(v.expect("terminal edges touch a network node"));
        }
    }
    let capacity = net.vertex_cut_capacity(&members);
    debug_assert_eq!(capacity, f.value);
    VertexCut { members, capacity }
}

/// Maximum multiplexing gain `m_G`: the max-flow value of the split graph,
/// equal to the minimum vertex-cut capacity.
pub fn multiplexing_gain(net: &Network) -> u64 {
    max_flow(&split_graph(net)).value
}

/// Multicast gain: the smallest source-to-`t` gain over all destinations.
pub fn multicast_gain(net: &Network, destinations: &[NodeId]) -> Result<u64> {
    if destinations.is_empty() {
        return Err(Error::InvalidTerminals("multicast needs at least one destination".into()));
    }
    destinations
        .iter()
        .map(|&t| {
            if !net.contains(t) {
                return Err(Error::UndeclaredNode(t));
            }
            net.with_terminals(net.source(), t).map(|pair| multiplexing_gain(&pair))
        })
        .try_fold(u64::MAX, |acc, g| g.map(|g| acc.min(g)))
}

#[cfg(test)]
pub(crate) mod brute {
    //! Exhaustive vertex-cut enumeration, used as an oracle.
    use super::*;

    pub fn min_cut_capacity(net: &Network, sources: &[NodeId], dest: NodeId, removed: &BTreeSet<NodeId>) -> u64 {
        let nodes: Vec<NodeId> = net.nodes().filter(|v| !removed.contains(v)).collect();
        let mut best = u64::MAX;
        for mask in 0u32..(1 << nodes.len()) {
            let cut: BTreeSet<NodeId> =
                nodes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
            let mut blocked = cut.clone();
            blocked.extend(removed.iter().copied());
            let live: Vec<NodeId> = sources.iter().copied().filter(|s| !cut.contains(s)).collect();
            if cut.contains(&dest) || !net.reaches(&live, dest, &blocked) {
                best = best.min(net.vertex_cut_capacity(&cut));
            }
        }
        best
    }
}
