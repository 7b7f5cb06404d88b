//! Per-antenna node splitting.
//!
//! Every relay `v` becomes `N_v` receive nodes `Rx{v, i}` and `N_v` transmit
//! nodes `Tx{v, i}` joined by unit-capacity inner edges. A source keeps only
//! its transmit nodes (fed by unit terminal edges from the super terminal
//! `s`); the destination keeps only its receive nodes (draining into `t`).
//! Each network edge `(u, v)` becomes the complete bipartite block
//! `Tx{u, *} -> Rx{v, *}` of infinite-capacity outer edges, so every finite
//! cut consists of whole inner or terminal bundles.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::network::{Network, NodeId};

/// A node of the split graph. Antenna indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SplitNode {
    Source,
    Sink,
    Rx { node: NodeId, antenna: usize },
    Tx { node: NodeId, antenna: usize },
}

impl SplitNode {
    /// The network node this split node belongs to (`None` for `s`, `t`).
    pub fn node(&self) -> Option<NodeId> {
        match *self {
            SplitNode::Rx { node, .. } | SplitNode::Tx { node, .. } => Some(node),
            _ => None,
        }
    }

    pub fn antenna(&self) -> Option<usize> {
        match *self {
            SplitNode::Rx { antenna, .. } | SplitNode::Tx { antenna, .. } => Some(antenna),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeKind {
    /// `Rx{v,i} -> Tx{v,i}` of a relay, capacity 1.
    Inner,
    /// `s -> Tx{src,j}`, capacity 1.
    SourceTerminal,
    /// `Rx{dst,j} -> t`, capacity 1.
    SinkTerminal,
    /// `Tx{u,i} -> Rx{v,j}` for a network edge `(u, v)`, infinite capacity.
    Outer,
}

impl EdgeKind {
    pub fn is_unit(self) -> bool {
        !matches!(self, EdgeKind::Outer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitEdge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone)]
pub struct SplitGraph {
    nodes: Vec<SplitNode>,
    edges: Vec<SplitEdge>,
    out: Vec<Vec<usize>>,
    index: HashMap<SplitNode, usize>,
    sources: Vec<NodeId>,
    destination: NodeId,
}

pub const SOURCE: usize = 0;
pub const SINK: usize = 1;

/// Split graph for the network's own source/destination pair.
pub fn split_graph(net: &Network) -> SplitGraph {
    SplitGraph::build(net, &[net.source()], net.destination(), &BTreeSet::new())
}

impl SplitGraph {
    /// Split graph between a set of sender nodes (merged behind the super
    /// terminal `s`) and `destination`, with the nodes in `removed` deleted.
    pub fn build(
        net: &Network,
        sources: &[NodeId],
        destination: NodeId,
        removed: &BTreeSet<NodeId>,
    ) -> SplitGraph {
        let mut g = SplitGraph {
            nodes: vec![],
            edges: vec![],
            out: vec![],
            index: HashMap::new(),
            sources: sources.to_vec(),
            destination,
        };
        g.add_node(SplitNode::Source);
        g.add_node(SplitNode::Sink);

        let is_source = |v: NodeId| sources.contains(&v);
        let alive = |v: NodeId| !removed.contains(&v);

        for v in net.nodes().filter(|&v| alive(v)) {
            for i in 0..net.antennas(v) {
                let rx = (!is_source(v)).then(|| g.add_node(SplitNode::Rx { node: v, antenna: i }));
                let tx = (v != destination).then(|| g.add_node(SplitNode::Tx { node: v, antenna: i }));
                match (rx, tx) {
                    (Some(a), Some(b)) => g.add_edge(a, b, EdgeKind::Inner),
                    (None, Some(b)) => g.add_edge(SOURCE, b, EdgeKind::SourceTerminal),
                    (Some(a), None) => g.add_edge(a, SINK, EdgeKind::SinkTerminal),
                    (None, None) => unreachable!("a sender cannot be the destination"),
                }
            }
        }

        for (u, v) in net.edges() {
            if !alive(u) || !alive(v) || u == destination || is_source(v) {
                continue;
            }
            for i in 0..net.antennas(u) {
                let b = g.index[&SplitNode::Tx { node: u, antenna: i }];
                for j in 0..net.antennas(v) {
                    let a = g.index[&SplitNode::Rx { node: v, antenna: j }];
                    g.add_edge(b, a, EdgeKind::Outer);
                }
            }
        }
        g
    }

    fn add_node(&mut self, n: SplitNode) -> usize {
        let id = self.nodes.len();
        self.nodes.push(n);
        self.out.push(vec![]);
        self.index.insert(n, id);
        id
    }

    fn add_edge(&mut self, from: usize, to: usize, kind: EdgeKind) {
        self.out[from].push(self.edges.len());
        self.edges.push(SplitEdge { from, to, kind });
    }

    pub fn nodes(&self) -> &[SplitNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> SplitNode {
        self.nodes[i]
    }

    pub fn index_of(&self, n: SplitNode) -> Option<usize> {
        self.index.get(&n).copied()
    }

    pub fn edges(&self) -> &[SplitEdge] {
        &self.edges
    }

    /// Indices of edges leaving node `i`.
    pub fn out_edges(&self, i: usize) -> &[usize] {
        &self.out[i]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn count(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    pub fn sources(&self) -> &[NodeId] {
        &self.sources
    }

    pub fn destination(&self) -> NodeId {
        self.destination
    }

    /// Stand-in for the infinite capacity: strictly larger than any cut made
    /// of unit edges.
    pub fn infinite_capacity(&self) -> u64 {
        self.edges.iter().filter(|e| e.kind.is_unit()).count() as u64 + 1
    }

    pub fn capacity(&self, edge: usize) -> u64 {
        if self.edges[edge].kind.is_unit() {
            1
        } else {
            self.infinite_capacity()
        }
    }
}
