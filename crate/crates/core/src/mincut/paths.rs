use std::collections::BTreeSet;

use serde::Serialize;

use super::flow::max_flow;
use super::split::{split_graph, SplitGraph, SplitNode, SINK, SOURCE};
use crate::network::{Network, NodeId};

/// `nu` pairwise vertex-disjoint `s`-`t` paths of the split graph.
///
/// `first_antennas[k]` / `last_antennas[k]` are the source and destination
/// antennas (0-based) used by path `k`; `lengths[k]` is its edge count
/// (`3 + 2 * relays on the path`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisjointPathFamily {
    pub paths: Vec<Vec<SplitNode>>,
    pub nu: usize,
    pub first_antennas: Vec<usize>,
    pub last_antennas: Vec<usize>,
    pub lengths: Vec<usize>,
}

/// One outer edge `Tx{tx, tx_antenna} -> Rx{rx, rx_antenna}` of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OuterHop {
    pub tx: NodeId,
    pub tx_antenna: usize,
    pub rx: NodeId,
    pub rx_antenna: usize,
}

impl DisjointPathFamily {
    /// Relays traversed by path `k`, i.e. its delay in slots.
    pub fn relay_hops(&self, k: usize) -> usize {
        (self.lengths[k] - 3) / 2
    }

    pub fn outer_hops(&self, k: usize) -> Vec<OuterHop> {
        self.paths[k]
            .windows(2)
            .filter_map(|w| match (w[0], w[1]) {
                (SplitNode::Tx { node: tx, antenna: i }, SplitNode::Rx { node: rx, antenna: j }) => {
                    Some(OuterHop { tx, tx_antenna: i, rx, rx_antenna: j })
                }
                _ => None,
            })
            .collect()
    }

    /// Network nodes visited by path `k`, source first.
    pub fn node_route(&self, k: usize) -> Vec<NodeId> {
        let mut route: Vec<NodeId> = vec![];
        for n in &self.paths[k] {
            if let Some(v) = n.node() {
                if route.last() != Some(&v) {
                    route.push(v);
                }
            }
        }
        route
    }
}

pub fn vertex_disjoint_paths(net: &Network) -> DisjointPathFamily {
    vertex_disjoint_paths_in(&split_graph(net))
}

/// Decompose a maximum flow of `g` into unit paths.
///
/// Every split node other than `s`, `t` carries at most one unit of flow
/// (receive nodes have a single unit out-edge, transmit nodes a single unit
/// in-edge), so following flow-carrying edges from `s` is deterministic and
/// the resulting paths are vertex-disjoint. A path that enters the same
/// network node twice is shortcut through the complete outer block of the
/// earlier hop, so every path projects to a simple route of the network.
pub fn vertex_disjoint_paths_in(g: &SplitGraph) -> DisjointPathFamily {
    let f = max_flow(g);
    let mut remaining = f.flow.clone();
    let mut paths = vec![];
    for _ in 0..f.value {
        let mut path = vec![SOURCE];
        let mut u = SOURCE;
        while u != SINK {
            let e = *g
                .out_edges(u)
                .iter()
                .find(|&&e| remaining[e] > 0)
                .expect("flow conservation leaves an outgoing unit");
            remaining[e] -= 1;
            u = g.edges()[e].to;
            path.push(u);
        }
        paths.push(shortcut(g, path));
    }

    let paths: Vec<Vec<SplitNode>> = paths.into_iter().map(|p| p.into_iter().map(|i| g.node(i)).collect()).collect();
    let first_antennas = paths.iter().map(|p| p[1].antenna().unwrap()).collect();
    let last_antennas = paths.iter().map(|p| p[p.len() - 2].antenna().unwrap()).collect();
    let lengths = paths.iter().map(|p| p.len() - 1).collect();
    DisjointPathFamily { nu: paths.len(), paths, first_antennas, last_antennas, lengths }
}

fn shortcut(g: &SplitGraph, mut path: Vec<usize>) -> Vec<usize> {
    loop {
        // positions of receive nodes, grouped by network node
        let mut repeat = None;
        'scan: for i in 0..path.len() {
            if let SplitNode::Rx { node, .. } = g.node(path[i]) {
                for j in (i + 1..path.len()).rev() {
                    if matches!(g.node(path[j]), SplitNode::Rx { node: n, .. } if n == node) {
                        repeat = Some((i, j));
                        break 'scan;
                    }
                }
            }
        }
        let Some((i, j)) = repeat else { return path };
        // path[i - 1] is a transmit node whose outer block reaches every
        // receive antenna of the repeated node, including path[j].
        path.drain(i..j);
    }
}

/// Checks the family invariants against `net`: disjointness, distinct
/// terminal antennas, and at most `N_v` paths through each node.
pub fn family_is_valid(net: &Network, fam: &DisjointPathFamily) -> bool {
    let mut seen = BTreeSet::new();
    for p in &fam.paths {
        if p.first() != Some(&SplitNode::Source) || p.last() != Some(&SplitNode::Sink) {
            return false;
        }
        for n in &p[1..p.len() - 1] {
            if !seen.insert(*n) {
                return false;
            }
        }
    }
    let distinct = |v: &Vec<usize>| v.iter().collect::<BTreeSet<_>>().len() == v.len();
    if !distinct(&fam.first_antennas) || !distinct(&fam.last_antennas) {
        return false;
    }
    net.nodes().all(|v| {
        let through = (0..fam.nu).filter(|&k| fam.node_route(k).contains(&v)).count();
        through <= net.antennas(v)
    })
}
