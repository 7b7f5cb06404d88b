//! Antenna-weighted directed relay networks.
//!
//! Edges are stored transmitter-first: `(tx, rx)` means node `tx` is heard by
//! node `rx`, and the channel matrix of that edge is shaped `N_rx x N_tx`.
//!
//! Links into the source and out of the destination are accepted but carry
//! no end-to-end signal: the source only transmits its own codeword and the
//! destination never forwards. Route queries (`is_layered`,
//! `longest_simple_path`) therefore look at the *route edges* only.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = u32;

/// One node entry of the network document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub id: NodeId,
    pub antennas: u32,
}

/// The on-disk network document (JSON).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDoc {
    pub nodes: Vec<NodeSpec>,
    pub edges: Vec<[NodeId; 2]>,
    pub source: NodeId,
    pub destination: NodeId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub senders: Option<Vec<NodeId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub destinations: Option<Vec<NodeId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    antennas: BTreeMap<NodeId, usize>,
    edges: BTreeSet<(NodeId, NodeId)>,
    source: NodeId,
    destination: NodeId,
    senders: Option<Vec<NodeId>>,
    destinations: Option<Vec<NodeId>>,
    succ: BTreeMap<NodeId, Vec<NodeId>>,
    pred: BTreeMap<NodeId, Vec<NodeId>>,
}

/// A source/destination partition `S` of the node set and its weight
/// `sum N_tx * N_rx` over edges leaving `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutSet {
    pub members: BTreeSet<NodeId>,
    pub weight: u64,
}

/// A vertex cut-set and its capacity `sum N_v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexCut {
    pub members: BTreeSet<NodeId>,
    pub capacity: u64,
}

/// Parse and validate a JSON network document.
pub fn parse_network(text: &str) -> Result<Network> {
    let doc: NetworkDoc = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    Network::from_document(&doc)
}

impl Network {
    pub fn new(
        nodes: impl IntoIterator<Item = (NodeId, u32)>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
        source: NodeId,
        destination: NodeId,
    ) -> Result<Self> {
        let mut antennas = BTreeMap::new();
        for (id, n) in nodes {
            if n < 1 {
                return Err(Error::AntennaCount { node: id, antennas: n });
            }
            if antennas.insert(id, n as usize).is_some() {
                return Err(Error::DuplicateNode(id));
            }
        }
        let mut edge_set = BTreeSet::new();
        for (tx, rx) in edges {
            for end in [tx, rx] {
                if !antennas.contains_key(&end) {
                    return Err(Error::UnknownNode { tx, rx, missing: end });
                }
            }
            if tx == rx {
                return Err(Error::SelfLoop(tx));
            }
            if !edge_set.insert((tx, rx)) {
                return Err(Error::DuplicateEdge(tx, rx));
            }
        }
        for end in [source, destination] {
            if !antennas.contains_key(&end) {
                return Err(Error::UndeclaredNode(end));
            }
        }
        if source == destination {
            return Err(Error::Schema("source and destination must differ".into()));
        }

        let mut succ: BTreeMap<NodeId, Vec<NodeId>> = antennas.keys().map(|&v| (v, vec![])).collect();
        let mut pred = succ.clone();
        for &(tx, rx) in &edge_set {
            succ.get_mut(&tx).unwrap().push(rx);
            pred.get_mut(&rx).unwrap().push(tx);
        }

        let net = Network {
            antennas,
            edges: edge_set,
            source,
            destination,
            senders: None,
            destinations: None,
            succ,
            pred,
        };
        if !net.reaches(&[source], destination, &BTreeSet::new()) {
            return Err(Error::Unreachable { from: source, to: destination });
        }
        Ok(net)
    }

    pub fn from_document(doc: &NetworkDoc) -> Result<Self> {
        let net = Network::new(
            doc.nodes.iter().map(|n| (n.id, n.antennas)),
            doc.edges.iter().map(|e| (e[0], e[1])),
            doc.source,
            doc.destination,
        )?;
        let net = match &doc.senders {
            Some(s) => net.with_senders(s.clone())?,
            None => net,
        };
        match &doc.destinations {
            Some(d) => net.with_destinations(d.clone()),
            None => Ok(net),
        }
    }

    /// Attach the sender list used by the multi-access region.
    pub fn with_senders(mut self, senders: Vec<NodeId>) -> Result<Self> {
        for &s in &senders {
            if !self.antennas.contains_key(&s) {
                return Err(Error::UndeclaredNode(s));
            }
        }
        self.senders = Some(senders);
        Ok(self)
    }

    /// Attach the destination list used by multicast.
    pub fn with_destinations(mut self, destinations: Vec<NodeId>) -> Result<Self> {
        for &d in &destinations {
            if !self.antennas.contains_key(&d) {
                return Err(Error::UndeclaredNode(d));
            }
        }
        self.destinations = Some(destinations);
        Ok(self)
    }

    /// Same graph with a different source/destination pair.
    pub fn with_terminals(&self, source: NodeId, destination: NodeId) -> Result<Self> {
        Network::new(
            self.antennas.iter().map(|(&v, &n)| (v, n as u32)),
            self.edges.iter().copied(),
            source,
            destination,
        )
    }

    pub fn to_document(&self) -> NetworkDoc {
        NetworkDoc {
            nodes: self
                .antennas
                .iter()
                .map(|(&id, &n)| NodeSpec { id, antennas: n as u32 })
                .collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            source: self.source,
            destination: self.destination,
            senders: self.senders.clone(),
            destinations: self.destinations.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("network document serializes")
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn destination(&self) -> NodeId {
        self.destination
    }

    pub fn senders(&self) -> Option<&[NodeId]> {
        self.senders.as_deref()
    }

    pub fn destinations(&self) -> Option<&[NodeId]> {
        self.destinations.as_deref()
    }

    /// Antenna count of `v`. Panics if `v` is not a node.
    pub fn antennas(&self, v: NodeId) -> usize {
        self.antennas[&v]
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.antennas.contains_key(&v)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.antennas.keys().copied()
    }

    pub fn node_count(&self) -> usize {
        self.antennas.len()
    }

    /// Number of relays `K`.
    pub fn relay_count(&self) -> usize {
        self.antennas.len() - 2
    }

    pub fn relays(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes().filter(move |&v| v != self.source && v != self.destination)
    }

    pub fn is_relay(&self, v: NodeId) -> bool {
        self.contains(v) && v != self.source && v != self.destination
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, tx: NodeId, rx: NodeId) -> bool {
        self.edges.contains(&(tx, rx))
    }

    pub fn successors(&self, v: NodeId) -> &[NodeId] {
        &self.succ[&v]
    }

    pub fn predecessors(&self, v: NodeId) -> &[NodeId] {
        &self.pred[&v]
    }

    /// Edges that can carry source signal toward the destination: everything
    /// except links into the source and links out of the destination.
    pub fn is_route_edge(&self, tx: NodeId, rx: NodeId) -> bool {
        rx != self.source && tx != self.destination
    }

    /// Is `target` reachable from any node of `starts` without entering `removed`?
    pub fn reaches(&self, starts: &[NodeId], target: NodeId, removed: &BTreeSet<NodeId>) -> bool {
        let mut seen: BTreeSet<NodeId> = BTreeSet::new();
        let mut queue: VecDeque<NodeId> = VecDeque::new();
        for &s in starts {
            if !removed.contains(&s) && seen.insert(s) {
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            if u == target {
                return true;
            }
            for &w in self.successors(u) {
                if !removed.contains(&w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        false
    }

    /// Cut-set weight `w_G(S)`: sum of `N_tx * N_rx` over edges leaving `S`.
    pub fn edge_cut_weight(&self, members: &BTreeSet<NodeId>) -> Result<CutSet> {
        if !members.contains(&self.source) {
            return Err(Error::InvalidCut("source must belong to S".into()));
        }
        if members.contains(&self.destination) {
            return Err(Error::InvalidCut("destination must not belong to S".into()));
        }
        if let Some(&v) = members.iter().find(|v| !self.contains(**v)) {
            return Err(Error::UndeclaredNode(v));
        }
        let weight = self
            .edges()
            .filter(|(a, b)| members.contains(a) && !members.contains(b))
            .map(|(a, b)| (self.antennas(a) * self.antennas(b)) as u64)
            .sum();
        Ok(CutSet { members: members.clone(), weight })
    }

    /// Does every source-to-destination path meet `cut`? Sets containing the
    /// source or the destination are always vertex cuts.
    pub fn is_vertex_cut(&self, cut: &BTreeSet<NodeId>) -> bool {
        self.is_vertex_cut_between(&[self.source], self.destination, cut)
    }

    /// Multi-terminal variant: does `cut` separate every node of `sources`
    /// from `destination`?
    pub fn is_vertex_cut_between(
        &self,
        sources: &[NodeId],
        destination: NodeId,
        cut: &BTreeSet<NodeId>,
    ) -> bool {
        if cut.contains(&destination) {
            return true;
        }
        !self.reaches(sources, destination, cut)
    }

    /// Capacity `c_G(C) = sum N_v`.
    pub fn vertex_cut_capacity(&self, cut: &BTreeSet<NodeId>) -> u64 {
        cut.iter().map(|&v| self.antennas(v) as u64).sum()
    }

    fn route_reach(&self, from: NodeId, forward: bool) -> BTreeSet<NodeId> {
        let mut seen = BTreeSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            let next = if forward { self.successors(u) } else { self.predecessors(u) };
            for &w in next {
                let ok = if forward { self.is_route_edge(u, w) } else { self.is_route_edge(w, u) };
                if ok && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Nodes lying on some source-to-destination route.
    pub fn route_nodes(&self) -> BTreeSet<NodeId> {
        let fwd = self.route_reach(self.source, true);
        let bwd = self.route_reach(self.destination, false);
        fwd.intersection(&bwd).copied().collect()
    }

    /// Common edge count of all source-to-destination routes, or `None` when
    /// routes of different lengths exist.
    ///
    /// A level function is grown from the source over route edges between
    /// route nodes; the network is layered iff every such edge climbs exactly
    /// one level. This also rejects cycles on a route, whose walks would give
    /// the amplify-forward channel more than one delay.
    pub fn layer_depth(&self) -> Option<usize> {
        let useful = self.route_nodes();
        let mut level: BTreeMap<NodeId, usize> = BTreeMap::from([(self.source, 0)]);
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            let lu = level[&u];
            for &w in self.successors(u) {
                if !useful.contains(&w) || !self.is_route_edge(u, w) {
                    continue;
                }
                match level.get(&w) {
                    Some(&lw) if lw != lu + 1 => return None,
                    Some(_) => {}
                    None => {
                        level.insert(w, lu + 1);
                        queue.push_back(w);
                    }
                }
            }
        }
        level.get(&self.destination).copied()
    }

    /// True iff every source-to-destination path has the same edge count.
    pub fn is_layered(&self) -> bool {
        self.layer_depth().is_some()
    }

    /// Longest simple source-to-destination path, in edges (`l_G`).
    /// Exhaustive search; refuses networks with more than `node_cap` nodes.
    pub fn longest_simple_path(&self, node_cap: usize) -> Result<usize> {
        if self.node_count() > node_cap {
            return Err(Error::PathSearchCap { nodes: self.node_count(), cap: node_cap });
        }
        let useful = self.route_nodes();
        let mut on_path = BTreeSet::from([self.source]);
        let mut best = 0;
        self.longest_from(self.source, 0, &useful, &mut on_path, &mut best);
        Ok(best)
    }

    fn longest_from(
        &self,
        u: NodeId,
        depth: usize,
        useful: &BTreeSet<NodeId>,
        on_path: &mut BTreeSet<NodeId>,
        best: &mut usize,
    ) {
        if u == self.destination {
            *best = (*best).max(depth);
            return;
        }
        for &w in self.successors(u) {
            if useful.contains(&w) && self.is_route_edge(u, w) && on_path.insert(w) {
                self.longest_from(w, depth + 1, useful, on_path, best);
                on_path.remove(&w);
            }
        }
    }
}
