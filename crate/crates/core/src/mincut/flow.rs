//! Dinic max flow on the split graph.

use std::collections::VecDeque;

use super::split::{SplitGraph, SINK, SOURCE};

/// Integral maximum `s`-`t` flow.
#[derive(Debug, Clone)]
pub struct MaxFlow {
    pub value: u64,
    /// Flow on each split-graph edge, indexed like `SplitGraph::edges`.
    pub flow: Vec<u64>,
    /// Nodes reachable from `s` in the final residual graph (the source side
    /// of the source-minimal minimum cut).
    pub source_side: Vec<bool>,
}

struct Arc {
    to: usize,
    cap: u64,
}

struct Residual {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn from_split(g: &SplitGraph) -> Self {
        let mut r = Residual { arcs: Vec::with_capacity(2 * g.edges().len()), adj: vec![vec![]; g.node_count()] };
        for (i, e) in g.edges().iter().enumerate() {
            r.adj[e.from].push(r.arcs.len());
            r.arcs.push(Arc { to: e.to, cap: g.capacity(i) });
            r.adj[e.to].push(r.arcs.len());
            r.arcs.push(Arc { to: e.from, cap: 0 });
        }
        r
    }

    fn levels(&self, s: usize) -> Vec<Option<usize>> {
        let mut level = vec![None; self.adj.len()];
        level[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let lu = level[u].unwrap();
            for &a in &self.adj[u] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && level[arc.to].is_none() {
                    level[arc.to] = Some(lu + 1);
                    queue.push_back(arc.to);
                }
            }
        }
        level
    }

    fn augment(&mut self, u: usize, t: usize, pushed: u64, level: &[Option<usize>], next: &mut [usize]) -> u64 {
        if u == t {
            return pushed;
        }
        while next[u] < self.adj[u].len() {
            let a = self.adj[u][next[u]];
            let (to, cap) = (self.arcs[a].to, self.arcs[a].cap);
            if cap > 0 && level[to] == level[u].map(|l| l + 1) {
                let got = self.augment(to, t, pushed.min(cap), level, next);
                if got > 0 {
                    self.arcs[a].cap -= got;
                    self.arcs[a ^ 1].cap += got;
                    return got;
                }
            }
            next[u] += 1;
        }
        0
    }
}

pub fn max_flow(g: &SplitGraph) -> MaxFlow {
    let mut r = Residual::from_split(g);
    let mut value = 0;
    loop {
        let level = r.levels(SOURCE);
        if level[SINK].is_none() {
            break;
        }
        let mut next = vec![0; r.adj.len()];
        loop {
            let got = r.augment(SOURCE, SINK, u64::MAX, &level, &mut next);
            if got == 0 {
                break;
            }
            value += got;
        }
    }
    let flow = (0..g.edges().len()).map(|i| r.arcs[2 * i + 1].cap).collect();
    let source_side = r.levels(SOURCE).iter().map(Option::is_some).collect();
    MaxFlow { value, flow, source_side }
}
