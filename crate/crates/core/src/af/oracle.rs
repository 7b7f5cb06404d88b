//! Entry-by-entry equivalent channel by explicit walk enumeration on the
//! split graph. Exponential; meant for cross-checking the recursion.

use std::collections::BTreeSet;

use num_complex::Complex64;

use super::channel::ChannelRealization;
use super::config::{AFConfig, BlockMode};
use super::active_relays;
use crate::error::{Error, Result};
use crate::mincut::{split_graph, EdgeKind, SplitGraph, SplitNode, SOURCE};
use crate::network::{Network, NodeId};

/// Cap on DFS expansions per oracle call.
pub const DEFAULT_ORACLE_CAP: usize = 5_000_000;

/// `H((t2, n2), (t1, n1))`: the sum over split-graph walks of length
/// `3 + 2d` from the super source through `Tx(src, n1)` to `Rx(dst, n2)`
/// and the super sink, where `d` is the delay of the block. Each walk is
/// weighted by the product of channel entries on its outer edges and by
/// `g^d`; walks through inactive relays weigh zero. Antennas are 0-based.
pub fn path_weight_oracle(
    real: &ChannelRealization,
    net: &Network,
    cfg: &AFConfig,
    t1: usize,
    n1: usize,
    t2: usize,
    n2: usize,
) -> Result<Complex64> {
    path_weight_oracle_capped(real, net, cfg, (t1, n1), (t2, n2), DEFAULT_ORACLE_CAP)
}

pub fn path_weight_oracle_capped(
    real: &ChannelRealization,
    net: &Network,
    cfg: &AFConfig,
    (t1, n1): (usize, usize),
    (t2, n2): (usize, usize),
    cap: usize,
) -> Result<Complex64> {
    let (src, dst) = (net.source(), net.destination());
    if n1 >= net.antennas(src) || n2 >= net.antennas(dst) || t1 >= cfg.time_slots || t2 >= cfg.time_slots {
        return Err(Error::Config(format!("index ({t2}, {n2}), ({t1}, {n1}) outside the equivalent channel")));
    }
    if t2 < t1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let offset = match cfg.block {
        BlockMode::Causal => 0,
        BlockMode::Layered => net.layer_depth().ok_or(Error::NotLayered)? - 1,
    };
    let delay = offset + t2 - t1;
    let g = split_graph(net);
    let start = g.index_of(SplitNode::Tx { node: src, antenna: n1 }).expect("source transmit antenna");
    let end = g.index_of(SplitNode::Rx { node: dst, antenna: n2 }).expect("destination receive antenna");
    let mut walk = Walk {
        g: &g,
        real,
        active: active_relays(real, net, cfg),
        end,
        expansions: 0,
        cap,
        total: Complex64::new(0.0, 0.0),
    };
    // super source -> Tx(src, n1), then 2d + 1 edges, then Rx(dst, n2) -> sink
    walk.visit(start, 2 * delay + 1, Complex64::new(1.0, 0.0))?;
    debug_assert!(g.out_edges(SOURCE).len() == net.antennas(src));
    Ok(walk.total * cfg.gain.powi(delay as i32))
}

struct Walk<'a> {
    g: &'a SplitGraph,
    real: &'a ChannelRealization,
    active: BTreeSet<NodeId>,
    end: usize,
    expansions: usize,
    cap: usize,
    total: Complex64,
}

impl Walk<'_> {
    fn visit(&mut self, at: usize, remaining: usize, weight: Complex64) -> Result<()> {
        self.expansions += 1;
        if self.expansions > self.cap {
            return Err(Error::EnumerationCap(self.cap));
        }
        if remaining == 0 {
            if at == self.end {
                self.total += weight;
            }
            return Ok(());
        }
        for &e in self.g.out_edges(at) {
            let edge = &self.g.edges()[e];
            let w = match edge.kind {
                EdgeKind::Outer => {
                    let (SplitNode::Tx { node: u, antenna: j1 }, SplitNode::Rx { node: v, antenna: j2 }) =
                        (self.g.node(edge.from), self.g.node(edge.to))
                    else {
                        unreachable!("outer edges run Tx -> Rx")
                    };
                    let h = self.real.get(u, v).expect("realization covers every edge")[(j2, j1)];
                    weight * h
                }
                EdgeKind::Inner => {
                    let v = self.g.node(edge.from).node().expect("relay");
                    if !self.active.contains(&v) {
                        continue;
                    }
                    weight
                }
                EdgeKind::SourceTerminal | EdgeKind::SinkTerminal => continue,
            };
            self.visit(edge.to, remaining - 1, w)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::af::{equivalent_channel, sample_channels};
    use crate::mincut::tests::arb_digraph;
    use crate::network::fixtures::*;
    use proptest::prelude::*;
    use proptest::test_runner::{Config, TestRunner};

    #[test]
    fn chain_entries() {
        let net = chain(4, 2, 4);
        let real = sample_channels(&net, 12);
        let cfg = AFConfig::new(1e6, 2).unwrap();
        assert_eq!(path_weight_oracle(&real, &net, &cfg, 0, 1, 0, 2).unwrap(), Complex64::new(0.0, 0.0));
        let (a, b) = (real.get(0, 1).unwrap(), real.get(1, 2).unwrap());
        let expect = (b.row(2) * a.column(1))[(0, 0)] * cfg.gain;
        let got = path_weight_oracle(&real, &net, &cfg, 0, 1, 1, 2).unwrap();
        if crate::af::relay_active(&real, &net, 1, &cfg).unwrap() {
            assert!((got - expect).norm() < 1e-12);
        } else {
            assert_eq!(got, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let net = two_route();
        let real = sample_channels(&net, 1);
        let cfg = AFConfig::new(10.0, 4).unwrap().with_threshold(1e12).unwrap();
        let r = path_weight_oracle_capped(&real, &net, &cfg, (0, 0), (3, 0), 10);
        assert!(matches!(r, Err(Error::EnumerationCap(10))));
    }

    #[test]
    fn oracle_matches_recursion_on_random_networks() {
        let mut runner = TestRunner::new(Config { cases: 100, ..Config::default() });
        let strategy = (arb_digraph(5, 3), 1usize..=4, any::<u64>(), 2.0f64..60.0);
        runner
            .run(&strategy, |(net, t, seed, db)| {
                let real = sample_channels(&net, seed);
                let mut cfg = AFConfig::from_db(db, t).unwrap().with_gain(0.9).unwrap();
                if seed % 2 == 0 {
                    // everyone on, so long walks actually contribute
                    cfg = cfg.with_threshold(f64::MAX).unwrap();
                }
                let eq = equivalent_channel(&real, &net, &cfg).unwrap();
                let (ns, nd) = (net.antennas(net.source()), net.antennas(net.destination()));
                for t2 in 0..t {
                    for t1 in 0..t {
                        for n2 in 0..nd {
                            for n1 in 0..ns {
                                let o = path_weight_oracle(&real, &net, &cfg, t1, n1, t2, n2).unwrap();
                                let h = eq.block[(t2 * nd + n2, t1 * ns + n1)];
                                prop_assert!((o - h).norm() <= 1e-9, "{o} vs {h}");
                            }
                        }
                    }
                }
                Ok(())
            })
            .unwrap();
    }

    #[test]
    fn nonzero_delay_needs_a_route_of_that_length() {
        let mut runner = TestRunner::new(Config { cases: 100, ..Config::default() });
        runner
            .run(&(arb_digraph(6, 2), any::<u64>()), |(net, seed)| {
                let real = sample_channels(&net, seed);
                let cfg = AFConfig::new(1e9, 5).unwrap();
                let eq = equivalent_channel(&real, &net, &cfg).unwrap();
                for d in 0..5 {
                    if eq.delay(d).iter().any(|z| z.norm() > 0.0) {
                        prop_assert!(has_walk(&net, d + 1));
                    }
                }
                Ok(())
            })
            .unwrap();
    }

    /// Source-to-destination walk with exactly `len` edges avoiding the
    /// terminals in between.
    fn has_walk(net: &Network, len: usize) -> bool {
        let mut frontier: BTreeSet<NodeId> = BTreeSet::from([net.source()]);
        for step in 0..len {
            frontier = frontier
                .iter()
                .flat_map(|&u| net.successors(u).iter().copied())
                .filter(|&w| if step + 1 == len { w == net.destination() } else { net.is_relay(w) })
                .collect();
        }
        !frontier.is_empty()
    }
}
