//! Multi-access multiplexing-gain region.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::flow::max_flow;
use super::split::SplitGraph;
use crate::error::{Error, Result};
use crate::network::{Network, NodeId};

/// Default cap on the number of senders (the region has `2^M - 1` constraints).
pub const DEFAULT_MAX_SENDERS: usize = 12;

/// `sum_{m in subset} r_m <= bound`, with `subset` holding sender indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MuxConstraint {
    pub subset: Vec<usize>,
    pub bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MuxRegion {
    pub senders: Vec<NodeId>,
    pub destination: NodeId,
    /// One constraint per nonempty subset, ordered by subset bitmask.
    pub constraints: Vec<MuxConstraint>,
}

impl MuxRegion {
    /// Bound of the subset given as a bitmask over sender indices.
    pub fn bound(&self, mask: u32) -> u64 {
        self.constraints[mask as usize - 1].bound
    }
}

/// The region `{ r : sum_{m in S} r_m <= m_G(S, t) for all nonempty S }`.
///
/// For each subset `S` the senders in `S` are merged behind a super
/// terminal (unit edges into every transmit antenna of each member) and the
/// senders outside `S` are deleted; `m_G(S, t)` is the resulting max flow.
pub fn multiaccess_region(net: &Network, senders: &[NodeId], destination: NodeId, max_senders: usize) -> Result<MuxRegion> {
    let m = senders.len();
    if m == 0 {
        return Err(Error::InvalidTerminals("multi-access needs at least one sender".into()));
    }
    if m > max_senders {
        return Err(Error::TooManySenders { count: m, cap: max_senders });
    }
    if !net.contains(destination) {
        return Err(Error::UndeclaredNode(destination));
    }
    let mut distinct = BTreeSet::new();
    for &s in senders {
        if !net.contains(s) {
            return Err(Error::UndeclaredNode(s));
        }
        if s == destination {
            return Err(Error::InvalidTerminals(format!("sender {s} is the destination")));
        }
        if !distinct.insert(s) {
            return Err(Error::InvalidTerminals(format!("sender {s} listed twice")));
        }
        if !net.reaches(&[s], destination, &BTreeSet::new()) {
            return Err(Error::Unreachable { from: s, to: destination });
        }
    }

    let constraints = (1u32..1 << m)
        .into_par_iter()
        .map(|mask| {
            let (inside, outside): (Vec<usize>, Vec<usize>) = (0..m).partition(|&i| mask >> i & 1 == 1);
            let sources: Vec<NodeId> = inside.iter().map(|&i| senders[i]).collect();
            let removed: BTreeSet<NodeId> = outside.iter().map(|&i| senders[i]).collect();
            let g = SplitGraph::build(net, &sources, destination, &removed);
            MuxConstraint { subset: inside, bound: max_flow(&g).value }
        })
        .collect();

    Ok(MuxRegion { senders: senders.to_vec(), destination, constraints })
}

/// Relative slack for the closed-region test, absorbing float rounding of
/// rate sums that sit on a facet.
const BOUNDARY_TOLERANCE: f64 = 1e-9;

pub fn region_contains(region: &MuxRegion, rates: &[f64]) -> Result<bool> {
    if rates.len() != region.senders.len() {
        return Err(Error::DimensionMismatch { expected: region.senders.len(), got: rates.len() });
    }
    if let Some(r) = rates.iter().find(|r| !r.is_finite() || **r < 0.0) {
        return Err(Error::InvalidRates(format!("rate {r} is not a nonnegative number")));
    }
    Ok(region.constraints.iter().all(|c| {
        let sum: f64 = c.subset.iter().map(|&i| rates[i]).sum();
        let bound = c.bound as f64;
        sum <= bound + BOUNDARY_TOLERANCE * bound.max(1.0)
    }))
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::mincut::brute;
    use crate::mincut::tests::arb_digraph;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bounds_monotone_subadditive_and_match_brute_force(net in arb_digraph(7, 3), pick in any::<u32>()) {
            let dest = net.destination();
            let senders: Vec<NodeId> = net
                .nodes()
                .filter(|&v| v != dest && (v == net.source() || pick >> v & 1 == 1))
                .filter(|&v| net.reaches(&[v], dest, &BTreeSet::new()))
                .take(4)
                .collect();
            let r = multiaccess_region(&net, &senders, dest, DEFAULT_MAX_SENDERS).unwrap();
            let m = senders.len();
            for mask in 1u32..1 << m {
                let inside: Vec<NodeId> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| senders[i]).collect();
                let removed: BTreeSet<NodeId> = (0..m).filter(|i| mask >> i & 1 == 0).map(|i| senders[i]).collect();
                prop_assert_eq!(r.bound(mask), brute::min_cut_capacity(&net, &inside, dest, &removed));
                let singles: u64 = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| r.bound(1 << i)).sum();
                prop_assert!(r.bound(mask) <= singles);
                for sup in 1u32..1 << m {
                    if sup & mask == mask {
                        prop_assert!(r.bound(mask) <= r.bound(sup));
                    }
                }
            }
        }
    }
}
