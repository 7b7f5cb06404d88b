//! Deterministic 0/1 channel realizations built from vertex-disjoint paths,
//! with exact rank checks on the resulting equivalent channel.

mod rank;

pub use rank::{exact_rank, exact_rank_rational};

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::af::{
    equivalent_channel_with, AFConfig, BlockMode, ChannelRealization, NoiseModel, TransferPlan,
    DEFAULT_PATH_SEARCH_CAP,
};
use crate::capacity::{fit_line, mutual_information};
use crate::error::{Error, Result};
use crate::mincut::{family_is_valid, vertex_disjoint_paths, DisjointPathFamily};
use crate::network::{Network, NodeId};

/// Entry `(j2, j1)` of `H_{u -> v}` is 1 iff some path hops from transmit
/// antenna `j1` of `u` to receive antenna `j2` of `v`; everything else is 0.
pub fn certificate_realization(net: &Network, paths: &DisjointPathFamily) -> Result<ChannelRealization<i64>> {
    if !family_is_valid(net, paths) {
        return Err(Error::InconsistentPaths("paths are not vertex-disjoint source-destination routes".into()));
    }
    let mut real = ChannelRealization::new();
    for (u, v) in net.edges() {
        real.insert(u, v, DMatrix::zeros(net.antennas(v), net.antennas(u)));
    }
    for k in 0..paths.nu {
        for hop in paths.outer_hops(k) {
            let mut h = real
                .get(hop.tx, hop.rx)
                .cloned()
                .ok_or_else(|| Error::InconsistentPaths(format!("no edge {} -> {}", hop.tx, hop.rx)))?;
            h[(hop.rx_antenna, hop.tx_antenna)] = 1;
            real.insert(hop.tx, hop.rx, h);
        }
    }
    Ok(real)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankCertificate {
    pub nu: usize,
    pub rank: usize,
    /// `nu` for layered networks, `nu (T - l_G + 1)` otherwise.
    pub bound: usize,
    pub layered: bool,
    #[serde(rename = "T")]
    pub time_slots: Option<usize>,
    #[serde(rename = "l_G")]
    pub longest_path: usize,
    pub pass: bool,
    #[serde(skip)]
    pub expected_rank: usize,
    #[serde(skip)]
    pub realization: ChannelRealization<i64>,
    #[serde(skip)]
    pub channel: DMatrix<i64>,
}

/// Build the certificate realization, run it through the relay recursion
/// with unit gain and every relay active, and check the exact rank.
///
/// Layered networks use the single aligned block, whose rank must equal
/// `nu`. Otherwise the causal `T`-slot window is used: path `v` with `d_v`
/// relays contributes `T - d_v` independent entries, so the rank must be
/// `sum_v (T - d_v)`, which is at least `nu (T - l_G + 1)`.
pub fn verify_certificate(net: &Network, time_slots: usize) -> Result<RankCertificate> {
    let longest_path = net.longest_simple_path(DEFAULT_PATH_SEARCH_CAP)?;
    let layered = net.is_layered();
    if !layered && time_slots < longest_path {
        return Err(Error::TooFewSlots { time_slots, longest: longest_path });
    }
    let paths = vertex_disjoint_paths(net);
    let realization = certificate_realization(net, &paths)?;
    let (plan, t) = if layered {
        (TransferPlan::new(net, 1, BlockMode::Layered)?, None)
    } else {
        (TransferPlan::new(net, time_slots, BlockMode::Causal)?, Some(time_slots))
    };
    let active: BTreeSet<NodeId> = net.relays().collect();
    let channel = equivalent_channel_with(&realization, net, &plan, 1i64, &active).block;
    let rank = exact_rank(&channel);
    let nu = paths.nu;
    let (expected_rank, bound) = match t {
        None => (nu, nu),
        Some(t) => {
            let expected = (0..nu).map(|k| t - paths.relay_hops(k)).sum();
            (expected, nu * (t + 1 - longest_path))
        }
    };
    let pass = rank == expected_rank && rank >= bound;
    Ok(RankCertificate {
        nu,
        rank,
        bound,
        layered,
        time_slots: t,
        longest_path,
        pass,
        expected_rank,
        realization,
        channel,
    })
}

/// Mutual information of a fixed realization across a power grid, with
/// unit gain and every relay active, and its slope against `log2 P`.
pub fn deterministic_slope(
    real: &ChannelRealization,
    net: &Network,
    plan: &TransferPlan,
    p_grid: &[f64],
) -> Result<(f64, Vec<f64>)> {
    let active: BTreeSet<NodeId> = net.relays().collect();
    let eq = equivalent_channel_with(real, net, plan, Complex64::new(1.0, 0.0), &active);
    let noise = NoiseModel::white(eq.block.nrows());
    let bits = p_grid
        .iter()
        .map(|&p| mutual_information(&eq, &noise, &AFConfig::new(p, plan.time_slots)?))
        .collect::<Result<Vec<f64>>>()?;
    let xs: Vec<f64> = p_grid.iter().map(|p| p.log2()).collect();
    Ok((fit_line(&xs, &bits).0, bits))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankGainReport {
    pub nu: usize,
    pub rank: usize,
    /// Rank divided by the block length.
    pub rank_per_use: f64,
    pub slope: f64,
    pub p_grid: Vec<f64>,
    pub bits: Vec<f64>,
    pub layered: bool,
    pub time_slots: usize,
}

/// Compare the exact certificate rank with the slope of its mutual
/// information. Each unit singular value adds `log2(1 + P / N_src)`, so the
/// per-use slope tracks `rank / T`.
pub fn rank_gain_link(net: &Network, time_slots: usize, p_grid: &[f64]) -> Result<RankGainReport> {
    let cert = verify_certificate(net, time_slots)?;
    let plan = if cert.layered {
        TransferPlan::new(net, 1, BlockMode::Layered)?
    } else {
        TransferPlan::new(net, time_slots, BlockMode::Causal)?
    };
    let real = cert.realization.map(|&x| Complex64::new(x as f64, 0.0));
    let (slope, bits) = deterministic_slope(&real, net, &plan, p_grid)?;
    Ok(RankGainReport {
        nu: cert.nu,
        rank: cert.rank,
        rank_per_use: cert.rank as f64 / plan.time_slots as f64,
        slope,
        p_grid: p_grid.to_vec(),
        bits,
        layered: cert.layered,
        time_slots: plan.time_slots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mincut::multiplexing_gain;
    use crate::network::fixtures::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    #[test]
    fn chain_certificate() {
        let net = chain(4, 2, 4);
        let paths = vertex_disjoint_paths(&net);
        let real = certificate_realization(&net, &paths).unwrap();
        let a = real.get(0, 1).unwrap();
        let b = real.get(1, 2).unwrap();
        assert_eq!(a.iter().sum::<i64>(), 2);
        assert_eq!(b.iter().sum::<i64>(), 2);
        assert_eq!((a[(0, 0)], a[(1, 1)]), (1, 1));
        assert_eq!((b[(0, 0)], b[(1, 1)]), (1, 1));
        let cert = verify_certificate(&net, 1).unwrap();
        assert_eq!((cert.nu, cert.rank, cert.layered, cert.pass), (2, 2, true, true));
        assert_eq!(exact_rank(&cert.channel), 2);
    }

    #[test]
    fn direct_certificate() {
        let net = direct(2, 3);
        let real = certificate_realization(&net, &vertex_disjoint_paths(&net)).unwrap();
        let h = real.get(0, 1).unwrap();
        assert_eq!(h.iter().sum::<i64>(), 2);
        assert!(h.row_iter().all(|r| r.sum() <= 1) && h.column_iter().all(|c| c.sum() <= 1));
        let cert = verify_certificate(&net, 1).unwrap();
        assert_eq!((cert.nu, cert.rank, cert.pass), (2, 2, true));
    }

    #[test]
    fn two_route_certificate() {
        let net = two_route();
        let real = certificate_realization(&net, &vertex_disjoint_paths(&net)).unwrap();
        for (_, h) in real.iter() {
            assert!(h.row_iter().all(|r| r.sum() <= 1) && h.column_iter().all(|c| c.sum() <= 1));
        }
        // cut {1, 2}: 3 + 2 ones leave the source
        assert_eq!(real.get(0, 1).unwrap().iter().sum::<i64>() + real.get(0, 2).unwrap().iter().sum::<i64>(), 5);
        assert_eq!(real.get(1, 4).unwrap().iter().sum::<i64>() + real.get(3, 4).unwrap().iter().sum::<i64>(), 5);
        let cert = verify_certificate(&net, 10).unwrap();
        assert!(!cert.layered);
        assert_eq!((cert.nu, cert.longest_path, cert.bound), (5, 3, 40));
        // 3 paths through one relay, 2 through two
        assert_eq!(cert.rank, 3 * 9 + 2 * 8);
        assert!(cert.pass);
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(json["T"], 10);
        assert_eq!(json["l_G"], 3);
        assert_eq!(json.as_object().unwrap().len(), 7);
    }

    #[test]
    fn too_few_slots() {
        assert!(matches!(verify_certificate(&two_route(), 2), Err(Error::TooFewSlots { time_slots: 2, longest: 3 })));
        assert!(verify_certificate(&two_route(), 3).unwrap().pass);
    }

    #[test]
    fn rejects_foreign_paths() {
        let mut paths = vertex_disjoint_paths(&two_route());
        paths.paths.swap(0, 1);
        paths.paths[0].reverse();
        assert!(matches!(certificate_realization(&two_route(), &paths), Err(Error::InconsistentPaths(_))));
    }

    #[test]
    fn slopes_track_rank() {
        let grid = [1e3, 1e6, 1e9];
        let r = rank_gain_link(&chain(4, 2, 4), 1, &grid).unwrap();
        assert!((1.9..=2.1).contains(&r.slope), "{}", r.slope);
        let r = rank_gain_link(&two_route(), 100, &grid).unwrap();
        assert!((4.9..=5.1).contains(&r.slope), "{r:?}");
        assert!((r.rank_per_use - 4.93).abs() < 1e-12);
    }

    #[test]
    fn zero_realization_has_flat_slope() {
        let net = chain(2, 2, 2);
        let plan = TransferPlan::new(&net, 1, BlockMode::Layered).unwrap();
        let zero = crate::af::sample_channels(&net, 0).map(|_| Complex64::new(0.0, 0.0));
        let (slope, bits) = deterministic_slope(&zero, &net, &plan, &[10.0, 1e3, 1e5]).unwrap();
        assert_eq!(slope, 0.0);
        assert!(bits.iter().all(|&b| b == 0.0));
    }

    /// Layered DAG: source, 1-3 relay layers of width 1-3, destination;
    /// random edges between consecutive layers only.
    fn arb_layered() -> impl Strategy<Value = Network> {
        (1usize..=3, proptest::collection::vec(1usize..=3, 3), proptest::collection::vec(1u32..=3, 11), any::<u64>())
            .prop_filter_map("needs a path", |(depth, widths, ants, bits)| {
                let mut layers: Vec<Vec<NodeId>> = vec![vec![0]];
                let mut next = 1;
                for &w in &widths[..depth] {
                    layers.push((next..next + w as NodeId).collect());
                    next += w as NodeId;
                }
                layers.push(vec![next]);
                let mut edges = vec![];
                let mut bit = 0;
                for pair in layers.windows(2) {
                    for &u in &pair[0] {
                        for &v in &pair[1] {
                            if bits >> (bit % 64) & 1 == 1 || pair[1].len() == 1 {
                                edges.push((u, v));
                            }
                            bit += 1;
                        }
                    }
                }
                let nodes: Vec<(NodeId, u32)> = (0..=next).map(|v| (v, ants[v as usize])).collect();
                let net = Network::new(nodes, edges, 0, next).ok()?;
                net.is_layered().then_some(net)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn layered_rank_equals_gain(net in arb_layered()) {
            let cert = verify_certificate(&net, 1).unwrap();
            prop_assert!(cert.layered && cert.pass);
            prop_assert_eq!(cert.rank, cert.nu);
            prop_assert_eq!(cert.nu as u64, multiplexing_gain(&net));
            for (_, h) in cert.realization.iter() {
                prop_assert!(h.row_iter().all(|r| r.sum() <= 1) && h.column_iter().all(|c| c.sum() <= 1));
            }
        }

        #[test]
        fn unit_gain_scaling_keeps_rank(net in arb_layered(), t in 1usize..4) {
            let paths = vertex_disjoint_paths(&net);
            let real = certificate_realization(&net, &paths).unwrap();
            let rational = real.map(|&x| BigRational::from_integer(x.into()));
            let plan = TransferPlan::new(&net, t, BlockMode::Causal).unwrap();
            let active: BTreeSet<NodeId> = net.relays().collect();
            let ranks: Vec<usize> = [(1, 1), (1, 2), (2, 1)]
                .iter()
                .map(|&(n, d)| {
                    let g = BigRational::new(n.into(), d.into());
                    exact_rank_rational(&equivalent_channel_with(&rational, &net, &plan, g, &active).block)
                })
                .collect();
            prop_assert!(ranks.iter().all(|&r| r == ranks[0]), "{:?}", ranks);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn general_rank_bound(net in crate::mincut::tests::arb_digraph(6, 3).prop_filter("unlayered", |n| !n.is_layered())) {
            let l = net.longest_simple_path(20).unwrap();
            for t in [l, l + 3, 2 * l] {
                let cert = verify_certificate(&net, t).unwrap();
                prop_assert!(cert.pass, "{:?}", cert);
                prop_assert_eq!(cert.rank, cert.expected_rank);
                prop_assert!(cert.rank >= cert.nu * (t - l + 1));
            }
        }
    }
}
