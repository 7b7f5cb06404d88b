use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{ClosedAddAssign, ClosedMulAssign, DMatrix, Scalar};
use num_complex::Complex64;
use num_traits::{One, Zero};

use super::channel::ChannelRealization;
use super::config::{AFConfig, BlockMode, DEFAULT_PATH_SEARCH_CAP};
use super::active_relays;
use crate::error::{Error, Result};
use crate::network::{Network, NodeId};

/// Scalars the transfer recursion runs over: `Complex64` for simulation,
/// integers and rationals for exact certificates.
pub trait TransferScalar: Scalar + Zero + One + ClosedAddAssign + ClosedMulAssign {}

impl<T: Scalar + Zero + One + ClosedAddAssign + ClosedMulAssign> TransferScalar for T {}

/// End-to-end channel over a block of `time_slots` source uses.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentChannel<S: Scalar = Complex64> {
    /// `H_d` for `d = 0 ..= offset + time_slots - 1`, each `N_dst x N_src`.
    pub delay_matrices: Vec<DMatrix<S>>,
    /// Block `(t2, t1)` is `H_{offset + t2 - t1}`, zero above the diagonal.
    pub block: DMatrix<S>,
    pub time_slots: usize,
    /// Relay hops the destination window lags the source by.
    pub offset: usize,
    /// Edge count of the longest simple path in the network.
    pub longest_path: usize,
}

impl<S: Scalar> EquivalentChannel<S> {
    pub fn delay(&self, d: usize) -> &DMatrix<S> {
        &self.delay_matrices[d]
    }

    /// Block `(t2, t1)` as a view.
    pub fn block_at(&self, t2: usize, t1: usize) -> DMatrix<S> {
        let (r, c) = (self.delay_matrices[0].nrows(), self.delay_matrices[0].ncols());
        self.block.view((t2 * r, t1 * c), (r, c)).into_owned()
    }
}

/// Window layout for a given network and mode, independent of the channel
/// draw. Computing it once lets Monte Carlo loops skip the path search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransferPlan {
    pub time_slots: usize,
    pub offset: usize,
    pub longest_path: usize,
}

impl TransferPlan {
    pub fn new(net: &Network, time_slots: usize, mode: BlockMode) -> Result<Self> {
        let longest_path = net.longest_simple_path(DEFAULT_PATH_SEARCH_CAP)?;
        let offset = match mode {
            BlockMode::Causal => 0,
            BlockMode::Layered => net.layer_depth().ok_or(Error::NotLayered)? - 1,
        };
        Ok(TransferPlan { time_slots, offset, longest_path })
    }

    /// Number of delay matrices the window touches.
    pub fn delays(&self) -> usize {
        self.offset + self.time_slots
    }
}

/// Destination readouts `out_0 .. out_{steps-1}` after node `inject`
/// transmits `init` at relative slot 0 and nothing else is injected.
///
/// Every active relay forwards `gain` times what it received in the
/// previous slot; the source and inactive relays stay silent afterwards.
pub(crate) fn propagate<S: TransferScalar>(
    real: &ChannelRealization<S>,
    net: &Network,
    gain: &S,
    active: &BTreeSet<NodeId>,
    inject: NodeId,
    init: DMatrix<S>,
    steps: usize,
) -> Vec<DMatrix<S>> {
    let width = init.ncols();
    let dst = net.destination();
    let mut state: BTreeMap<NodeId, DMatrix<S>> = BTreeMap::from([(inject, init)]);
    let mut outputs = Vec::with_capacity(steps);
    for _ in 0..steps {
        let mut received: BTreeMap<NodeId, DMatrix<S>> = BTreeMap::new();
        for (&u, x) in &state {
            if u == dst {
                continue;
            }
            for &w in net.successors(u) {
                if w == net.source() {
                    continue;
                }
                let h = real.get(u, w).expect("realization covers every edge");
                let y = h * x;
                match received.get_mut(&w) {
                    Some(acc) => *acc += y,
                    None => {
                        received.insert(w, y);
                    }
                }
            }
        }
        outputs.push(received.remove(&dst).unwrap_or_else(|| DMatrix::zeros(net.antennas(dst), width)));
        state = received
            .into_iter()
            .filter(|(w, _)| active.contains(w))
            .map(|(w, r)| (w, r * gain.clone()))
            .collect();
    }
    outputs
}

/// Lay delay matrices out as the `T x T` block-Toeplitz window.
pub(crate) fn assemble<S: TransferScalar>(delays: &[DMatrix<S>], time_slots: usize, offset: usize) -> DMatrix<S> {
    let (r, c) = delays[0].shape();
    let mut block = DMatrix::zeros(time_slots * r, time_slots * c);
    for t2 in 0..time_slots {
        for t1 in 0..=t2 {
            block.view_mut((t2 * r, t1 * c), (r, c)).copy_from(&delays[offset + t2 - t1]);
        }
    }
    block
}

/// Equivalent channel over any scalar, given the relay gain and active set.
pub fn equivalent_channel_with<S: TransferScalar>(
    real: &ChannelRealization<S>,
    net: &Network,
    plan: &TransferPlan,
    gain: S,
    active: &BTreeSet<NodeId>,
) -> EquivalentChannel<S> {
    let src = net.source();
    let init = DMatrix::identity(net.antennas(src), net.antennas(src));
    let delay_matrices = propagate(real, net, &gain, active, src, init, plan.delays());
    let block = assemble(&delay_matrices, plan.time_slots, plan.offset);
    EquivalentChannel {
        delay_matrices,
        block,
        time_slots: plan.time_slots,
        offset: plan.offset,
        longest_path: plan.longest_path,
    }
}

/// Delay transfer matrices `H_0 .. H_{T-1}` (plus the layered offset).
/// `H_d` sums, over source-to-destination routes through `d` relays, `g^d`
/// times the ordered product of channel matrices along the route.
pub fn delay_transfer_matrices(real: &ChannelRealization, net: &Network, cfg: &AFConfig) -> Result<Vec<DMatrix<Complex64>>> {
    Ok(equivalent_channel(real, net, cfg)?.delay_matrices)
}

/// Equivalent channel under the configured gain, activation rule and window.
pub fn equivalent_channel(real: &ChannelRealization, net: &Network, cfg: &AFConfig) -> Result<EquivalentChannel> {
    if !real.matches(net) {
        return Err(Error::Schema("channel realization does not match the network".into()));
    }
    let plan = TransferPlan::new(net, cfg.time_slots, cfg.block)?;
    let active = active_relays(real, net, cfg);
    Ok(equivalent_channel_with(real, net, &plan, Complex64::new(cfg.gain, 0.0), &active))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::af::sample_channels;
    use crate::network::fixtures::*;

    fn all_active(net: &Network) -> BTreeSet<NodeId> {
        net.relays().collect()
    }

    fn close(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, tol: f64) -> bool {
        a.shape() == b.shape() && (a - b).iter().all(|z| z.norm() <= tol)
    }

    #[test]
    fn chain_has_single_delay() {
        let net = chain(4, 2, 4);
        let real = sample_channels(&net, 2);
        let g = Complex64::new(0.3, 0.0);
        let plan = TransferPlan::new(&net, 2, BlockMode::Causal).unwrap();
        let eq = equivalent_channel_with(&real, &net, &plan, g, &all_active(&net));
        let (a, b) = (real.get(0, 1).unwrap(), real.get(1, 2).unwrap());
        let gba = b * a * g;
        assert!(eq.delay(0).iter().all(|z| z.norm() == 0.0));
        assert!(close(eq.delay(1), &gba, 1e-12));
        assert_eq!(eq.block.shape(), (8, 8));
        assert!(close(&eq.block_at(1, 0), &gba, 1e-12));
        assert!(eq.block_at(0, 0).iter().chain(eq.block_at(1, 1).iter()).all(|z| z.norm() == 0.0));
        assert!(eq.block_at(0, 1).iter().all(|z| z.norm() == 0.0));
        assert_eq!(eq.longest_path, 2);
    }

    #[test]
    fn direct_link_is_h0() {
        let net = direct(2, 3);
        let real = sample_channels(&net, 2);
        let cfg = AFConfig::new(100.0, 3).unwrap();
        let d = delay_transfer_matrices(&real, &net, &cfg).unwrap();
        assert_eq!(d.len(), 3);
        assert!(close(&d[0], real.get(0, 1).unwrap(), 0.0));
        assert!(d[1].iter().chain(d[2].iter()).all(|z| z.norm() == 0.0));
    }

    #[test]
    fn diamond_sums_branches() {
        let net = diamond([2, 2, 3, 2]);
        let real = sample_channels(&net, 4);
        let g = Complex64::new(0.7, 0.0);
        let plan = TransferPlan::new(&net, 3, BlockMode::Causal).unwrap();
        let eq = equivalent_channel_with(&real, &net, &plan, g, &all_active(&net));
        let h = |u, v| real.get(u, v).unwrap();
        let expect = (h(1, 3) * h(0, 1) + h(2, 3) * h(0, 2)) * g;
        assert!(close(eq.delay(1), &expect, 1e-12));
        assert!(eq.delay(2).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn inactive_relay_transmits_zero() {
        let net = diamond([2, 2, 3, 2]);
        let real = sample_channels(&net, 4);
        let g = Complex64::new(1.0, 0.0);
        let plan = TransferPlan::new(&net, 2, BlockMode::Causal).unwrap();
        let eq = equivalent_channel_with(&real, &net, &plan, g, &BTreeSet::from([2]));
        let h = |u, v| real.get(u, v).unwrap();
        assert!(close(eq.delay(1), &(h(2, 3) * h(0, 2)), 1e-12));
    }

    #[test]
    fn layered_single_block() {
        let net = chain(4, 2, 4);
        let real = sample_channels(&net, 8);
        let cfg = AFConfig::new(1e6, 1).unwrap().with_block(BlockMode::Layered);
        let eq = equivalent_channel(&real, &net, &cfg).unwrap();
        assert_eq!(eq.block.shape(), (4, 4));
        assert_eq!(eq.offset, 1);
        let expect = real.get(1, 2).unwrap() * real.get(0, 1).unwrap() * Complex64::new(cfg.gain, 0.0);
        if crate::af::relay_active(&real, &net, 1, &cfg).unwrap() {
            assert!(close(&eq.block, &expect, 1e-9));
        }
        let cfg = cfg.with_block(BlockMode::Layered);
        assert!(matches!(equivalent_channel(&real, &two_route(), &cfg), Err(Error::Schema(_))));
        let unlayered = two_route();
        let real = sample_channels(&unlayered, 1);
        assert!(matches!(equivalent_channel(&real, &unlayered, &cfg), Err(Error::NotLayered)));
    }

    #[test]
    fn toeplitz_structure() {
        let net = two_route();
        let real = sample_channels(&net, 5);
        let plan = TransferPlan::new(&net, 4, BlockMode::Causal).unwrap();
        let eq = equivalent_channel_with(&real, &net, &plan, Complex64::new(0.5, 0.0), &all_active(&net));
        for t2 in 0..3 {
            for t1 in 0..3 {
                assert_eq!(eq.block_at(t2, t1), eq.block_at(t2 + 1, t1 + 1));
            }
        }
        // routes 0-1-4 (one relay) and 0-2-3-4 (two relays)
        assert!(eq.delay(0).iter().all(|z| z.norm() == 0.0));
        assert!(eq.delay(1).iter().any(|z| z.norm() > 0.0));
        assert!(eq.delay(2).iter().any(|z| z.norm() > 0.0));
        assert!(eq.delay(3).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn gain_factorizes_by_power_of_delay() {
        let net = two_route();
        let real = sample_channels(&net, 6);
        let plan = TransferPlan::new(&net, 4, BlockMode::Causal).unwrap();
        let act = all_active(&net);
        let base = equivalent_channel_with(&real, &net, &plan, Complex64::new(0.4, 0.0), &act);
        let c = 1.7f64;
        let scaled = equivalent_channel_with(&real, &net, &plan, Complex64::new(0.4 * c, 0.0), &act);
        for d in 0..4 {
            let expect = base.delay(d) * Complex64::new(c.powi(d as i32), 0.0);
            assert!(close(scaled.delay(d), &expect, 1e-12));
        }
    }

    #[test]
    fn doubling_one_edge_doubles_its_paths() {
        let net = two_route();
        let mut real = sample_channels(&net, 7);
        let plan = TransferPlan::new(&net, 3, BlockMode::Causal).unwrap();
        let act = all_active(&net);
        let g = Complex64::new(0.8, 0.0);
        let base = equivalent_channel_with(&real, &net, &plan, g, &act);
        let h23 = real.get(2, 3).unwrap() * Complex64::new(2.0, 0.0);
        real.insert(2, 3, h23);
        let twice = equivalent_channel_with(&real, &net, &plan, g, &act);
        // edge 2->3 lies only on the two-relay route
        assert!(close(twice.delay(1), base.delay(1), 0.0));
        assert!(close(twice.delay(2), &(base.delay(2) * Complex64::new(2.0, 0.0)), 1e-12));
    }

    #[test]
    fn exact_over_integers() {
        let net = chain(2, 2, 2);
        let mut real = ChannelRealization::<i64>::new();
        real.insert(0, 1, DMatrix::from_row_slice(2, 2, &[1, 2, 3, 4]));
        real.insert(1, 2, DMatrix::from_row_slice(2, 2, &[0, 1, 1, 0]));
        let plan = TransferPlan::new(&net, 1, BlockMode::Layered).unwrap();
        let eq = equivalent_channel_with(&real, &net, &plan, 1i64, &BTreeSet::from([1]));
        assert_eq!(eq.block, DMatrix::from_row_slice(2, 2, &[3, 4, 1, 2]));
    }
}
