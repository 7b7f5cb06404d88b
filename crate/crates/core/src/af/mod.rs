//! Traditional amplify-and-forward relaying over quasi-static Rayleigh
//! fading.
//!
//! Each relay scales whatever it received in slot `t` by the gain `g` and
//! retransmits it in slot `t + 1`. Per block, a relay whose received power
//! would exceed the activation threshold stays silent. The end-to-end map
//! from the source's `T` transmitted vectors to the destination's `T`
//! received vectors is block-Toeplitz: block `(t2, t1)` is the delay
//! transfer matrix `H_{t2 - t1}` (plus a fixed offset in layered mode).

mod channel;
mod config;
mod noise;
mod oracle;
mod transfer;

pub use channel::{sample_channels, sample_channels_stream, ChannelRealization, CMatrix};
pub use config::{AFConfig, BlockMode, DEFAULT_PATH_SEARCH_CAP};
pub use noise::{noise_covariance, NoiseKind, NoiseModel};
pub(crate) use noise::noise_covariance_with;
pub use oracle::{path_weight_oracle, path_weight_oracle_capped, DEFAULT_ORACLE_CAP};
pub use transfer::{
    delay_transfer_matrices, equivalent_channel, equivalent_channel_with, EquivalentChannel, TransferPlan, TransferScalar,
};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::network::{Network, NodeId};

/// Activation test for relay `v`: active iff
/// `P * sum_{(u,v) in E} ||H_{u,v}||_F^2 + N_v <= threshold`.
pub fn relay_active(real: &ChannelRealization, net: &Network, v: NodeId, cfg: &AFConfig) -> Result<bool> {
    if !net.contains(v) {
        return Err(Error::UndeclaredNode(v));
    }
    if !net.is_relay(v) {
        return Err(Error::NotRelay(v));
    }
    let incoming: f64 = net
        .predecessors(v)
        .iter()
        .map(|&u| real.get(u, v).map_or(0.0, |h| h.norm_squared()))
        .sum();
    Ok(cfg.power * incoming + net.antennas(v) as f64 <= cfg.threshold)
}

/// Relays that pass the activation test for this realization.
pub fn active_relays(real: &ChannelRealization, net: &Network, cfg: &AFConfig) -> BTreeSet<NodeId> {
    net.relays()
        .filter(|&v| relay_active(real, net, v, cfg).expect("v is a relay"))
        .collect()
}
