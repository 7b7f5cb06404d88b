use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::channel::{ChannelRealization, CMatrix};
use super::config::AFConfig;
use super::transfer::{propagate, TransferPlan};
use super::active_relays;
use crate::error::{Error, Result};
use crate::network::{Network, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    White,
    Colored,
}

/// Covariance of the stacked destination noise over the observation window.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub covariance: CMatrix,
}

impl NoiseModel {
    pub fn white(dim: usize) -> Self {
        NoiseModel { kind: NoiseKind::White, covariance: DMatrix::identity(dim, dim) }
    }
}

/// Exact covariance of the destination's effective noise.
///
/// Destination noise contributes `I`. Unit-variance noise received by an
/// active relay in slot `tau` is forwarded (scaled by `g`) from slot
/// `tau + 1` on and reaches the destination through the same recursion as
/// the signal. Relays start the block with empty buffers, so only slots
/// inside `0 .. offset + T` matter.
pub fn noise_covariance(real: &ChannelRealization, net: &Network, cfg: &AFConfig) -> Result<NoiseModel> {
    if !real.matches(net) {
        return Err(Error::Schema("channel realization does not match the network".into()));
    }
    let plan = TransferPlan::new(net, cfg.time_slots, cfg.block)?;
    let active = active_relays(real, net, cfg);
    Ok(noise_covariance_with(real, net, &plan, cfg.gain, &active))
}

pub(crate) fn noise_covariance_with(
    real: &ChannelRealization,
    net: &Network,
    plan: &TransferPlan,
    gain: f64,
    active: &BTreeSet<NodeId>,
) -> NoiseModel {
    let n_dst = net.antennas(net.destination());
    let t = plan.time_slots;
    let horizon = plan.delays();
    let mut sigma: CMatrix = DMatrix::identity(t * n_dst, t * n_dst);
    let g = Complex64::new(gain, 0.0);
    for &v in active {
        let n_v = net.antennas(v);
        // responses[k]: destination output k slots after v transmits g * n
        let init = DMatrix::identity(n_v, n_v) * g;
        let responses = propagate(real, net, &g, active, v, init, horizon);
        if responses.iter().all(|f| f.iter().all(|z| z.norm_sqr() == 0.0)) {
            continue;
        }
        for tau in 0..horizon {
            let mut stacked: CMatrix = DMatrix::zeros(t * n_dst, n_v);
            let mut any = false;
            for w in 0..t {
                let o = plan.offset + w;
                if o > tau {
                    stacked.view_mut((w * n_dst, 0), (n_dst, n_v)).copy_from(&responses[o - tau - 1]);
                    any = true;
                }
            }
            if any {
                sigma += &stacked * stacked.adjoint();
            }
        }
    }
    NoiseModel { kind: NoiseKind::Colored, covariance: sigma }
}
