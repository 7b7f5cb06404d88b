//! Mutual information of the equivalent channel, Monte Carlo ergodic
//! capacity and the high-SNR slope that estimates the multiplexing gain.

use std::collections::BTreeSet;

use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::af::{
    active_relays, equivalent_channel_with, noise_covariance_with, sample_channels_stream, AFConfig, BlockMode,
    ChannelRealization, CMatrix, EquivalentChannel, NoiseKind, NoiseModel, TransferPlan,
};
use crate::error::{Error, Result};
use crate::network::{Network, NodeId};

/// Noise treatment at the destination: white ignores forwarded relay noise.
pub type Mode = NoiseKind;

/// `log2 det(A)` for Hermitian positive definite `A`.
fn log2_det(a: CMatrix) -> Option<f64> {
    Cholesky::new(a).map(|c| c.ln_determinant() / std::f64::consts::LN_2)
}

/// Per-use mutual information in bits, with power `P / N_src` per source
/// antenna.
///
/// White: `log2 det(I + (P/N_src) H H^H) / T`. Colored: the same with the
/// covariance `Sigma` in place of `I`, less `log2 det Sigma`.
pub fn mutual_information(eq: &EquivalentChannel, noise: &NoiseModel, cfg: &AFConfig) -> Result<f64> {
    let h = &eq.block;
    let t = eq.time_slots as f64;
    let n_src = (h.ncols() / eq.time_slots) as f64;
    let snr = Complex64::new(cfg.power / n_src, 0.0);
    match noise.kind {
        NoiseKind::White => {
            // the smaller Gram matrix has the same determinant
            let gram = if h.nrows() <= h.ncols() { h * h.adjoint() } else { h.adjoint() * h };
            let n = gram.nrows();
            let bits = log2_det(DMatrix::identity(n, n) + gram * snr).ok_or(Error::NotPositiveDefinite)?;
            Ok(bits.max(0.0) / t)
        }
        NoiseKind::Colored => {
            let sigma = &noise.covariance;
            if sigma.shape() != (h.nrows(), h.nrows()) {
                return Err(Error::DimensionMismatch { expected: h.nrows(), got: sigma.nrows() });
            }
            let base = log2_det(sigma.clone()).ok_or(Error::NotPositiveDefinite)?;
            let full = log2_det(sigma + h * h.adjoint() * snr).ok_or(Error::NotPositiveDefinite)?;
            Ok((full - base).max(0.0) / t)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityEstimate {
    /// Bits per network use (block value divided by `T`).
    pub mean_bits: f64,
    pub stderr: f64,
    pub samples: u64,
    pub power: f64,
    pub mode: Mode,
}

impl CapacityEstimate {
    pub fn power_db(&self) -> f64 {
        10.0 * self.power.log10()
    }
}

/// Kahan-compensated mean and standard error of the mean.
fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let kahan = |it: &mut dyn Iterator<Item = f64>| {
        let (mut sum, mut c) = (0.0f64, 0.0f64);
        for x in it {
            let y = x - c;
            let t = sum + y;
            c = (t - sum) - y;
            sum = t;
        }
        sum
    };
    if values.iter().all(|&x| x == values[0]) {
        return (values[0], 0.0);
    }
    let mean = kahan(&mut values.iter().copied()) / n;
    let ss = kahan(&mut values.iter().map(|x| (x - mean) * (x - mean)));
    (mean, (ss / (n - 1.0) / n).sqrt())
}

/// Mean mutual information over `samples` independent Rayleigh draws.
/// Realization `i` comes from stream `i` of `seed`, so estimates at
/// different powers share their channel draws.
pub fn ergodic_capacity(net: &Network, cfg: &AFConfig, samples: u64, mode: Mode, seed: u64) -> Result<CapacityEstimate> {
    ergodic_capacity_with(net, cfg, samples, mode, |i| sample_channels_stream(net, seed, i))
}

/// As [`ergodic_capacity`], with realization `i` supplied by `draw`.
pub fn ergodic_capacity_with<F>(net: &Network, cfg: &AFConfig, samples: u64, mode: Mode, draw: F) -> Result<CapacityEstimate>
where
    F: Fn(u64) -> ChannelRealization + Sync,
{
    if samples == 0 {
        return Err(Error::Config("at least one sample is required".into()));
    }
    let plan = TransferPlan::new(net, cfg.time_slots, cfg.block)?;
    let gain = Complex64::new(cfg.gain, 0.0);
    let values = (0..samples)
        .into_par_iter()
        .map(|i| {
            let real = draw(i);
            let active = active_relays(&real, net, cfg);
            let eq = equivalent_channel_with(&real, net, &plan, gain, &active);
            let noise = match mode {
                NoiseKind::White => NoiseModel::white(eq.block.nrows()),
                NoiseKind::Colored => noise_covariance_with(&real, net, &plan, cfg.gain, &active),
            };
            mutual_information(&eq, &noise, cfg)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (mean_bits, stderr) = mean_and_stderr(&values);
    Ok(CapacityEstimate { mean_bits, stderr, samples, power: cfg.power, mode })
}

/// Block length and window alignment for a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub time_slots: usize,
    pub block: BlockMode,
}

impl Window {
    /// Single aligned block for layered networks; otherwise `4 l_G` causal
    /// slots, which keeps the edge loss `nu (l_G - 1) / T` under `nu / 4`.
    pub fn default_for(net: &Network) -> Result<Self> {
        if net.is_layered() {
            Ok(Window { time_slots: 1, block: BlockMode::Layered })
        } else {
            let l = net.longest_simple_path(crate::af::DEFAULT_PATH_SEARCH_CAP)?;
            Ok(Window { time_slots: 4 * l, block: BlockMode::Causal })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeEstimate {
    /// Least-squares slope of `mean_bits` against `log2 P`.
    pub slope: f64,
    pub intercept: f64,
    /// Slope between the first and last grid points.
    pub endpoint_slope: f64,
    pub p_grid: Vec<f64>,
    pub capacities: Vec<CapacityEstimate>,
    pub window: Window,
}

/// Least-squares line `y = slope * x + intercept`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn check_grid(p_grid: &[f64]) -> Result<()> {
    if p_grid.len() < 2 {
        return Err(Error::Sweep("a slope needs at least two powers".into()));
    }
    if let Some(p) = p_grid.iter().find(|p| !p.is_finite() || **p <= 2.0) {
        return Err(Error::Sweep(format!("power {p} must exceed 2")));
    }
    if p_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Sweep("powers must be strictly increasing".into()));
    }
    Ok(())
}

/// Slope fit over capacities already estimated on an increasing grid.
pub fn slope_from(capacities: Vec<CapacityEstimate>, window: Window) -> Result<SlopeEstimate> {
    let p_grid: Vec<f64> = capacities.iter().map(|c| c.power).collect();
    check_grid(&p_grid)?;
    let xs: Vec<f64> = p_grid.iter().map(|p| p.log2()).collect();
    let ys: Vec<f64> = capacities.iter().map(|c| c.mean_bits).collect();
    let (slope, intercept) = fit_line(&xs, &ys);
    let last = xs.len() - 1;
    let endpoint_slope = (ys[last] - ys[0]) / (xs[last] - xs[0]);
    Ok(SlopeEstimate { slope, intercept, endpoint_slope, p_grid, capacities, window })
}

/// Ergodic capacity at each power of `p_grid` with common random numbers
/// across powers, and the fitted slope against `log2 P`.
pub fn mux_gain_estimate(
    net: &Network,
    p_grid: &[f64],
    samples: u64,
    mode: Mode,
    seed: u64,
    window: Window,
) -> Result<SlopeEstimate> {
    check_grid(p_grid)?;
    let capacities = p_grid
        .iter()
        .map(|&p| {
            let cfg = AFConfig::new(p, window.time_slots)?.with_block(window.block);
            ergodic_capacity(net, &cfg, samples, mode, seed)
        })
        .collect::<Result<Vec<_>>>()?;
    slope_from(capacities, window)
}

/// Fraction of draws in which every relay passes the activation test.
pub fn activation_probability(net: &Network, power: f64, samples: u64, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::Config("at least one sample is required".into()));
    }
    let cfg = AFConfig::new(power, 1)?;
    let relays: BTreeSet<NodeId> = net.relays().collect();
    let hits = (0..samples)
        .into_par_iter()
        .filter(|&i| active_relays(&sample_channels_stream(net, seed, i), net, &cfg) == relays)
        .count();
    Ok(hits as f64 / samples as f64)
}
