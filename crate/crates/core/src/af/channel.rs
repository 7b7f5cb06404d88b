use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::network::{Network, NodeId};

pub type CMatrix = DMatrix<Complex64>;

/// One channel matrix per network edge, keyed `(tx, rx)` and shaped
/// `N_rx x N_tx`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization<T = Complex64> {
    matrices: BTreeMap<(NodeId, NodeId), DMatrix<T>>,
}

impl<T: nalgebra::Scalar> ChannelRealization<T> {
    pub fn new() -> Self {
        ChannelRealization { matrices: BTreeMap::new() }
    }

    pub fn get(&self, tx: NodeId, rx: NodeId) -> Option<&DMatrix<T>> {
        self.matrices.get(&(tx, rx))
    }

    pub fn insert(&mut self, tx: NodeId, rx: NodeId, h: DMatrix<T>) {
        self.matrices.insert((tx, rx), h);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(NodeId, NodeId), &DMatrix<T>)> {
        self.matrices.iter()
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn map<U: nalgebra::Scalar>(&self, f: impl Fn(&T) -> U) -> ChannelRealization<U> {
        ChannelRealization {
            matrices: self.matrices.iter().map(|(k, m)| (*k, m.map(|x| f(&x)))).collect(),
        }
    }

    /// One matrix per edge with the right shape.
    pub fn matches(&self, net: &Network) -> bool {
        self.matrices.len() == net.edge_count()
            && net.edges().all(|(u, v)| {
                self.get(u, v)
                    .is_some_and(|h| h.nrows() == net.antennas(v) && h.ncols() == net.antennas(u))
            })
    }
}

impl<T: nalgebra::Scalar> Default for ChannelRealization<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Draw every channel matrix i.i.d. `CN(0, 1)`: real and imaginary parts
/// `N(0, 1/2)`. Equivalent to `sample_channels_stream(net, seed, 0)`.
pub fn sample_channels(net: &Network, seed: u64) -> ChannelRealization {
    sample_channels_stream(net, seed, 0)
}

/// Realization number `stream` of the seeded family. Streams are
/// independent ChaCha8 streams under one key, so realizations can be drawn
/// in any order or in parallel.
pub fn sample_channels_stream(net: &Network, seed: u64, stream: u64) -> ChannelRealization {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut real = ChannelRealization::new();
    for (u, v) in net.edges() {
        let h = DMatrix::from_fn(net.antennas(v), net.antennas(u), |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re * scale, im * scale)
        });
        real.insert(u, v, h);
    }
    real
}
