//! The reduced `M×M` system and broadcasting of its states onto the full network.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::network::{offsets, validate_row_regular, MultilayerNetwork, STRUCTURE_TOL};
use crate::phase::wrap_to_pi;

/// Tolerance used by [`is_broadcast_state`] callers that do not pick their own.
pub const DEFAULT_BROADCAST_TOL: f64 = 1e-8;

/// One oscillator per layer, coupled through the row sums of the inter-layer blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedNetwork {
    rbar: Matrix,
    layer_sizes: Vec<usize>,
    omega: f64,
}

impl ReducedNetwork {
    pub fn size(&self) -> usize {
        self.rbar.rows()
    }

    /// Row-sum matrix with zero diagonal.
    pub fn rbar(&self) -> &Matrix {
        &self.rbar
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// False when unequal layer sizes make `rbar` asymmetric; the stability
    /// analysis refuses such systems.
    pub fn is_symmetric(&self) -> bool {
        self.rbar.asymmetry() <= STRUCTURE_TOL
    }
}

/// Reduces a multilayer network: `rbar[l][k] = N_k·ε_lk`, zero diagonal.
pub fn reduce(net: &MultilayerNetwork) -> ReducedNetwork {
    let sizes = net.layer_sizes();
    let m = net.layer_count();
    let rbar = Matrix::from_fn(m, m, |l, k| {
        if l == k {
            0.0
        } else {
            sizes[k] as f64 * net.epsilon(l, k)
        }
    });
    ReducedNetwork {
        rbar,
        layer_sizes: sizes,
        omega: net.omega(),
    }
}

/// Reduces an externally supplied full adjacency partitioned into consecutive
/// layers of the given sizes. Every off-diagonal block must be row-regular.
pub fn reduce_adjacency(full: &Matrix, layer_sizes: &[usize], omega: f64) -> Result<ReducedNetwork> {
    let total: usize = layer_sizes.iter().sum();
    if !full.is_square() || full.rows() != total {
        return Err(Error::Dimension {
            context: "full adjacency size vs. layer sizes",
            expected: total,
            found: full.rows(),
        });
    }
    if layer_sizes.contains(&0) {
        return Err(Error::Parameter("layer sizes must be positive".into()));
    }
    let offs = offsets(layer_sizes);
    let m = layer_sizes.len();
    let mut rbar = Matrix::zeros(m, m);
    for l in 0..m {
        for k in 0..m {
            if l == k {
                continue;
            }
            let block = full.block(offs[l], offs[k], layer_sizes[l], layer_sizes[k]);
            rbar[(l, k)] = validate_row_regular(&block)?;
        }
    }
    Ok(ReducedNetwork {
        rbar,
        layer_sizes: layer_sizes.to_vec(),
        omega,
    })
}

/// Repeats each reduced phase `N_l` times, in layer order.
pub fn broadcast(theta_bar: &[f64], layer_sizes: &[usize]) -> Result<Vec<f64>> {
    if theta_bar.len() != layer_sizes.len() {
        return Err(Error::Dimension {
            context: "reduced state vs. layer count",
            expected: layer_sizes.len(),
            found: theta_bar.len(),
        });
    }
    Ok(theta_bar
        .iter()
        .zip(layer_sizes)
        .flat_map(|(&phase, &n)| std::iter::repeat_n(phase, n))
        .collect())
}

/// Result of [`is_broadcast_state`].
#[derive(Clone, Debug, PartialEq)]
pub struct BroadcastCheck {
    pub is_broadcast: bool,
    /// Per layer: max minus min of the phases, measured as wrapped offsets
    /// from the layer's first node.
    pub spreads: Vec<f64>,
}

impl BroadcastCheck {
    pub fn max_spread(&self) -> f64 {
        self.spreads.iter().copied().fold(0.0, f64::max)
    }
}

/// Checks whether a full state is constant (up to `tol`) on every layer.
pub fn is_broadcast_state(theta: &[f64], layer_sizes: &[usize], tol: f64) -> Result<BroadcastCheck> {
    let total: usize = layer_sizes.iter().sum();
    if theta.len() != total {
        return Err(Error::Dimension {
            context: "full state vs. layer sizes",
            expected: total,
            found: theta.len(),
        });
    }
    let mut spreads = Vec::with_capacity(layer_sizes.len());
    let mut start = 0;
    for &n in layer_sizes {
        let layer = &theta[start..start + n];
        start += n;
        let spread = match layer.first() {
            None => 0.0,
            Some(&anchor) => {
                let (lo, hi) = layer.iter().fold((0.0_f64, 0.0_f64), |(lo, hi), &x| {
                    let d = wrap_to_pi(x - anchor);
                    (lo.min(d), hi.max(d))
                });
                hi - lo
            }
        };
        spreads.push(spread);
    }
    Ok(BroadcastCheck {
        is_broadcast: spreads.iter().all(|&s| s <= tol),
        spreads,
    })
}

/// Phase of the first node of every layer; the inverse of [`broadcast`] on broadcast states.
pub fn layer_representatives(theta: &[f64], layer_sizes: &[usize]) -> Result<Vec<f64>> {
    let total: usize = layer_sizes.iter().sum();
    if theta.len() != total {
        return Err(Error::Dimension {
            context: "full state vs. layer sizes",
            expected: total,
            found: theta.len(),
        });
    }
    Ok(offsets(layer_sizes).into_iter().map(|o| theta[o]).collect())
}
