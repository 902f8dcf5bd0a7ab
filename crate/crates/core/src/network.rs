//! Layer graphs, multilayer networks and the block (join) adjacency.
//!
//! A multilayer network with layers `G_1..G_M` and inter-layer strengths `ε_lk`
//! has the block adjacency
//!
//! ```text
//!     | A_11      ε_12·1   ...  ε_1M·1 |
//! A = | ε_21·1    A_22     ...  ε_2M·1 |
//!     | ...                            |
//!     | ε_M1·1    ε_M2·1   ...  A_MM   |
//! ```
//!
//! where `1` is the all-ones block of the appropriate shape. Nodes are ordered
//! layer by layer.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{exact_sum, Matrix};

/// Absolute tolerance for structural checks (symmetry, regularity).
pub const STRUCTURE_TOL: f64 = 1e-12;

/// Regenerations attempted by [`make_random_connected`] before giving up.
pub const CONNECTIVITY_RETRIES: usize = 100;

/// Edge probability used for random layers when none is given.
pub const DEFAULT_EDGE_PROBABILITY: f64 = 0.1;

/// One undirected, weighted layer.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerGraph {
    label: String,
    adjacency: Matrix,
}

impl LayerGraph {
    /// Validates and wraps an adjacency matrix.
    ///
    /// The matrix must be square, finite, nonnegative, have a zero diagonal and
    /// be symmetric within [`STRUCTURE_TOL`].
    pub fn new(label: impl Into<String>, adjacency: Matrix) -> Result<Self> {
        let label = label.into();
        if !adjacency.is_square() {
            return Err(Error::InvalidGraph(format!(
                "layer `{label}` adjacency is {}x{}, expected square",
                adjacency.rows(),
                adjacency.cols()
            )));
        }
        let n = adjacency.rows();
        for i in 0..n {
            for j in 0..n {
                let a = adjacency[(i, j)];
                if !a.is_finite() || a < 0.0 {
                    return Err(Error::InvalidGraph(format!(
                        "layer `{label}` entry ({i},{j}) = {a} is not a finite nonnegative weight"
                    )));
                }
            }
            if adjacency[(i, i)] != 0.0 {
                return Err(Error::InvalidGraph(format!(
                    "layer `{label}` has nonzero diagonal entry at {i}"
                )));
            }
        }
        let asym = adjacency.asymmetry();
        if asym > STRUCTURE_TOL {
            return Err(Error::InvalidGraph(format!(
                "layer `{label}` adjacency is not symmetric (max deviation {asym:e})"
            )));
        }
        Ok(LayerGraph { label, adjacency })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn size(&self) -> usize {
        self.adjacency.rows()
    }

    pub fn adjacency(&self) -> &Matrix {
        &self.adjacency
    }

    /// Weighted degrees (row sums of the adjacency).
    pub fn degrees(&self) -> Vec<f64> {
        self.adjacency.row_sums()
    }

    /// Whether the graph with edges `{(i,j) : A[i][j] > 0}` is connected.
    pub fn is_connected(&self) -> bool {
        let n = self.size();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(i) = queue.pop_front() {
            for (j, &a) in self.adjacency.row(i).iter().enumerate() {
                if a > 0.0 && !seen[j] {
                    seen[j] = true;
                    reached += 1;
                    queue.push_back(j);
                }
            }
        }
        reached == n
    }

    /// Weighted Laplacian `L = D - A`.
    pub fn laplacian(&self) -> Matrix {
        laplacian(&self.adjacency)
    }
}

/// Weighted graph Laplacian `diag(row sums) - A` of a square adjacency.
pub fn laplacian(adjacency: &Matrix) -> Matrix {
    let degrees = adjacency.row_sums();
    Matrix::from_fn(adjacency.rows(), adjacency.cols(), |i, j| {
        if i == j {
            degrees[i] - adjacency[(i, i)]
        } else {
            -adjacency[(i, j)]
        }
    })
}

/// Circulant ring: node `i` links to `i±1, …, i±k (mod n)` with weight `w`.
pub fn make_ring_circulant(n: usize, k: usize, w: f64) -> Result<LayerGraph> {
    if n == 0 {
        return Err(Error::Parameter("ring needs at least one node".into()));
    }
    if k > (n - 1) / 2 {
        return Err(Error::Parameter(format!(
            "ring neighbor range k={k} exceeds floor((n-1)/2)={} for n={n}",
            (n - 1) / 2
        )));
    }
    check_weight(w)?;
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for d in 1..=k {
            a[(i, (i + d) % n)] = w;
            a[(i, (i + n - d) % n)] = w;
        }
    }
    LayerGraph::new(format!("ring(n={n},k={k},w={w})"), a)
}

/// Complete graph `K_n` with uniform weight `w`.
pub fn make_complete(n: usize, w: f64) -> Result<LayerGraph> {
    if n == 0 {
        return Err(Error::Parameter("complete graph needs at least one node".into()));
    }
    check_weight(w)?;
    let a = Matrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { w });
    LayerGraph::new(format!("complete(n={n},w={w})"), a)
}

/// Connected Erdős–Rényi `G(n, p)` with weight `w` on every present edge.
///
/// Attempt `r` draws from stream `r` of a ChaCha8 generator seeded with `seed`;
/// the first connected draw is returned.
pub fn make_random_connected(n: usize, p: f64, w: f64, seed: u64) -> Result<LayerGraph> {
    if n == 0 {
        return Err(Error::Parameter("random graph needs at least one node".into()));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Parameter(format!("edge probability p={p} must lie in (0, 1]")));
    }
    check_weight(w)?;
    for attempt in 0..CONNECTIVITY_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                if p >= 1.0 || rng.random::<f64>() < p {
                    a[(i, j)] = w;
                    a[(j, i)] = w;
                }
            }
        }
        let g = LayerGraph::new(format!("random(n={n},p={p},w={w},seed={seed})"), a)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Generation {
        n,
        p,
        attempts: CONNECTIVITY_RETRIES,
    })
}

fn check_weight(w: f64) -> Result<()> {
    if w.is_finite() && w > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "edge weight w={w} must be finite and positive"
        )))
    }
}

/// Inter-layer strengths where every pair of layers is coupled with `epsilon`.
pub fn complete_coupling(m: usize, epsilon: f64) -> Matrix {
    Matrix::from_fn(m, m, |l, k| if l == k { 0.0 } else { epsilon })
}

/// Inter-layer strengths where layer `l` couples to layers `l±1 (mod m)`.
pub fn ring_coupling(m: usize, epsilon: f64) -> Matrix {
    let mut eps = Matrix::zeros(m, m);
    if m >= 2 {
        for l in 0..m {
            eps[(l, (l + 1) % m)] = epsilon;
            eps[((l + 1) % m, l)] = epsilon;
        }
    }
    eps
}

/// Layers joined by all-ones inter-layer blocks scaled by `ε_lk`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilayerNetwork {
    layers: Vec<LayerGraph>,
    inter: Matrix,
    omega: f64,
}

impl MultilayerNetwork {
    pub fn new(layers: Vec<LayerGraph>, inter: Matrix, omega: f64) -> Result<Self> {
        let m = layers.len();
        if m == 0 {
            return Err(Error::Parameter("a multilayer network needs at least one layer".into()));
        }
        if inter.rows() != m || inter.cols() != m {
            return Err(Error::Dimension {
                context: "inter-layer coupling matrix size",
                expected: m,
                found: if inter.rows() != m { inter.rows() } else { inter.cols() },
            });
        }
        for l in 0..m {
            if inter[(l, l)] != 0.0 {
                return Err(Error::Parameter(format!(
                    "inter-layer coupling has nonzero diagonal at layer {l}"
                )));
            }
            for k in 0..m {
                let e = inter[(l, k)];
                if !e.is_finite() || e < 0.0 {
                    return Err(Error::Parameter(format!(
                        "inter-layer coupling ({l},{k}) = {e} must be finite and nonnegative"
                    )));
                }
                if (e - inter[(k, l)]).abs() > STRUCTURE_TOL {
                    return Err(Error::Parameter(format!(
                        "inter-layer coupling is asymmetric at ({l},{k}): {e} vs {}",
                        inter[(k, l)]
                    )));
                }
            }
        }
        if !omega.is_finite() {
            return Err(Error::Parameter(format!("natural frequency {omega} is not finite")));
        }
        Ok(MultilayerNetwork { layers, inter, omega })
    }

    pub fn layers(&self) -> &[LayerGraph] {
        &self.layers
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(LayerGraph::size).collect()
    }

    /// Total number of oscillators `N_1 + … + N_M`.
    pub fn total_size(&self) -> usize {
        self.layers.iter().map(LayerGraph::size).sum()
    }

    /// Index of the first node of each layer in the flattened ordering.
    pub fn layer_offsets(&self) -> Vec<usize> {
        offsets(&self.layer_sizes())
    }

    pub fn inter(&self) -> &Matrix {
        &self.inter
    }

    pub fn epsilon(&self, l: usize, k: usize) -> f64 {
        self.inter[(l, k)]
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Copy of the network with a different natural frequency.
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.layers.clone(), self.inter.clone(), omega)
    }

    /// Copy of the network with every weight (intra and inter) multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::Parameter(format!("scale factor {factor} must be positive")));
        }
        let layers = self
            .layers
            .iter()
            .map(|g| {
                let a = g.adjacency();
                LayerGraph::new(
                    g.label(),
                    Matrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] * factor),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let inter = Matrix::from_fn(self.layer_count(), self.layer_count(), |l, k| {
            self.inter[(l, k)] * factor
        });
        Self::new(layers, inter, self.omega)
    }

    /// Full `𝓜×𝓜` block adjacency with layers in concatenation order.
    pub fn assemble_full(&self) -> Matrix {
        let sizes = self.layer_sizes();
        let offs = offsets(&sizes);
        let total = self.total_size();
        let mut full = Matrix::zeros(total, total);
        for (l, layer) in self.layers.iter().enumerate() {
            for k in 0..self.layer_count() {
                for i in 0..sizes[l] {
                    for j in 0..sizes[k] {
                        full[(offs[l] + i, offs[k] + j)] = if l == k {
                            layer.adjacency()[(i, j)]
                        } else {
                            self.inter[(l, k)]
                        };
                    }
                }
            }
        }
        full
    }
}

pub(crate) fn offsets(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .scan(0usize, |acc, &n| {
            let start = *acc;
            *acc += n;
            Some(start)
        })
        .collect()
}

/// Returns the common row sum of `block`, or the offending rows when the row
/// sums disagree by more than [`STRUCTURE_TOL`].
pub fn validate_row_regular(block: &Matrix) -> Result<f64> {
    if block.rows() == 0 || block.cols() == 0 {
        return Err(Error::Parameter("row-regularity check needs a nonempty matrix".into()));
    }
    let sums: Vec<f64> = (0..block.rows())
        .map(|i| exact_sum(block.row(i).iter().copied()))
        .collect();
    let reference = sums[0];
    let offending: Vec<usize> = sums
        .iter()
        .enumerate()
        .filter(|(_, s)| (*s - reference).abs() > STRUCTURE_TOL)
        .map(|(i, _)| i)
        .collect();
    if offending.is_empty() {
        Ok(reference)
    } else {
        let mut rows = vec![0];
        rows.extend(offending);
        let sums = rows.iter().map(|&i| sums[i]).collect();
        Err(Error::Regularity { rows, sums })
    }
}
