//! Jacobians at broadcast equilibria and their spectra.
//!
//! At an equilibrium `θ̄*` of the reduced system, let
//! `λ_l = Σ_{k≠l} r_lk cos(θ̄*_k − θ̄*_l)`. The reduced Jacobian has off-diagonal
//! entries `r_lk cos(θ̄*_k − θ̄*_l)` and diagonal `−λ_l`. The Jacobian of the
//! broadcast equilibrium on the full network has diagonal blocks
//! `−λ_l·I − L_l` and off-diagonal blocks `ε_lk cos(θ̄*_k − θ̄*_l)·1`. Its
//! spectrum is the union of `−(Spec(L_l) ∖ {0}) − λ_l` over all layers with the
//! spectrum of the reduced Jacobian.

use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate_rk4, kuramoto_rhs, perturb, SimulationParams};
use crate::eigen::eig_symmetric;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::network::{validate_row_regular, MultilayerNetwork};
use crate::phase::max_wrapped_distance_mod_shift;
use crate::reduction::{broadcast, reduce, ReducedNetwork};

/// Largest `|dθ̄/dt − ω|` accepted as an equilibrium.
pub const EQUILIBRIUM_TOL: f64 = 1e-8;

/// Base tolerance for zero eigenvalues, multiplied by `max(1, ‖J‖∞)`.
pub const ZERO_TOL: f64 = 1e-9;

/// Default finite-difference step for [`jacobian_fd`].
pub const FD_STEP: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct ReducedJacobian {
    pub matrix: Matrix,
    pub lambdas: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FullJacobian {
    pub matrix: Matrix,
    pub lambdas: Vec<f64>,
    pub layer_sizes: Vec<usize>,
}

impl FullJacobian {
    /// Row sums of every block, i.e. the `M×M` matrix that block reduction
    /// assigns to this Jacobian. Fails if a block is not row-regular.
    pub fn block_reduction(&self) -> Result<Matrix> {
        block_row_sums(&self.matrix, &self.layer_sizes)
    }
}

/// `M×M` matrix of block row sums of a matrix partitioned by `layer_sizes`.
pub fn block_row_sums(matrix: &Matrix, layer_sizes: &[usize]) -> Result<Matrix> {
    let offs = crate::network::offsets(layer_sizes);
    let m = layer_sizes.len();
    let mut out = Matrix::zeros(m, m);
    for l in 0..m {
        for k in 0..m {
            let block = matrix.block(offs[l], offs[k], layer_sizes[l], layer_sizes[k]);
            out[(l, k)] = validate_row_regular(&block)?;
        }
    }
    Ok(out)
}

/// Max `|dθ̄/dt − ω|` of the reduced system at `theta_bar`.
pub fn equilibrium_residual(red: &ReducedNetwork, theta_bar: &[f64]) -> Result<f64> {
    let rhs = kuramoto_rhs(red.rbar(), 0.0, theta_bar)?;
    Ok(rhs.iter().fold(0.0, |m, x| m.max(x.abs())))
}

fn require_equilibrium(red: &ReducedNetwork, theta_bar: &[f64]) -> Result<()> {
    let residual = equilibrium_residual(red, theta_bar)?;
    if residual > EQUILIBRIUM_TOL {
        return Err(Error::NotEquilibrium {
            residual,
            tolerance: EQUILIBRIUM_TOL,
        });
    }
    Ok(())
}

/// Cosine-weighted couplings `c_lk = r_lk cos(θ̄_k − θ̄_l)` (zero diagonal) and
/// their row sums `λ_l`.
fn cosine_couplings(rbar: &Matrix, theta_bar: &[f64]) -> (Matrix, Vec<f64>) {
    let m = rbar.rows();
    let c = Matrix::from_fn(m, m, |l, k| {
        if l == k {
            0.0
        } else {
            rbar[(l, k)] * (theta_bar[k] - theta_bar[l]).cos()
        }
    });
    let lambdas = (0..m).map(|l| c.row(l).iter().sum()).collect();
    (c, lambdas)
}

/// Reduced Jacobian at an equilibrium of the reduced system.
pub fn jacobian_reduced(red: &ReducedNetwork, theta_bar_star: &[f64]) -> Result<ReducedJacobian> {
    if theta_bar_star.len() != red.size() {
        return Err(Error::Dimension {
            context: "reduced equilibrium vs. layer count",
            expected: red.size(),
            found: theta_bar_star.len(),
        });
    }
    require_equilibrium(red, theta_bar_star)?;
    let (mut matrix, lambdas) = cosine_couplings(red.rbar(), theta_bar_star);
    for (l, lambda) in lambdas.iter().enumerate() {
        matrix[(l, l)] = -lambda;
    }
    Ok(ReducedJacobian { matrix, lambdas })
}

/// Checks the preconditions of the join analysis: equal layer sizes and, when
/// `require_connected`, connected layers. Inter-layer blocks of a
/// [`MultilayerNetwork`] are all-ones with symmetric strengths by construction.
fn check_assumptions(net: &MultilayerNetwork, require_connected: bool) -> Result<()> {
    let sizes = net.layer_sizes();
    if sizes.iter().any(|&n| n != sizes[0]) {
        return Err(Error::Assumption(format!(
            "layers must have equal sizes, found {sizes:?}"
        )));
    }
    if require_connected {
        if let Some((l, g)) = net.layers().iter().enumerate().find(|(_, g)| !g.is_connected()) {
            return Err(Error::Assumption(format!(
                "layer {l} (`{}`) is not connected",
                g.label()
            )));
        }
    }
    Ok(())
}

/// Jacobian of the full network at the broadcast of `theta_bar_star`.
pub fn jacobian_full(net: &MultilayerNetwork, theta_bar_star: &[f64]) -> Result<FullJacobian> {
    check_assumptions(net, true)?;
    let red = reduce(net);
    let reduced = jacobian_reduced(&red, theta_bar_star)?;
    let sizes = net.layer_sizes();
    let offs = net.layer_offsets();
    let total = net.total_size();
    let m = net.layer_count();
    let mut matrix = Matrix::zeros(total, total);
    for l in 0..m {
        let lap = net.layers()[l].laplacian();
        for k in 0..m {
            let coupling = net.epsilon(l, k) * (theta_bar_star[k] - theta_bar_star[l]).cos();
            for i in 0..sizes[l] {
                for j in 0..sizes[k] {
                    matrix[(offs[l] + i, offs[k] + j)] = if l == k {
                        let shift = if i == j { reduced.lambdas[l] } else { 0.0 };
                        -shift - lap[(i, j)]
                    } else {
                        coupling
                    };
                }
            }
        }
    }
    Ok(FullJacobian {
        matrix,
        lambdas: reduced.lambdas,
        layer_sizes: sizes,
    })
}

/// Central finite-difference Jacobian of `θ ↦ Σ_j A_ij sin(θ_j − θ_i)`.
pub fn jacobian_fd(adjacency: &Matrix, theta_star: &[f64], h: f64) -> Result<Matrix> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Parameter(format!("finite-difference step {h} must be positive")));
    }
    let n = theta_star.len();
    let mut jac = Matrix::zeros(n, n);
    let mut x = theta_star.to_vec();
    for j in 0..n {
        x[j] = theta_star[j] + h;
        let plus = kuramoto_rhs(adjacency, 0.0, &x)?;
        x[j] = theta_star[j] - h;
        let minus = kuramoto_rhs(adjacency, 0.0, &x)?;
        x[j] = theta_star[j];
        for i in 0..n {
            jac[(i, j)] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    Marginal,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Marginal => "marginal",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Layer,
    Reduced,
}

/// Where an eigenvalue of the full Jacobian comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub branch: Branch,
    pub layer_index: Option<usize>,
}

impl Provenance {
    pub fn layer(l: usize) -> Self {
        Provenance {
            branch: Branch::Layer,
            layer_index: Some(l),
        }
    }

    pub fn reduced() -> Self {
        Provenance {
            branch: Branch::Reduced,
            layer_index: None,
        }
    }
}

/// Sorted eigenvalues with their origin and the resulting stability verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub provenance: Vec<Provenance>,
    pub verdict: Verdict,
    pub zero_tolerance: f64,
    pub lambdas: Vec<f64>,
}

impl SpectrumReport {
    fn from_parts(mut tagged: Vec<(f64, Provenance)>, lambdas: Vec<f64>, zero_tolerance: f64) -> Self {
        tagged.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (eigenvalues, provenance): (Vec<f64>, Vec<Provenance>) = tagged.into_iter().unzip();
        let verdict = classify_eigenvalues(&eigenvalues, zero_tolerance);
        SpectrumReport {
            eigenvalues,
            provenance,
            verdict,
            zero_tolerance,
            lambdas,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum report serializes")
    }
}

/// `ZERO_TOL·max(1, norm)`.
pub fn scaled_zero_tol(norm_inf: f64) -> f64 {
    ZERO_TOL * norm_inf.max(1.0)
}

/// Spectrum of the reduced Jacobian. Requires a symmetric reduced matrix.
pub fn spectrum_reduced(red: &ReducedNetwork, theta_bar_star: &[f64]) -> Result<SpectrumReport> {
    if !red.is_symmetric() {
        return Err(Error::Assumption(format!(
            "reduced matrix is asymmetric (layer sizes {:?})",
            red.layer_sizes()
        )));
    }
    let jac = jacobian_reduced(red, theta_bar_star)?;
    let tol = scaled_zero_tol(jac.matrix.norm_inf());
    let tagged = eig_symmetric(&jac.matrix)?
        .into_iter()
        .map(|e| (e, Provenance::reduced()))
        .collect();
    Ok(SpectrumReport::from_parts(tagged, jac.lambdas, tol))
}

/// Spectrum of the full Jacobian assembled from the layer Laplacian spectra and
/// the reduced Jacobian spectrum, without forming the full matrix.
pub fn spectrum_via_join(net: &MultilayerNetwork, theta_bar_star: &[f64]) -> Result<SpectrumReport> {
    check_assumptions(net, false)?;
    let red = reduce(net);
    let reduced = jacobian_reduced(&red, theta_bar_star)?;
    let mut tagged: Vec<(f64, Provenance)> = eig_symmetric(&reduced.matrix)?
        .into_iter()
        .map(|e| (e, Provenance::reduced()))
        .collect();

    let mut full_norm = 0.0_f64;
    for (l, layer) in net.layers().iter().enumerate() {
        let lap = layer.laplacian();
        let mut spectrum = eig_symmetric(&lap)?;
        let zero_tol = scaled_zero_tol(lap.norm_inf());
        let zero_modes = spectrum.iter().filter(|e| e.abs() < zero_tol).count();
        if zero_modes > 1 {
            return Err(Error::Connectivity { layer: l, zero_modes });
        }
        let zero_at = spectrum
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .expect("layers are nonempty");
        spectrum.remove(zero_at);
        let lambda = reduced.lambdas[l];
        tagged.extend(spectrum.into_iter().map(|mu| (-mu - lambda, Provenance::layer(l))));

        let inter: f64 = (0..net.layer_count())
            .filter(|&k| k != l)
            .map(|k| {
                net.layers()[k].size() as f64 * net.epsilon(l, k) * (theta_bar_star[k] - theta_bar_star[l]).cos().abs()
            })
            .sum();
        for deg in layer.degrees() {
            full_norm = full_norm.max((lambda + deg).abs() + deg + inter);
        }
    }
    Ok(SpectrumReport::from_parts(
        tagged,
        reduced.lambdas,
        scaled_zero_tol(full_norm),
    ))
}

/// Sorted eigenvalues of the explicitly assembled full Jacobian.
pub fn spectrum_direct(net: &MultilayerNetwork, theta_bar_star: &[f64]) -> Result<Vec<f64>> {
    eig_symmetric(&jacobian_full(net, theta_bar_star)?.matrix)
}

/// Stable: exactly one zero mode and everything else below `−zero_tol`.
/// Unstable: anything above `zero_tol`. Marginal otherwise.
pub fn classify_eigenvalues(eigenvalues: &[f64], zero_tol: f64) -> Verdict {
    if eigenvalues.iter().any(|&e| e > zero_tol) {
        return Verdict::Unstable;
    }
    let zero_modes = eigenvalues.iter().filter(|e| e.abs() < zero_tol).count();
    let negative = eigenvalues.iter().filter(|&&e| e < -zero_tol).count();
    if zero_modes == 1 && negative + 1 == eigenvalues.len() {
        Verdict::Stable
    } else {
        Verdict::Marginal
    }
}

pub fn classify_stability(report: &SpectrumReport, zero_tol: f64) -> Verdict {
    classify_eigenvalues(&report.eigenvalues, zero_tol)
}

/// Outcome of perturbing a broadcast equilibrium and integrating the full network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub verdict: Verdict,
    pub amplitude: f64,
    pub seed: u64,
    pub t_max: f64,
    /// Distance to the equilibrium orbit (modulo a global phase) at the last sample.
    pub final_distance: f64,
    /// Largest such distance over all samples.
    pub max_distance: f64,
    /// `None` for marginal verdicts, which make no prediction.
    pub consistent: Option<bool>,
}

/// Return distance a stable equilibrium must reach.
pub const CROSS_CHECK_RETURN: f64 = 1e-3;
/// Escape distance an unstable equilibrium must exceed.
pub const CROSS_CHECK_ESCAPE: f64 = 0.1;

/// Perturbs every oscillator of the broadcast equilibrium by `amplitude·U(−π, π)`
/// and integrates the full network, measuring the wrapped distance to the
/// equilibrium orbit modulo global rotation and phase shift.
pub fn simulation_cross_check(
    net: &MultilayerNetwork,
    theta_bar_star: &[f64],
    verdict: Verdict,
    amplitude: f64,
    seed: u64,
    params: &SimulationParams,
) -> Result<CrossCheck> {
    let equilibrium = broadcast(theta_bar_star, &net.layer_sizes())?;
    let start = perturb(&equilibrium, amplitude, seed)?;
    let params = SimulationParams {
        omega: net.omega(),
        ..*params
    };
    let traj = integrate_rk4(net, &start, &params)?;
    let distances: Vec<f64> = traj
        .states
        .iter()
        .map(|s| max_wrapped_distance_mod_shift(&s.theta, &equilibrium))
        .collect();
    let final_distance = *distances.last().expect("trajectory has an initial sample");
    let max_distance = distances.iter().copied().fold(0.0, f64::max);
    let consistent = match verdict {
        Verdict::Stable => Some(final_distance < CROSS_CHECK_RETURN),
        Verdict::Unstable => Some(max_distance > CROSS_CHECK_ESCAPE),
        Verdict::Marginal => None,
    };
    Ok(CrossCheck {
        verdict,
        amplitude,
        seed,
        t_max: params.t_max,
        final_distance,
        max_distance,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::dynamics::twisted_state;
    use crate::network::{complete_coupling, make_complete, ring_coupling, LayerGraph};

    fn two_k2(a: f64, eps: f64) -> MultilayerNetwork {
        let g = make_complete(2, a).unwrap();
        MultilayerNetwork::new(vec![g.clone(), g], complete_coupling(2, eps), 0.0).unwrap()
    }

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    fn trivial_layers(m: usize, inter: Matrix) -> MultilayerNetwork {
        let g = LayerGraph::new("point", Matrix::zeros(1, 1)).unwrap();
        MultilayerNetwork::new(vec![g; m], inter, 0.0).unwrap()
    }

    #[test]
    fn reduced_jacobian_sync_pair() {
        let c = 1.7;
        let net = trivial_layers(2, complete_coupling(2, c));
        let jac = jacobian_reduced(&reduce(&net), &[0.0, 0.0]).unwrap();
        assert_eq!(jac.matrix.to_rows(), vec![vec![-c, c], vec![c, -c]]);
    }

    #[test]
    fn reduced_jacobian_twisted_triangle() {
        let c = 2.0;
        let net = trivial_layers(3, complete_coupling(3, c));
        let jac = jacobian_reduced(&reduce(&net), &twisted_state(3, 1)).unwrap();
        let want = Matrix::from_fn(3, 3, |i, j| if i == j { c } else { -c / 2.0 });
        assert!(jac.matrix.max_abs_diff(&want) < 1e-14);
        let eig = eig_symmetric(&jac.matrix).unwrap();
        for (g, w) in eig.iter().zip([0.0, 1.5 * c, 1.5 * c]) {
            assert!((g - w).abs() < 1e-13);
        }
    }

    #[test]
    fn reduced_jacobian_sync_triangle() {
        let c = 0.6;
        let net = trivial_layers(3, complete_coupling(3, c));
        let jac = jacobian_reduced(&reduce(&net), &[0.0; 3]).unwrap();
        let eig = eig_symmetric(&jac.matrix).unwrap();
        for (g, w) in eig.iter().zip([-3.0 * c, -3.0 * c, 0.0]) {
            assert!((g - w).abs() < 1e-13);
        }
    }

    #[test]
    fn reduced_jacobian_rejects_non_equilibrium() {
        let net = trivial_layers(2, complete_coupling(2, 1.0));
        match jacobian_reduced(&reduce(&net), &[0.0, 0.5]) {
            Err(Error::NotEquilibrium { residual, .. }) => assert!((residual - 0.5f64.sin()).abs() < 1e-15),
            other => panic!("expected not-an-equilibrium, got {other:?}"),
        }
    }

    #[test]
    fn full_jacobian_trivial_layers_equals_reduced() {
        let net = trivial_layers(2, complete_coupling(2, 0.8));
        let full = jacobian_full(&net, &[0.0, 0.0]).unwrap();
        let red = jacobian_reduced(&reduce(&net), &[0.0, 0.0]).unwrap();
        assert_eq!(full.matrix, red.matrix);
    }

    #[test]
    fn full_jacobian_two_k2() {
        let (a, eps) = (0.7, 0.3);
        let full = jacobian_full(&two_k2(a, eps), &[0.0, 0.0]).unwrap();
        let d = -2.0 * eps - a;
        let want = Matrix::from_rows(&[
            vec![d, a, eps, eps],
            vec![a, d, eps, eps],
            vec![eps, eps, d, a],
            vec![eps, eps, a, d],
        ])
        .unwrap();
        assert!(full.matrix.max_abs_diff(&want) < 1e-15);
        assert!(full.matrix.row_sums().iter().all(|s| s.abs() < 1e-9));
        assert_eq!(full.lambdas, vec![2.0 * eps, 2.0 * eps]);
    }

    #[test]
    fn full_jacobian_rejects_unequal_and_disconnected() {
        let net = MultilayerNetwork::new(
            vec![make_complete(2, 1.0).unwrap(), make_complete(3, 1.0).unwrap()],
            complete_coupling(2, 1.0),
            0.0,
        )
        .unwrap();
        assert!(matches!(jacobian_full(&net, &[0.0, 0.0]), Err(Error::Assumption(_))));
        let empty = LayerGraph::new("e", Matrix::zeros(2, 2)).unwrap();
        let net = MultilayerNetwork::new(vec![empty.clone(), empty], complete_coupling(2, 1.0), 0.0).unwrap();
        assert!(matches!(jacobian_full(&net, &[0.0, 0.0]), Err(Error::Assumption(_))));
        assert!(matches!(
            spectrum_via_join(&net, &[0.0, 0.0]),
            Err(Error::Connectivity {
                layer: 0,
                zero_modes: 2
            })
        ));
    }

    #[test]
    fn finite_differences_match_analytic() {
        let net = two_k2(0.7, 0.3);
        let theta = broadcast(&[0.0, 0.0], &[2, 2]).unwrap();
        let fd = jacobian_fd(&net.assemble_full(), &theta, FD_STEP).unwrap();
        let full = jacobian_full(&net, &[0.0, 0.0]).unwrap();
        assert!(fd.max_abs_diff(&full.matrix) < 1e-6);

        let tri = trivial_layers(3, complete_coupling(3, 2.0));
        let red = reduce(&tri);
        let tw = twisted_state(3, 1);
        let fd = jacobian_fd(red.rbar(), &tw, FD_STEP).unwrap();
        assert!(fd.max_abs_diff(&jacobian_reduced(&red, &tw).unwrap().matrix) < 1e-6);

        assert_eq!(
            jacobian_fd(&Matrix::zeros(1, 1), &[0.3], FD_STEP).unwrap(),
            Matrix::zeros(1, 1)
        );
        assert!(jacobian_fd(&Matrix::zeros(1, 1), &[0.3], 0.0).is_err());
    }

    #[test]
    fn join_spectrum_two_k2_hand_computed() {
        let (a, eps) = (0.7, 0.3);
        let net = two_k2(a, eps);
        let report = spectrum_via_join(&net, &[0.0, 0.0]).unwrap();
        let want = sorted(vec![0.0, -4.0 * eps, -2.0 * a - 2.0 * eps, -2.0 * a - 2.0 * eps]);
        for (g, w) in report.eigenvalues.iter().zip(&want) {
            assert!((g - w).abs() < 1e-13, "{:?}", report.eigenvalues);
        }
        let direct = spectrum_direct(&net, &[0.0, 0.0]).unwrap();
        for (g, w) in direct.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
        assert_eq!(report.verdict, Verdict::Stable);
        let layer_count = report.provenance.iter().filter(|p| p.branch == Branch::Layer).count();
        assert_eq!(layer_count, 2);
    }

    #[test]
    fn join_spectrum_trivial_layers_is_reduced_spectrum() {
        let net = trivial_layers(3, complete_coupling(3, 0.4));
        let join = spectrum_via_join(&net, &[0.0; 3]).unwrap();
        let red = spectrum_reduced(&reduce(&net), &[0.0; 3]).unwrap();
        assert_eq!(join.eigenvalues, red.eigenvalues);
        assert!(join.provenance.iter().all(|p| *p == Provenance::reduced()));
    }

    #[test]
    fn twisted_verdicts() {
        let tri =
            MultilayerNetwork::new(vec![make_complete(4, 1.0).unwrap(); 3], complete_coupling(3, 0.05), 0.0).unwrap();
        let report = spectrum_via_join(&tri, &twisted_state(3, 1)).unwrap();
        assert_eq!(report.verdict, Verdict::Unstable);

        let ring =
            MultilayerNetwork::new(vec![make_complete(3, 1.0).unwrap(); 12], ring_coupling(12, 0.5), 0.0).unwrap();
        let report = spectrum_via_join(&ring, &twisted_state(12, 1)).unwrap();
        assert_eq!(report.verdict, Verdict::Stable);
        let report = spectrum_via_join(&ring, &twisted_state(12, 4)).unwrap();
        assert_eq!(report.verdict, Verdict::Unstable);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_eigenvalues(&[0.0, -1.0, -2.0], 1e-9), Verdict::Stable);
        assert_eq!(classify_eigenvalues(&[0.0, 0.5, -1.0], 1e-9), Verdict::Unstable);
        assert_eq!(classify_eigenvalues(&[0.0, 0.0, -1.0], 1e-9), Verdict::Marginal);
        assert_eq!(classify_eigenvalues(&[-1e-12, -1.0], 1e-9), Verdict::Stable);
    }

    #[test]
    fn report_json_schema() {
        let report = spectrum_via_join(&two_k2(1.0, 0.5), &[0.0, 0.0]).unwrap();
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(value["verdict"], "stable");
        assert_eq!(value["eigenvalues"].as_array().unwrap().len(), 4);
        let prov = value["provenance"].as_array().unwrap();
        assert!(prov.iter().any(|p| p["branch"] == "layer" && p["layer_index"].is_u64()));
        assert!(prov
            .iter()
            .any(|p| p["branch"] == "reduced" && p["layer_index"].is_null()));
        assert!(value["zero_tolerance"].is_f64());
        assert_eq!(value["lambdas"].as_array().unwrap().len(), 2);
        let back: SpectrumReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn cross_check_agrees_with_verdicts() {
        let params = SimulationParams {
            dt: 0.01,
            t_max: 200.0,
            omega: 0.0,
            record_every: 100,
        };
        let tri =
            MultilayerNetwork::new(vec![make_complete(3, 1.0).unwrap(); 3], complete_coupling(3, 0.2), 1.0).unwrap();
        let sync = simulation_cross_check(&tri, &[0.0; 3], Verdict::Stable, 0.01, 1, &params).unwrap();
        assert_eq!(sync.consistent, Some(true), "{sync:?}");
        let tw = simulation_cross_check(&tri, &twisted_state(3, 1), Verdict::Unstable, 0.01, 1, &params).unwrap();
        assert_eq!(tw.consistent, Some(true), "{tw:?}");
        assert!(tw.max_distance > PI / 2.0);
    }
}
