//! Kuramoto dynamics `dθ_i/dt = ω + Σ_j A_ij sin(θ_j − θ_i)` on full or reduced networks.

use std::f64::consts::{PI, TAU};
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::network::MultilayerNetwork;
use crate::reduction::ReducedNetwork;

/// A coupling structure that can evaluate `Σ_j A_ij sin(θ_j − θ_i)` for every `i`.
///
/// Implementations use `sin(θ_j − θ_i) = sin θ_j cos θ_i − cos θ_j sin θ_i`, so
/// they receive precomputed `sin θ` and `cos θ`. Summation order is fixed, which
/// makes evaluation bit-reproducible.
pub trait Coupling {
    fn dim(&self) -> usize;

    fn interaction(&self, sin: &[f64], cos: &[f64], out: &mut [f64]);
}

impl Coupling for Matrix {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn interaction(&self, sin: &[f64], cos: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let (mut s, mut c) = (0.0, 0.0);
            for ((a, sj), cj) in self.row(i).iter().zip(sin).zip(cos) {
                s += a * sj;
                c += a * cj;
            }
            *o = cos[i] * s - sin[i] * c;
        }
    }
}

impl Coupling for ReducedNetwork {
    fn dim(&self) -> usize {
        self.size()
    }

    fn interaction(&self, sin: &[f64], cos: &[f64], out: &mut [f64]) {
        self.rbar().interaction(sin, cos, out)
    }
}

/// Evaluates the join structure blockwise: dense layer adjacencies plus all-ones
/// inter-layer blocks reduced to per-layer sums. Equivalent to the dense
/// [`MultilayerNetwork::assemble_full`] matrix without materializing it.
impl Coupling for MultilayerNetwork {
    fn dim(&self) -> usize {
        self.total_size()
    }

    fn interaction(&self, sin: &[f64], cos: &[f64], out: &mut [f64]) {
        let m = self.layer_count();
        let offs = self.layer_offsets();
        let sizes = self.layer_sizes();
        let layer_sin: Vec<f64> = (0..m).map(|k| sin[offs[k]..offs[k] + sizes[k]].iter().sum()).collect();
        let layer_cos: Vec<f64> = (0..m).map(|k| cos[offs[k]..offs[k] + sizes[k]].iter().sum()).collect();
        for (l, layer) in self.layers().iter().enumerate() {
            let (mut inter_s, mut inter_c) = (0.0, 0.0);
            for k in 0..m {
                if k != l {
                    inter_s += self.epsilon(l, k) * layer_sin[k];
                    inter_c += self.epsilon(l, k) * layer_cos[k];
                }
            }
            let range = offs[l]..offs[l] + sizes[l];
            let (ls, lc) = (&sin[range.clone()], &cos[range.clone()]);
            for (i, o) in out[range].iter_mut().enumerate() {
                let (mut s, mut c) = (inter_s, inter_c);
                for ((a, sj), cj) in layer.adjacency().row(i).iter().zip(ls).zip(lc) {
                    s += a * sj;
                    c += a * cj;
                }
                *o = lc[i] * s - ls[i] * c;
            }
        }
    }
}

/// Reference right-hand side, evaluated term by term with `sin(θ_j − θ_i)`.
pub fn kuramoto_rhs(adjacency: &Matrix, omega: f64, theta: &[f64]) -> Result<Vec<f64>> {
    if !adjacency.is_square() {
        return Err(Error::Dimension {
            context: "adjacency must be square",
            expected: adjacency.rows(),
            found: adjacency.cols(),
        });
    }
    if theta.len() != adjacency.rows() {
        return Err(Error::Dimension {
            context: "phase vector vs. adjacency size",
            expected: adjacency.rows(),
            found: theta.len(),
        });
    }
    Ok((0..theta.len())
        .map(|i| {
            omega
                + adjacency
                    .row(i)
                    .iter()
                    .zip(theta)
                    .map(|(a, tj)| a * (tj - theta[i]).sin())
                    .sum::<f64>()
        })
        .collect())
}

/// Right-hand side through a [`Coupling`] implementation.
pub fn coupling_rhs<C: Coupling + ?Sized>(coupling: &C, omega: f64, theta: &[f64]) -> Result<Vec<f64>> {
    if theta.len() != coupling.dim() {
        return Err(Error::Dimension {
            context: "phase vector vs. coupling size",
            expected: coupling.dim(),
            found: theta.len(),
        });
    }
    let sin: Vec<f64> = theta.iter().map(|t| t.sin()).collect();
    let cos: Vec<f64> = theta.iter().map(|t| t.cos()).collect();
    let mut out = vec![0.0; theta.len()];
    coupling.interaction(&sin, &cos, &mut out);
    out.iter_mut().for_each(|x| *x += omega);
    Ok(out)
}

/// Fixed-step integration settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationParams {
    pub dt: f64,
    pub t_max: f64,
    pub omega: f64,
    pub record_every: usize,
}

impl Default for SimulationParams {
    fn default() -> Self {
        SimulationParams {
            dt: 0.01,
            t_max: 50.0,
            omega: 0.0,
            record_every: 10,
        }
    }
}

impl SimulationParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Parameter(format!("dt={} must be positive", self.dt)));
        }
        if !(self.t_max.is_finite() && self.t_max >= 0.0) {
            return Err(Error::Parameter(format!("T={} must be nonnegative", self.t_max)));
        }
        if self.record_every == 0 {
            return Err(Error::Parameter("record_every must be at least 1".into()));
        }
        if !self.omega.is_finite() {
            return Err(Error::Parameter(format!("omega={} is not finite", self.omega)));
        }
        Ok(())
    }

    /// Number of RK4 steps; the final time `steps·dt` is within `dt/2` of `t_max`.
    pub fn steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }

    /// Spacing of recorded samples.
    pub fn sample_interval(&self) -> f64 {
        self.dt * self.record_every as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseState {
    pub t: f64,
    pub theta: Vec<f64>,
}

/// Recorded samples of one integration run.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub label: String,
    pub seed: Option<u64>,
    pub params: SimulationParams,
    pub states: Vec<PhaseState>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, |s| s.theta.len())
    }

    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> Option<&PhaseState> {
        self.states.last()
    }

    /// `R(t)` at every recorded sample.
    pub fn order_parameters(&self) -> Vec<f64> {
        self.states.iter().map(|s| order_parameter(&s.theta)).collect()
    }

    /// CSV with header `t,theta_0,...,theta_{n-1}`.
    pub fn write_phase_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let header: Vec<String> = std::iter::once("t".to_string())
            .chain((0..self.dim()).map(|i| format!("theta_{i}")))
            .collect();
        writeln!(w, "{}", header.join(","))?;
        for s in &self.states {
            write!(w, "{}", s.t)?;
            for x in &s.theta {
                write!(w, ",{x}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// CSV with header `t,R`.
    pub fn write_order_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,R")?;
        for s in &self.states {
            writeln!(w, "{},{}", s.t, order_parameter(&s.theta))?;
        }
        Ok(())
    }
}

/// Classical fourth-order Runge–Kutta with fixed step, recording every
/// `record_every` steps starting at `t = 0`.
pub fn integrate_rk4<C: Coupling + ?Sized>(
    coupling: &C,
    theta0: &[f64],
    params: &SimulationParams,
) -> Result<Trajectory> {
    params.validate()?;
    let n = coupling.dim();
    if theta0.len() != n {
        return Err(Error::Dimension {
            context: "initial state vs. coupling size",
            expected: n,
            found: theta0.len(),
        });
    }
    if let Some(i) = theta0.iter().position(|x| !x.is_finite()) {
        return Err(Error::Parameter(format!("initial phase {i} is not finite")));
    }

    let dt = params.dt;
    let omega = params.omega;
    let mut theta = theta0.to_vec();
    let mut stage = vec![0.0; n];
    let mut sin = vec![0.0; n];
    let mut cos = vec![0.0; n];
    let mut k = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];

    let mut eval = |x: &[f64], out: &mut [f64]| {
        for ((s, c), xi) in sin.iter_mut().zip(cos.iter_mut()).zip(x) {
            (*s, *c) = xi.sin_cos();
        }
        coupling.interaction(&sin, &cos, out);
        out.iter_mut().for_each(|o| *o += omega);
    };

    let steps = params.steps();
    let mut states = Vec::with_capacity(steps / params.record_every + 1);
    states.push(PhaseState {
        t: 0.0,
        theta: theta.clone(),
    });
    for step in 1..=steps {
        let [k1, k2, k3, k4] = &mut k;
        eval(&theta, k1);
        for i in 0..n {
            stage[i] = theta[i] + 0.5 * dt * k1[i];
        }
        eval(&stage, k2);
        for i in 0..n {
            stage[i] = theta[i] + 0.5 * dt * k2[i];
        }
        eval(&stage, k3);
        for i in 0..n {
            stage[i] = theta[i] + dt * k3[i];
        }
        eval(&stage, k4);
        for i in 0..n {
            theta[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if theta.iter().any(|x| !x.is_finite()) {
            return Err(Error::Divergence { step });
        }
        if step % params.record_every == 0 {
            states.push(PhaseState {
                t: step as f64 * dt,
                theta: theta.clone(),
            });
        }
    }
    Ok(Trajectory {
        label: String::new(),
        seed: None,
        params: *params,
        states,
    })
}

/// Kuramoto order parameter `|mean_j exp(iθ_j)|`, clamped to `[0, 1]`.
pub fn order_parameter(theta: &[f64]) -> f64 {
    if theta.is_empty() {
        return 0.0;
    }
    let (s, c) = theta.iter().fold((0.0, 0.0), |(s, c), t| (s + t.sin(), c + t.cos()));
    (s.hypot(c) / theta.len() as f64).min(1.0)
}

/// The `p`-th twisted state `θ_j = −2πp·j/M`, `j = 0..M−1`.
pub fn twisted_state(m: usize, p: i64) -> Vec<f64> {
    (0..m).map(|j| -TAU * p as f64 * j as f64 / m as f64).collect()
}

/// Uniform phases on `[−π, π)`, seeded.
pub fn random_phases(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-PI..PI)).collect()
}

/// `θ_i + amplitude·u_i` with `u_i` i.i.d. uniform on the open interval `(−π, π)`.
pub fn perturb(theta: &[f64], amplitude: f64, seed: u64) -> Result<Vec<f64>> {
    if !(amplitude.is_finite() && amplitude >= 0.0) {
        return Err(Error::Parameter(format!(
            "perturbation amplitude {amplitude} must be finite and nonnegative"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(theta
        .iter()
        .map(|&x| {
            let u = loop {
                let u: f64 = rng.random_range(-PI..PI);
                if u != -PI {
                    break u;
                }
            };
            x + amplitude * u
        })
        .collect())
}

/// Re-indexes a trajectory to `t' = t / factor`: the solution of the same
/// network with every coupling multiplied by `factor`.
pub fn rescale_time(traj: &Trajectory, factor: f64) -> Result<Trajectory> {
    if !(factor.is_finite() && factor > 0.0) {
        return Err(Error::Parameter(format!(
            "time rescaling factor {factor} must be positive"
        )));
    }
    let mut out = traj.clone();
    if factor == 1.0 {
        return Ok(out);
    }
    for s in &mut out.states {
        s.t /= factor;
    }
    out.params.dt /= factor;
    out.params.t_max /= factor;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{complete_coupling, make_complete, make_random_connected, make_ring_circulant};
    use crate::reduction::{broadcast, reduce};

    fn k2() -> Matrix {
        Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn rhs_two_oscillators() {
        let rhs = kuramoto_rhs(&k2(), 0.0, &[0.0, PI / 2.0]).unwrap();
        assert!((rhs[0] - 1.0).abs() < 1e-15 && (rhs[1] + 1.0).abs() < 1e-15);
        let fast = coupling_rhs(&k2(), 0.0, &[0.0, PI / 2.0]).unwrap();
        assert!((fast[0] - 1.0).abs() < 1e-15 && (fast[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn rhs_constant_state_is_omega() {
        let a = make_random_connected(12, 0.4, 0.7, 5).unwrap().adjacency().clone();
        let rhs = kuramoto_rhs(&a, 0.3, &[1.234; 12]).unwrap();
        assert!(rhs.iter().all(|&x| x == 0.3));
    }

    #[test]
    fn rhs_twisted_three_cycle_is_equilibrium() {
        let c = 2.5;
        let a = complete_coupling(3, c);
        let rhs = kuramoto_rhs(&a, 0.7, &twisted_state(3, 1)).unwrap();
        for x in rhs {
            assert!((x - 0.7).abs() < 1e-14, "{x}");
        }
    }

    #[test]
    fn rhs_dimension_errors() {
        assert!(kuramoto_rhs(&k2(), 0.0, &[0.0]).is_err());
        assert!(kuramoto_rhs(&Matrix::zeros(2, 3), 0.0, &[0.0, 0.0]).is_err());
        assert!(coupling_rhs(&k2(), 0.0, &[0.0]).is_err());
    }

    #[test]
    fn coupling_routes_agree_with_reference() {
        let net = MultilayerNetwork::new(
            vec![
                make_random_connected(4, 0.6, 0.9, 1).unwrap(),
                make_ring_circulant(5, 2, 1.3).unwrap(),
                make_complete(3, 0.4).unwrap(),
            ],
            Matrix::from_rows(&[vec![0.0, 0.2, 0.7], vec![0.2, 0.0, 0.1], vec![0.7, 0.1, 0.0]]).unwrap(),
            0.0,
        )
        .unwrap();
        let theta = random_phases(12, 9);
        let full = net.assemble_full();
        let reference = kuramoto_rhs(&full, 0.4, &theta).unwrap();
        let dense = coupling_rhs(&full, 0.4, &theta).unwrap();
        let blocks = coupling_rhs(&net, 0.4, &theta).unwrap();
        for i in 0..12 {
            assert!((reference[i] - dense[i]).abs() < 1e-13);
            assert!((reference[i] - blocks[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn rk4_linear_flow_is_exact() {
        let params = SimulationParams {
            dt: 0.01,
            t_max: 2.0,
            omega: 1.0,
            record_every: 1,
        };
        let traj = integrate_rk4(&Matrix::zeros(1, 1), &[0.0], &params).unwrap();
        let last = traj.last().unwrap();
        assert_eq!(last.t, 2.0);
        assert!((last.theta[0] - 2.0).abs() < 1e-12);
        assert_eq!(traj.len(), 201);
    }

    #[test]
    fn rk4_antipodal_fixed_point() {
        let params = SimulationParams {
            t_max: 10.0,
            ..Default::default()
        };
        // Unstable fixed point: sin(π) ≈ 1.2e-16 grows like e^{2t}, reaching ~1e-7 at t = 10.
        let traj = integrate_rk4(&k2(), &[0.0, PI], &params).unwrap();
        for s in &traj.states {
            assert!(s.theta[0].abs() < 1e-6 && (s.theta[1] - PI).abs() < 1e-6, "{:?}", s);
        }
    }

    #[test]
    fn rk4_two_oscillators_match_separable_solution() {
        // φ = θ₂ − θ₁ obeys dφ/dt = −2 sin φ, so tan(φ/2) = tan(φ₀/2)·e^{−2t}.
        let params = SimulationParams {
            t_max: 10.0,
            record_every: 1,
            ..Default::default()
        };
        let traj = integrate_rk4(&k2(), &[0.0, 0.1], &params).unwrap();
        let mut previous = f64::INFINITY;
        for s in &traj.states {
            let phi = s.theta[1] - s.theta[0];
            let exact = 2.0 * ((0.05_f64).tan() * (-2.0 * s.t).exp()).atan();
            assert!((phi - exact).abs() < 1e-10, "t={} phi={phi} exact={exact}", s.t);
            assert!(phi < previous || phi == 0.0);
            previous = phi;
        }
        assert!(previous.abs() < 1e-6);
    }

    #[test]
    fn rk4_grid_is_uniform() {
        let params = SimulationParams {
            dt: 0.01,
            t_max: 1.0,
            omega: 0.0,
            record_every: 7,
        };
        let traj = integrate_rk4(&k2(), &[0.0, 1.0], &params).unwrap();
        let times = traj.times();
        assert_eq!(times.len(), 100 / 7 + 1);
        for w in times.windows(2) {
            assert!((w[1] - w[0] - 0.07).abs() < 1e-12);
        }
    }

    #[test]
    fn rk4_detects_divergence() {
        let a = Matrix::from_rows(&[vec![0.0, f64::MAX], vec![f64::MAX, 0.0]]).unwrap();
        let params = SimulationParams::default();
        match integrate_rk4(&a, &[0.0, 1.0], &params) {
            Err(Error::Divergence { step }) => assert_eq!(step, 1),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn rk4_rejects_bad_params() {
        let bad = SimulationParams {
            dt: 0.0,
            ..Default::default()
        };
        assert!(integrate_rk4(&k2(), &[0.0, 0.0], &bad).is_err());
        let bad = SimulationParams {
            record_every: 0,
            ..Default::default()
        };
        assert!(integrate_rk4(&k2(), &[0.0, 0.0], &bad).is_err());
        assert!(integrate_rk4(&k2(), &[0.0], &SimulationParams::default()).is_err());
    }

    #[test]
    fn order_parameter_examples() {
        assert!((order_parameter(&[0.7; 5]) - 1.0).abs() < 1e-15);
        assert!(order_parameter(&[0.0, PI]) < 1e-15);
        assert!(order_parameter(&twisted_state(3, 1)) < 1e-15);
        assert!(order_parameter(&twisted_state(50, 1)) < 1e-14);
    }

    #[test]
    fn twisted_examples() {
        let tw = twisted_state(3, 1);
        let expected = [0.0, -2.0 * PI / 3.0, -4.0 * PI / 3.0];
        for (a, b) in tw.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(twisted_state(7, 0).iter().all(|&x| x == 0.0));
        let tw = twisted_state(50, 1);
        for w in tw.windows(2) {
            assert!((w[1] - w[0] + TAU / 50.0).abs() < 1e-14);
            assert!((w[1] - w[0] + 0.12566).abs() < 1e-5);
        }
    }

    #[test]
    fn perturb_contract() {
        let theta = random_phases(200, 3);
        assert_eq!(perturb(&theta, 0.0, 11).unwrap(), theta);
        let a = 0.3;
        let out = perturb(&theta, a, 11).unwrap();
        for (x, y) in theta.iter().zip(&out) {
            assert!((y - x).abs() < a * PI);
        }
        assert_eq!(out, perturb(&theta, a, 11).unwrap());
        assert_ne!(out, perturb(&theta, a, 12).unwrap());
        assert!(perturb(&theta, -1.0, 0).is_err());
    }

    #[test]
    fn rescale_identity_and_equilibrium() {
        let params = SimulationParams {
            t_max: 1.0,
            ..Default::default()
        };
        let traj = integrate_rk4(&k2(), &[0.3, 0.3], &params).unwrap();
        assert_eq!(rescale_time(&traj, 1.0).unwrap(), traj);
        let fast = rescale_time(&traj, 4.0).unwrap();
        for (a, b) in fast.states.iter().zip(&traj.states) {
            assert_eq!(a.theta, b.theta);
            assert_eq!(a.t, b.t / 4.0);
        }
        assert!(rescale_time(&traj, 0.0).is_err());
    }

    #[test]
    fn rescale_matches_doubled_coupling() {
        let params = SimulationParams {
            t_max: 10.0,
            record_every: 10,
            ..Default::default()
        };
        let a = k2();
        let a2 = Matrix::from_fn(2, 2, |i, j| 2.0 * a[(i, j)]);
        let theta0 = [0.0, 2.0];
        let slow = rescale_time(&integrate_rk4(&a, &theta0, &params).unwrap(), 2.0).unwrap();
        let fast = integrate_rk4(&a2, &theta0, &params).unwrap();
        let mut compared = 0;
        for s in &slow.states {
            if let Some(f) = fast.states.iter().find(|f| (f.t - s.t).abs() < 1e-9) {
                for (x, y) in s.theta.iter().zip(&f.theta) {
                    assert!((x - y).abs() < 1e-6);
                }
                compared += 1;
            }
        }
        assert_eq!(compared, 51);
    }

    #[test]
    fn csv_headers() {
        let params = SimulationParams {
            t_max: 0.02,
            record_every: 1,
            ..Default::default()
        };
        let traj = integrate_rk4(&k2(), &[0.0, 0.0], &params).unwrap();
        let mut buf = Vec::new();
        traj.write_phase_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("t,theta_0,theta_1"));
        assert_eq!(text.lines().count(), 4);
        let mut buf = Vec::new();
        traj.write_order_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("t,R\n0,1\n"));
    }

    #[test]
    fn broadcast_equilibrium_stays_put() {
        let net = MultilayerNetwork::new(
            vec![make_ring_circulant(10, 2, 1.0).unwrap(); 3],
            complete_coupling(3, 0.1),
            0.5,
        )
        .unwrap();
        let red = reduce(&net);
        let tw = twisted_state(3, 1);
        let red_rhs = coupling_rhs(&red, 0.5, &tw).unwrap();
        assert!(red_rhs.iter().all(|x| (x - 0.5).abs() < 1e-10));
        let full = broadcast(&tw, &net.layer_sizes()).unwrap();
        let rhs = kuramoto_rhs(&net.assemble_full(), 0.5, &full).unwrap();
        assert!(rhs.iter().all(|x| (x - 0.5).abs() < 1e-9));
    }
}
