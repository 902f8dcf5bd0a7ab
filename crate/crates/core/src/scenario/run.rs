use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate_rk4, perturb, random_phases, twisted_state, SimulationParams, Trajectory};
use crate::error::{Error, Result};
use crate::network::MultilayerNetwork;
use crate::phase::{max_wrapped_distance, wrap_to_pi};
use crate::reduction::{broadcast, is_broadcast_state, layer_representatives, reduce};
use crate::stability::{
    simulation_cross_check, spectrum_reduced, spectrum_via_join, CrossCheck, SpectrumReport, Verdict,
};

use super::config::{
    FullOperator, InitialCondition, LayerSpec, PerturbationMode, ScenarioConfig, SweepParameter, SweepSpec,
    DEFAULT_AMPLITUDE,
};

/// Horizon of the perturbed-simulation check run by [`run_stability`].
pub const CROSS_CHECK_HORIZON: f64 = 200.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedsUsed {
    pub initial: Option<u64>,
    pub perturbation: Option<u64>,
    pub layers: Vec<Option<u64>>,
}

impl SeedsUsed {
    fn of(cfg: &ScenarioConfig) -> Self {
        SeedsUsed {
            initial: match cfg.initial {
                InitialCondition::Random { seed } => Some(seed),
                _ => None,
            },
            perturbation: cfg.perturbation.map(|p| p.seed),
            layers: cfg.layers.iter().map(LayerSpec::seed).collect(),
        }
    }
}

/// Outcome of integrating the full network and its reduction side by side.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub sweep: Option<(SweepParameter, f64)>,
    pub params: SimulationParams,
    pub full_operator: FullOperator,
    pub times: Vec<f64>,
    pub r_full: Vec<f64>,
    pub r_reduced: Vec<f64>,
    /// Largest within-layer spread of the full state at each sample.
    pub broadcast_spread: Vec<f64>,
    pub max_broadcast_spread: f64,
    /// Largest wrapped distance between the full state and the broadcast reduced state.
    pub max_trajectory_deviation: f64,
    pub final_full: Vec<f64>,
    pub final_reduced: Vec<f64>,
    pub spectrum: Option<SpectrumReport>,
    pub wall_clock_seconds: f64,
    pub seeds: SeedsUsed,
    #[serde(skip)]
    pub full_trajectory: Option<Trajectory>,
    #[serde(skip)]
    pub reduced_trajectory: Option<Trajectory>,
}

impl RunReport {
    /// First sample time with `R_full > threshold`.
    pub fn first_crossing(&self, threshold: f64) -> Option<f64> {
        self.times
            .iter()
            .zip(&self.r_full)
            .find(|(_, &r)| r > threshold)
            .map(|(&t, _)| t)
    }

    pub fn final_r_full(&self) -> f64 {
        *self.r_full.last().expect("runs record at least the initial sample")
    }

    pub fn final_r_reduced(&self) -> f64 {
        *self.r_reduced.last().expect("runs record at least the initial sample")
    }

    /// Largest `|R_full(t) − R_reduced(t)|`.
    pub fn max_order_parameter_gap(&self) -> f64 {
        self.r_full
            .iter()
            .zip(&self.r_reduced)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn reduced_initial_state(cfg: &ScenarioConfig) -> Result<Vec<f64>> {
    let m = cfg.layer_count();
    Ok(match &cfg.initial {
        InitialCondition::Random { seed } => random_phases(m, *seed),
        InitialCondition::Twisted { p } => twisted_state(m, *p),
        InitialCondition::Explicit { theta } => theta.clone(),
        InitialCondition::Full { theta } => layer_representatives(theta, &cfg.layer_sizes())?,
    })
}

/// Builds the network and its reduction, integrates both from corresponding
/// initial states and compares them.
pub fn run_compare(cfg: &ScenarioConfig) -> Result<RunReport> {
    let started = Instant::now();
    let net = cfg.build_network()?;
    run_compare_on(cfg, &net, started)
}

fn run_compare_on(cfg: &ScenarioConfig, net: &MultilayerNetwork, started: Instant) -> Result<RunReport> {
    let red = reduce(net);
    let sizes = net.layer_sizes();

    let mut theta_bar0 = reduced_initial_state(cfg)?;
    let mut theta0 = match &cfg.initial {
        InitialCondition::Full { theta } => theta.clone(),
        _ => broadcast(&theta_bar0, &sizes)?,
    };
    if let Some(p) = cfg.perturbation {
        match p.mode {
            PerturbationMode::Reduced => {
                theta_bar0 = perturb(&theta_bar0, p.amplitude, p.seed)?;
                theta0 = broadcast(&theta_bar0, &sizes)?;
            }
            PerturbationMode::Full => theta0 = perturb(&theta0, p.amplitude, p.seed)?,
        }
    }

    let params = cfg.simulation_params();
    let operator = cfg.full_operator();
    let mut full = match operator {
        FullOperator::Blocks => integrate_rk4(net, &theta0, &params)?,
        _ => integrate_rk4(&net.assemble_full(), &theta0, &params)?,
    };
    let mut reduced = integrate_rk4(&red, &theta_bar0, &params)?;
    let seed = Some(cfg.primary_seed());
    full.label = format!("{}/full", cfg.name);
    full.seed = seed;
    reduced.label = format!("{}/reduced", cfg.name);
    reduced.seed = seed;

    let mut broadcast_spread = Vec::with_capacity(full.len());
    let mut max_trajectory_deviation = 0.0_f64;
    for (f, r) in full.states.iter().zip(&reduced.states) {
        broadcast_spread.push(is_broadcast_state(&f.theta, &sizes, 0.0)?.max_spread());
        let lifted = broadcast(&r.theta, &sizes)?;
        max_trajectory_deviation = max_trajectory_deviation.max(max_wrapped_distance(&f.theta, &lifted));
    }

    let spectrum = if cfg.output.spectrum {
        let theta_bar_star = reduced_initial_state(cfg)?;
        Some(spectrum_via_join(net, &theta_bar_star)?)
    } else {
        None
    };

    let wrap = |v: &[f64]| v.iter().map(|&x| wrap_to_pi(x)).collect::<Vec<_>>();
    Ok(RunReport {
        scenario: cfg.name.clone(),
        sweep: None,
        params,
        full_operator: operator,
        times: full.times(),
        r_full: full.order_parameters(),
        r_reduced: reduced.order_parameters(),
        max_broadcast_spread: broadcast_spread.iter().copied().fold(0.0, f64::max),
        broadcast_spread,
        max_trajectory_deviation,
        final_full: wrap(&full.last().expect("initial sample").theta),
        final_reduced: wrap(&reduced.last().expect("initial sample").theta),
        spectrum,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        seeds: SeedsUsed::of(cfg),
        full_trajectory: Some(full),
        reduced_trajectory: Some(reduced),
    })
}

/// One [`run_compare`] per sweep value, run concurrently with identical seeds.
pub fn run_sweep(cfg: &ScenarioConfig, sweep: &SweepSpec) -> Result<Vec<RunReport>> {
    sweep.validate()?;
    let configs = sweep
        .values
        .iter()
        .map(|&v| cfg.with_parameter(sweep.parameter, v))
        .collect::<Result<Vec<_>>>()?;
    // The layer graphs do not depend on either sweep parameter.
    let base = cfg.build_network()?;
    std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .zip(&sweep.values)
            .map(|(c, &value)| {
                let base = &base;
                scope.spawn(move || -> Result<RunReport> {
                    let started = Instant::now();
                    let net = MultilayerNetwork::new(
                        base.layers().to_vec(),
                        c.inter.coupling_matrix(c.layer_count())?,
                        c.omega,
                    )?;
                    let mut report = run_compare_on(c, &net, started)?;
                    report.sweep = Some((sweep.parameter, value));
                    Ok(report)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}

/// Spectra of the reduced and the full Jacobian at a reduced equilibrium.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilityOutcome {
    pub scenario: String,
    pub theta_bar_star: Vec<f64>,
    pub reduced: SpectrumReport,
    pub full: SpectrumReport,
    pub verdict: Verdict,
    pub cross_check: Option<CrossCheck>,
}

/// Stability of the broadcast of the configured reduced equilibrium (a twisted
/// state or an explicit reduced vector).
pub fn run_stability(cfg: &ScenarioConfig, cross_check: bool) -> Result<StabilityOutcome> {
    let theta_bar_star = match &cfg.initial {
        InitialCondition::Twisted { p } => twisted_state(cfg.layer_count(), *p),
        InitialCondition::Explicit { theta } => theta.clone(),
        _ => {
            return Err(Error::config(
                "initial.kind",
                "stability analysis needs `twisted` or `explicit` (a reduced equilibrium)",
            ));
        }
    };
    let net = cfg.build_network()?;
    let reduced = spectrum_reduced(&reduce(&net), &theta_bar_star)?;
    let full = spectrum_via_join(&net, &theta_bar_star)?;
    let verdict = full.verdict;
    let cross_check = if cross_check {
        let (amplitude, seed) = cfg
            .perturbation
            .map_or((DEFAULT_AMPLITUDE, 0), |p| (p.amplitude, p.seed));
        let params = SimulationParams {
            t_max: CROSS_CHECK_HORIZON,
            record_every: cfg.integration.record_every.max(10),
            ..cfg.simulation_params()
        };
        Some(simulation_cross_check(
            &net,
            &theta_bar_star,
            verdict,
            amplitude,
            seed,
            &params,
        )?)
    } else {
        None
    };
    Ok(StabilityOutcome {
        scenario: cfg.name.clone(),
        theta_bar_star,
        reduced,
        full,
        verdict,
        cross_check,
    })
}
