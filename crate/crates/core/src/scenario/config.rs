//! TOML scenario documents.
//!
//! ```toml
//! name = "three-rings"
//! omega = 0.0
//!
//! [layers]
//! count = 3
//! template = { kind = "ring", n = 100, k = 10, w = 1.0 }
//! # or: specs = [{ kind = "complete", n = 4 }, { kind = "random", n = 4, p = 0.5, seed = 3 }, ...]
//!
//! [inter]
//! kind = "complete"          # complete | ring | explicit
//! epsilon = 0.05             # complete/ring; matrix = [[...]] for explicit
//!
//! [initial]
//! kind = "random"            # random{seed} | twisted{p} | explicit{theta} | full{theta}
//! seed = 1
//!
//! [perturbation]             # optional
//! amplitude = 0.01
//! seed = 2
//! mode = "reduced"           # reduced | full
//!
//! [integration]              # optional
//! dt = 0.01
//! t_max = 50.0
//! record_every = 10
//! operator = "auto"          # auto | dense | blocks
//!
//! [output]                   # optional
//! dir = "out"
//! phases = false
//! spectrum = false
//!
//! [sweep]                    # optional, used by `sweep`
//! parameter = "amplitude"    # amplitude | epsilon
//! values = [0.001, 0.01, 0.1]
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::dynamics::SimulationParams;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::network::{
    complete_coupling, make_complete, make_random_connected, make_ring_circulant, ring_coupling, LayerGraph,
    MultilayerNetwork, DEFAULT_EDGE_PROBABILITY, STRUCTURE_TOL,
};
use crate::reduction::{is_broadcast_state, DEFAULT_BROADCAST_TOL};

/// Coupling used for complete inter-layer coupling with more than three layers
/// when the document gives none.
pub const DEFAULT_EPSILON_MANY_LAYERS: f64 = 0.01;
/// Coupling used otherwise when the document gives none.
pub const DEFAULT_EPSILON: f64 = 0.05;
/// Perturbation amplitude used by sweeps and cross-checks without a `[perturbation]` table.
pub const DEFAULT_AMPLITUDE: f64 = 0.01;
/// Largest network integrated with the dense adjacency under `operator = "auto"`.
pub const DENSE_OPERATOR_LIMIT: usize = 1024;

const REQUIRED_TOP_LEVEL: [&str; 3] = ["layers", "inter", "initial"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum LayerSpec {
    Ring {
        n: usize,
        k: usize,
        #[serde(default = "unit_weight")]
        w: f64,
    },
    Complete {
        n: usize,
        #[serde(default = "unit_weight")]
        w: f64,
    },
    Random {
        n: usize,
        #[serde(default = "default_p")]
        p: f64,
        #[serde(default = "unit_weight")]
        w: f64,
        #[serde(default)]
        seed: u64,
    },
}

fn unit_weight() -> f64 {
    1.0
}

fn default_p() -> f64 {
    DEFAULT_EDGE_PROBABILITY
}

impl LayerSpec {
    pub fn size(&self) -> usize {
        match *self {
            LayerSpec::Ring { n, .. } | LayerSpec::Complete { n, .. } | LayerSpec::Random { n, .. } => n,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match *self {
            LayerSpec::Random { seed, .. } => Some(seed),
            _ => None,
        }
    }

    pub fn build(&self) -> Result<LayerGraph> {
        match *self {
            LayerSpec::Ring { n, k, w } => make_ring_circulant(n, k, w),
            LayerSpec::Complete { n, w } => make_complete(n, w),
            LayerSpec::Random { n, p, w, seed } => make_random_connected(n, p, w, seed),
        }
    }

    fn validate(&self, path: &str) -> Result<()> {
        let weight_ok = |w: f64| w.is_finite() && w > 0.0;
        match *self {
            LayerSpec::Ring { n, k, w } => {
                if n == 0 {
                    return Err(Error::config(format!("{path}.n"), "must be at least 1"));
                }
                if k > (n - 1) / 2 {
                    return Err(Error::config(
                        format!("{path}.k"),
                        format!("k={k} exceeds floor((n-1)/2)={}", (n - 1) / 2),
                    ));
                }
                if !weight_ok(w) {
                    return Err(Error::config(format!("{path}.w"), "must be finite and positive"));
                }
            }
            LayerSpec::Complete { n, w } => {
                if n == 0 {
                    return Err(Error::config(format!("{path}.n"), "must be at least 1"));
                }
                if !weight_ok(w) {
                    return Err(Error::config(format!("{path}.w"), "must be finite and positive"));
                }
            }
            LayerSpec::Random { n, p, w, .. } => {
                if n == 0 {
                    return Err(Error::config(format!("{path}.n"), "must be at least 1"));
                }
                if !(p > 0.0 && p <= 1.0) {
                    return Err(Error::config(format!("{path}.p"), "must lie in (0, 1]"));
                }
                if !weight_ok(w) {
                    return Err(Error::config(format!("{path}.w"), "must be finite and positive"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InterSpec {
    Complete { epsilon: f64 },
    Ring { epsilon: f64 },
    Explicit { matrix: Vec<Vec<f64>> },
}

impl InterSpec {
    pub fn coupling_matrix(&self, m: usize) -> Result<Matrix> {
        match self {
            InterSpec::Complete { epsilon } => Ok(complete_coupling(m, *epsilon)),
            InterSpec::Ring { epsilon } => Ok(ring_coupling(m, *epsilon)),
            InterSpec::Explicit { matrix } => Matrix::from_rows(matrix),
        }
    }

    pub fn uniform_epsilon(&self) -> Option<f64> {
        match *self {
            InterSpec::Complete { epsilon } | InterSpec::Ring { epsilon } => Some(epsilon),
            InterSpec::Explicit { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialCondition {
    /// Uniform reduced phases on `[−π, π)`.
    Random { seed: u64 },
    /// The `p`-th twisted state of the reduced system.
    Twisted { p: i64 },
    /// Explicit reduced state (one phase per layer).
    Explicit { theta: Vec<f64> },
    /// Explicit full state; must be constant on every layer.
    Full { theta: Vec<f64> },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PerturbationMode {
    /// Perturb the reduced state, then broadcast; both systems stay comparable.
    #[default]
    Reduced,
    /// Perturb every oscillator of the full state independently.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbation {
    pub amplitude: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: PerturbationMode,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FullOperator {
    #[default]
    Auto,
    Dense,
    Blocks,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Integration {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default)]
    pub operator: FullOperator,
}

fn default_dt() -> f64 {
    SimulationParams::default().dt
}

fn default_t_max() -> f64 {
    SimulationParams::default().t_max
}

fn default_record_every() -> usize {
    SimulationParams::default().record_every
}

impl Default for Integration {
    fn default() -> Self {
        Integration {
            dt: default_dt(),
            t_max: default_t_max(),
            record_every: default_record_every(),
            operator: FullOperator::Auto,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub phases: bool,
    #[serde(default)]
    pub spectrum: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    Amplitude,
    Epsilon,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Amplitude => "amplitude",
            SweepParameter::Epsilon => "epsilon",
        }
    }
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplitude" => Ok(SweepParameter::Amplitude),
            "epsilon" => Ok(SweepParameter::Epsilon),
            other => Err(Error::config(
                "sweep.parameter",
                format!("unsupported sweep parameter `{other}` (expected `amplitude` or `epsilon`)"),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::config("sweep.values", "needs at least one value"));
        }
        if let Some((i, v)) = self
            .values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::config(
                format!("sweep.values[{i}]"),
                format!("{v} must be finite and nonnegative"),
            ));
        }
        Ok(())
    }
}

/// A validated scenario with every default filled in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub omega: f64,
    pub layers: Vec<LayerSpec>,
    pub inter: InterSpec,
    pub initial: InitialCondition,
    pub perturbation: Option<Perturbation>,
    pub integration: Integration,
    pub output: OutputSpec,
    pub sweep: Option<SweepSpec>,
}

// Raw document shapes; `deny_unknown_fields` rejects typos with their path.

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    #[serde(default = "default_name")]
    name: String,
    #[serde(default)]
    omega: f64,
    layers: RawLayers,
    inter: RawInter,
    initial: InitialCondition,
    perturbation: Option<Perturbation>,
    #[serde(default)]
    integration: Integration,
    #[serde(default)]
    output: OutputSpec,
    sweep: Option<RawSweep>,
}

fn default_name() -> String {
    "scenario".to_string()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayers {
    count: Option<usize>,
    template: Option<LayerSpec>,
    specs: Option<Vec<LayerSpec>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInter {
    kind: String,
    epsilon: Option<f64>,
    matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    parameter: String,
    values: Vec<f64>,
}

/// Parses and validates a TOML scenario document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::config("<document>", e.message().to_string()))?;
    let missing: Vec<&str> = REQUIRED_TOP_LEVEL
        .iter()
        .copied()
        .filter(|key| !table.contains_key(*key))
        .collect();
    if !missing.is_empty() {
        return Err(Error::config(
            "<document>",
            format!("missing required fields: {}", missing.join(", ")),
        ));
    }

    let raw: RawDocument = serde_path_to_error::deserialize(toml::Value::Table(table)).map_err(|e| {
        let path = e.path().to_string();
        Error::config(path, e.into_inner().message().to_string())
    })?;
    resolve(raw)
}

fn resolve(raw: RawDocument) -> Result<ScenarioConfig> {
    if !raw.omega.is_finite() {
        return Err(Error::config("omega", "must be finite"));
    }

    let layers = match (raw.layers.count, raw.layers.template, raw.layers.specs) {
        (Some(count), Some(template), None) => {
            if count == 0 {
                return Err(Error::config("layers.count", "must be at least 1"));
            }
            (0..count)
                .map(|l| match &template {
                    LayerSpec::Random { n, p, w, seed } => LayerSpec::Random {
                        n: *n,
                        p: *p,
                        w: *w,
                        seed: seed.wrapping_add(l as u64),
                    },
                    other => other.clone(),
                })
                .collect::<Vec<_>>()
        }
        (count, None, Some(specs)) => {
            if specs.is_empty() {
                return Err(Error::config("layers.specs", "needs at least one layer"));
            }
            if let Some(count) = count {
                if count != specs.len() {
                    return Err(Error::config(
                        "layers.count",
                        format!("count={count} but {} specs given", specs.len()),
                    ));
                }
            }
            specs
        }
        (_, Some(_), Some(_)) => {
            return Err(Error::config("layers", "give either `template` or `specs`, not both"));
        }
        (None, Some(_), None) => return Err(Error::config("layers.count", "required with `template`")),
        (_, None, None) => return Err(Error::config("layers", "missing `template` or `specs`")),
    };
    for (l, spec) in layers.iter().enumerate() {
        spec.validate(&format!("layers[{l}]"))?;
    }
    let m = layers.len();

    let inter = resolve_inter(raw.inter, m)?;

    let sizes: Vec<usize> = layers.iter().map(LayerSpec::size).collect();
    match &raw.initial {
        InitialCondition::Explicit { theta } if theta.len() != m => {
            return Err(Error::config(
                "initial.theta",
                format!("expected {m} reduced phases, found {}", theta.len()),
            ));
        }
        InitialCondition::Full { theta } => {
            let total: usize = sizes.iter().sum();
            if theta.len() != total {
                return Err(Error::config(
                    "initial.theta",
                    format!("expected {total} phases, found {}", theta.len()),
                ));
            }
            let check = is_broadcast_state(theta, &sizes, DEFAULT_BROADCAST_TOL)?;
            if !check.is_broadcast {
                return Err(Error::config(
                    "initial.theta",
                    format!("full state is not constant on layers (spreads {:?})", check.spreads),
                ));
            }
        }
        _ => {}
    }
    if let InitialCondition::Explicit { theta } | InitialCondition::Full { theta } = &raw.initial {
        if theta.iter().any(|x| !x.is_finite()) {
            return Err(Error::config("initial.theta", "phases must be finite"));
        }
    }

    if let Some(p) = &raw.perturbation {
        if !(p.amplitude.is_finite() && p.amplitude >= 0.0) {
            return Err(Error::config(
                "perturbation.amplitude",
                "must be finite and nonnegative",
            ));
        }
    }

    let integration = raw.integration;
    SimulationParams {
        dt: integration.dt,
        t_max: integration.t_max,
        omega: raw.omega,
        record_every: integration.record_every,
    }
    .validate()
    .map_err(|e| Error::config("integration", e.to_string()))?;

    let sweep = raw
        .sweep
        .map(|s| -> Result<SweepSpec> {
            let spec = SweepSpec {
                parameter: s.parameter.parse()?,
                values: s.values,
            };
            spec.validate()?;
            Ok(spec)
        })
        .transpose()?;

    Ok(ScenarioConfig {
        name: raw.name,
        omega: raw.omega,
        layers,
        inter,
        initial: raw.initial,
        perturbation: raw.perturbation,
        integration,
        output: raw.output,
        sweep,
    })
}

fn resolve_inter(raw: RawInter, m: usize) -> Result<InterSpec> {
    let check_epsilon = |eps: f64| {
        if eps.is_finite() && eps >= 0.0 {
            Ok(eps)
        } else {
            Err(Error::config("inter.epsilon", "must be finite and nonnegative"))
        }
    };
    match raw.kind.as_str() {
        "complete" | "ring" => {
            if raw.matrix.is_some() {
                return Err(Error::config("inter.matrix", "only allowed with kind = \"explicit\""));
            }
            let default = if raw.kind == "complete" && m > 3 {
                DEFAULT_EPSILON_MANY_LAYERS
            } else {
                DEFAULT_EPSILON
            };
            let epsilon = check_epsilon(raw.epsilon.unwrap_or(default))?;
            Ok(if raw.kind == "complete" {
                InterSpec::Complete { epsilon }
            } else {
                InterSpec::Ring { epsilon }
            })
        }
        "explicit" => {
            if raw.epsilon.is_some() {
                return Err(Error::config("inter.epsilon", "not allowed with kind = \"explicit\""));
            }
            let matrix = raw
                .matrix
                .ok_or_else(|| Error::config("inter.matrix", "required with kind = \"explicit\""))?;
            if matrix.len() != m || matrix.iter().any(|row| row.len() != m) {
                return Err(Error::config("inter.matrix", format!("must be {m}x{m}")));
            }
            for (l, row) in matrix.iter().enumerate() {
                if row[l] != 0.0 {
                    return Err(Error::config(
                        format!("inter.matrix[{l}][{l}]"),
                        "diagonal must be zero",
                    ));
                }
                for (k, &e) in row.iter().enumerate() {
                    if !(e.is_finite() && e >= 0.0) {
                        return Err(Error::config(
                            format!("inter.matrix[{l}][{k}]"),
                            "must be finite and nonnegative",
                        ));
                    }
                    if k > l && (e - matrix[k][l]).abs() > STRUCTURE_TOL {
                        return Err(Error::config(
                            format!("inter.matrix[{l}][{k}]"),
                            format!("asymmetric pair ({l},{k}): {e} vs {}", matrix[k][l]),
                        ));
                    }
                }
            }
            Ok(InterSpec::Explicit { matrix })
        }
        other => Err(Error::config(
            "inter.kind",
            format!("unknown kind `{other}` (expected complete, ring or explicit)"),
        )),
    }
}

impl ScenarioConfig {
    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(LayerSpec::size).collect()
    }

    pub fn build_network(&self) -> Result<MultilayerNetwork> {
        let layers = self.layers.iter().map(LayerSpec::build).collect::<Result<Vec<_>>>()?;
        let inter = self.inter.coupling_matrix(self.layer_count())?;
        MultilayerNetwork::new(layers, inter, self.omega)
    }

    pub fn simulation_params(&self) -> SimulationParams {
        SimulationParams {
            dt: self.integration.dt,
            t_max: self.integration.t_max,
            omega: self.omega,
            record_every: self.integration.record_every,
        }
    }

    /// Seed used in file names: the random initial-condition seed, else the
    /// perturbation seed, else 0.
    pub fn primary_seed(&self) -> u64 {
        match (&self.initial, &self.perturbation) {
            (InitialCondition::Random { seed }, _) => *seed,
            (_, Some(p)) => p.seed,
            _ => 0,
        }
    }

    /// Replaces every seed: initial condition and perturbation get `seed`,
    /// random layer `l` gets `seed + l`.
    pub fn override_seed(&mut self, seed: u64) {
        if let InitialCondition::Random { seed: s } = &mut self.initial {
            *s = seed;
        }
        if let Some(p) = &mut self.perturbation {
            p.seed = seed;
        }
        for (l, spec) in self.layers.iter_mut().enumerate() {
            if let LayerSpec::Random { seed: s, .. } = spec {
                *s = seed.wrapping_add(l as u64);
            }
        }
    }

    /// Copy with one sweep parameter set to `value`.
    pub fn with_parameter(&self, parameter: SweepParameter, value: f64) -> Result<ScenarioConfig> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::config(
                "sweep.values",
                format!("{value} must be finite and nonnegative"),
            ));
        }
        let mut cfg = self.clone();
        match parameter {
            SweepParameter::Amplitude => {
                let p = cfg.perturbation.get_or_insert(Perturbation {
                    amplitude: DEFAULT_AMPLITUDE,
                    seed: 0,
                    mode: PerturbationMode::Reduced,
                });
                p.amplitude = value;
            }
            SweepParameter::Epsilon => match &mut cfg.inter {
                InterSpec::Complete { epsilon } | InterSpec::Ring { epsilon } => *epsilon = value,
                InterSpec::Explicit { .. } => {
                    return Err(Error::config(
                        "inter.kind",
                        "an epsilon sweep needs uniform inter-layer coupling (complete or ring)",
                    ));
                }
            },
        }
        Ok(cfg)
    }

    pub fn full_operator(&self) -> FullOperator {
        match self.integration.operator {
            FullOperator::Auto if self.layer_sizes().iter().sum::<usize>() <= DENSE_OPERATOR_LIMIT => {
                FullOperator::Dense
            }
            FullOperator::Auto => FullOperator::Blocks,
            other => other,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const THREE_RINGS: &str = r#"
        name = "three_rings"
        [layers]
        count = 3
        template = { kind = "ring", n = 100, k = 10 }
        [inter]
        kind = "complete"
        epsilon = 0.05
        [initial]
        kind = "random"
        seed = 1
    "#;

    #[test]
    fn minimal_ring_config() {
        let cfg = parse_config(THREE_RINGS).unwrap();
        assert_eq!(cfg.layers, vec![LayerSpec::Ring { n: 100, k: 10, w: 1.0 }; 3]);
        assert_eq!(cfg.inter, InterSpec::Complete { epsilon: 0.05 });
        assert_eq!(cfg.initial, InitialCondition::Random { seed: 1 });
        assert_eq!(cfg.integration, Integration::default());
        assert_eq!(cfg.integration.dt, 0.01);
        assert_eq!(cfg.integration.t_max, 50.0);
        assert_eq!(cfg.integration.record_every, 10);
        assert_eq!(cfg.omega, 0.0);
        assert_eq!(cfg.perturbation, None);
        assert_eq!(cfg.full_operator(), FullOperator::Dense);
        let net = cfg.build_network().unwrap();
        assert_eq!(net.total_size(), 300);
    }

    #[test]
    fn asymmetric_explicit_inter() {
        let text = r#"
            [layers]
            count = 2
            template = { kind = "complete", n = 3 }
            [inter]
            kind = "explicit"
            matrix = [[0.0, 0.1], [0.2, 0.0]]
            [initial]
            kind = "twisted"
            p = 1
        "#;
        match parse_config(text) {
            Err(Error::Config { path, message }) => {
                assert_eq!(path, "inter.matrix[0][1]");
                assert!(message.contains("asymmetric pair (0,1)"), "{message}");
            }
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn empty_document_lists_required_fields() {
        match parse_config("") {
            Err(Error::Config { message, .. }) => {
                assert!(message.contains("layers") && message.contains("inter") && message.contains("initial"));
            }
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_report_their_path() {
        let text = THREE_RINGS.replace("epsilon = 0.05", "epsilon = 0.05\nepsilom = 1.0");
        match parse_config(&text) {
            Err(Error::Config { path, message }) => {
                assert_eq!(path, "inter.epsilom");
                assert!(message.contains("epsilom"), "{message}");
            }
            other => panic!("expected config error, got {other:?}"),
        }
        let text = THREE_RINGS.replace("k = 10 }", "k = 10, q = 2 }");
        match parse_config(&text) {
            Err(Error::Config { path, message }) => {
                assert!(path.starts_with("layers.template"), "{path}");
                assert!(message.contains('q'), "{message}");
            }
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn type_mismatch_reports_path() {
        let text = THREE_RINGS.replace("seed = 1", "seed = \"one\"");
        match parse_config(&text) {
            Err(Error::Config { path, .. }) => assert!(path.starts_with("initial"), "{path}"),
            other => panic!("expected config error, got {other:?}"),
        }
        let text = THREE_RINGS.replace(
            "name = \"three_rings\"",
            "name = \"three_rings\"\n[integration]\ndt = \"x\"",
        );
        match parse_config(&text) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "integration.dt"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn generator_preconditions() {
        let text = THREE_RINGS.replace("k = 10", "k = 50");
        match parse_config(&text) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "layers[0].k"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn epsilon_defaults() {
        let text = THREE_RINGS.replace("epsilon = 0.05", "");
        assert_eq!(
            parse_config(&text).unwrap().inter,
            InterSpec::Complete { epsilon: 0.05 }
        );
        let text = text.replace("count = 3", "count = 50");
        assert_eq!(
            parse_config(&text).unwrap().inter,
            InterSpec::Complete { epsilon: 0.01 }
        );
        let text = text.replace("kind = \"complete\"", "kind = \"ring\"");
        assert_eq!(parse_config(&text).unwrap().inter, InterSpec::Ring { epsilon: 0.05 });
    }

    #[test]
    fn random_template_seeds_are_offset() {
        let text = THREE_RINGS.replace(
            "{ kind = \"ring\", n = 100, k = 10 }",
            "{ kind = \"random\", n = 10, seed = 5 }",
        );
        let cfg = parse_config(&text).unwrap();
        let seeds: Vec<_> = cfg.layers.iter().map(LayerSpec::seed).collect();
        assert_eq!(seeds, vec![Some(5), Some(6), Some(7)]);
        let mut cfg = cfg;
        cfg.override_seed(100);
        let seeds: Vec<_> = cfg.layers.iter().map(LayerSpec::seed).collect();
        assert_eq!(seeds, vec![Some(100), Some(101), Some(102)]);
        assert_eq!(cfg.primary_seed(), 100);
    }

    #[test]
    fn explicit_and_full_initial_lengths() {
        let text = THREE_RINGS.replace(
            "kind = \"random\"\n        seed = 1",
            "kind = \"explicit\"\n        theta = [0.0, 1.0]",
        );
        assert!(matches!(parse_config(&text), Err(Error::Config { .. })));
        let text = r#"
            [layers]
            specs = [{ kind = "complete", n = 2 }, { kind = "complete", n = 1 }]
            [inter]
            kind = "complete"
            [initial]
            kind = "full"
            theta = [0.5, 0.5, 1.0]
        "#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.layer_sizes(), vec![2, 1]);
        let bad = text.replace("[0.5, 0.5, 1.0]", "[0.5, 0.6, 1.0]");
        assert!(matches!(parse_config(&bad), Err(Error::Config { .. })));
    }

    #[test]
    fn sweep_section() {
        let text = format!("{THREE_RINGS}\n[sweep]\nparameter = \"amplitude\"\nvalues = [0.1, 0.2]\n");
        let cfg = parse_config(&text).unwrap();
        assert_eq!(
            cfg.sweep,
            Some(SweepSpec {
                parameter: SweepParameter::Amplitude,
                values: vec![0.1, 0.2]
            })
        );
        let text = format!("{THREE_RINGS}\n[sweep]\nparameter = \"omega\"\nvalues = [0.1]\n");
        assert!(matches!(parse_config(&text), Err(Error::Config { .. })));
        let text = format!("{THREE_RINGS}\n[sweep]\nparameter = \"epsilon\"\nvalues = [-0.1]\n");
        assert!(matches!(parse_config(&text), Err(Error::Config { .. })));
    }

    #[test]
    fn with_parameter_sets_values() {
        let cfg = parse_config(THREE_RINGS).unwrap();
        let e = cfg.with_parameter(SweepParameter::Epsilon, 0.2).unwrap();
        assert_eq!(e.inter, InterSpec::Complete { epsilon: 0.2 });
        let a = cfg.with_parameter(SweepParameter::Amplitude, 0.3).unwrap();
        assert_eq!(a.perturbation.unwrap().amplitude, 0.3);
    }

    #[test]
    fn resolved_config_round_trips_through_toml() {
        let cfg = parse_config(THREE_RINGS).unwrap();
        let again: ScenarioConfig = toml::from_str(&cfg.to_toml()).unwrap();
        assert_eq!(again, cfg);
    }
}
