//! Configuration-driven experiments: paired full/reduced runs, parameter
//! sweeps and stability analyses, with CSV and JSON artifacts.

mod config;
mod output;
mod run;

pub use config::{
    parse_config, FullOperator, InitialCondition, Integration, InterSpec, LayerSpec, OutputSpec, Perturbation,
    PerturbationMode, ScenarioConfig, SweepParameter, SweepSpec, DEFAULT_AMPLITUDE, DEFAULT_EPSILON,
    DEFAULT_EPSILON_MANY_LAYERS, DENSE_OPERATOR_LIMIT,
};
pub use output::{file_stem, write_run_outputs, write_stability_outputs, write_sweep_outputs};
pub use run::{run_compare, run_stability, run_sweep, RunReport, SeedsUsed, StabilityOutcome, CROSS_CHECK_HORIZON};
