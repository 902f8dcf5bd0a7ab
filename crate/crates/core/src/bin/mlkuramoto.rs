use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use multilayer_kuramoto::scenario::{
    parse_config, run_compare, run_stability, run_sweep, write_run_outputs, write_stability_outputs,
    write_sweep_outputs, ScenarioConfig, SweepParameter, SweepSpec,
};
use multilayer_kuramoto::{Error, Result};

/// Kuramoto oscillators on multilayer networks and their reduced systems.
#[derive(Parser)]
#[command(name = "mlkuramoto", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the full network and its reduction side by side.
    Run(Common),
    /// Repeat `run` over a list of perturbation amplitudes or couplings.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Parameter to sweep (`amplitude` or `epsilon`); overrides `[sweep]`.
        #[arg(long)]
        param: Option<String>,
        /// Comma-separated values; overrides `[sweep]`.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// Spectra and verdict for the broadcast of a reduced equilibrium.
    Stability {
        #[command(flatten)]
        common: Common,
        /// Also integrate a perturbed copy and check it agrees with the verdict.
        #[arg(long)]
        cross_check: bool,
    },
    /// Parse and validate a config, printing it with defaults filled in.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: `[output] dir`, else `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replaces every seed in the config.
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn load(&self) -> Result<(ScenarioConfig, PathBuf)> {
        let mut cfg = load_config(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.override_seed(seed);
        }
        let out = self
            .out
            .clone()
            .or_else(|| cfg.output.dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"));
        Ok((cfg, out))
    }
}

fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::config("<file>", format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run(common) => {
            let (cfg, out) = common.load()?;
            let report = run_compare(&cfg)?;
            println!(
                "{}: R_full {:.6} R_reduced {:.6} max spread {:.3e} ({:.2}s)",
                cfg.name,
                report.final_r_full(),
                report.final_r_reduced(),
                report.max_broadcast_spread,
                report.wall_clock_seconds
            );
            report_written(&write_run_outputs(
                &report,
                &out,
                cfg.primary_seed(),
                cfg.output.phases,
            )?);
        }
        Command::Sweep { common, param, values } => {
            let (cfg, out) = common.load()?;
            let base = cfg.sweep.clone();
            let parameter = match (param, &base) {
                (Some(p), _) => p.parse::<SweepParameter>()?,
                (None, Some(s)) => s.parameter,
                (None, None) => return Err(Error::config("sweep.parameter", "missing; pass --param or add [sweep]")),
            };
            let values = match (values, base) {
                (Some(v), _) => v,
                (None, Some(s)) => s.values,
                (None, None) => return Err(Error::config("sweep.values", "missing; pass --values or add [sweep]")),
            };
            let sweep = SweepSpec { parameter, values };
            sweep.validate()?;
            let reports = run_sweep(&cfg, &sweep)?;
            for r in &reports {
                let value = r.sweep.map_or(f64::NAN, |(_, v)| v);
                let crossing = r.first_crossing(0.99).map_or("never".to_string(), |t| format!("{t}"));
                println!(
                    "{}={value}: final R {:.6}, first R>0.99 at {crossing}",
                    parameter.name(),
                    r.final_r_full()
                );
            }
            report_written(&write_sweep_outputs(
                &reports,
                &out,
                cfg.primary_seed(),
                cfg.output.phases,
            )?);
        }
        Command::Stability { common, cross_check } => {
            let (cfg, out) = common.load()?;
            let outcome = run_stability(&cfg, cross_check)?;
            println!("verdict: {}", outcome.verdict);
            if let Some(cc) = &outcome.cross_check {
                println!(
                    "cross-check: final distance {:.3e}, consistent {:?}",
                    cc.final_distance, cc.consistent
                );
            }
            report_written(&write_stability_outputs(&outcome, &out, cfg.primary_seed())?);
        }
        Command::Validate { config } => {
            let cfg = load_config(&config)?;
            print!("{}", cfg.to_toml());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
