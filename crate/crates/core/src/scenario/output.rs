use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::Result;

use super::config::SweepParameter;
use super::run::{RunReport, StabilityOutcome};

/// `<scenario>[_<parameter><value>]_seed<seed>`.
pub fn file_stem(scenario: &str, sweep: Option<(SweepParameter, f64)>, seed: u64) -> String {
    match sweep {
        Some((param, value)) => format!("{scenario}_{}{value}_seed{seed}", param.name()),
        None => format!("{scenario}_seed{seed}"),
    }
}

fn create(dir: &Path, name: &str, written: &mut Vec<PathBuf>) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let file = File::create(&path)?;
    written.push(path);
    Ok(BufWriter::new(file))
}

/// Writes `<stem>_compare.csv` (`t,R_full,R_reduced`), `<stem>_report.json`
/// and, with `phases`, the two phase dumps. Returns the written paths.
pub fn write_run_outputs(report: &RunReport, dir: &Path, seed: u64, phases: bool) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let stem = file_stem(&report.scenario, report.sweep, seed);
    let mut written = Vec::new();

    let mut w = create(dir, &format!("{stem}_compare.csv"), &mut written)?;
    writeln!(w, "t,R_full,R_reduced")?;
    for ((t, rf), rr) in report.times.iter().zip(&report.r_full).zip(&report.r_reduced) {
        writeln!(w, "{t},{rf},{rr}")?;
    }
    w.flush()?;

    let mut w = create(dir, &format!("{stem}_report.json"), &mut written)?;
    serde_json::to_writer_pretty(&mut w, report).map_err(std::io::Error::from)?;
    writeln!(w)?;
    w.flush()?;

    if phases {
        if let Some(traj) = &report.full_trajectory {
            let mut w = create(dir, &format!("{stem}_full_phases.csv"), &mut written)?;
            traj.write_phase_csv(&mut w)?;
            w.flush()?;
        }
        if let Some(traj) = &report.reduced_trajectory {
            let mut w = create(dir, &format!("{stem}_reduced_phases.csv"), &mut written)?;
            traj.write_phase_csv(&mut w)?;
            w.flush()?;
        }
    }
    Ok(written)
}

/// Per sweep run: `<stem>_R.csv` (`t,R` of the full network) plus everything
/// [`write_run_outputs`] writes.
pub fn write_sweep_outputs(reports: &[RunReport], dir: &Path, seed: u64, phases: bool) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for report in reports {
        let stem = file_stem(&report.scenario, report.sweep, seed);
        let mut w = create(dir, &format!("{stem}_R.csv"), &mut written)?;
        writeln!(w, "t,R")?;
        for (t, r) in report.times.iter().zip(&report.r_full) {
            writeln!(w, "{t},{r}")?;
        }
        w.flush()?;
        written.extend(write_run_outputs(report, dir, seed, phases)?);
    }
    Ok(written)
}

/// Writes `<stem>_spectrum.json` (full spectrum via the join decomposition),
/// `<stem>_reduced_spectrum.json` and `<stem>_stability.json` (everything).
pub fn write_stability_outputs(outcome: &StabilityOutcome, dir: &Path, seed: u64) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let stem = file_stem(&outcome.scenario, None, seed);
    let mut written = Vec::new();
    for (suffix, body) in [
        ("spectrum", serde_json::to_string_pretty(&outcome.full)),
        ("reduced_spectrum", serde_json::to_string_pretty(&outcome.reduced)),
        ("stability", serde_json::to_string_pretty(outcome)),
    ] {
        let mut w = create(dir, &format!("{stem}_{suffix}.json"), &mut written)?;
        writeln!(w, "{}", body.map_err(std::io::Error::from)?)?;
        w.flush()?;
    }
    Ok(written)
}
