//! Table and CSV rendering. Tables round to one decimal with a `*` flag on
//! values past 1e6; CSV files carry full precision (shortest round-trip
//! formatting), so identical inputs produce byte-identical outputs.

use std::path::Path;
use std::process::ExitCode;

use nalgebra::DVector;
use nodalfreq_core::{
    Error, MetricReport, PowerNetwork, SimulationResult, SpectralModes, SweepRow,
};

pub struct OutputFile {
    pub name: String,
    pub content: String,
}

/// Create the output directory and write every file; called only after all
/// computation succeeded so failures never leave partial results.
pub fn write_outputs(dir: &Path, files: &[OutputFile]) -> Result<(), Error> {
    std::fs::create_dir_all(dir)?;
    for file in files {
        std::fs::write(dir.join(&file.name), &file.content)?;
    }
    Ok(())
}

pub fn validation_exit(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn metric_cell(v: f64) -> String {
    if !v.is_finite() {
        "inf*".to_string()
    } else if v >= 1e6 {
        format!("{v:.1e}*")
    } else {
        format!("{v:.1}")
    }
}

/// Per-bus metric table: bus, 1/c_ii, then one column per mode.
pub fn metric_table(report: &MetricReport) -> String {
    let n = report.n_modes();
    let mut out = String::new();
    let mut header = format!("{:>8} {:>10}", "bus", "1/c_ii");
    for k in 1..=n {
        header.push_str(&format!(" {:>10}", format!("1/c_{k},ii")));
    }
    out.push_str(&header);
    out.push('\n');
    for bus in &report.buses {
        let mut row = format!("{:>8} {:>10}", bus.bus_id, metric_cell(bus.inv_c_ii));
        for comp in &bus.components {
            row.push_str(&format!(" {:>10}", metric_cell(comp.inv_c)));
        }
        out.push_str(&row);
        out.push('\n');
    }
    out
}

pub fn metrics_csv(report: &MetricReport) -> String {
    let n = report.n_modes();
    let mut out = String::from("bus,c_ii,inv_c_ii");
    for k in 1..=n {
        out.push_str(&format!(",inv_c_{k}"));
    }
    out.push('\n');
    for bus in &report.buses {
        out.push_str(&format!("{},{},{}", bus.bus_id, bus.c_ii, bus.inv_c_ii));
        for comp in &bus.components {
            out.push_str(&format!(",{}", comp.inv_c));
        }
        out.push('\n');
    }
    out
}

/// Eigenvalues and eigenvector columns, one row per mode.
pub fn modes_csv(modes: &SpectralModes, gen_ids: &[String]) -> String {
    let mut out = String::from("mode,lambda");
    for id in gen_ids {
        out.push_str(&format!(",u_{id}"));
    }
    out.push('\n');
    for k in 0..modes.n() {
        out.push_str(&format!("{},{}", k + 1, modes.eigenvalues[k]));
        for i in 0..modes.n() {
            out.push_str(&format!(",{}", modes.vectors[(i, k)]));
        }
        out.push('\n');
    }
    out
}

fn trajectory_header(net: &PowerNetwork) -> String {
    let mut out = String::from("t");
    for id in net.network_bus_ids() {
        out.push_str(&format!(",bus_{id}"));
    }
    out.push_str(",coi\n");
    out
}

pub fn trajectory_csv(net: &PowerNetwork, result: &SimulationResult) -> String {
    let mut out = trajectory_header(net);
    for s in 0..result.time.len() {
        out.push_str(&format!("{}", result.time[s]));
        for j in 0..result.network_freq.ncols() {
            out.push_str(&format!(",{}", result.network_freq[(s, j)]));
        }
        out.push_str(&format!(",{}\n", result.coi[s]));
    }
    out
}

/// Modal trajectories start at the disturbance onset; `t_offset` shifts the
/// time column onto the simulation grid.
pub fn modal_trajectory_csv(net: &PowerNetwork, result: &SimulationResult, t_offset: f64) -> String {
    let mut out = trajectory_header(net);
    for s in 0..result.time.len() {
        out.push_str(&format!("{}", t_offset + result.time[s]));
        for j in 0..result.network_freq.ncols() {
            out.push_str(&format!(",{}", result.network_freq[(s, j)]));
        }
        out.push_str(&format!(",{}\n", result.coi[s]));
    }
    out
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("x,inv_c33,inv_c1_33,inv_c2_33,flag\n");
    for row in rows {
        let flag = if row.mismatch {
            "mismatch"
        } else if row.singular {
            "singular"
        } else {
            "ok"
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.x, row.inv_c33, row.inv_c1_33, row.inv_c2_33, flag
        ));
    }
    out
}

#[allow(clippy::too_many_arguments)]
pub fn simulation_summary(
    net: &PowerNetwork,
    disturb_specs: &[String],
    result: &SimulationResult,
    predicted: &DVector<f64>,
    disturbed: &[usize],
    droop_prediction: f64,
    rocof_tol: f64,
    onset: f64,
) -> String {
    let ids = net.network_bus_ids();
    let mut out = String::from("simulation summary\n");
    if disturb_specs.is_empty() {
        out.push_str("disturbance: none\n");
    } else {
        out.push_str(&format!(
            "disturbance: {} (onset {onset} s)\n",
            disturb_specs.join(", ")
        ));
    }
    for &idx in disturbed {
        let rel = (result.measured_initial_rocof[idx] - predicted[idx]).abs()
            / predicted[idx].abs().max(f64::MIN_POSITIVE);
        out.push_str(&format!(
            "bus {}: predicted RoCoF {:e}, measured {:e} (rel dev {:.2e}) {}\n",
            ids[idx],
            predicted[idx],
            result.measured_initial_rocof[idx],
            rel,
            if rel <= rocof_tol { "PASS" } else { "FAIL" }
        ));
        out.push_str(&format!(
            "bus {}: finite-difference estimate {:e}\n",
            ids[idx], result.rocof_fd_estimate[idx]
        ));
    }
    out.push_str(&format!(
        "steady-state deviation: {:e} p.u. (droop prediction {:e} at t -> inf)\n",
        result.steady_state_deviation, droop_prediction
    ));
    out
}
