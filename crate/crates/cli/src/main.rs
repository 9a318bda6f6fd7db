//! Command-line front end: parse network files, run the metric pipeline or
//! the time-domain simulators, and emit tables plus machine-readable CSV.
//!
//! Exit codes: 0 success, 2 input/validation failure, 3 numerical failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;
use nodalfreq_core as core;
use nodalfreq_core::{Error, PowerNetwork, StepOptions};

mod output;

use output::{validation_exit, write_outputs, OutputFile};

#[derive(Parser)]
#[command(
    name = "nodalfreq",
    about = "Nodal frequency performance analysis for multi-machine power networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the per-bus metric 1/c_ii and its modal components.
    Analyze(AnalyzeArgs),
    /// Simulate step disturbances and compare measured against predicted RoCoF.
    Simulate(SimulateArgs),
    /// Sweep the two-generator network-bus position and tabulate the metric.
    Sweep(SweepArgs),
    /// Validate a network file and report findings.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct CommonIo {
    /// Network file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Output directory for CSV and summary files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Tolerance overrides, e.g. --tol homogeneity=1e-6 --tol rocof=1e-8.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    io: CommonIo,
    /// Also write the eigenvalues and eigenvector columns as modes.csv.
    #[arg(long)]
    modes: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    io: CommonIo,
    /// Step disturbance per bus, e.g. --disturb 5=-0.1 (repeatable).
    #[arg(long = "disturb", value_name = "BUS=PU")]
    disturb: Vec<String>,
    /// Integrator step (s).
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// Simulation horizon (s).
    #[arg(long = "t-end", default_value_t = 30.0)]
    t_end: f64,
    /// Disturbance onset time (s).
    #[arg(long, default_value_t = 0.0)]
    onset: f64,
    /// Also run the modal-superposition simulator and report the largest
    /// trajectory difference (single-bus disturbances only).
    #[arg(long)]
    modal: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Inertias and grid size: j1,j2,n.
    #[arg(long, value_name = "J1,J2,N")]
    sweep: String,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    /// Network file (JSON).
    #[arg(long)]
    input: PathBuf,
}

/// Tolerances adjustable from the command line.
struct Tolerances {
    homogeneity: f64,
    rocof: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { homogeneity: core::DEFAULT_HOMOGENEITY_RTOL, rocof: 1e-8 }
    }
}

fn parse_tolerances(specs: &[String]) -> Result<Tolerances, Error> {
    let mut tol = Tolerances::default();
    for spec in specs {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("--tol expects NAME=VALUE, got '{spec}'")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("--tol {name}: bad value '{value}'")))?;
        match name {
            "homogeneity" => tol.homogeneity = value,
            "rocof" => tol.rocof = value,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown tolerance '{other}' (known: homogeneity, rocof)"
                )))
            }
        }
    }
    Ok(tol)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidNetwork { .. }
        | Error::NotHomogeneous(_)
        | Error::InvalidArgument(_)
        | Error::Parse(_)
        | Error::Io(_) => 2,
        Error::SingularNetworkBlock
        | Error::SpectralFailure(_)
        | Error::ConventionMismatch { .. }
        | Error::NonPositiveInertia(_)
        | Error::DimensionMismatch { .. }
        | Error::Unstable { .. } => 3,
    }
}

fn load_network(path: &Path) -> Result<PowerNetwork, Error> {
    PowerNetwork::read_file(path)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode, Error> {
    let tol = parse_tolerances(&args.io.tol)?;
    let net = load_network(&args.io.input)?;
    let analysis = core::analyze_network(&net, tol.homogeneity)?;

    print!("{}", output::metric_table(&analysis.report));
    println!(
        "total inertia J_sum = {} p.u.; d = {}, k = {}, T = {} s",
        analysis.modes.j_sum,
        analysis.modes.damping_ratio,
        analysis.modes.droop_ratio,
        analysis.modes.turbine_time
    );

    let mut files = vec![OutputFile {
        name: "metrics.csv".into(),
        content: output::metrics_csv(&analysis.report),
    }];
    if args.modes {
        files.push(OutputFile {
            name: "modes.csv".into(),
            content: output::modes_csv(&analysis.modes, &net.generator_bus_ids()),
        });
    }
    write_outputs(&args.io.out, &files)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_disturbances(specs: &[String], net: &PowerNetwork) -> Result<DVector<f64>, Error> {
    let l = net.n_network_buses();
    let mut p = DVector::zeros(l);
    for spec in specs {
        let (bus, value) = spec.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("--disturb expects BUS=PU, got '{spec}'"))
        })?;
        let value: f64 = value
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("--disturb {bus}: bad value '{value}'")))?;
        match net.network_bus_index(bus) {
            Some(idx) => p[idx] += value,
            None if net.bus_index(bus).is_some() => {
                return Err(Error::InvalidArgument(format!(
                    "bus '{bus}' is a generator internal bus; disturbances only apply to network buses"
                )))
            }
            None => {
                return Err(Error::InvalidArgument(format!("unknown bus '{bus}'")));
            }
        }
    }
    Ok(p)
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, Error> {
    let tol = parse_tolerances(&args.io.tol)?;
    let net = load_network(&args.io.input)?;
    let p = parse_disturbances(&args.disturb, &net)?;

    let parts = core::assemble_susceptance(&net)?;
    let model = core::build_state_space(&net, &parts)?;
    let opts = StepOptions { t_end: args.t_end, dt: args.dt, onset: args.onset, ..Default::default() };
    let result = core::simulate_step(&model, &p, &opts)?;

    // Metric-side prediction via the direct closed form, which does not
    // need a homogeneous fleet; only the modal comparison does.
    let c_direct = core::direct_sensitivity(&parts, &net.inertia_vector())?;
    let predicted = &c_direct * &p;
    let gens = net.generator_params();
    let droop_sum: f64 = gens.iter().map(|g| g.damping + g.droop).sum();

    let disturbed: Vec<usize> = (0..p.len()).filter(|&i| p[i] != 0.0).collect();
    let summary = output::simulation_summary(
        &net,
        &args.disturb,
        &result,
        &predicted,
        &disturbed,
        p.sum() / droop_sum,
        tol.rocof,
        args.onset,
    );
    print!("{summary}");

    let mut files = vec![
        OutputFile {
            name: "trajectory.csv".into(),
            content: output::trajectory_csv(&net, &result),
        },
        OutputFile { name: "summary.txt".into(), content: summary.clone() },
    ];

    if args.modal {
        if disturbed.len() != 1 {
            return Err(Error::InvalidArgument(
                "--modal needs exactly one disturbed bus".into(),
            ));
        }
        let analysis = core::analyze_network(&net, tol.homogeneity)?;
        let bus = disturbed[0];
        // Run the modal simulator over the post-onset part of the grid so
        // samples align one-to-one with the state-space trajectory.
        let total_steps = (args.t_end / args.dt).round().max(1.0) as usize;
        let onset_idx = (args.onset / args.dt).round() as usize;
        let modal_t_end = (total_steps - onset_idx) as f64 * args.dt;
        let modal = core::simulate_modal(
            &analysis.modes,
            &analysis.report,
            bus,
            p[bus],
            net.omega0,
            modal_t_end,
            args.dt,
        )?;
        let mut max_diff: f64 = 0.0;
        for s in 0..modal.network_freq.nrows() {
            for j in 0..modal.network_freq.ncols() {
                let step_val = result.network_freq[(s + onset_idx, j)];
                max_diff = max_diff.max((step_val - modal.network_freq[(s, j)]).abs());
            }
        }
        println!("modal vs state-space max |difference| = {max_diff:e} p.u.");
        files.push(OutputFile {
            name: "modal_trajectory.csv".into(),
            content: output::modal_trajectory_csv(&net, &modal, onset_idx as f64 * args.dt),
        });
    }

    write_outputs(&args.io.out, &files)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, Error> {
    let parts: Vec<&str> = args.sweep.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidArgument(format!(
            "--sweep expects J1,J2,N, got '{}'",
            args.sweep
        )));
    }
    let j1: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad J1 '{}'", parts[0])))?;
    let j2: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad J2 '{}'", parts[1])))?;
    let n: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad N '{}'", parts[2])))?;

    let rows = core::position_sweep(j1, j2, n)?;
    let (argmax, max_val) = core::sweep_argmax(&rows);
    let mismatches = rows.iter().filter(|r| r.mismatch).count();
    println!("sweep J1 = {j1}, J2 = {j2}, {n} points");
    println!("argmax 1/c_33 at x = {argmax} with value {max_val}");
    if mismatches > 0 {
        println!("warning: {mismatches} rows disagree with the closed form beyond 1e-9");
    }

    write_outputs(
        &args.out,
        &[OutputFile { name: "sweep.csv".into(), content: output::sweep_csv(&rows) }],
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(args: ValidateArgs) -> Result<ExitCode, Error> {
    let net = load_network(&args.input)?;
    let report = core::validate_network(&net);
    for finding in &report.findings {
        println!("finding: {finding}");
    }
    println!("validation: {}", if report.passed() { "PASS" } else { "FAIL" });
    Ok(validation_exit(report.passed()))
}
