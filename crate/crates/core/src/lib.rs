//! Nodal frequency performance analysis for multi-machine power networks.
//!
//! The crate computes a per-bus frequency performance metric from the
//! network's susceptance structure and the generators' inertia: the network
//! is Kron-reduced to the generator buses, the inertia-scaled reduced
//! matrix is eigendecomposed, and the resulting parameter matrix C links
//! step power disturbances at network buses to their initial rate of
//! change of frequency. The metric for bus i is 1/c_ii; its modal split
//! 1/c_{k,ii} separates the system-wide (center-of-inertia) component from
//! local oscillatory ones.
//!
//! A linearized time-domain simulator (swing + turbine + network algebra)
//! and an independent modal-superposition simulator cross-validate the
//! metric: the analytic initial slope of every nodal frequency trace equals
//! C·P, and on homogeneous fleets the two simulators produce matching
//! trajectories.
//!
//! Pipeline: [`assemble_susceptance`] → [`kron_reduce`] →
//! [`spectral_decompose`] → [`parameter_matrix`], or [`analyze_network`]
//! for the whole chain in one call.

pub mod error;
pub mod metric;
pub mod network;
pub mod presets;
pub mod sim;
pub mod spectral;

pub use error::{Error, Result};
pub use metric::{
    direct_sensitivity, parameter_matrix, position_sweep, predicted_initial_rocof,
    single_generator_rocof, sweep_argmax, two_generator_oracle, BusMetric, MetricReport,
    ModalComponent, SweepRow, TwoGenMetric, COMPONENT_SENTINEL_THRESHOLD,
};
pub use network::{
    assemble_susceptance, check_homogeneity, check_homogeneity_params, validate_network, Branch,
    Bus, BusKind, GeneratorParams, HomogeneityReport, PartitionedSusceptance, PowerNetwork,
    ValidationReport, DEFAULT_OMEGA0,
};
pub use sim::{
    build_state_space, coi_frequency, free_response, modal_responses, simulate_modal,
    simulate_step, ModalResponse, SimulationResult, StateSpaceModel, StepOptions,
};
pub use spectral::{
    kron_reduce, spectral_decompose, ReducedNetwork, SpectralModes, DEFAULT_HOMOGENEITY_RTOL,
};

/// Everything the analysis pipeline produces for one network.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub parts: PartitionedSusceptance,
    pub reduced: ReducedNetwork,
    pub modes: SpectralModes,
    pub report: MetricReport,
    pub homogeneity: HomogeneityReport,
}

/// Run the full metric pipeline on a validated network.
pub fn analyze_network(net: &PowerNetwork, homogeneity_rtol: f64) -> Result<Analysis> {
    let parts = assemble_susceptance(net)?;
    let reduced = kron_reduce(&parts)?;
    let gens = net.generator_params();
    let modes = spectral_decompose(&reduced, &gens, homogeneity_rtol)?;
    let report = parameter_matrix(&modes, &reduced, &parts, &net.network_bus_ids())?;
    let homogeneity = check_homogeneity(net, homogeneity_rtol);
    Ok(Analysis { parts, reduced, modes, report, homogeneity })
}
