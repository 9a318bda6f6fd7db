//! Network model: buses, branches, susceptance matrix assembly and the
//! generator/network block partition.
//!
//! Bus ordering is authoritative: the first `n` buses are generator internal
//! buses, followed by load buses, then passive buses. The susceptance matrix
//! uses the convention with positive off-diagonals `B_ij = 1/X_ij` and
//! diagonal equal to the negative row sum, i.e. the negative of a weighted
//! graph Laplacian. All quantities are per-unit on a single system base.

use nalgebra::{DMatrix, DMatrixView, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rated angular frequency used when a network file omits `omega0`: 50 Hz.
pub const DEFAULT_OMEGA0: f64 = 100.0 * std::f64::consts::PI;

/// Swing-and-turbine parameter set of one generator, per-unit on the
/// system base.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    /// Inertia J (p.u.·s).
    pub inertia: f64,
    /// Damping coefficient D (p.u.).
    pub damping: f64,
    /// Droop coefficient K (p.u.).
    pub droop: f64,
    /// Turbine time constant T (s).
    pub turbine_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BusKind {
    /// Fictitious internal bus behind a generator's transient reactance.
    Generator,
    /// Network bus with a constant-power load attached.
    Load,
    /// Network bus with zero net injection.
    Passive,
}

impl BusKind {
    /// Load and passive buses together form the network buses.
    pub fn is_network(self) -> bool {
        matches!(self, BusKind::Load | BusKind::Passive)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bus {
    pub id: String,
    pub kind: BusKind,
    /// Present iff `kind == Generator`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorParams>,
    /// Constant load power P_L (p.u.), present iff `kind == Load`. Stored
    /// for file-format completeness; constant-power loads drop out of the
    /// linearized small-angle model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub load_power: Option<f64>,
}

/// Purely inductive branch between two buses. Parallel branches between the
/// same pair are merged by summing susceptances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub from: String,
    pub to: String,
    /// Series reactance X (p.u., > 0); susceptance is 1/X.
    pub x: f64,
}

/// A multi-machine network: `n` generator internal buses followed by the
/// network (load + passive) buses, joined by inductive branches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerNetwork {
    /// Rated angular frequency ω₀ (rad/s).
    #[serde(default = "default_omega0")]
    pub omega0: f64,
    pub buses: Vec<Bus>,
    pub branches: Vec<Branch>,
}

fn default_omega0() -> f64 {
    DEFAULT_OMEGA0
}

impl PowerNetwork {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serialization cannot fail")
    }

    pub fn read_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Number of generator internal buses `n`.
    pub fn n_generators(&self) -> usize {
        self.buses.iter().filter(|b| b.kind == BusKind::Generator).count()
    }

    /// Number of network buses `m + a`.
    pub fn n_network_buses(&self) -> usize {
        self.buses.len() - self.n_generators()
    }

    pub fn generator_params(&self) -> Vec<GeneratorParams> {
        self.buses.iter().filter_map(|b| b.generator).collect()
    }

    /// Ids of the network buses, in partition order.
    pub fn network_bus_ids(&self) -> Vec<String> {
        self.buses
            .iter()
            .filter(|b| b.kind.is_network())
            .map(|b| b.id.clone())
            .collect()
    }

    pub fn generator_bus_ids(&self) -> Vec<String> {
        self.buses
            .iter()
            .filter(|b| b.kind == BusKind::Generator)
            .map(|b| b.id.clone())
            .collect()
    }

    /// Position of a bus id within the full bus list.
    pub fn bus_index(&self, id: &str) -> Option<usize> {
        self.buses.iter().position(|b| b.id == id)
    }

    /// Position of a bus id within the network-bus block, i.e. the index
    /// used by disturbance vectors and metric reports.
    pub fn network_bus_index(&self, id: &str) -> Option<usize> {
        self.buses
            .iter()
            .filter(|b| b.kind.is_network())
            .position(|b| b.id == id)
    }

    /// Inertia vector over the generators, in bus order.
    pub fn inertia_vector(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.n_generators(),
            self.buses.iter().filter_map(|b| b.generator.map(|g| g.inertia)),
        )
    }
}

/// Full susceptance matrix with its generator/network partition. The block
/// cut sits at row/column `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionedSusceptance {
    b: DMatrix<f64>,
    n: usize,
}

impl PartitionedSusceptance {
    /// Full (n+m+a)² susceptance matrix.
    pub fn full(&self) -> &DMatrix<f64> {
        &self.b
    }

    /// Number of generator internal buses.
    pub fn n_generators(&self) -> usize {
        self.n
    }

    /// Number of network buses.
    pub fn n_network_buses(&self) -> usize {
        self.b.nrows() - self.n
    }

    pub fn b_gg(&self) -> DMatrixView<'_, f64> {
        self.b.view((0, 0), (self.n, self.n))
    }

    pub fn b_gl(&self) -> DMatrixView<'_, f64> {
        self.b.view((0, self.n), (self.n, self.n_network_buses()))
    }

    pub fn b_lg(&self) -> DMatrixView<'_, f64> {
        self.b.view((self.n, 0), (self.n_network_buses(), self.n))
    }

    pub fn b_ll(&self) -> DMatrixView<'_, f64> {
        let l = self.n_network_buses();
        self.b.view((self.n, self.n), (l, l))
    }
}

/// Outcome of [`validate_network`]: a pass/fail flag plus itemized findings.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub findings: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Outcome of [`check_homogeneity`]: whether all generators share the
/// turbine time constant and proportional J : D : K ratios, plus the
/// aggregate constants used by the modal decomposition.
#[derive(Debug, Clone)]
pub struct HomogeneityReport {
    pub homogeneous: bool,
    /// Common turbine time constant T (mean of the individual values).
    pub turbine_time: f64,
    /// d = D_sum / J_sum.
    pub damping_ratio: f64,
    /// k = K_sum / J_sum.
    pub droop_ratio: f64,
    pub j_sum: f64,
    pub d_sum: f64,
    pub k_sum: f64,
    /// Largest relative deviation seen across the three checks.
    pub max_rel_deviation: f64,
    pub findings: Vec<String>,
}

/// Structural and parameter validation. Never fails; returns an itemized
/// report with `passed()` false when any finding is present.
pub fn validate_network(net: &PowerNetwork) -> ValidationReport {
    let mut findings = Vec::new();

    if !(net.omega0.is_finite() && net.omega0 > 0.0) {
        findings.push(format!("non-positive rated frequency omega0 = {}", net.omega0));
    }

    let mut seen = std::collections::HashSet::new();
    for bus in &net.buses {
        if !seen.insert(bus.id.as_str()) {
            findings.push(format!("duplicate bus id '{}'", bus.id));
        }
    }

    // Partition ordering: generators, then loads, then passive buses.
    let rank = |k: BusKind| match k {
        BusKind::Generator => 0,
        BusKind::Load => 1,
        BusKind::Passive => 2,
    };
    for pair in net.buses.windows(2) {
        if rank(pair[0].kind) > rank(pair[1].kind) {
            findings.push(format!(
                "bus ordering violated: '{}' ({:?}) precedes '{}' ({:?})",
                pair[0].id, pair[0].kind, pair[1].id, pair[1].kind
            ));
        }
    }

    let n = net.n_generators();
    if n == 0 {
        findings.push("no generator buses".to_string());
    }
    if net.n_network_buses() == 0 {
        findings.push("no network (load or passive) buses".to_string());
    }

    for bus in &net.buses {
        match bus.kind {
            BusKind::Generator => match bus.generator {
                None => findings.push(format!("generator bus '{}' has no parameters", bus.id)),
                Some(g) => {
                    if !(g.inertia > 0.0) {
                        findings.push(format!("non-positive inertia on '{}'", bus.id));
                    }
                    if g.damping < 0.0 {
                        findings.push(format!("negative damping on '{}'", bus.id));
                    }
                    if g.droop < 0.0 {
                        findings.push(format!("negative droop on '{}'", bus.id));
                    }
                    if !(g.turbine_time > 0.0) {
                        findings.push(format!("non-positive turbine time on '{}'", bus.id));
                    }
                }
            },
            BusKind::Load | BusKind::Passive => {
                if bus.generator.is_some() {
                    findings.push(format!("non-generator bus '{}' carries generator parameters", bus.id));
                }
                if bus.kind == BusKind::Passive && bus.load_power.is_some() {
                    findings.push(format!("passive bus '{}' carries load power", bus.id));
                }
            }
        }
        if bus.kind == BusKind::Generator && bus.load_power.is_some() {
            findings.push(format!("generator bus '{}' carries load power", bus.id));
        }
    }

    for br in &net.branches {
        if br.from == br.to {
            findings.push(format!("self-loop branch at '{}'", br.from));
        }
        if !(br.x > 0.0 && br.x.is_finite()) {
            findings.push(format!("non-positive reactance on branch {}-{}", br.from, br.to));
        }
        for end in [&br.from, &br.to] {
            if net.bus_index(end).is_none() {
                findings.push(format!("branch references unknown bus '{end}'"));
            }
        }
    }

    if !findings.iter().any(|f| f.contains("unknown bus")) && !is_connected(net) {
        findings.push("disconnected: branch graph does not span all buses".to_string());
    }

    ValidationReport { findings }
}

fn is_connected(net: &PowerNetwork) -> bool {
    let n = net.buses.len();
    if n == 0 {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for br in &net.branches {
        if let (Some(i), Some(j)) = (net.bus_index(&br.from), net.bus_index(&br.to)) {
            if i != j {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Assemble the partitioned susceptance matrix: `B_ij = 1/X_ij` for
/// connected pairs, zero otherwise, diagonal equal to the negative row sum.
///
/// The result is independent of branch input order: parallel branches are
/// merged by summing their susceptances in a canonical order.
pub fn assemble_susceptance(net: &PowerNetwork) -> Result<PartitionedSusceptance> {
    let report = validate_network(net);
    if !report.passed() {
        return Err(Error::InvalidNetwork { findings: report.findings });
    }

    let size = net.buses.len();
    // Group parallel branches per unordered pair and sum in value order so
    // that permuting the input leaves the matrix bit-identical.
    let mut per_pair: std::collections::BTreeMap<(usize, usize), Vec<f64>> =
        std::collections::BTreeMap::new();
    for br in &net.branches {
        let i = net.bus_index(&br.from).expect("validated");
        let j = net.bus_index(&br.to).expect("validated");
        let key = (i.min(j), i.max(j));
        per_pair.entry(key).or_default().push(1.0 / br.x);
    }

    let mut b = DMatrix::<f64>::zeros(size, size);
    for ((i, j), mut bs) in per_pair {
        bs.sort_by(f64::total_cmp);
        let sum: f64 = bs.iter().sum();
        b[(i, j)] = sum;
        b[(j, i)] = sum;
    }
    for i in 0..size {
        let mut row_sum = 0.0;
        for j in 0..size {
            if j != i {
                row_sum += b[(i, j)];
            }
        }
        b[(i, i)] = -row_sum;
    }

    Ok(PartitionedSusceptance { b, n: net.n_generators() })
}

/// Verify the proportionality assumption: all turbine time constants equal
/// and J_i : D_i : K_i in constant ratio across generators, each within
/// `rel_tol`. Report-valued; the aggregate constants are returned even when
/// homogeneity fails.
pub fn check_homogeneity(net: &PowerNetwork, rel_tol: f64) -> HomogeneityReport {
    let gens = net.generator_params();
    let labels: Vec<String> = net.generator_bus_ids();
    check_homogeneity_params(&gens, &labels, rel_tol)
}

/// [`check_homogeneity`] over a bare parameter list; `labels` names the
/// generators in findings and may be empty.
pub fn check_homogeneity_params(
    gens: &[GeneratorParams],
    labels: &[String],
    rel_tol: f64,
) -> HomogeneityReport {
    let j_sum: f64 = gens.iter().map(|g| g.inertia).sum();
    let d_sum: f64 = gens.iter().map(|g| g.damping).sum();
    let k_sum: f64 = gens.iter().map(|g| g.droop).sum();
    let t_mean: f64 = gens.iter().map(|g| g.turbine_time).sum::<f64>() / gens.len().max(1) as f64;
    let d = d_sum / j_sum;
    let k = k_sum / j_sum;

    let mut findings = Vec::new();
    let mut max_dev: f64 = 0.0;
    let mut check = |name: &str, id: &str, value: f64, reference: f64| {
        // Relative to the aggregate; an exactly-zero aggregate (all D_i = 0
        // or all K_i = 0) makes every individual ratio zero as well.
        let scale = if reference == 0.0 { 1.0 } else { reference.abs() };
        let dev = (value - reference).abs() / scale;
        max_dev = max_dev.max(dev);
        if dev > rel_tol {
            findings.push(format!(
                "{name} of '{id}' deviates by {dev:.3e} (value {value}, common {reference})"
            ));
        }
    };

    for (i, g) in gens.iter().enumerate() {
        let id = labels.get(i).cloned().unwrap_or_else(|| format!("#{i}"));
        check("turbine time", &id, g.turbine_time, t_mean);
        check("damping ratio D/J", &id, g.damping / g.inertia, d);
        check("droop ratio K/J", &id, g.droop / g.inertia, k);
    }

    HomogeneityReport {
        homogeneous: findings.is_empty() && !gens.is_empty(),
        turbine_time: t_mean,
        damping_ratio: d,
        droop_ratio: k,
        j_sum,
        d_sum,
        k_sum,
        max_rel_deviation: max_dev,
        findings,
    }
}
