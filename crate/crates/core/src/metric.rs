//! The nodal frequency performance metric: parameter matrix C, its modal
//! components C_k, and the per-bus metric 1/c_ii, together with the
//! single-generator and two-generator closed-form oracles.
//!
//! c_ii is the sensitivity of a network bus's initial rate of change of
//! frequency to a unit step disturbance at that bus; a larger 1/c_ii means
//! better nodal frequency performance.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::network::PartitionedSusceptance;
use crate::spectral::{ReducedNetwork, SpectralModes};

/// Modal diagonal entries below this are treated as numerically zero and
/// their reciprocal reported as an infinity sentinel.
pub const COMPONENT_SENTINEL_THRESHOLD: f64 = 1e-15;

/// Relative tolerance between the directly computed parameter matrix and
/// the sum of its modal components; disagreement past this is a hard error.
const MODAL_DIRECT_TOL: f64 = 1e-10;

/// One modal contribution c_{k,ii} to a bus's sensitivity.
#[derive(Debug, Clone, Copy)]
pub struct ModalComponent {
    /// c_{k,ii} ≥ 0.
    pub c: f64,
    /// 1/c_{k,ii}; `f64::INFINITY` when the component is numerically zero.
    pub inv_c: f64,
    /// True when `c` fell below [`COMPONENT_SENTINEL_THRESHOLD`].
    pub saturated: bool,
}

/// Metric values for one network bus.
#[derive(Debug, Clone)]
pub struct BusMetric {
    pub bus_id: String,
    /// Diagonal sensitivity c_ii (p.u./s per p.u. power step).
    pub c_ii: f64,
    /// The nodal frequency performance metric 1/c_ii (p.u. inertia units).
    pub inv_c_ii: f64,
    /// Components for modes k = 1..n, in eigenvalue order.
    pub components: Vec<ModalComponent>,
}

/// Parameter matrix C, its modal components and the per-bus metrics.
#[derive(Debug, Clone)]
pub struct MetricReport {
    pub buses: Vec<BusMetric>,
    /// Full parameter matrix over network buses, directly computed.
    pub c: DMatrix<f64>,
    /// Modal components C_k = v_k v_kᵀ with v_k the propagated scaled
    /// eigenvector; their sum equals `c` within tolerance.
    pub c_modal: Vec<DMatrix<f64>>,
    /// The vectors v_k = W J^{-1/2} U_k behind each C_k, one per mode.
    pub modal_vectors: Vec<DVector<f64>>,
    pub j_sum: f64,
}

impl MetricReport {
    pub fn n_network_buses(&self) -> usize {
        self.buses.len()
    }

    pub fn n_modes(&self) -> usize {
        self.c_modal.len()
    }

    pub fn metric_vector(&self) -> Vec<f64> {
        self.buses.iter().map(|b| b.inv_c_ii).collect()
    }
}

/// The parameter matrix by its direct closed form, valid for any fleet:
/// C = (B_LL⁻¹ B_LG) J⁻¹ (B_LL⁻¹ B_LG)ᵀ, solving B_LL afresh from `parts`.
pub fn direct_sensitivity(
    parts: &PartitionedSusceptance,
    inertia: &DVector<f64>,
) -> Result<DMatrix<f64>> {
    if inertia.len() != parts.n_generators() {
        return Err(Error::DimensionMismatch {
            expected: parts.n_generators(),
            got: inertia.len(),
        });
    }
    if let Some(bad) = inertia.iter().find(|&&j| !(j > 0.0)) {
        return Err(Error::NonPositiveInertia(*bad));
    }
    let lu = parts.b_ll().into_owned().lu();
    let y = lu.solve(&parts.b_lg().into_owned()).ok_or(Error::SingularNetworkBlock)?;
    let inv_j = DMatrix::from_diagonal(&inertia.map(|j| 1.0 / j));
    let c = &y * inv_j * y.transpose();
    let c_t = c.transpose();
    Ok((c + c_t) * 0.5)
}

/// Compute C and every C_k, cross-checking the modal sum against the direct
/// closed form. `bus_ids` labels the network buses of the report.
///
/// The direct route solves B_LL afresh from `parts`; the modal route reuses
/// the cached propagation matrix and the eigenvectors. Disagreement between
/// the two signals a scaling-convention bug and is a hard error.
pub fn parameter_matrix(
    modes: &SpectralModes,
    red: &ReducedNetwork,
    parts: &PartitionedSusceptance,
    bus_ids: &[String],
) -> Result<MetricReport> {
    let n = modes.n();
    let l = parts.n_network_buses();
    if bus_ids.len() != l {
        return Err(Error::DimensionMismatch { expected: l, got: bus_ids.len() });
    }

    let c_direct = direct_sensitivity(parts, &modes.inertia)?;

    // Modal: C_k = v_k v_kᵀ, v_k = W J^{-1/2} U_k.
    let mut c_modal = Vec::with_capacity(n);
    let mut modal_vectors = Vec::with_capacity(n);
    let mut c_sum = DMatrix::<f64>::zeros(l, l);
    for k in 0..n {
        let scaled_u =
            DVector::from_iterator(n, (0..n).map(|i| modes.vectors[(i, k)] / modes.inertia[i].sqrt()));
        let v_k = &red.propagation * scaled_u;
        let c_k = &v_k * v_k.transpose();
        c_sum += &c_k;
        c_modal.push(c_k);
        modal_vectors.push(v_k);
    }

    let max_diff = (&c_direct - &c_sum).amax();
    if !(max_diff <= MODAL_DIRECT_TOL * c_direct.amax().max(1.0)) {
        return Err(Error::ConventionMismatch { max_diff });
    }

    let buses = bus_ids
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let components = (0..n)
                .map(|k| {
                    let c = c_modal[k][(i, i)];
                    let saturated = c < COMPONENT_SENTINEL_THRESHOLD;
                    ModalComponent { c, inv_c: if saturated { f64::INFINITY } else { 1.0 / c }, saturated }
                })
                .collect();
            let c_ii = c_direct[(i, i)];
            BusMetric { bus_id: id.clone(), c_ii, inv_c_ii: 1.0 / c_ii, components }
        })
        .collect();

    Ok(MetricReport { buses, c: c_direct, c_modal, modal_vectors, j_sum: modes.j_sum })
}

/// Initial rate of change of frequency of a lone generator hit by a power
/// step P1: P1 / J, in p.u. frequency per second.
pub fn single_generator_rocof(inertia: f64, p1: f64) -> Result<f64> {
    if !(inertia > 0.0) {
        return Err(Error::NonPositiveInertia(inertia));
    }
    Ok(p1 / inertia)
}

/// Closed-form metric values for the two-generator system, evaluated at the
/// network bus between the generators.
#[derive(Debug, Clone, Copy)]
pub struct TwoGenMetric {
    pub inv_c33: f64,
    pub inv_c1_33: f64,
    /// `f64::INFINITY` when sqrt(J2/J1) X2 = sqrt(J1/J2) X1.
    pub inv_c2_33: f64,
}

/// Evaluate the two-generator closed forms literally.
pub fn two_generator_oracle(j1: f64, j2: f64, x1: f64, x2: f64) -> Result<TwoGenMetric> {
    if !(j1 > 0.0) {
        return Err(Error::NonPositiveInertia(j1));
    }
    if !(j2 > 0.0) {
        return Err(Error::NonPositiveInertia(j2));
    }
    if !(x1 >= 0.0 && x2 >= 0.0 && x1 + x2 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "reactances must be non-negative with positive sum, got X1 = {x1}, X2 = {x2}"
        )));
    }
    let total = x1 + x2;
    let a = x2 / total;
    let b = x1 / total;
    let c33 = a * a / j1 + b * b / j2;
    let root = (j2 / j1).sqrt() * x2 - (j1 / j2).sqrt() * x1;
    let inv_c2_33 = if root == 0.0 {
        f64::INFINITY
    } else {
        (j1 + j2) * total * total / (root * root)
    };
    Ok(TwoGenMetric { inv_c33: 1.0 / c33, inv_c1_33: j1 + j2, inv_c2_33 })
}

/// One row of [`position_sweep`]: oracle values at reactance ratio `x`,
/// with the outcome of the cross-check against the generic pipeline.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    /// Reactance ratio X1/(X1+X2).
    pub x: f64,
    pub inv_c33: f64,
    pub inv_c1_33: f64,
    pub inv_c2_33: f64,
    /// The second-mode component is numerically zero in at least one route;
    /// its reciprocal is a sentinel and excluded from the cross-check.
    pub singular: bool,
    /// Routes disagreed beyond 1e-9 relative on a compared column.
    pub mismatch: bool,
    /// Largest relative deviation over the compared columns.
    pub max_rel_dev: f64,
}

/// Sweep the network-bus position x = X1/(X1+X2) over a uniform grid on
/// [0, 1], evaluating every row through both the closed-form oracle and the
/// generic pipeline on a three-bus network (total reactance 1 p.u.).
///
/// The endpoints are clamped to x = 1e-12 and 1 - 1e-12: a zero reactance
/// is not representable as a branch, and both routes see the same clamped
/// value so the cross-check stays exact.
pub fn position_sweep(j1: f64, j2: f64, n_points: usize) -> Result<Vec<SweepRow>> {
    if n_points < 2 {
        return Err(Error::InvalidArgument(format!(
            "sweep needs at least 2 points, got {n_points}"
        )));
    }
    const X_EPS: f64 = 1e-12;
    const REL_TOL: f64 = 1e-9;

    let mut rows = Vec::with_capacity(n_points);
    for idx in 0..n_points {
        let x_nominal = idx as f64 / (n_points - 1) as f64;
        let x = x_nominal.clamp(X_EPS, 1.0 - X_EPS);
        let (x1, x2) = (x, 1.0 - x);

        let oracle = two_generator_oracle(j1, j2, x1, x2)?;

        let net = crate::presets::two_generator(j1, j2, x1, x2);
        let parts = crate::network::assemble_susceptance(&net)?;
        let red = crate::spectral::kron_reduce(&parts)?;
        let modes = crate::spectral::spectral_decompose(
            &red,
            &net.generator_params(),
            crate::spectral::DEFAULT_HOMOGENEITY_RTOL,
        )?;
        let report = parameter_matrix(&modes, &red, &parts, &net.network_bus_ids())?;
        let bus = &report.buses[0];

        let oracle_c2 = if oracle.inv_c2_33.is_finite() { 1.0 / oracle.inv_c2_33 } else { 0.0 };
        let singular = bus.components[1].saturated || oracle_c2 < COMPONENT_SENTINEL_THRESHOLD;

        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
        let mut max_rel_dev = rel(oracle.inv_c33, bus.inv_c_ii);
        max_rel_dev = max_rel_dev.max(rel(oracle.inv_c1_33, bus.components[0].inv_c));
        if !singular {
            max_rel_dev = max_rel_dev.max(rel(oracle.inv_c2_33, bus.components[1].inv_c));
        }

        rows.push(SweepRow {
            x: x_nominal,
            inv_c33: oracle.inv_c33,
            inv_c1_33: oracle.inv_c1_33,
            inv_c2_33: oracle.inv_c2_33,
            singular,
            mismatch: max_rel_dev > REL_TOL,
            max_rel_dev,
        });
    }
    Ok(rows)
}

/// Position and value of the sweep's metric maximum.
pub fn sweep_argmax(rows: &[SweepRow]) -> (f64, f64) {
    rows.iter()
        .map(|r| (r.x, r.inv_c33))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((f64::NAN, f64::NAN))
}

/// Predicted initial RoCoF of every network bus under the step disturbance
/// vector `p` (one entry per network bus, injections positive): C · p.
pub fn predicted_initial_rocof(report: &MetricReport, p: &DVector<f64>) -> Result<DVector<f64>> {
    if p.len() != report.n_network_buses() {
        return Err(Error::DimensionMismatch { expected: report.n_network_buses(), got: p.len() });
    }
    Ok(&report.c * p)
}
