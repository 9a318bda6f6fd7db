//! Kron reduction to the generator buses and the inertia-scaled spectral
//! decomposition that underlies the metric and the modal simulator.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::network::{check_homogeneity_params, GeneratorParams, PartitionedSusceptance};

/// Default relative tolerance for the homogeneity precondition.
pub const DEFAULT_HOMOGENEITY_RTOL: f64 = 1e-6;

/// Susceptance matrix reduced to the generator buses, plus the cached
/// propagation matrix that maps generator angles onto network-bus angles.
#[derive(Debug, Clone)]
pub struct ReducedNetwork {
    /// Bus-reduced susceptance matrix B_r = B_GG - B_GL B_LL⁻¹ B_LG (n×n).
    pub b_r: DMatrix<f64>,
    /// Propagation matrix -B_LL⁻¹ B_LG ((m+a)×n). Every row sums to one:
    /// network-bus angles are convex-like combinations of generator angles.
    pub propagation: DMatrix<f64>,
}

/// Eigenstructure of -J^{-1/2} B_r J^{-1/2} together with the aggregate
/// generator constants of the homogeneous fleet.
#[derive(Debug, Clone)]
pub struct SpectralModes {
    /// Eigenvalues ascending; λ_1 is snapped to exactly zero.
    pub eigenvalues: DVector<f64>,
    /// Orthonormal eigenvectors as columns, sign-fixed so the first entry
    /// of each column that is meaningfully nonzero is positive.
    pub vectors: DMatrix<f64>,
    /// Generator inertias in bus order.
    pub inertia: DVector<f64>,
    pub j_sum: f64,
    pub d_sum: f64,
    pub k_sum: f64,
    /// d = D_sum / J_sum.
    pub damping_ratio: f64,
    /// k = K_sum / J_sum.
    pub droop_ratio: f64,
    /// Common turbine time constant T (s).
    pub turbine_time: f64,
}

impl SpectralModes {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Eliminate the network buses: B_r = B_GG - B_GL B_LL⁻¹ B_LG.
///
/// Fails when B_LL is singular, which signals a disconnected graph or an
/// empty network-bus block.
pub fn kron_reduce(parts: &PartitionedSusceptance) -> Result<ReducedNetwork> {
    let l = parts.n_network_buses();
    if l == 0 {
        return Err(Error::SingularNetworkBlock);
    }
    let b_ll = parts.b_ll().into_owned();
    let b_lg = parts.b_lg().into_owned();
    let lu = b_ll.lu();
    let solved = lu.solve(&b_lg).ok_or(Error::SingularNetworkBlock)?;

    // Residual check: LU::solve only fails on exact zero pivots.
    let residual = (parts.b_ll() * &solved - &b_lg).norm();
    let scale = b_lg.norm().max(1.0);
    if !residual.is_finite() || residual > 1e-8 * scale {
        return Err(Error::SingularNetworkBlock);
    }

    let mut b_r = parts.b_gg().into_owned() - parts.b_gl() * &solved;
    // Schur complements of symmetric matrices are symmetric; enforce it
    // exactly so downstream eigensolves see a symmetric input.
    let b_r_t = b_r.transpose();
    b_r = (b_r + b_r_t) * 0.5;

    Ok(ReducedNetwork { b_r, propagation: -solved })
}

/// Eigendecomposition of -J^{-1/2} B_r J^{-1/2} for a homogeneous fleet.
///
/// Eigenvalues are returned ascending with λ_1 snapped to exactly zero;
/// eigenvectors are orthonormal and deterministically sign-fixed. The zero
/// tolerance is relative: 1e-9 times the largest eigenvalue magnitude.
pub fn spectral_decompose(
    red: &ReducedNetwork,
    gens: &[GeneratorParams],
    homogeneity_rtol: f64,
) -> Result<SpectralModes> {
    let hom = check_homogeneity_params(gens, &[], homogeneity_rtol);
    if !hom.homogeneous {
        return Err(Error::NotHomogeneous(hom.findings.join("; ")));
    }
    let n = gens.len();
    if red.b_r.nrows() != n {
        return Err(Error::DimensionMismatch { expected: red.b_r.nrows(), got: n });
    }
    let inertia = DVector::from_iterator(n, gens.iter().map(|g| g.inertia));
    let inv_sqrt_j = inertia.map(|j| 1.0 / j.sqrt());

    let mut scaled = -red.b_r.clone();
    for i in 0..n {
        for j in 0..n {
            scaled[(i, j)] *= inv_sqrt_j[i] * inv_sqrt_j[j];
        }
    }

    let eig = scaled.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut eigenvalues = DVector::zeros(n);
    let mut vectors = DMatrix::zeros(n, n);
    for (pos, &idx) in order.iter().enumerate() {
        eigenvalues[pos] = eig.eigenvalues[idx];
        vectors.set_column(pos, &eig.eigenvectors.column(idx));
    }

    // Deterministic sign: first meaningfully nonzero entry positive.
    for k in 0..n {
        let col = vectors.column(k);
        let max_abs = col.amax();
        let lead = col.iter().find(|e| e.abs() > 1e-12 * max_abs);
        if let Some(&lead) = lead {
            if lead < 0.0 {
                let flipped = -vectors.column(k);
                vectors.set_column(k, &flipped);
            }
        }
    }

    let lam_max = eigenvalues.amax();
    let zero_tol = 1e-9 * lam_max;
    if n > 1 && eigenvalues[0].abs() >= zero_tol {
        return Err(Error::SpectralFailure(format!(
            "smallest eigenvalue {} is not numerically zero (tol {zero_tol:.3e})",
            eigenvalues[0]
        )));
    }
    eigenvalues[0] = 0.0;
    for k in 1..n {
        if eigenvalues[k] < -zero_tol {
            return Err(Error::SpectralFailure(format!(
                "eigenvalue λ_{} = {} is negative",
                k + 1,
                eigenvalues[k]
            )));
        }
    }

    Ok(SpectralModes {
        eigenvalues,
        vectors,
        inertia,
        j_sum: hom.j_sum,
        d_sum: hom.d_sum,
        k_sum: hom.k_sum,
        damping_ratio: hom.damping_ratio,
        droop_ratio: hom.droop_ratio,
        turbine_time: hom.turbine_time,
    })
}
