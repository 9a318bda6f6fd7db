use thiserror::Error;

/// Errors produced by the analysis and simulation engines.
#[derive(Debug, Error)]
pub enum Error {
    /// The network failed structural validation; findings carry the details.
    #[error("invalid network: {}", .findings.join("; "))]
    InvalidNetwork { findings: Vec<String> },

    /// B_LL could not be factorized. For a connected network with at least
    /// one generator this block is negative definite, so a singular B_LL
    /// signals a disconnected graph or an empty network-bus set.
    #[error("network block B_LL is singular (disconnected graph or no network buses)")]
    SingularNetworkBlock,

    /// Generator parameters violate the proportionality assumption needed
    /// for the modal decomposition.
    #[error("generators are not homogeneous: {0}")]
    NotHomogeneous(String),

    /// The smallest eigenvalue of the scaled reduced susceptance matrix is
    /// not numerically zero, or a higher eigenvalue is negative.
    #[error("spectral decomposition failed: {0}")]
    SpectralFailure(String),

    /// The modal sum of C_k disagrees with the directly computed parameter
    /// matrix. This indicates a scaling-convention bug, never expected in
    /// normal operation.
    #[error("modal and direct parameter matrices disagree (max diff {max_diff:.3e})")]
    ConventionMismatch { max_diff: f64 },

    #[error("non-positive inertia J = {0}")]
    NonPositiveInertia(f64),

    /// A vector length does not match the number of network buses.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The integrated state grew past the configured bound.
    #[error("simulation unstable: state norm {norm:.3e} exceeded bound at t = {time:.3} s")]
    Unstable { time: f64, norm: f64 },

    #[error("failed to parse network file: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
