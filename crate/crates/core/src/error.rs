use thiserror::Error;

/// Errors produced by the network algebra, synthesis and channel routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("expected {expected} ports: {detail}")]
    PortCount { expected: usize, detail: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("port index {index} out of range for a {n_ports}-port network")]
    PortIndex { index: usize, n_ports: usize },

    #[error("impedance {0} sits on the reflection-coefficient pole z = -z0")]
    ImpedancePole(String),

    #[error("network is not passive: smallest eigenvalue of I - S^H S is {min_eigenvalue:.3e} (tolerance {tol:.1e})")]
    NotPassive { min_eigenvalue: f64, tol: f64 },

    #[error("network is not mirror-symmetric: {pair} differ by {deviation:.3e} (tolerance {tol:.1e})")]
    Asymmetric {
        pair: String,
        deviation: f64,
        tol: f64,
    },

    #[error("near-singular loading: |denominator| = {magnitude:.3e} (tolerance {tol:.1e})")]
    Singular { magnitude: f64, tol: f64 },

    #[error("no reactive partner found: residual range [{min_residual:.3e}, {max_residual:.3e}] has no sign change")]
    RootNotFound {
        min_residual: f64,
        max_residual: f64,
    },

    #[error("load for ratio {ratio} is not reactive: ||gamma| - 1| = {deviation:.3e} (tolerance {tol:.1e})")]
    NotReactive {
        ratio: String,
        deviation: f64,
        tol: f64,
    },

    #[error("degenerate basis: second basis pattern power is {p_b2:.3e}")]
    DegenerateBasis { p_b2: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
