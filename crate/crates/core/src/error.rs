use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while building, integrating or analysing a network.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: {context} (expected {expected}, found {found})")]
    Dimension {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("could not generate a connected G({n}, {p}) graph within {attempts} attempts")]
    Generation { n: usize, p: f64, attempts: usize },

    #[error("rows are not regular: row sums differ at rows {rows:?} (sums {sums:?})")]
    Regularity { rows: Vec<usize>, sums: Vec<f64> },

    #[error("state is not an equilibrium: max residual {residual:e} exceeds {tolerance:e}")]
    NotEquilibrium { residual: f64, tolerance: f64 },

    #[error("stability assumption violated: {0}")]
    Assumption(String),

    #[error("layer {layer} is disconnected: Laplacian has {zero_modes} near-zero eigenvalues")]
    Connectivity { layer: usize, zero_modes: usize },

    #[error("matrix is not symmetric: max |S - S^T| = {max_deviation:e}")]
    Asymmetric { max_deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("integration diverged (non-finite phase) at step {step}")]
    Divergence { step: usize },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    ///
    /// 1 configuration/input, 2 numerical divergence, 3 stability assumption violation.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Divergence { .. } | Error::NoConvergence { .. } => 2,
            Error::Assumption(_)
            | Error::NotEquilibrium { .. }
            | Error::Connectivity { .. }
            | Error::Asymmetric { .. }
            | Error::Regularity { .. } => 3,
            _ => 1,
        }
    }
}
