use thiserror::Error;

/// Errors produced by stencil construction, polynomial setup, analysis and the solver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid stencil: {0}")]
    InvalidStencil(String),

    #[error("symbol is not real at theta = {theta:?} (imaginary part {imag:e})")]
    NonRealSymbol { theta: Vec<f64>, imag: f64 },

    #[error("symbol has non-positive real part {value:e} at theta = {theta:?}")]
    IndefiniteSymbol { theta: Vec<f64>, value: f64 },

    #[error("invalid sampling: {0}")]
    InvalidSampling(String),

    #[error("invalid smoother: {0}")]
    InvalidSmoother(String),

    #[error("inadmissible smoother: max |e(x)| on (0, lambda1] is {max_error} >= 1")]
    InadmissibleSmoother { max_error: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("eigenvalue iteration did not converge after {iterations} sweeps (matrix size {size})")]
    NoConvergence { size: usize, iterations: usize },

    #[error("singular coarse symbol {value:e} at theta0 = {theta:?}")]
    SingularCoarseSymbol { theta: Vec<f64>, value: f64 },

    #[error("no crossing of the endpoint errors on [{lambda0}, {lambda1})")]
    NoCrossing { lambda0: f64, lambda1: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cannot build hierarchy: {0}")]
    Hierarchy(String),

    #[error("iteration diverged at iterate {iterate}: ratio {ratio}")]
    Divergence { iterate: usize, ratio: f64 },

    #[error("unknown table {0}")]
    UnknownTable(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("json: {0}")]
    Json(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGeometry(_) => "invalid_geometry",
            Error::InvalidStencil(_) => "invalid_stencil",
            Error::NonRealSymbol { .. } => "non_real_symbol",
            Error::IndefiniteSymbol { .. } => "indefinite_symbol",
            Error::InvalidSampling(_) => "invalid_sampling",
            Error::InvalidSmoother(_) => "invalid_smoother",
            Error::InadmissibleSmoother { .. } => "inadmissible_smoother",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NoConvergence { .. } => "no_convergence",
            Error::SingularCoarseSymbol { .. } => "singular_coarse_symbol",
            Error::NoCrossing { .. } => "no_crossing",
            Error::InvalidConfig(_) => "invalid_config",
            Error::Hierarchy(_) => "hierarchy",
            Error::Divergence { .. } => "divergence",
            Error::UnknownTable(_) => "unknown_table",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
