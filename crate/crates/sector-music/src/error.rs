use thiserror::Error;

/// Errors produced by the estimation and simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its valid domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Operand shapes do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// An operation needs at least one source angle.
    #[error("no sources")]
    NoSources,
    /// Two angles coincide where a separation is required.
    #[error("zero separation")]
    ZeroSeparation,
    /// The assumed source count leaves no noise subspace.
    #[error("no noise subspace: {0}")]
    NoNoiseSubspace(String),
    /// Input matrix is not Hermitian within tolerance.
    #[error("matrix not Hermitian (relative asymmetry {0:.3e})")]
    NotHermitian(f64),
    /// Perturbation formulas break down when summed eigenvalue pairs coincide.
    #[error("degenerate spectrum: eigenvalues {0:.6e} and {1:.6e} too close")]
    DegenerateSpectrum(f64, f64),
    /// The eigensolver did not produce a usable decomposition.
    #[error("eigensolver failure: {0}")]
    Eigensolver(String),
    /// A collection that must be nonempty was empty.
    #[error("empty input: {0}")]
    EmptyInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of the numerical core (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Eigensolver(_) | Error::DegenerateSpectrum(_, _) | Error::NotHermitian(_)
        )
    }
}
