use thiserror::Error;

/// Every failure mode of the library.
///
/// Variants split into input-validation failures and numerical failures;
/// [`Error::is_numerical`] tells them apart (the CLI maps them to exit codes
/// 1 and 2 respectively).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix data has {got} entries, expected {rows}x{cols}")]
    ShapeMismatch { rows: usize, cols: usize, got: usize },
    #[error("matrix entry at index {0} is not finite")]
    NonFinite(usize),
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal {off:.3e})")]
    ConvergenceFailure { sweeps: usize, off: f64 },
    #[error("function is not finite at eigenvalue {0}")]
    DomainError(f64),
    #[error("eigenvalue {0:.3e} is below the negative cutoff")]
    NegativeEigenvalue(f64),
    #[error("tensor product dimension {dim} exceeds cap {cap}")]
    SizeOverflow { dim: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("state vector norm {0} differs from 1")]
    NotNormalized(f64),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),
    #[error("correlation bases differ in size: system {system}, apparatus {apparatus}")]
    BasisSizeMismatch { system: usize, apparatus: usize },
    #[error("basis is not orthonormal (defect {0:.3e})")]
    NotOrthonormal(f64),

    #[error("support of the joint state is not contained in the support of I ⊗ ρ_B (leak {0:.3e})")]
    SupportMismatch(f64),
    #[error("state is rank deficient (smallest eigenvalue {0:.3e}); use regularization")]
    SingularState(f64),
    #[error("conditional entropy routes disagree: difference {difference} vs log {log}")]
    DualPathMismatch { difference: f64, log: f64 },

    #[error("entropy must be positive, got {0}")]
    NonpositiveEntropy(f64),
    #[error("mean energy {mean} does not exceed ground energy {ground}")]
    DegenerateSpectrum { mean: f64, ground: f64 },
    #[error("invalid thermal context: {0}")]
    InvalidContext(String),
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("argument must be non-negative, got {0}")]
    NegativeArgument(f64),
    #[error("resolution must be positive, got {0}")]
    NonpositiveResolution(f64),

    #[error("boost speed |v| = {v} is not below c = {c}")]
    SuperluminalBoost { v: f64, c: f64 },
    #[error("temperature must be positive, got {0}")]
    NonpositiveTemperature(f64),

    #[error("no system with positive entropy")]
    NoActiveSystem,
    #[error("velocity must be positive, got {0}")]
    NonpositiveVelocity(f64),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ConvergenceFailure { .. }
                | Error::DomainError(_)
                | Error::SupportMismatch(_)
                | Error::SingularState(_)
                | Error::DualPathMismatch { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
