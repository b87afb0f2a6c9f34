use thiserror::Error;

/// Failure modes of the solver stack.
///
/// Each variant maps onto a stable short code (see [`Error::code`]) that the
/// command-line front end and the solution report surface verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("matrix {name} is not symmetric (max asymmetry {asym:e})")]
    NotSymmetric { name: String, asym: f64 },
    #[error("definiteness violated: {0}")]
    Indefinite(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("builtin example id {0} out of range 1..=5")]
    Range(usize),
    #[error("matrix is singular to working precision: {0}")]
    Singular(String),
    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("Hamiltonian has an eigenvalue within {margin:e} of the imaginary axis (re = {re:e})")]
    ImaginaryAxis { re: f64, margin: f64 },
    #[error("stable invariant subspace has dimension {found}, expected {expected}")]
    Defect { found: usize, expected: usize },
    #[error("closed loop is not Hurwitz: {0}")]
    NotStabilizing(String),
    #[error("coupling matrix of the gain condition is singular")]
    CouplingSingular,
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dim(_) => "EDIM",
            Error::NotSymmetric { .. } => "ENOTSYM",
            Error::Indefinite(_) => "EINDEF",
            Error::Parse(_) => "EPARSE",
            Error::Range(_) => "ERANGE",
            Error::Singular(_) => "ESINGULAR",
            Error::NoConvergence(_) => "ENOCONV",
            Error::ImaginaryAxis { .. } => "EIMAGAXIS",
            Error::Defect { .. } => "EDEFECT",
            Error::NotStabilizing(_) => "ENOSTAB",
            Error::CouplingSingular => "ECOUPLINGSINGULAR",
            Error::Io(_) => "EIO",
            Error::Config(_) => "ECONFIG",
        }
    }

    /// True for errors caused by the caller's input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Dim(_)
                | Error::NotSymmetric { .. }
                | Error::Indefinite(_)
                | Error::Parse(_)
                | Error::Range(_)
                | Error::Io(_)
                | Error::Config(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
