use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: |a[{row},{col}] - conj(a[{col},{row}])| = {deviation:e}")]
    NonHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("QL iteration did not converge for eigenvalue {index}")]
    NonConvergence { index: usize },

    #[error("Kramers pairing violated: gap {gap:e} exceeds tolerance {tolerance:e}")]
    PairingViolation { gap: f64, tolerance: f64 },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("point {re}+{im}i lies on or too close to the cut [-2, 2]")]
    Domain { re: f64, im: f64 },

    #[error("kernel evaluated on its singular diagonal (t = {t}, s = {s})")]
    SingularPoint { t: f64, s: f64 },

    #[error("Chebyshev tail {tail:e} has not decayed below {threshold:e}; raise the truncation order")]
    TailNotDecayed { tail: f64, threshold: f64 },

    #[error("imaginary residue {residue:e} of a real-valued quadrature exceeds {threshold:e}")]
    ImaginaryResidue { residue: f64, threshold: f64 },

    #[error("kernel quadrature did not converge: orders 200 and 400 differ by {difference:e}")]
    QuadratureNotConverged { difference: f64 },

    #[error("contour too close to the spectrum: a - 2 = {gap} < 0.1")]
    ContourTooClose { gap: f64 },

    #[error("test function is not analytic inside the contour: {0}")]
    NotAnalyticInside(String),

    #[error("input is not a Type-I matrix")]
    Structure,

    #[error("operation requires beta = {required}, got beta = {got}")]
    UnsupportedBeta { required: u8, got: u8 },

    #[error("internal inconsistency between equivalent forms: {0}")]
    Inconsistent(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("replicate {index} failed: {source}")]
    Replicate {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
