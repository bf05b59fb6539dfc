//! Wigner matrices over the reals, complexes and quaternions, and the
//! Gaussian fluctuations of their linear spectral statistics.

pub mod acceptance;
pub mod chebyshev;
pub mod eigen;
pub mod ensembles;
pub mod error;
pub mod experiment;
pub mod oracle;
pub mod predict;
pub mod quadrature;
pub mod quaternion;
pub mod semicircle;

pub use chebyshev::{parse_function_list, PsiCoefficients, TestFunction};
pub use ensembles::{DiagonalKind, EnsembleSpec, EntryDistribution, EntryKind};
pub use error::{Error, Result};
pub use experiment::{ExperimentConfig, ExperimentReport, Format, FunctionSummary};
pub use predict::{Beta, ModelParams, Prediction, PredictionForm};
pub use quaternion::{CMatrix, ComplexHermitian, Quaternion, SelfDualMatrix};
