//! Flat lattice models: the Fueter operator on periodic quaternion fields,
//! its square, kernel and eigen-residuals, and spectral flow of
//! piecewise-linear self-adjoint matrix paths.

pub mod flow;
pub mod lattice;

pub use flow::{realify, spectral_flow, CrossingEvent, FlowReport, Operator, SelfAdjointFamily};
pub use lattice::{
    fueter_apply, fueter_square_residual, kernel_dimension, nonlinear_eigen_residual, units, FueterOperator,
    Quaternion, QuaternionField,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FueterError {
    #[error("lattice size {0} must be odd and at least 3")]
    EvenLattice(usize),
    #[error("field sizes differ: {0} and {1}")]
    Shape(usize, usize),
    #[error("the zero field has no eigen-residual")]
    ZeroField,
    #[error("matrix at t = {t} is not self-adjoint (deviation {deviation:e})")]
    NotSelfAdjoint { t: f64, deviation: f64 },
    #[error("endpoint t = {t} has eigenvalue {eigenvalue:e} within {tolerance:e} of zero")]
    SingularEndpoint { t: f64, eigenvalue: f64, tolerance: f64 },
    #[error("crossing near t = {t} is not simple ({multiplicity} eigenvalues)")]
    NonSimple { t: f64, multiplicity: usize },
    #[error("invalid family: {0}")]
    Invalid(String),
}
