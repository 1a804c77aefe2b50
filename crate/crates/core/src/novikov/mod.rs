//! Finite Morse–Novikov theory: flow models over a period lattice, twisted
//! differentials, hat transforms, continuation maps, growth profiles and
//! the wall-crossing calculus for critical-value diagrams.

pub mod cellular;
pub mod convergence;
pub mod crossing;
pub mod expsum;
pub mod fixtures;
pub mod model;
pub mod table;

pub use cellular::LocalSystemComplex;
pub use convergence::{convergence_profile, ConvergenceProfile};
pub use crossing::{crossing_update, CriticalValueDiagram, Crossing, Move};
pub use expsum::{Class, ExpMatrix, ExpSum, Horizon};
pub use model::{monodromy, CriticalPoint, FlowModel, FlowRecord};
pub use table::{continuation_check, ContinuationData, ContinuationReport, EquivariantTable, TableRecord};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NovikovError {
    #[error("invalid data: {0}")]
    Invalid(String),
    #[error("∂∘∂ ≠ 0 through degree {degree}: entry ({row}, {col}) = {value}")]
    NotComplex {
        degree: usize,
        row: usize,
        col: usize,
        value: String,
    },
    #[error("length mismatch: expected {0}, found {1}")]
    Length(usize, usize),
    #[error("series diverges: decay rate {s} is not above the growth estimate {rho}")]
    Divergent { s: f64, rho: f64 },
    #[error("exponent {0} exceeds the evaluation bound {1}")]
    Overflow(f64, f64),
    #[error("chain-map identity fails from degree {degree} at ({row}, {col}): {value}")]
    ChainMap {
        degree: usize,
        row: usize,
        col: usize,
        value: String,
    },
    #[error("non-generic move: {0}")]
    NonGeneric(String),
}
