//! Exponential-sum transition families between charts of solutions: exact
//! composition, diagonal gauge conjugation, cocycle verification, cokernel
//! assembly of the glued bundle, section pairing into cone-supported
//! generating functions, and weighted multiset partition counts.

pub mod assemble;
pub mod atlas;
pub mod fixtures;
pub mod series;
pub mod slag;

pub use assemble::{assemble_bundle, BundleReport, SampleReport};
pub use atlas::{
    check_cocycle, Atlas, ChartPoint, CocycleFailure, CocycleReport, Solution, TransitionFamily, TransitionRecord,
};
pub use series::{pair_sections, GeneratingFunction, SectionData};
pub use slag::{slag_count, SlagWeights};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BundleError {
    #[error("invalid atlas: {0}")]
    Invalid(String),
    #[error("unknown chart {0}")]
    UnknownChart(String),
    #[error("no transition family from {0} to {1}")]
    MissingFamily(String, String),
    #[error("families do not compose: {0} → {1} then {2} → {3}")]
    ChartMismatch(String, String, String, String),
    #[error("record class {class} lies beyond the truncation horizon")]
    BeyondHorizon { class: String },
    #[error("exponent {0} exceeds the evaluation bound {1}")]
    Overflow(f64, f64),
    #[error("solution {name} of chart {chart} has no partner in chart {other}")]
    NameMismatch { name: String, chart: String, other: String },
    #[error("count {count} at class {class} violates the cone condition: ⟨φ, b⟩ = {pairing} < 0")]
    OutsideCone {
        class: String,
        count: String,
        pairing: String,
    },
    #[error("{0}")]
    NoPositivity(String),
}
