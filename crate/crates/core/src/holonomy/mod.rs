//! Exceptional-holonomy linear algebra: standard forms, orbit models,
//! 2-form decompositions, calibrated planes, taming and stable-form metrics.

pub mod metric;
pub mod models;
pub mod planes;
pub mod standard;
pub mod taming;

pub use metric::{metric_from_3form, su3_check, Su3Verdict, ThreeFormMetric};
pub use models::{
    cylinder_lift_6to7, cylinder_lift_7to8, orbit_rank_g2, orbit_rank_spin7, orbit_rank_su3, standard_models,
    Decomposition, G2Model, OrbitReport, SU3Model, Spin7Model,
};
pub use planes::{
    calibration_sampling, classify_cayley, classify_g2, CalibrationReport, PlaneClassification, PlaneKind,
};
pub use taming::{taming_check, taming_check_pair, SamplingConfig, TamingCertificate};

use crate::exterior::{FormError, KForm};
use crate::linalg::RatMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HolonomyError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("expected shape {expected:?}, found {found:?}")]
    Shape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("frame determinant {0} is not positive")]
    NotOrientationPreserving(String),
    #[error("model invariant violated: {0}")]
    Invariant(String),
}

/// Matrix of the linearized action gl(n) → Λ^k, A ↦ d/dt pullback(form, e^{tA}).
pub fn gl_action_matrix(form: &KForm) -> RatMatrix {
    let n = form.dim();
    let cols: Vec<Vec<_>> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| form.gl_derivative(a, b).to_vector())
        .collect();
    RatMatrix::from_rows(&cols).transpose()
}

pub fn gl_action_rank(form: &KForm) -> usize {
    gl_action_matrix(form).rank()
}
