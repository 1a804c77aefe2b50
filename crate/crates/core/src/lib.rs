//! Exact exterior algebra and exceptional-holonomy form calculus, finite
//! Morse–Novikov complexes with wall crossing, exponential-sum transition
//! cocycles, and a lattice Fueter operator with spectral flow.

pub mod bundles;
pub mod exterior;
pub mod fueter;
pub mod holonomy;
pub mod io;
pub mod linalg;
pub mod novikov;
pub mod par;
pub mod scalar;

pub use exterior::{FormError, KForm, Metric, OrientedPlane};
pub use linalg::RatMatrix;
pub use par::Execution;
pub use scalar::Scalar;
