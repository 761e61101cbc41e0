//! Pseudotropical plane curves: realization from metric graphs by a discrete
//! Neumann solve, dual polygons and intersection numbers, rigid moduli of
//! marked rational curves, and refined counts of curves through points.

pub mod curve;
pub mod delta;
pub mod duality;
pub mod enumeration;
pub mod error;
pub mod jacobi;
pub mod json;
pub mod laurent;
pub mod linalg;
pub mod marked;
pub mod moduli;
pub mod neumann;
pub mod recursion;
pub mod scalar;
pub mod search;
pub mod svg;
pub mod vec2;
pub mod weights;

pub use curve::{AbstractCurve, Edge, PlaneCurve};
pub use delta::{validate_delta, DeltaInfo, DeltaSet};
pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
pub use vec2::Vec2;
