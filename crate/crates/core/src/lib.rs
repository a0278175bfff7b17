//! Exact computations with Lie algebras of polynomial vector fields on the
//! affine plane over `Q(sqrt2)`.

pub mod closure;
pub mod error;
pub mod finiteness;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod scalar;
pub mod spectral;
pub mod vecfield;

pub use error::{Error, Result};
pub use poly::{BiPoly, Mode, Var};
pub use scalar::Scalar;
pub use vecfield::{Derivation, GradedForm, PolyAutomorphism, Weight};
