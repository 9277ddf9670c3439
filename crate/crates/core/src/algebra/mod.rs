pub mod bivar;
pub mod field;
pub mod linear;
pub mod poly;
pub(crate) mod qpoly;
pub mod roots;
pub mod scalar;

pub use bivar::{resultant_elim, BiPoly, BivarCurve, Var};
pub use field::{Field, FieldKind};
pub use linear::{conjugate, LinearPoly};
pub use poly::{Poly, DEFAULT_DEGREE_CAP};
pub use scalar::Scalar;
