//! Exact polynomial dynamics toolkit: decomposition, conjugacy, symmetry,
//! semiconjugacy, periodic curves of split maps and return-set experiments.

pub mod algebra;
pub mod conjugacy;
pub mod decompose;
pub mod dml;
pub mod error;
pub mod msclass;
pub mod semiconj;
pub mod symmetry;

pub use algebra::{BiPoly, BivarCurve, Field, LinearPoly, Poly, Scalar, Var};
pub use error::{Error, ExtensionHint, Result};
