//! Exact arithmetic toolkit for the effective subspace inequality over the
//! rational function field Q(t).

pub mod chow;
pub mod constants;
pub mod error;
pub mod filtration;
pub mod function_field;
pub mod graded_ideal;
pub mod harness;
pub mod hilbert_bounds;
pub mod linalg;
pub mod multipoly;
mod parse;
pub mod serialize;

pub use error::{Error, Result};
pub use function_field::{Place, PlaceSet, ProjectivePoint, QPoly, RationalFunction};
pub use multipoly::{HomogeneousPoly, Monomial, Poly};
pub use parse::parse_rational_function;
