//! The rational function field K = Q(t): exact arithmetic, places,
//! valuations, heights and Weil functions.

pub mod factor;
mod height;
mod place;
mod qpoly;
mod rational;
mod zpoly;

pub use height::{
    family_height, gauss_order, gauss_order_point, gauss_order_poly, height_elem, height_point,
    height_poly_family, weil, ProjectivePoint,
};
pub use place::{divisor, order_at, support_of, Place, PlaceSet};
pub use qpoly::QPoly;
pub use rational::{denominator_lcm, RationalFunction};
pub use zpoly::ZPoly;
