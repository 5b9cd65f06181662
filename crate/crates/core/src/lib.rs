//! Elliptic divisibility sequences over ℚ: exact curve arithmetic, division
//! polynomials and Vélu isogenies, canonical heights, explicit index bounds,
//! a prime-power sieve with Thue-equation output, and the y² = x³ − Ax family.

pub mod arith;
pub mod bounds;
pub mod curve;
pub mod divpoly;
pub mod ea;
pub mod eds;
pub mod error;
pub mod factor;
pub mod fixtures;
pub mod heights;
pub mod isogeny;
pub mod poly;
pub mod real;
pub mod selftest;
pub mod sieve;
pub mod tate;

pub use arith::Rational;
pub use curve::{Curve, Iso, Point};
pub use error::{Error, Result};
pub use poly::Poly;
pub use real::Real;
