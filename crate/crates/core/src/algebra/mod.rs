//! Exact rational polynomial arithmetic in named parameters.

pub mod matrix;
pub mod param;
pub mod parse;
pub mod poly;

pub use matrix::{basis, zero_vec, PolyMatrix, PolyVec, Tensor3};
pub use param::Param;
pub use parse::{parse_poly, parse_rational, ParseError, ParseErrorKind, Scope};
pub use poly::{integer, rational, CompiledPoly, Monomial, Poly, Rational};
