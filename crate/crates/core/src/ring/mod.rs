//! Exact arithmetic: Gaussian rationals, polynomials, weights and parsing.

pub mod field;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod weights;

pub use field::Field;
pub use monomial::Monomial;
pub use parse::{default_vars, parse_polynomial, ParseError};
pub use poly::{poly_det, Poly, Polynomial};
pub use ratfunc::{RatFunc, UPoly};
pub use scalar::{GaussianRational, Gq};
pub use weights::{central_charge, charge, infer_weights, WeightError, WeightSystem};
