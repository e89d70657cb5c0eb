//! Exact arithmetic: rationals, multivariate polynomials over the rationals,
//! Gaussian-rational scalars, complex-symbolic polynomials and dense exact
//! matrices.

mod complex;
mod matrix;
mod monomial;
mod poly;
mod rational;
mod ring;
mod text;

pub use complex::{ComplexPoly, ComplexScalar};
pub use matrix::{integer_determinant, integer_kernel, ExactMatrix, SymmetricFactor};
pub use monomial::Monomial;
pub use poly::{evaluate_hessian, Degree, MultiPoly};
pub use rational::{rat, rat_frac, Rational};
pub use ring::Ring;
pub use text::{default_names, parse_point_list, parse_poly, write_point_list, write_poly};
