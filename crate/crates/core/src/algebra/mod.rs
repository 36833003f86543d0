//! Exact coefficient arithmetic: multivariate integer polynomials, the
//! exterior algebra on circle generators, and integer/rational linear algebra.

mod ext;
mod gf2;
mod matrix;
mod poly;

pub use ext::{ext_mul, left_mult, ExtElement};
pub use gf2::Gf2System;
pub use matrix::{IntMatrix, RatMatrix, SmithNormalForm};
pub use poly::{Monomial, Poly};
