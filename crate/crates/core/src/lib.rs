//! Parameterized differential Galois groups of `y'' = q y` over ℚ(t)(x) in
//! the non-reductive case.

pub mod algebra;
pub mod error;
pub mod galois;
pub mod hermite;
pub mod linear_ode;
pub mod riccati;

pub use error::{Error, Result};
