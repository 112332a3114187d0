//! Exact arithmetic over ℚ(t₁,…,t_m) and ℚ(t₁,…,t_m)(x).

pub mod derivation;
pub mod linalg;
pub mod mpoly;
pub mod ratfun;
pub mod scalar;
pub mod upoly;

pub use derivation::{commutator, DerMonomial, Derivation, DiffOperator};
pub use linalg::Matrix;
pub use mpoly::{Monomial, MPoly};
pub use ratfun::RatFun;
pub use scalar::ParamScalar;
pub use upoly::UPoly;
