//! Self-contained numerics: special functions, adaptive quadrature, and a
//! derivative-free simplex optimizer. No external numeric crates.

pub mod quad;
pub mod simplex;
pub mod special;
