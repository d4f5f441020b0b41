//! Boundary-controlled non-Hermitian tight-binding Hamiltonians: exact
//! secular polynomials, Sturmian curves, certified exceptional points and
//! quasi-Hermitian metrics.

pub mod eploc;
pub mod exactpoly;
pub mod lattice;
pub mod linalg;
pub mod metric;
pub mod secular;
pub mod sweep;
