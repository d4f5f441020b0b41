//! Exact polynomial and rational-function algebra over arbitrary-precision
//! rationals, certified real-root isolation and complex root finding.

mod poly;
mod ratfunc;
mod resultant;
mod ring;
mod roots;
mod zpoly;

use num_complex::Complex64;
use thiserror::Error;

pub use poly::{Poly, RatPoly, Var, VAR_E, VAR_R2, VAR_U, VAR_X};
pub use ratfunc::RatFunc;
pub use resultant::{discriminant, resultant};
pub use ring::{parse_q, q, q_from_f64, q_from_f64_simplest, q_to_f64, q_to_string, qi, Ring, Q};
pub use roots::{
    complex_roots, complex_roots_exact, isolate_real_roots, isolate_real_roots_coarse, root_bound,
    sort_roots, AberthOptions, RootBox, RootLocation, SturmChain, DEFAULT_ROOT_TOL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial variables differ: {left} vs {right}")]
    VariableMismatch { left: Var, right: Var },
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial degree must be at least 1")]
    DegreeTooLow,
    #[error("coefficient is not finite")]
    NonFinite,
    #[error("tolerance must be a positive finite number")]
    BadTolerance,
    #[error("non-exact division in a subresultant step")]
    InexactDivision,
    #[error("root iteration did not converge")]
    NonConvergence { best: Vec<Complex64> },
    #[error("rational function has a zero denominator")]
    ZeroDenominator,
}
