//! Boundary-controlled tight-binding Hamiltonians.
//!
//! The shifted form is tridiagonal with `-1` off the diagonal, zeros inside
//! and the corner entries `-z`, `-z*`; the unshifted form adds 2 to every
//! diagonal entry. The corner parameter is given either directly as `z` or as
//! `(u, r)` with `z = -u + i sqrt(1 - r^2)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactpoly::{q_from_f64_simplest, Q};
use crate::linalg::{c, ComplexMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("matrix dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("parameter {0} is not finite")]
    NonFinite(&'static str),
    #[error("model parameters need either (u, r) or (z_re, z_im)")]
    MissingBoundary,
    #[error("degenerate Robin data: (alpha + i beta) h = -i")]
    DegenerateBoundary,
    #[error("lattice spacing must be positive")]
    Spacing,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    Shifted,
    Unshifted,
}

impl Convention {
    pub fn energy_offset(self) -> f64 {
        match self {
            Convention::Shifted => 0.0,
            Convention::Unshifted => 2.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boundary {
    /// `z = -u + i sqrt(1 - r^2)`.
    Shift { u: f64, r: f64 },
    Z(Complex64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Hermiticity {
    Hermitian,
    NonHermitian,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelParamsJson", into = "ModelParamsJson")]
pub struct ModelParams {
    pub n: usize,
    pub boundary: Boundary,
    pub convention: Convention,
}

#[derive(Serialize, Deserialize)]
struct ModelParamsJson {
    n: usize,
    #[serde(default)]
    convention: Convention,
    #[serde(skip_serializing_if = "Option::is_none")]
    u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    z_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    z_im: Option<f64>,
}

impl TryFrom<ModelParamsJson> for ModelParams {
    type Error = LatticeError;

    fn try_from(j: ModelParamsJson) -> Result<Self, LatticeError> {
        let p = match (j.u, j.r, j.z_re, j.z_im) {
            (Some(u), Some(r), None, None) => ModelParams::with_shift(j.n, u, r)?,
            (None, None, Some(re), Some(im)) => ModelParams::with_z(j.n, c(re, im))?,
            _ => return Err(LatticeError::MissingBoundary),
        };
        Ok(p.convention(j.convention))
    }
}

impl From<ModelParams> for ModelParamsJson {
    fn from(p: ModelParams) -> Self {
        let (u, r, z_re, z_im) = match p.boundary {
            Boundary::Shift { u, r } => (Some(u), Some(r), None, None),
            Boundary::Z(z) => (None, None, Some(z.re), Some(z.im)),
        };
        ModelParamsJson { n: p.n, convention: p.convention, u, r, z_re, z_im }
    }
}

fn finite(v: f64, name: &'static str) -> Result<f64, LatticeError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(LatticeError::NonFinite(name))
    }
}

impl ModelParams {
    pub fn with_shift(n: usize, u: f64, r: f64) -> Result<Self, LatticeError> {
        if n < 2 {
            return Err(LatticeError::Dimension(n));
        }
        Ok(ModelParams {
            n,
            boundary: Boundary::Shift { u: finite(u, "u")?, r: finite(r, "r")? },
            convention: Convention::Shifted,
        })
    }

    pub fn with_z(n: usize, z: Complex64) -> Result<Self, LatticeError> {
        if n < 2 {
            return Err(LatticeError::Dimension(n));
        }
        finite(z.re, "z_re")?;
        finite(z.im, "z_im")?;
        Ok(ModelParams { n, boundary: Boundary::Z(z), convention: Convention::Shifted })
    }

    pub fn convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }

    /// Corner parameter. For `r^2 > 1` the principal root gives the real value
    /// `-u - sqrt(r^2 - 1)`.
    pub fn z(&self) -> Complex64 {
        match self.boundary {
            Boundary::Shift { u, r } => {
                let s2 = 1.0 - r * r;
                if s2 >= 0.0 {
                    c(-u, s2.sqrt())
                } else {
                    c(-u - (-s2).sqrt(), 0.0)
                }
            }
            Boundary::Z(z) => z,
        }
    }

    /// `(u, r)` form; `r >= 0` is chosen when converting from `z`.
    pub fn shift_and_r(&self) -> (f64, f64) {
        match self.boundary {
            Boundary::Shift { u, r } => (u, r),
            Boundary::Z(z) => (-z.re, (1.0 - z.im * z.im).max(0.0).sqrt()),
        }
    }

    /// Exact `(u, r^2)` determining the secular polynomial; each double is
    /// read as the simplest rational rounding to it.
    pub fn exact_shift_r2(&self) -> (Q, Q) {
        match self.boundary {
            Boundary::Shift { u, r } => {
                let r = q_from_f64_simplest(r).expect("finite r");
                (q_from_f64_simplest(u).expect("finite u"), &r * &r)
            }
            Boundary::Z(z) => {
                let im = q_from_f64_simplest(z.im).expect("finite z");
                (-q_from_f64_simplest(z.re).expect("finite z"), Q::from_integer(1.into()) - &im * &im)
            }
        }
    }

    /// Top-left and bottom-right diagonal entries of the shifted matrix.
    ///
    /// With `r^2 <= 1` (and always in the `z` form) these are `-z` and `-z*`.
    /// For `r^2 > 1` the pair continues analytically to the real values
    /// `u ± sqrt(r^2 - 1)`, which keeps the matrix real symmetric and its
    /// characteristic polynomial polynomial in `r^2`.
    pub fn corners(&self) -> (Complex64, Complex64) {
        match self.boundary {
            Boundary::Shift { u, r } => {
                let s2 = 1.0 - r * r;
                if s2 >= 0.0 {
                    let s = s2.sqrt();
                    (c(u, -s), c(u, s))
                } else {
                    let t = (-s2).sqrt();
                    (c(u + t, 0.0), c(u - t, 0.0))
                }
            }
            Boundary::Z(z) => (-z, -z.conj()),
        }
    }

    /// Same model in the `z` form (`r^2 <= 1` only, otherwise `None`).
    pub fn to_z_form(&self) -> Option<ModelParams> {
        match self.boundary {
            Boundary::Shift { r, .. } if r * r > 1.0 => None,
            _ => Some(ModelParams { boundary: Boundary::Z(self.z()), ..*self }),
        }
    }

    pub fn to_shift_form(&self) -> ModelParams {
        let (u, r) = self.shift_and_r();
        ModelParams { boundary: Boundary::Shift { u, r }, ..*self }
    }
}

pub fn build_hamiltonian(p: &ModelParams) -> ComplexMatrix {
    let n = p.n;
    let offset = c(p.convention.energy_offset(), 0.0);
    let (top, bottom) = p.corners();
    let mut h = ComplexMatrix::from_element(n, n, c(0.0, 0.0));
    for i in 0..n {
        h[(i, i)] = offset;
        if i + 1 < n {
            h[(i, i + 1)] = c(-1.0, 0.0);
            h[(i + 1, i)] = c(-1.0, 0.0);
        }
    }
    h[(0, 0)] += top;
    h[(n - 1, n - 1)] += bottom;
    h
}

pub fn hermiticity_flag(p: &ModelParams) -> Hermiticity {
    let hermitian = match p.boundary {
        Boundary::Shift { r, .. } => r * r >= 1.0,
        Boundary::Z(z) => z.im == 0.0,
    };
    if hermitian {
        Hermiticity::Hermitian
    } else {
        Hermiticity::NonHermitian
    }
}

/// Complex Robin data of the discretized square well.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobinData {
    pub alpha: f64,
    pub beta: f64,
    pub h: f64,
}

/// Eliminates the boundary value `ψ(x_0)` from the first difference equation:
/// `ψ(x_0) = z ψ(x_1)` with `z = i / ((α + iβ) h + i)`. The right endpoint
/// produces `z*`.
pub fn robin_to_z(d: &RobinData) -> Result<Complex64, LatticeError> {
    finite(d.alpha, "alpha")?;
    finite(d.beta, "beta")?;
    if !d.h.is_finite() || d.h <= 0.0 {
        return Err(LatticeError::Spacing);
    }
    let den = c(d.alpha, d.beta) * d.h + c(0.0, 1.0);
    if den.norm() <= f64::EPSILON {
        return Err(LatticeError::DegenerateBoundary);
    }
    Ok(c(0.0, 1.0) / den)
}

/// `2 - 2 cos(kπ/(N+1))`, `k = 1..N`, ascending.
pub fn dirichlet_spectrum(n: usize) -> Vec<f64> {
    (1..=n).map(|k| 2.0 - 2.0 * (k as f64 * PI / (n as f64 + 1.0)).cos()).collect()
}

pub fn matrix_json(m: &ComplexMatrix) -> serde_json::Value {
    serde_json::json!(crate::linalg::to_json_rows(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn two_by_two_at_r_zero() {
        let u = 0.37;
        let h = build_hamiltonian(&ModelParams::with_shift(2, u, 0.0).unwrap());
        assert!(close(h[(0, 0)], c(u, -1.0)));
        assert!(close(h[(1, 1)], c(u, 1.0)));
        assert!(close(h[(0, 1)], c(-1.0, 0.0)) && close(h[(1, 0)], c(-1.0, 0.0)));
    }

    #[test]
    fn three_by_three_at_r_zero() {
        let u = -0.2;
        let h = build_hamiltonian(&ModelParams::with_shift(3, u, 0.0).unwrap());
        let expected = [[c(u, -1.0), c(-1.0, 0.0), c(0.0, 0.0)], [c(-1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)], [
            c(0.0, 0.0),
            c(-1.0, 0.0),
            c(u, 1.0),
        ]];
        for i in 0..3 {
            for j in 0..3 {
                assert!(close(h[(i, j)], expected[i][j]));
            }
        }
    }

    #[test]
    fn real_z_gives_hermitian_matrix() {
        let h = build_hamiltonian(&ModelParams::with_z(5, c(0.3, 0.0)).unwrap());
        assert_eq!(h, h.adjoint());
    }

    #[test]
    fn hermiticity_boundary() {
        let flag = |r| hermiticity_flag(&ModelParams::with_shift(4, 0.1, r).unwrap());
        assert_eq!(flag(0.5), Hermiticity::NonHermitian);
        assert_eq!(flag(2.0), Hermiticity::Hermitian);
        assert_eq!(flag(1.0), Hermiticity::Hermitian);
        assert_eq!(flag(-1.0), Hermiticity::Hermitian);
    }

    #[test]
    fn beyond_unit_r_matrix_is_real_symmetric() {
        let h = build_hamiltonian(&ModelParams::with_shift(4, 0.1, 1.7).unwrap());
        assert_eq!(h, h.transpose());
        assert!(h.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn unshifted_adds_two() {
        let p = ModelParams::with_shift(4, 0.3, 0.4).unwrap();
        let a = build_hamiltonian(&p);
        let b = build_hamiltonian(&p.convention(Convention::Unshifted));
        let diff = b - a;
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { c(2.0, 0.0) } else { c(0.0, 0.0) };
                assert!(close(diff[(i, j)], e));
            }
        }
    }

    #[test]
    fn dirichlet_matrix_at_zero_corner() {
        let p = ModelParams::with_shift(4, 0.0, 1.0).unwrap().convention(Convention::Unshifted);
        assert_eq!(p.z(), c(0.0, 0.0));
        let h = build_hamiltonian(&p);
        for i in 0..4 {
            assert_eq!(h[(i, i)], c(2.0, 0.0));
        }
    }

    #[test]
    fn z_and_shift_forms_round_trip() {
        let p = ModelParams::with_shift(6, 0.25, 0.6).unwrap();
        let z = p.to_z_form().unwrap();
        let back = z.to_shift_form();
        let (u, r) = back.shift_and_r();
        assert!((u - 0.25).abs() < 1e-15 && (r - 0.6).abs() < 1e-15);
        assert_eq!(p.corners(), z.corners());
        assert!(ModelParams::with_shift(6, 0.25, 1.5).unwrap().to_z_form().is_none());
    }

    #[test]
    fn robin_examples() {
        let z = robin_to_z(&RobinData { alpha: 0.0, beta: 0.0, h: 0.3 }).unwrap();
        assert!(close(z, c(1.0, 0.0)));
        let z = robin_to_z(&RobinData { alpha: 1.0, beta: 1.0, h: 1.0 }).unwrap();
        assert!(close(z, c(0.0, 1.0) / c(1.0, 2.0)));
        let z = robin_to_z(&RobinData { alpha: 1e14, beta: 0.0, h: 1.0 }).unwrap();
        assert!(z.norm() < 1e-13);
        assert_eq!(robin_to_z(&RobinData { alpha: 0.0, beta: -2.0, h: 0.5 }), Err(LatticeError::DegenerateBoundary));
    }

    #[test]
    fn dirichlet_small_cases() {
        assert!((dirichlet_spectrum(1)[0] - 2.0).abs() < 1e-15);
        let s = dirichlet_spectrum(2);
        assert!((s[0] - 1.0).abs() < 1e-15 && (s[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn json_schema() {
        let p: ModelParams = serde_json::from_str(r#"{"n": 3, "convention": "unshifted", "u": 0.5, "r": 0.0}"#).unwrap();
        assert_eq!(p.n, 3);
        assert_eq!(p.convention, Convention::Unshifted);
        let q: ModelParams = serde_json::from_str(r#"{"n": 4, "z_re": 0.1, "z_im": 0.9}"#).unwrap();
        assert_eq!(q.boundary, Boundary::Z(c(0.1, 0.9)));
        assert_eq!(q.convention, Convention::Shifted);
        assert!(serde_json::from_str::<ModelParams>(r#"{"n": 1, "u": 0, "r": 0}"#).is_err());
        assert!(serde_json::from_str::<ModelParams>(r#"{"n": 3, "u": 0}"#).is_err());
        let back: ModelParams = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
