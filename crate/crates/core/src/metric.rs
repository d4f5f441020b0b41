//! Hermitian solutions of `H†Θ = ΘH`, a positive representative and its
//! Dyson factorization `Θ = Ω†Ω`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{LatticeError, ModelParams};
use crate::linalg::{self, c, ComplexMatrix};
use crate::secular::{spectrum, SecularError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("spectrum is not real; no positive metric exists ({} Hermitian solutions)", basis.len())]
    NoPositiveSolution { basis: Vec<ComplexMatrix> },
    #[error("spectrum is degenerate (minimum gap {gap:e}); no positive metric exists")]
    DegenerateSpectrum { basis: Vec<ComplexMatrix>, gap: f64 },
    #[error("matrix is not positive definite (smallest eigenvalue {floor:e})")]
    NotPositiveDefinite { floor: f64 },
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error(transparent)]
    Secular(#[from] SecularError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricOptions {
    /// Relative singular-value cutoff for the kernel.
    pub kernel_tol: f64,
    /// `|Im λ|` and eigenvalue gaps at or below this are treated as zero.
    pub spectral_tol: f64,
}

impl Default for MetricOptions {
    fn default() -> Self {
        MetricOptions { kernel_tol: 1e-9, spectral_tol: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricSolution {
    pub basis: Vec<ComplexMatrix>,
    pub representative: ComplexMatrix,
    pub eigen_floor: f64,
    /// `‖H†Θ - ΘH‖_F` of the representative.
    pub residual: f64,
}

impl MetricSolution {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "basis": self.basis.iter().map(linalg::to_packed_lower).collect::<Vec<_>>(),
            "representative": linalg::to_packed_lower(&self.representative),
            "eigen_floor": self.eigen_floor,
            "residual": self.residual,
        })
    }
}

impl Serialize for MetricSolution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Hermitian `n × n` matrices as points of `R^{n^2}`: diagonal entries, then
/// real and imaginary parts of the strict upper triangle.
struct HermitianCoords {
    n: usize,
    upper: Vec<(usize, usize)>,
}

impl HermitianCoords {
    fn new(n: usize) -> Self {
        let upper = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        HermitianCoords { n, upper }
    }

    fn dim(&self) -> usize {
        self.n * self.n
    }

    fn to_matrix(&self, x: &[f64]) -> ComplexMatrix {
        let n = self.n;
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(x[i], 0.0);
        }
        let off = self.upper.len();
        for (k, &(i, j)) in self.upper.iter().enumerate() {
            let z = c(x[n + k], x[n + off + k]);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
        m
    }

    fn coords_of(&self, m: &ComplexMatrix) -> Vec<f64> {
        let n = self.n;
        let mut x = vec![0.0; self.dim()];
        for i in 0..n {
            x[i] = m[(i, i)].re;
        }
        let off = self.upper.len();
        for (k, &(i, j)) in self.upper.iter().enumerate() {
            x[n + k] = m[(i, j)].re;
            x[n + off + k] = m[(i, j)].im;
        }
        x
    }
}

fn dieudonne_map(h: &ComplexMatrix, theta: &ComplexMatrix) -> ComplexMatrix {
    h.adjoint() * theta - theta * h
}

/// Real basis of the Hermitian kernel of `Θ ↦ H†Θ - ΘH`, each element of unit
/// Frobenius norm in the real coordinates.
pub fn hermitian_kernel(h: &ComplexMatrix, rel_tol: f64) -> Result<Vec<ComplexMatrix>, MetricError> {
    let n = h.nrows();
    if n != h.ncols() || n == 0 {
        return Err(MetricError::NotSquare);
    }
    let coords = HermitianCoords::new(n);
    let dim = coords.dim();
    let mut system = DMatrix::<f64>::zeros(2 * n * n, dim);
    let mut e = vec![0.0; dim];
    for col in 0..dim {
        e[col] = 1.0;
        let image = dieudonne_map(h, &coords.to_matrix(&e));
        e[col] = 0.0;
        for (k, z) in image.iter().enumerate() {
            system[(2 * k, col)] = z.re;
            system[(2 * k + 1, col)] = z.im;
        }
    }
    let svd = system.svd(false, true);
    let v_t = svd.v_t.expect("right vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut kernel: Vec<(f64, Vec<f64>)> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= rel_tol * smax.max(f64::MIN_POSITIVE))
        .map(|(k, s)| (*s, v_t.row(k).iter().copied().collect()))
        .collect();
    kernel.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(kernel
        .into_iter()
        .map(|(_, mut x)| {
            // deterministic sign: largest coordinate positive
            let big = x.iter().copied().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
            if big < 0.0 {
                x.iter_mut().for_each(|v| *v = -*v);
            }
            coords.to_matrix(&x)
        })
        .collect())
}

fn left_eigenvector(h: &ComplexMatrix, lambda: Complex64) -> Vec<Complex64> {
    let n = h.nrows();
    let a = h.adjoint() - ComplexMatrix::identity(n, n) * lambda.conj();
    linalg::smallest_singular_vector(&a).1
}

/// Solves `H†Θ = ΘH` over Hermitian `Θ` and picks the representative
/// `Σ w_k w_k†` over unit left eigenvectors, scaled to trace `N`.
pub fn solve_dieudonne(h: &ComplexMatrix) -> Result<MetricSolution, MetricError> {
    solve_dieudonne_with(h, &MetricOptions::default())
}

pub fn solve_dieudonne_with(h: &ComplexMatrix, opts: &MetricOptions) -> Result<MetricSolution, MetricError> {
    let basis = hermitian_kernel(h, opts.kernel_tol)?;
    let n = h.nrows();
    let scale = linalg::frobenius(h).max(1.0);
    let eig = linalg::eigenvalues(h);
    if eig.iter().any(|l| l.im.abs() > opts.spectral_tol * scale) {
        return Err(MetricError::NoPositiveSolution { basis });
    }
    let mut re: Vec<f64> = eig.iter().map(|l| l.re).collect();
    re.sort_by(f64::total_cmp);
    let gap = re.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if gap <= opts.spectral_tol * scale {
        return Err(MetricError::DegenerateSpectrum { basis, gap });
    }

    let mut theta = ComplexMatrix::zeros(n, n);
    for lambda in &re {
        let w = nalgebra::DVector::from_vec(left_eigenvector(h, c(*lambda, 0.0)));
        theta += &w * w.adjoint();
    }
    // project onto the exact solution space to remove eigenvector noise
    let coords = HermitianCoords::new(n);
    let x = coords.coords_of(&theta);
    let mut projected = vec![0.0; coords.dim()];
    for b in &basis {
        let bx = coords.coords_of(b);
        let dot: f64 = bx.iter().zip(&x).map(|(a, b)| a * b).sum();
        projected.iter_mut().zip(&bx).for_each(|(p, v)| *p += dot * v);
    }
    let mut theta = coords.to_matrix(&projected);
    let trace: f64 = (0..n).map(|i| theta[(i, i)].re).sum();
    if trace.abs() > 0.0 {
        theta *= c(n as f64 / trace, 0.0);
    }
    let (vals, _) = linalg::hermitian_eigen(&theta);
    let eigen_floor = vals[0];
    if eigen_floor <= 0.0 {
        return Err(MetricError::NoPositiveSolution { basis });
    }
    let residual = linalg::frobenius(&dieudonne_map(h, &theta));
    Ok(MetricSolution { basis, representative: theta, eigen_floor, residual })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DysonKind {
    #[default]
    HermitianSqrt,
    Triangular,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DysonFactor {
    pub omega: ComplexMatrix,
    pub kind: DysonKind,
    /// `‖Ω†Ω - Θ‖_F / ‖Θ‖_F`.
    pub residual: f64,
}

impl DysonFactor {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind,
            "omega": linalg::to_json_rows(&self.omega),
            "residual": self.residual,
        })
    }

    /// `Ω H Ω⁻¹`.
    pub fn transform(&self, h: &ComplexMatrix) -> Option<ComplexMatrix> {
        let inv = self.omega.clone().try_inverse()?;
        Some(&self.omega * h * inv)
    }
}

pub fn dyson_factor(theta: &ComplexMatrix, kind: DysonKind) -> Result<DysonFactor, MetricError> {
    let n = theta.nrows();
    if n != theta.ncols() {
        return Err(MetricError::NotSquare);
    }
    let norm = linalg::frobenius(theta).max(f64::MIN_POSITIVE);
    if linalg::frobenius(&(theta - theta.adjoint())) > 1e-12 * norm {
        return Err(MetricError::NotHermitian);
    }
    let (vals, vecs) = linalg::hermitian_eigen(theta);
    if vals[0] <= 0.0 {
        return Err(MetricError::NotPositiveDefinite { floor: vals[0] });
    }
    let omega = match kind {
        DysonKind::HermitianSqrt => {
            let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                n,
                vals.iter().map(|v| c(v.sqrt(), 0.0)),
            ));
            &vecs * d * vecs.adjoint()
        }
        DysonKind::Triangular => {
            let sym = (theta + theta.adjoint()) * c(0.5, 0.0);
            let chol = sym.cholesky().ok_or(MetricError::NotPositiveDefinite { floor: vals[0] })?;
            chol.l().adjoint()
        }
    };
    let residual = linalg::frobenius(&(omega.adjoint() * &omega - theta)) / norm;
    Ok(DysonFactor { omega, kind, residual })
}

/// `true` where the spectrum is real (`|Im| <= tol`) and pairwise distinct
/// (gaps `> tol`).
pub fn reality_domain_probe(n: usize, grid: &[(f64, f64)], tol: f64) -> Result<Vec<bool>, MetricError> {
    grid.iter()
        .map(|&(u, r)| {
            let spec = spectrum(&ModelParams::with_shift(n, u, r)?)?;
            if spec.iter().any(|z| z.im.abs() > tol) {
                return Ok(false);
            }
            let mut re: Vec<f64> = spec.iter().map(|z| z.re).collect();
            re.sort_by(f64::total_cmp);
            Ok(re.windows(2).all(|w| w[1] - w[0] > tol))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_hamiltonian;

    fn h(n: usize, u: f64, r: f64) -> ComplexMatrix {
        build_hamiltonian(&ModelParams::with_shift(n, u, r).unwrap())
    }

    #[test]
    fn hermitian_model_admits_identity() {
        let hm = build_hamiltonian(&ModelParams::with_z(4, c(0.3, 0.0)).unwrap());
        let sol = solve_dieudonne(&hm).unwrap();
        assert_eq!(sol.basis.len(), 4);
        // identity lies in the span
        let coords = HermitianCoords::new(4);
        let id = coords.coords_of(&ComplexMatrix::identity(4, 4));
        let mut proj = [0.0; 16];
        for b in &sol.basis {
            let bx = coords.coords_of(b);
            let d: f64 = bx.iter().zip(&id).map(|(a, b)| a * b).sum();
            proj.iter_mut().zip(&bx).for_each(|(p, v)| *p += d * v);
        }
        let err: f64 = proj.iter().zip(&id).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        assert!(err < 1e-12);
        assert!(sol.eigen_floor > 0.0);
    }

    #[test]
    fn two_site_metric_by_hand() {
        // [[a, b], [b*, d]] with H = [[-i s, -1], [-1, i s]], s = sqrt(3)/2:
        // the equations force a = d and Im b = -s a
        let s = 0.75f64.sqrt();
        let hm = h(2, 0.0, 0.5);
        let sol = solve_dieudonne(&hm).unwrap();
        assert_eq!(sol.basis.len(), 2);
        for b in &sol.basis {
            assert!((b[(0, 0)] - b[(1, 1)]).norm() < 1e-12);
            assert!((b[(0, 1)].im + s * b[(0, 0)].re).abs() < 1e-12);
        }
        let t = &sol.representative;
        assert!((t[(0, 0)].re + t[(1, 1)].re - 2.0).abs() < 1e-12);
        let f = dyson_factor(t, DysonKind::HermitianSqrt).unwrap();
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn complex_pair_forbids_positive_metric() {
        match solve_dieudonne(&h(3, 0.5, 0.0)) {
            Err(MetricError::NoPositiveSolution { basis }) => assert!(!basis.is_empty()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dyson_examples() {
        let id = ComplexMatrix::identity(3, 3);
        let f = dyson_factor(&id, DysonKind::HermitianSqrt).unwrap();
        assert!(linalg::frobenius(&(f.omega - &id)) < 1e-15);
        let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(4.0, 0.0)]));
        let f = dyson_factor(&d, DysonKind::HermitianSqrt).unwrap();
        assert!((f.omega[(1, 1)] - c(2.0, 0.0)).norm() < 1e-15);
        let f = dyson_factor(&d, DysonKind::Triangular).unwrap();
        assert!(f.residual < 1e-15);
        let neg = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(-4.0, 0.0)]));
        assert!(matches!(dyson_factor(&neg, DysonKind::HermitianSqrt), Err(MetricError::NotPositiveDefinite { .. })));
    }

    #[test]
    fn probe_examples() {
        let grid: Vec<(f64, f64)> = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0].iter().map(|r| (0.0, *r)).collect();
        let flags = reality_domain_probe(6, &grid, 1e-9).unwrap();
        assert_eq!(flags, vec![true, true, true, false, true, true, true]);
        assert_eq!(reality_domain_probe(5, &[(0.0, 0.0), (1.0, 0.0)], 1e-9).unwrap(), vec![true, false]);
    }
}
