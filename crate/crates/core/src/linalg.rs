//! Small dense complex linear algebra on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type ComplexMatrix = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Singular values (descending) and right singular vectors as columns.
pub fn svd(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix, ComplexMatrix) {
    let svd = m.clone().svd(true, true);
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let u = svd.u.expect("left vectors requested");
    let v = svd.v_t.expect("right vectors requested").adjoint();
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u = ComplexMatrix::from_fn(u.nrows(), order.len(), |r, k| u[(r, order[k])]);
    let v = ComplexMatrix::from_fn(v.nrows(), order.len(), |r, k| v[(r, order[k])]);
    (sv, u, v)
}

/// Orthonormal basis (columns) of the numerical kernel: right singular
/// vectors whose singular value is at most `rel_tol · σ_max`.
pub fn null_space(m: &ComplexMatrix, rel_tol: f64) -> ComplexMatrix {
    let n = m.ncols();
    // pad to at least square so that every right singular vector is produced
    let padded = if m.nrows() < n {
        let mut p = ComplexMatrix::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let (sv, _, v) = svd(&padded);
    let smax = sv.first().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..n).filter(|&k| sv[k] <= rel_tol * smax.max(f64::MIN_POSITIVE)).collect();
    ComplexMatrix::from_fn(n, keep.len(), |r, k| v[(r, keep[k])])
}

/// Unit right singular vector of the smallest singular value, with its
/// first significant component made real positive.
pub fn smallest_singular_vector(m: &ComplexMatrix) -> (f64, Vec<Complex64>) {
    let (sv, _, v) = svd(m);
    let k = sv.len() - 1;
    let mut vec: Vec<Complex64> = v.column(k).iter().copied().collect();
    normalize_phase(&mut vec);
    (sv[k], vec)
}

/// Unit norm, first component with modulus above `1e-8 · max` real positive.
pub fn normalize_phase(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(p) = v.iter().find(|z| z.norm() > 1e-8 * max) {
        let phase = p.conj() / p.norm();
        for z in v.iter_mut() {
            *z = *z * phase / norm;
        }
    }
}

/// Eigenvalues of a general complex matrix via the complex Schur form.
pub fn eigenvalues(m: &ComplexMatrix) -> Vec<Complex64> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![m[(0, 0)]];
    }
    let schur = m.clone().schur();
    let (_, t) = schur.unpack();
    (0..n).map(|i| t[(i, i)]).collect()
}

/// Hermitian eigen-decomposition (ascending eigenvalues, eigenvectors as columns).
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = ComplexMatrix::from_fn(m.nrows(), order.len(), |r, k| eig.eigenvectors[(r, order[k])]);
    (vals, vecs)
}

/// Condition number `σ_max / σ_min` (infinite when singular).
pub fn condition_number(m: &ComplexMatrix) -> f64 {
    let (sv, _, _) = svd(m);
    let min = *sv.last().unwrap_or(&0.0);
    if min == 0.0 {
        f64::INFINITY
    } else {
        sv[0] / min
    }
}

/// Row-major `[[re, im], ...]` nesting for JSON export.
pub fn to_json_rows(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

/// Packed lower triangle (row by row) of a Hermitian matrix.
pub fn to_packed_lower(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.nrows() * (m.nrows() + 1) / 2);
    for i in 0..m.nrows() {
        for j in 0..=i {
            out.push([m[(i, j)].re, m[(i, j)].im]);
        }
    }
    out
}
