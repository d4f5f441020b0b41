#![allow(dead_code)]

use std::collections::HashMap;

use epspect::exactpoly::{q, Q, RatFunc, RatPoly, Ring, VAR_E};
use epspect::linalg::ComplexMatrix;
use epspect::linalg;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// `a + b·t` with `a, b ∈ Q[E]` and `t² = delta`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quad {
    pub a: RatPoly,
    pub b: RatPoly,
}

impl Quad {
    fn zero() -> Self {
        Quad { a: RatPoly::zero_in(VAR_E), b: RatPoly::zero_in(VAR_E) }
    }

    fn scalar(a: RatPoly) -> Self {
        Quad { a, b: RatPoly::zero_in(VAR_E) }
    }

    fn add(&self, o: &Self) -> Self {
        Quad { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    fn sub(&self, o: &Self) -> Self {
        Quad { a: &self.a - &o.a, b: &self.b - &o.b }
    }

    fn mul(&self, o: &Self, delta: &Q) -> Self {
        let bb = (&self.b * &o.b).scale(delta);
        Quad { a: &(&self.a * &o.a) + &bb, b: &(&self.a * &o.b) + &(&self.b * &o.a) }
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

/// `det(E - H)` by Laplace expansion along rows, memoized on the set of
/// remaining columns. The corners of `H` are `u - t` and `u + t` with
/// `t² = r² - 1`, off-diagonals `-1`, interior diagonal zero.
pub fn cofactor_det(n: usize, u: &Q, r2: &Q) -> RatPoly {
    let delta = r2 - Q::from_i64(1);
    let e = RatPoly::identity(VAR_E);
    let konst = |c: Q| RatPoly::constant(c, VAR_E);
    let mut m: Vec<Vec<Quad>> = vec![vec![Quad::zero(); n]; n];
    for i in 0..n {
        m[i][i] = Quad::scalar(e.clone());
        if i + 1 < n {
            m[i][i + 1] = Quad::scalar(konst(Q::from_i64(1)));
            m[i + 1][i] = Quad::scalar(konst(Q::from_i64(1)));
        }
    }
    // E - (u - t) and E - (u + t)
    m[0][0] = Quad { a: &e - &konst(u.clone()), b: konst(Q::from_i64(1)) };
    m[n - 1][n - 1] = Quad { a: &e - &konst(u.clone()), b: konst(Q::from_i64(-1)) };

    fn minor(
        m: &[Vec<Quad>],
        row: usize,
        cols: u32,
        delta: &Q,
        memo: &mut HashMap<u32, Quad>,
    ) -> Quad {
        if row == m.len() {
            return Quad::scalar(RatPoly::constant(Q::from_i64(1), VAR_E));
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = Quad::zero();
        let mut sign_pos = true;
        for c in 0..m.len() {
            if cols & (1 << c) == 0 {
                continue;
            }
            if !m[row][c].is_zero() {
                let sub = minor(m, row + 1, cols & !(1 << c), delta, memo);
                let term = m[row][c].mul(&sub, delta);
                acc = if sign_pos { acc.add(&term) } else { acc.sub(&term) };
            }
            sign_pos = !sign_pos;
        }
        memo.insert(cols, acc.clone());
        acc
    }

    let det = minor(&m, 0, (1u32 << n) - 1, &delta, &mut HashMap::new());
    assert!(det.b.is_zero(), "determinant must not depend on the sign of t");
    det.a
}

/// Full `(N + 2)`-point discretization with the two Robin rows kept, then the
/// boundary values eliminated by a numerical Schur complement.
pub fn robin_oracle_matrix(n: usize, alpha: f64, beta: f64, h: f64) -> ComplexMatrix {
    let m = n + 2;
    let i = Complex64::new(0.0, 1.0);
    let mut a = DMatrix::<Complex64>::zeros(m, m);
    // ψ0 (α + iβ) h = i (ψ1 - ψ0)
    a[(0, 0)] = Complex64::new(alpha, beta) * h + i;
    a[(0, 1)] = -i;
    // ψ_{N+1} (α - iβ) h = i (ψ_{N+1} - ψ_N)
    a[(m - 1, m - 1)] = Complex64::new(alpha, -beta) * h - i;
    a[(m - 1, m - 2)] = i;
    for k in 1..=n {
        a[(k, k - 1)] = Complex64::new(-1.0, 0.0);
        a[(k, k)] = Complex64::new(2.0, 0.0);
        a[(k, k + 1)] = Complex64::new(-1.0, 0.0);
    }
    let interior: Vec<usize> = (1..=n).collect();
    let boundary = [0, m - 1];
    let pick = |rows: &[usize], cols: &[usize]| DMatrix::from_fn(rows.len(), cols.len(), |r, c| a[(rows[r], cols[c])]);
    let a_ii = pick(&interior, &interior);
    let a_ib = pick(&interior, &boundary);
    let a_bi = pick(&boundary, &interior);
    let a_bb = pick(&boundary, &boundary);
    let inv = a_bb.try_inverse().expect("boundary block invertible");
    a_ii - a_ib * inv * a_bi
}

/// Largest distance under an optimal-greedy matching of two spectra.
pub fn spectral_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

pub fn dense_spectrum(h: &ComplexMatrix) -> Vec<Complex64> {
    linalg::eigenvalues(h)
}

/// Rational with small numerator and denominator.
pub fn small_q(num: i64, den: i64) -> Q {
    q(num, den.max(1))
}

/// `Σ_k c_k(s) E^k` with `s` replaced by a rational function of `E`.
pub fn substitute_symbol(p: &epspect::exactpoly::Poly<RatPoly>, s: &RatFunc) -> RatFunc {
    let e = RatFunc::from_poly(RatPoly::identity(VAR_E));
    let zero = RatFunc::from_poly(RatPoly::zero_in(VAR_E));
    let one = RatFunc::from_poly(RatPoly::constant(Q::from_i64(1), VAR_E));
    let mut acc = zero.clone();
    let mut e_pow = one.clone();
    for c in p.coeffs() {
        let mut ck = zero.clone();
        let mut s_pow = one.clone();
        for cj in c.coeffs() {
            let term = s_pow.mul(&RatFunc::from_poly(RatPoly::constant(cj.clone(), VAR_E))).unwrap();
            ck = ck.add(&term).unwrap();
            s_pow = s_pow.mul(s).unwrap();
        }
        acc = acc.add(&ck.mul(&e_pow).unwrap()).unwrap();
        e_pow = e_pow.mul(&e).unwrap();
    }
    acc
}

pub fn frob(m: &ComplexMatrix) -> f64 {
    linalg::frobenius(m)
}

pub fn is_hermitian(m: &ComplexMatrix, tol: f64) -> bool {
    frob(&(m - m.adjoint())) <= tol * frob(m).max(1.0)
}
