//! Exceptional points as repeated roots of the secular polynomial in `E`,
//! located over the shift `u` and certified by explicit Jordan chains.

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{
    complex_roots_exact, discriminant, isolate_real_roots, q_from_f64, q_to_f64, PolyError, RatPoly, RootBox,
    RootLocation, Q, VAR_U,
};
use crate::lattice::{build_hamiltonian, LatticeError, ModelParams};
use crate::linalg::{self, c, ComplexMatrix};
use crate::secular::{secular_poly, spectrum, Param, SecularError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EpError {
    #[error("matrix dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("N = {n}: the discriminant vanishes identically (EP line E = u)")]
    EpLine { n: usize },
    #[error("no repeated eigenvalue found at the discriminant root u = {u}")]
    NoRepeatedRoot { u: f64 },
    #[error("eigenvalue is not defective (algebraic {algebraic}, geometric {geometric})")]
    Diagonalizable { algebraic: usize, geometric: usize },
    #[error("algebraic multiplicity {algebraic} exceeds 2")]
    HigherOrderEp { algebraic: usize },
    #[error("{re} + {im}i is not an eigenvalue")]
    NotAnEigenvalue { re: f64, im: f64 },
    #[error("matrix is not square")]
    NotSquare,
    #[error("|Im E| = {im} is too close to the reality tolerance")]
    BorderlineAmbiguity { im: f64 },
    #[error("tolerance must be positive and finite")]
    BadTolerance,
    #[error(transparent)]
    Secular(#[from] SecularError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscriminantProfile {
    pub n: usize,
    #[serde(serialize_with = "ser_q")]
    pub r2: Q,
    pub disc_u: RatPoly,
    pub identically_zero: bool,
    pub real_roots: Vec<RootBox>,
}

fn ser_q<S: serde::Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&crate::exactpoly::q_to_string(v))
}

/// Root boxes are refined at least this far so that their midpoints are the
/// best available doubles.
const INTERNAL_WIDTH: f64 = 1e-18;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpOptions {
    /// Requested root-box width.
    pub precision: f64,
    /// Relative residual `|P| / Σ|c_k||E|^k` below which a stationary point of
    /// `P` counts as a repeated root.
    pub repeated_tol: f64,
}

impl Default for EpOptions {
    fn default() -> Self {
        EpOptions { precision: crate::exactpoly::DEFAULT_ROOT_TOL, repeated_tol: 1e-8 }
    }
}

/// Discriminant in `E` of the `r = 0` secular polynomial, as a polynomial in `u`.
pub fn discriminant_in_e(n: usize) -> Result<DiscriminantProfile, EpError> {
    discriminant_in_e_at(n, &Q::zero(), &EpOptions::default())
}

pub fn discriminant_in_e_at(n: usize, r2: &Q, opts: &EpOptions) -> Result<DiscriminantProfile, EpError> {
    if n < 2 {
        return Err(EpError::Dimension(n));
    }
    check_tol(opts.precision)?;
    let sp = secular_poly(n, Param::Symbol, Param::Value(r2.clone()))?;
    let disc = discriminant(sp.bivariate())?.with_var(VAR_U);
    if disc.is_zero() {
        return Ok(DiscriminantProfile { n, r2: r2.clone(), disc_u: disc, identically_zero: true, real_roots: Vec::new() });
    }
    let real_roots = isolate_real_roots(&disc, opts.precision.min(INTERNAL_WIDTH))?;
    Ok(DiscriminantProfile { n, r2: r2.clone(), disc_u: disc, identically_zero: false, real_roots })
}

fn check_tol(t: f64) -> Result<(), EpError> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(EpError::BadTolerance)
    }
}

/// Transition matrix and Jordan form with `H Q = Q J`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanData {
    pub q: ComplexMatrix,
    pub j: ComplexMatrix,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
    /// `‖HQ - QJ‖_F`.
    pub residual: f64,
    /// `‖HQ - QJ‖_F / ‖H‖_F`.
    pub relative_residual: f64,
    /// `σ_max(Q) / σ_min(Q)`.
    pub condition: f64,
}

pub fn jordan_chain(h: &ComplexMatrix, e_star: Complex64) -> Result<JordanData, EpError> {
    let n = h.nrows();
    if n != h.ncols() || n == 0 {
        return Err(EpError::NotSquare);
    }
    let h_norm = linalg::frobenius(h);
    let radius = 1e-7 * h_norm.max(1.0);
    let eig = linalg::eigenvalues(h);
    let (cluster, mut others): (Vec<Complex64>, Vec<Complex64>) =
        eig.iter().partition(|l| (**l - e_star).norm() <= radius);
    let algebraic = cluster.len();
    if algebraic == 0 {
        return Err(EpError::NotAnEigenvalue { re: e_star.re, im: e_star.im });
    }
    let a = h - ComplexMatrix::identity(n, n) * e_star;
    let (sv, u, v) = linalg::svd(&a);
    let rank_tol = 1e-8 * sv[0].max(1.0);
    let geometric = sv.iter().filter(|s| **s <= rank_tol).count().max(1);
    if algebraic > 2 {
        return Err(EpError::HigherOrderEp { algebraic });
    }
    if algebraic == geometric {
        return Err(EpError::Diagonalizable { algebraic, geometric });
    }

    let mut v1: Vec<Complex64> = v.column(n - 1).iter().copied().collect();
    linalg::normalize_phase(&mut v1);
    // minimum-norm solution of A v2 = v1, orthogonal to ker A
    let mut v2 = vec![c(0.0, 0.0); n];
    for k in 0..n {
        if sv[k] <= rank_tol {
            continue;
        }
        let proj: Complex64 = (0..n).map(|i| u[(i, k)].conj() * v1[i]).sum();
        for i in 0..n {
            v2[i] += v[(i, k)] * proj / sv[k];
        }
    }

    others.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let mut q = ComplexMatrix::zeros(n, n);
    let mut j = ComplexMatrix::zeros(n, n);
    for (k, lambda) in others.iter().enumerate() {
        let (_, vec) = linalg::smallest_singular_vector(&(h - ComplexMatrix::identity(n, n) * *lambda));
        for i in 0..n {
            q[(i, k)] = vec[i];
        }
        j[(k, k)] = *lambda;
    }
    let b = n - 2;
    for i in 0..n {
        q[(i, b)] = v1[i];
        q[(i, b + 1)] = v2[i];
    }
    j[(b, b)] = e_star;
    j[(b + 1, b + 1)] = e_star;
    j[(b, b + 1)] = c(1.0, 0.0);

    let residual = linalg::frobenius(&(h * &q - &q * &j));
    Ok(JordanData {
        condition: linalg::condition_number(&q),
        q,
        j,
        algebraic_multiplicity: algebraic,
        geometric_multiplicity: geometric,
        residual,
        relative_residual: residual / h_norm.max(f64::MIN_POSITIVE),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpCertificate {
    pub n: usize,
    pub u_star: RootBox,
    pub e_star: RootBox,
    pub jordan: JordanData,
    /// `|P(u*, E*)|` relative to `Σ|c_k||E*|^k`.
    pub p_residual: f64,
    /// `|∂P/∂E(u*, E*)|`, same scaling.
    pub dp_residual: f64,
    /// `∂P/∂E` at the rational midpoint of the `u` box has exactly opposite
    /// signs (or an exact zero) at the ends of the `E` box.
    pub sign_change_certified: bool,
}

impl EpCertificate {
    pub fn u(&self) -> f64 {
        self.u_star.value()
    }

    pub fn e(&self) -> Complex64 {
        self.e_star.refined
    }

    pub fn algebraic_multiplicity(&self) -> usize {
        self.jordan.algebraic_multiplicity
    }

    pub fn geometric_multiplicity(&self) -> usize {
        self.jordan.geometric_multiplicity
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "u_star": self.u(),
            "u_box": self.u_star,
            "e_star": [self.e().re, self.e().im],
            "e_box": self.e_star,
            "alg_mult": self.algebraic_multiplicity(),
            "geo_mult": self.geometric_multiplicity(),
            "residual": self.jordan.residual,
            "relative_residual": self.jordan.relative_residual,
            "condition": self.jordan.condition,
            "p_residual": self.p_residual,
            "dp_residual": self.dp_residual,
            "sign_change_certified": self.sign_change_certified,
            "jordan": {
                "q": linalg::to_json_rows(&self.jordan.q),
                "j": linalg::to_json_rows(&self.jordan.j),
            },
        })
    }
}

impl Serialize for EpCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

fn scaled(p: &RatPoly, e: Complex64) -> (f64, f64, f64) {
    let coeffs = p.to_f64_coeffs();
    let scale: f64 = coeffs.iter().enumerate().map(|(k, c)| c.abs() * e.norm().powi(k as i32)).sum();
    let dp = p.derivative();
    let val = p.eval_complex(e).norm();
    let dval = dp.eval_complex(e).norm();
    let scale = scale.max(f64::MIN_POSITIVE);
    (val / scale, dval / scale, scale)
}

/// Newton on `P_E(u, ·)` starting from a good guess.
fn polish_stationary(p: &RatPoly, e: Complex64) -> Complex64 {
    let d1 = p.derivative();
    let d2 = d1.derivative();
    let mut e = e;
    for _ in 0..8 {
        let f = d1.eval_complex(e);
        let g = d2.eval_complex(e);
        if g.norm() == 0.0 {
            break;
        }
        let step = f / g;
        let next = e - step;
        if d1.eval_complex(next).norm() >= f.norm() {
            break;
        }
        e = next;
    }
    e
}

fn point_box(v: Q) -> RootLocation {
    RootLocation::Real { lo: v.clone(), hi: v }
}

/// Repeated roots of `P(u, ·)` for `u` in the given box.
fn repeated_roots(p_mid: &RatPoly, u_box: &RootBox, opts: &EpOptions) -> Result<Vec<RootBox>, EpError> {
    let (lo, hi) = u_box.real_interval().expect("real discriminant root");
    let dp = p_mid.derivative();
    if lo == hi {
        // exact rational root: the repeated roots are exactly the roots of the gcd
        let g = p_mid.gcd(&dp)?;
        if g.degree().unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        let g = g.squarefree_part()?;
        let real = isolate_real_roots(&g, opts.precision.min(INTERNAL_WIDTH))?;
        let mut out: Vec<RootBox> = real.into_iter().map(|b| RootBox { multiplicity: 2, ..b }).collect();
        if out.len() < g.degree().unwrap() {
            for z in complex_roots_exact(&g)? {
                if z.im != 0.0 {
                    out.push(RootBox {
                        location: RootLocation::Complex { center: z, radius: 1e-12 * z.norm().max(1.0) },
                        multiplicity: 2,
                        refined: z,
                    });
                }
            }
        }
        return Ok(out);
    }

    let mut out = Vec::new();
    for b in isolate_real_roots(&dp, opts.precision.min(INTERNAL_WIDTH))? {
        let (rel, _, _) = scaled(p_mid, b.refined);
        if rel <= opts.repeated_tol {
            out.push(RootBox { multiplicity: 2, ..b });
        }
    }
    if out.is_empty() {
        for z in complex_roots_exact(&dp)? {
            if z.im == 0.0 {
                continue;
            }
            let z = polish_stationary(p_mid, z);
            let (rel, _, _) = scaled(p_mid, z);
            if rel <= opts.repeated_tol {
                let radius = 1e-12 * z.norm().max(1.0);
                out.push(RootBox { location: RootLocation::Complex { center: z, radius }, multiplicity: 2, refined: z });
            }
        }
    }
    Ok(out)
}

fn signs_bracket(p: &RatPoly, e_box: &RootBox) -> bool {
    match e_box.real_interval() {
        Some((lo, hi)) => {
            let a = p.eval_q(lo);
            let b = p.eval_q(hi);
            a.is_zero() || b.is_zero() || (a > Q::zero()) != (b > Q::zero())
        }
        None => false,
    }
}

/// All real-`u` EPs of the `r = 0` slice, sorted by `u*`.
pub fn locate_eps(n: usize) -> Result<Vec<EpCertificate>, EpError> {
    locate_eps_with(n, &EpOptions::default())
}

pub fn locate_eps_with(n: usize, opts: &EpOptions) -> Result<Vec<EpCertificate>, EpError> {
    locate_eps_at(n, &Q::zero(), opts)
}

/// EP search on an arbitrary `r^2` slice. Only `r^2 = 0` is backed by
/// reference data; other slices are experimental.
pub fn locate_eps_at(n: usize, r2: &Q, opts: &EpOptions) -> Result<Vec<EpCertificate>, EpError> {
    let profile = discriminant_in_e_at(n, r2, opts)?;
    if profile.identically_zero {
        return Err(EpError::EpLine { n });
    }
    let sp = secular_poly(n, Param::Symbol, Param::Value(r2.clone()))?;
    let r = q_to_f64(r2).max(0.0).sqrt();
    let mut out = Vec::new();
    for u_box in &profile.real_roots {
        let u_mid = u_box.midpoint().expect("real box");
        let u_f = q_to_f64(&u_mid);
        let p_mid = sp.at(&u_mid);
        let roots = repeated_roots(&p_mid, u_box, opts)?;
        if roots.is_empty() {
            return Err(EpError::NoRepeatedRoot { u: u_f });
        }
        let p_f = sp.at(&q_from_f64(u_f).expect("finite"));
        let h = build_hamiltonian(&ModelParams::with_shift(n, u_f, r)?);
        for e_box in roots {
            let e = polish_stationary(&p_f, e_box.refined);
            let (p_res, dp_res, _) = scaled(&p_f, e);
            let jordan = jordan_chain(&h, e)?;
            let dp = p_mid.derivative();
            let sign_change_certified = signs_bracket(&dp, &e_box);
            out.push(EpCertificate {
                n,
                u_star: u_box.clone(),
                e_star: RootBox { refined: e, ..e_box },
                jordan,
                p_residual: p_res,
                dp_residual: dp_res,
                sign_change_certified,
            });
        }
    }
    out.sort_by(|a, b| a.u().total_cmp(&b.u()).then(a.e().re.total_cmp(&b.e().re)).then(a.e().im.total_cmp(&b.e().im)));
    Ok(out)
}

/// Certifies a given `(u, E)` on the `r = 0` slice, e.g. the EP line of `N = 2`.
pub fn certify(n: usize, u: f64, e: Complex64) -> Result<EpCertificate, EpError> {
    let h = build_hamiltonian(&ModelParams::with_shift(n, u, 0.0)?);
    let jordan = jordan_chain(&h, e)?;
    let uq = q_from_f64(u).ok_or(EpError::BadTolerance)?;
    let p = secular_poly(n, Param::Value(uq.clone()), Param::Value(Q::zero()))?.numeric().expect("numeric");
    let (p_res, dp_res, _) = scaled(&p, e);
    let (e_location, exact_zero) = if e.im == 0.0 {
        let eq = q_from_f64(e.re).ok_or(EpError::BadTolerance)?;
        let zero = p.eval_q(&eq).is_zero() && p.derivative().eval_q(&eq).is_zero();
        (point_box(eq), zero)
    } else {
        (RootLocation::Complex { center: e, radius: 0.0 }, false)
    };
    Ok(EpCertificate {
        n,
        u_star: RootBox { location: point_box(uq), multiplicity: 1, refined: c(u, 0.0) },
        e_star: RootBox { location: e_location, multiplicity: jordan.algebraic_multiplicity, refined: e },
        jordan,
        p_residual: p_res,
        dp_residual: dp_res,
        sign_change_certified: exact_zero,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RealityCount {
    pub n_real: usize,
    pub n_complex_pairs: usize,
}

/// Counts real eigenvalues (`|Im E| <= tol`) on the `r = 0` slice.
pub fn reality_count(n: usize, u: f64, tol: f64) -> Result<RealityCount, EpError> {
    reality_count_for(&ModelParams::with_shift(n, u, 0.0)?, tol)
}

pub fn reality_count_for(p: &ModelParams, tol: f64) -> Result<RealityCount, EpError> {
    check_tol(tol)?;
    let spec = spectrum(p)?;
    if let Some(z) = spec.iter().find(|z| z.im != 0.0 && z.im.abs() <= 10.0 * tol) {
        return Err(EpError::BorderlineAmbiguity { im: z.im.abs() });
    }
    let n_real = spec.iter().filter(|z| z.im.abs() <= tol).count();
    Ok(RealityCount { n_real, n_complex_pairs: (spec.len() - n_real) / 2 })
}

/// `Σ E_k = 2u` on the `r = 0` slice, so at a double root `E*` of the three-site
/// model the remaining eigenvalue is `2u - 2E*`.
pub fn three_site_simple_eigenvalue(u: f64, e_star: f64) -> f64 {
    2.0 * u - 2.0 * e_star
}

/// Real discriminant roots as plain doubles.
pub fn discriminant_roots(n: usize) -> Result<Vec<f64>, EpError> {
    Ok(discriminant_in_e(n)?.real_roots.iter().map(|b| b.value()).collect())
}
