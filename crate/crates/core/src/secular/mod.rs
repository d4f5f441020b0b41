//! Secular polynomials of the boundary-controlled chain and their Sturmian
//! inversions `r^2(E^2)` and `u(E)`.

mod tables;

use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactpoly::{
    complex_roots_exact, sort_roots, Poly, PolyError, RatFunc, RatPoly, Ring, Var, Q, VAR_E, VAR_R2, VAR_U,
    VAR_X,
};
use crate::lattice::ModelParams;

pub use tables::{reference_sturmian, ReferenceSturmian, REFERENCE_STURMIANS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SecularError {
    #[error("matrix dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("Dirichlet polynomial order must be at least -2, got {0}")]
    Order(i64),
    #[error("only one of u and r^2 may be symbolic")]
    BothSymbolic,
    #[error("radicand is negative at E = {e}")]
    EvaluationOutsideRealBranch { e: f64 },
    #[error("curve has a pole at E = {e}")]
    Pole { e: f64 },
    #[error("no reference data for N = {0}")]
    NoReferenceData(usize),
    #[error("unexpected polynomial shape: {0}")]
    Shape(&'static str),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `D_k`: determinant of `-E` on the diagonal and `-1` off it, with
/// `D_{-1} = 0` and `D_{-2} = -1`.
pub fn dirichlet_poly(k: i64) -> Result<RatPoly, SecularError> {
    if k < -2 {
        return Err(SecularError::Order(k));
    }
    if k == -2 {
        return Ok(RatPoly::from_i64s(&[-1], VAR_E));
    }
    let minus_e = RatPoly::from_i64s(&[0, -1], VAR_E);
    let (mut prev, mut cur) = (RatPoly::from_i64s(&[-1], VAR_E), RatPoly::zero_in(VAR_E));
    for _ in -1..k {
        let next = &(&minus_e * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// A parameter entering the secular polynomial: fixed rational or free symbol.
#[derive(Clone, Debug, PartialEq)]
pub enum Param {
    Value(Q),
    Symbol,
}

/// `det(E - H)` of the shifted model as a polynomial in `E` whose coefficients
/// are polynomials in the one symbolic parameter (if any).
#[derive(Clone, Debug, PartialEq)]
pub struct SecularPoly {
    pub n: usize,
    poly: Poly<RatPoly>,
    symbol: Option<Var>,
}

fn lift(p: &RatPoly) -> Poly<RatPoly> {
    p.map_coeffs(|c| RatPoly::untagged(vec![c.clone()]))
}

pub fn secular_poly(n: usize, u: Param, r2: Param) -> Result<SecularPoly, SecularError> {
    if n < 2 {
        return Err(SecularError::Dimension(n));
    }
    let symbol = match (&u, &r2) {
        (Param::Symbol, Param::Symbol) => return Err(SecularError::BothSymbolic),
        (Param::Symbol, _) => Some(VAR_U),
        (_, Param::Symbol) => Some(VAR_R2),
        _ => None,
    };
    let inner = |p: &Param, var: Var| match p {
        Param::Value(v) => RatPoly::untagged(vec![v.clone()]),
        Param::Symbol => RatPoly::identity(var),
    };
    let u = Poly::constant(inner(&u, VAR_U), VAR_E);
    let r2 = Poly::constant(inner(&r2, VAR_R2), VAR_E);
    let e = Poly::<RatPoly>::identity(VAR_E);
    let d = |k: i64| dirichlet_poly(k).map(|p| lift(&p));
    let w = &u - &e;
    let one = Poly::<RatPoly>::one();
    let two = Poly::<RatPoly>::from_i64(2);
    let corner = &(&(&w * &w) + &one) - &r2;
    let n_i = n as i64;
    let det = &(&(&corner * &d(n_i - 2)?) - &(&(&two * &w) * &d(n_i - 3)?)) + &d(n_i - 4)?;
    let poly = if n % 2 == 1 { -det } else { det };
    Ok(SecularPoly { n, poly, symbol })
}

impl SecularPoly {
    pub fn bivariate(&self) -> &Poly<RatPoly> {
        &self.poly
    }

    pub fn symbol(&self) -> Option<&Var> {
        self.symbol.as_ref()
    }

    /// Polynomial in `E` after fixing the symbol (ignored when there is none).
    pub fn at(&self, value: &Q) -> RatPoly {
        self.poly.map_coeffs(|c| c.eval_q(value)).with_var(VAR_E)
    }

    /// Polynomial in `E` when no symbol is present.
    pub fn numeric(&self) -> Option<RatPoly> {
        match self.symbol {
            None => Some(self.at(&Q::zero())),
            Some(_) => None,
        }
    }

    /// Floating coefficient table `c[k][j]` of `E^k s^j`.
    pub fn f64_table(&self) -> Vec<Vec<f64>> {
        self.poly.coeffs().iter().map(|c| c.to_f64_coeffs()).collect()
    }
}

impl fmt::Display for SecularPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.poly.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let c = c.clone();
            let c = match &self.symbol {
                Some(s) => c.with_var(s.clone()),
                None => c,
            };
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*E")?,
                _ => write!(f, "({c})*E^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for SecularPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SecularPoly", 4)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("variable", "E")?;
        match &self.symbol {
            None => st.serialize_field("coefficients", &self.at(&Q::zero()))?,
            Some(_) => st.serialize_field("coefficients", &self.poly.coeffs())?,
        }
        st.serialize_field("symbol", &self.symbol.as_ref().map(|v| v.name().to_string()))?;
        st.end()
    }
}

/// Eigenvalues via the exact secular polynomial, sorted by `(re, im)`.
pub fn spectrum(p: &ModelParams) -> Result<Vec<Complex64>, SecularError> {
    let (u, r2) = p.exact_shift_r2();
    let poly = secular_poly(p.n, Param::Value(u), Param::Value(r2))?.numeric().expect("numeric");
    let offset = p.convention.energy_offset();
    let mut roots: Vec<Complex64> = complex_roots_exact(&poly)?.into_iter().map(|z| z + offset).collect();
    sort_roots(&mut roots);
    Ok(roots)
}

/// `r^2` as a rational function of `x = E^2` on the `u = 0` slice.
#[derive(Clone, Debug, PartialEq)]
pub struct SturmianR2 {
    pub n: usize,
    pub curve: RatFunc,
}

impl SturmianR2 {
    pub fn eval(&self, e: f64) -> Result<f64, SecularError> {
        self.curve.eval_f64(e * e).ok_or(SecularError::Pole { e })
    }

    /// The curve as a rational function of `E`.
    pub fn in_e(&self) -> RatFunc {
        self.curve.substitute_square(VAR_E)
    }
}

impl Serialize for SturmianR2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SturmianR2", 5)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("kind", "r2_of_E2")?;
        st.serialize_field("variable", "x")?;
        st.serialize_field("numerator", self.curve.numerator())?;
        st.serialize_field("denominator", self.curve.denominator())?;
        st.end()
    }
}

pub fn sturmian_r2(n: usize) -> Result<SturmianR2, SecularError> {
    let sp = secular_poly(n, Param::Value(Q::zero()), Param::Symbol)?;
    let coeffs = sp.bivariate().coeffs();
    if coeffs.iter().any(|c| c.degree().unwrap_or(0) > 1) {
        return Err(SecularError::Shape("secular polynomial is not linear in r^2"));
    }
    let mut a = RatPoly::new(coeffs.iter().map(|c| c.coeff(0)).collect(), VAR_E);
    let mut b = RatPoly::new(coeffs.iter().map(|c| c.coeff(1)).collect(), VAR_E);
    if n % 2 == 1 {
        let e = RatPoly::identity(VAR_E);
        a = a.exact_quotient(&e).ok_or(SecularError::Shape("E does not divide the odd-N polynomial"))?;
        b = b.exact_quotient(&e).ok_or(SecularError::Shape("E does not divide the odd-N polynomial"))?;
    }
    let a = a.even_part_in_square(VAR_X).ok_or(SecularError::Shape("not even in E"))?;
    let b = b.even_part_in_square(VAR_X).ok_or(SecularError::Shape("not even in E"))?;
    Ok(SturmianR2 { n, curve: RatFunc::new(-a, b)? })
}

/// Exact comparison with the reference table.
pub fn check_table(n: usize) -> Result<bool, SecularError> {
    let reference = reference_sturmian(n).ok_or(SecularError::NoReferenceData(n))?;
    Ok(sturmian_r2(n)?.curve == reference)
}

/// Checks the factorized denominators and nested-fraction forms available
/// for `n` against the canonical `r^2(E^2)`.
pub fn verify_rearrangement(n: usize) -> Result<bool, SecularError> {
    let forms = tables::rearranged_forms(n)?;
    let factorization = tables::denominator_factorization(n);
    if forms.is_empty() && factorization.is_none() {
        return Err(SecularError::NoReferenceData(n));
    }
    let curve = sturmian_r2(n)?;
    let mut ok = forms.iter().all(|f| *f == curve.curve);
    if let Some((expanded, factors)) = factorization {
        let product = factors.iter().fold(RatPoly::from_i64s(&[1], VAR_E), |acc, f| &acc * f);
        ok &= product == expanded;
        ok &= curve.in_e().denominator().monic() == expanded.monic();
    }
    Ok(ok)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// `u(E) = rational_part(E) ± sqrt(radicand(E)) / denominator(E)` on the
/// `r = 0` slice.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SturmianU {
    pub n: usize,
    pub branch: Branch,
    pub rational_part: RatFunc,
    pub radicand: RatPoly,
    pub denominator: RatPoly,
}

impl SturmianU {
    pub fn eval(&self, e: f64) -> Result<f64, SecularError> {
        let rad = self.radicand.eval_f64(e);
        if rad < 0.0 {
            return Err(SecularError::EvaluationOutsideRealBranch { e });
        }
        let den = self.denominator.eval_f64(e);
        let rational = self.rational_part.eval_f64(e);
        match rational {
            Some(r) if den != 0.0 => Ok(r + self.branch.sign() * rad.sqrt() / den),
            _ => Err(SecularError::Pole { e }),
        }
    }
}

pub fn sturmian_u(n: usize, branch: Branch) -> Result<SturmianU, SecularError> {
    if n < 2 {
        return Err(SecularError::Dimension(n));
    }
    let n = n as i64;
    let (d2, d3, d4) = (dirichlet_poly(n - 2)?, dirichlet_poly(n - 3)?, dirichlet_poly(n - 4)?);
    let e = RatPoly::identity(VAR_E);
    let rational_part = RatFunc::new(&(&e * &d2) + &d3, d2.clone())?;
    let radicand = &(&d3 * &d3) - &(&d2 * &(&d2 + &d4));
    Ok(SturmianU { n: n as usize, branch, rational_part, radicand, denominator: d2 })
}

/// A Sturmian of either kind, for serialization.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SturmianCurve {
    R2(SturmianR2),
    U(SturmianU),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{q, qi};

    fn e(c: &[i64]) -> RatPoly {
        RatPoly::from_i64s(c, VAR_E)
    }

    #[test]
    fn dirichlet_examples() {
        assert_eq!(dirichlet_poly(-2).unwrap(), e(&[-1]));
        assert!(dirichlet_poly(-1).unwrap().is_zero());
        assert_eq!(dirichlet_poly(0).unwrap(), e(&[1]));
        assert_eq!(dirichlet_poly(1).unwrap(), e(&[0, -1]));
        assert_eq!(dirichlet_poly(2).unwrap(), e(&[-1, 0, 1]));
        assert_eq!(dirichlet_poly(4).unwrap(), e(&[1, 0, -3, 0, 1]));
        assert_eq!(dirichlet_poly(6).unwrap(), e(&[-1, 0, 6, 0, -5, 0, 1]));
        assert!(dirichlet_poly(-3).is_err());
    }

    #[test]
    fn dirichlet_zeros_are_cosines() {
        for k in 1..=10i64 {
            let d = dirichlet_poly(k).unwrap();
            for j in 1..=k {
                let x = 2.0 * (j as f64 * std::f64::consts::PI / (k as f64 + 1.0)).cos();
                assert!(d.eval_f64(x).abs() < 1e-12, "k={k} j={j}");
            }
        }
    }

    #[test]
    fn cubic_in_u() {
        let sp = secular_poly(3, Param::Symbol, Param::Value(qi(0))).unwrap();
        let u = |c: &[i64]| RatPoly::from_i64s(c, VAR_U);
        let expected = [u(&[0, 2]), u(&[-1, 0, 1]), u(&[0, -2]), u(&[1])];
        assert_eq!(sp.bivariate().coeffs(), &expected);
    }

    #[test]
    fn quartic_in_u() {
        let sp = secular_poly(4, Param::Symbol, Param::Value(qi(0))).unwrap();
        let u = |c: &[i64]| RatPoly::from_i64s(c, VAR_U);
        let expected = [u(&[0, 0, -1]), u(&[0, 4]), u(&[-2, 0, 1]), u(&[0, -2]), u(&[1])];
        assert_eq!(sp.bivariate().coeffs(), &expected);
    }

    #[test]
    fn two_by_two_in_r2() {
        let sp = secular_poly(2, Param::Value(qi(0)), Param::Symbol).unwrap();
        let r = |c: &[i64]| RatPoly::from_i64s(c, VAR_R2);
        assert_eq!(sp.bivariate().coeffs(), &[r(&[0, -1]), r(&[]), r(&[1])]);
    }

    #[test]
    fn all_reference_rows_match() {
        for r in REFERENCE_STURMIANS {
            assert!(check_table(r.n).unwrap(), "N={}", r.n);
        }
        assert_eq!(check_table(10), Err(SecularError::NoReferenceData(10)));
    }

    #[test]
    fn rearrangements_hold() {
        for n in [4, 5, 6, 8, 9] {
            assert!(verify_rearrangement(n).unwrap(), "N={n}");
        }
        assert!(verify_rearrangement(7).is_err());
    }

    #[test]
    fn three_site_curve_at_the_maximum() {
        let s = sturmian_u(3, Branch::Minus).unwrap();
        let u = s.eval(0.7861513775).unwrap();
        assert!((u - 0.3002831061).abs() < 1e-9);
        assert!(matches!(s.eval(1.5), Err(SecularError::EvaluationOutsideRealBranch { .. })));
    }

    #[test]
    fn four_site_curve_near_origin() {
        for branch in [Branch::Plus, Branch::Minus] {
            let s = sturmian_u(4, branch).unwrap();
            assert!(s.eval(1e-6).unwrap().abs() < 1e-5);
        }
        assert_eq!(sturmian_u(4, Branch::Plus).unwrap().radicand, e(&[0, 0, 2, 0, -1]));
    }

    #[test]
    fn five_site_closed_form() {
        let s = sturmian_u(5, Branch::Plus).unwrap();
        let rp = RatFunc::new(e(&[1, 0, -3, 0, 1]), e(&[0, -2, 0, 1])).unwrap();
        assert_eq!(s.rational_part, rp);
        assert_eq!(s.radicand, e(&[1, 0, -4, 0, 4, 0, -1]));
        // the printed formula has -sqrt(.)/(E^3 - 2E) = +sqrt(.)/D_3
        assert_eq!(s.denominator, e(&[0, 2, 0, -1]));
    }

    #[test]
    fn spectrum_examples() {
        let p = ModelParams::with_shift(2, 0.0, 1.0).unwrap();
        let s = spectrum(&p).unwrap();
        assert!((s[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((s[1] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let p = ModelParams::with_shift(3, 0.0, 0.0).unwrap();
        let s = spectrum(&p).unwrap();
        for (a, b) in s.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((a - Complex64::new(b, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn symbolic_and_numeric_agree() {
        let sym = secular_poly(5, Param::Symbol, Param::Value(q(1, 4))).unwrap();
        let num = secular_poly(5, Param::Value(q(2, 3)), Param::Value(q(1, 4))).unwrap();
        assert_eq!(sym.at(&q(2, 3)), num.numeric().unwrap());
        assert!(secular_poly(3, Param::Symbol, Param::Symbol).is_err());
    }
}
