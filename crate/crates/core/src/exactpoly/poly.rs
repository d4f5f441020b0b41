use std::borrow::Cow;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ring::{parse_q, q_to_f64, q_to_string, Ring, Q};
use super::zpoly::ZPoly;
use super::PolyError;

/// Symbolic label of a polynomial's indeterminate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Var(Cow<'static, str>);

impl Var {
    pub const fn new(name: &'static str) -> Self {
        Var(Cow::Borrowed(name))
    }

    pub fn owned(name: impl Into<String>) -> Self {
        Var(Cow::Owned(name.into()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub const VAR_E: Var = Var::new("E");
pub const VAR_U: Var = Var::new("u");
pub const VAR_R2: Var = Var::new("r2");
pub const VAR_X: Var = Var::new("x");

/// Dense univariate polynomial, lowest degree first.
///
/// The variable tag is optional: untagged polynomials (constants produced by
/// [`Ring::zero`]/[`Ring::one`], or deserialized coefficient arrays) combine
/// with anything; two differing tags are a hard error.
#[derive(Clone)]
pub struct Poly<R: Ring> {
    coeffs: Vec<R>,
    var: Option<Var>,
}

/// Exact univariate polynomial over the rationals.
pub type RatPoly = Poly<Q>;

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>, var: Var) -> Self {
        trim(&mut coeffs);
        Poly { coeffs, var: Some(var) }
    }

    pub fn untagged(mut coeffs: Vec<R>) -> Self {
        trim(&mut coeffs);
        Poly { coeffs, var: None }
    }

    pub fn zero_in(var: Var) -> Self {
        Poly { coeffs: Vec::new(), var: Some(var) }
    }

    pub fn constant(c: R, var: Var) -> Self {
        Self::new(vec![c], var)
    }

    /// The polynomial `x` in the given variable.
    pub fn identity(var: Var) -> Self {
        Self::new(vec![R::zero(), R::one()], var)
    }

    pub fn monomial(c: R, k: usize, var: Var) -> Self {
        let mut coeffs = vec![R::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs, var)
    }

    pub fn var(&self) -> Option<&Var> {
        self.var.as_ref()
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = Some(var);
        self
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    fn joint_var(&self, other: &Self) -> Result<Option<Var>, PolyError> {
        match (&self.var, &other.var) {
            (Some(a), Some(b)) if a != b => {
                // constants carry no real dependence on their tag
                if self.is_constant() {
                    Ok(Some(b.clone()))
                } else if other.is_constant() {
                    Ok(Some(a.clone()))
                } else {
                    Err(PolyError::VariableMismatch { left: a.clone(), right: b.clone() })
                }
            }
            (Some(a), _) => Ok(Some(a.clone())),
            (None, b) => Ok(b.clone()),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        let var = self.joint_var(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a.add_ref(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        trim(&mut out);
        Ok(Poly { coeffs: out, var })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        let var = self.joint_var(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly { coeffs: Vec::new(), var });
        }
        let mut out = vec![R::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        trim(&mut out);
        Ok(Poly { coeffs: out, var })
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut coeffs: Vec<R> = self.coeffs.iter().map(|a| a.mul_ref(c)).collect();
        trim(&mut coeffs);
        Poly { coeffs, var: self.var.clone() }
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![R::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs, var: self.var.clone() }
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        let mut coeffs: Vec<S> = self.coeffs.iter().map(f).collect();
        trim(&mut coeffs);
        Poly { coeffs, var: self.var.clone() }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &R) -> R {
        self.coeffs.iter().rev().fold(R::zero(), |acc, c| acc.mul_ref(x).add_ref(c))
    }

    pub fn derivative(&self) -> Self {
        let coeffs: Vec<R> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul_ref(&R::from_i64(k as i64)))
            .collect();
        Poly::from_parts(coeffs, self.var.clone())
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { c.neg_ref() } else { c.clone() })
            .collect();
        Poly::from_parts(coeffs, self.var.clone())
    }

    /// `p(x^2)`, optionally renaming the variable.
    pub fn substitute_square(&self, var: Var) -> Self {
        let mut coeffs = vec![R::zero(); 2 * self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[2 * k] = c.clone();
        }
        Poly::new(coeffs, var)
    }

    /// Inverse of [`Poly::substitute_square`]: `Some(q)` with `q(x^2) = p(x)`
    /// when `p` is even.
    pub fn even_part_in_square(&self, var: Var) -> Option<Self> {
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Poly::new(self.coeffs.iter().step_by(2).cloned().collect(), var))
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Result<Self, PolyError> {
        let db = b.degree().ok_or(PolyError::DivisionByZero)?;
        let var = self.joint_var(b)?;
        let mut r = self.coeffs.clone();
        let Some(da) = self.degree() else {
            return Ok(Poly { coeffs: r, var });
        };
        if da < db {
            return Ok(Poly { coeffs: r, var });
        }
        let lb = b.lc();
        let mut e = da - db + 1;
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            let shift = dr - db;
            for c in r.iter_mut() {
                *c = c.mul_ref(&lb);
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[shift + j] = r[shift + j].sub_ref(&lr.mul_ref(bc));
            }
            trim(&mut r);
            e -= 1;
        }
        let factor = lb.pow(e as u32);
        let mut out: Vec<R> = r.into_iter().map(|c| c.mul_ref(&factor)).collect();
        trim(&mut out);
        Ok(Poly { coeffs: out, var })
    }

    /// Exact quotient `self / d` when `d` divides `self` over `R`.
    pub fn exact_quotient(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        let var = self.joint_var(d).ok()?;
        let Some(dn) = self.degree() else {
            return Some(Poly { coeffs: Vec::new(), var });
        };
        if dn < dd {
            return None;
        }
        let mut r = self.coeffs.clone();
        let ld = d.lc();
        let mut q = vec![R::zero(); dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let c = r[k + dd].exact_div(&ld)?;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].sub_ref(&c.mul_ref(dc));
            }
            q[k] = c;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Poly::from_parts(q, var))
    }

    pub(crate) fn from_parts(mut coeffs: Vec<R>, var: Option<Var>) -> Self {
        trim(&mut coeffs);
        Poly { coeffs, var }
    }
}

fn trim<R: Ring>(coeffs: &mut Vec<R>) {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
}

impl<R: Ring> PartialEq for Poly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.joint_var(other).is_ok()
    }
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var.as_ref().map(|v| v.name()).unwrap_or("_");
        write!(f, "Poly[{v}]{:?}", self.coeffs)
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new(), var: None }
    }
    fn one() -> Self {
        Poly { coeffs: vec![R::one()], var: None }
    }
    fn from_i64(v: i64) -> Self {
        Poly::from_parts(vec![R::from_i64(v)], None)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.checked_add(other).expect("polynomial variable mismatch")
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("polynomial variable mismatch")
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("polynomial variable mismatch")
    }
    fn neg_ref(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(Ring::neg_ref).collect(), var: self.var.clone() }
    }
    fn exact_div(&self, divisor: &Self) -> Option<Self> {
        self.exact_quotient(divisor)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<R: Ring> $tr<&Poly<R>> for &Poly<R> {
            type Output = Poly<R>;
            fn $m(self, rhs: &Poly<R>) -> Poly<R> {
                self.$checked(rhs).expect("polynomial variable mismatch")
            }
        }
        impl<R: Ring> $tr<Poly<R>> for Poly<R> {
            type Output = Poly<R>;
            fn $m(self, rhs: Poly<R>) -> Poly<R> {
                self.$checked(&rhs).expect("polynomial variable mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<R: Ring> Neg for &Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        self.neg_ref()
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        self.neg_ref()
    }
}

// ---------------------------------------------------------------------------
// Field operations over Q

impl RatPoly {
    pub fn from_i64s(coeffs: &[i64], var: Var) -> Self {
        Poly::new(coeffs.iter().map(|&c| Q::from_i64(c)).collect(), var)
    }

    /// Euclidean division; `a = q·b + r` with `deg r < deg b`.
    pub fn divmod(&self, b: &Self) -> Result<(Self, Self), PolyError> {
        let db = b.degree().ok_or(PolyError::DivisionByZero)?;
        let var = self.joint_var(b)?;
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((Poly { coeffs: Vec::new(), var: var.clone() }, Poly { coeffs: r, var }));
        }
        let inv = Q::from_i64(1) / b.lc();
        let mut q = vec![Q::from_i64(0); r.len() - db];
        for k in (0..r.len() - db).rev() {
            let c = &r[k + db] * &inv;
            if !Ring::is_zero(&c) {
                for (j, bc) in b.coeffs.iter().enumerate() {
                    r[k + j] = &r[k + j] - &c * bc;
                }
            }
            q[k] = c;
        }
        r.truncate(db);
        Ok((Poly::from_parts(q, var.clone()), Poly::from_parts(r, var)))
    }

    pub fn rem(&self, b: &Self) -> Result<Self, PolyError> {
        Ok(self.divmod(b)?.1)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = Q::from_i64(1) / self.lc();
        self.scale(&inv)
    }

    /// Positive multiple with coprime integer coefficients.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let g = self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&lcm / c.denom()))));
        self.scale(&Q::new(lcm, g))
    }

    /// Monic greatest common divisor; `gcd(0, 0)` is an error.
    pub fn gcd(&self, other: &Self) -> Result<Self, PolyError> {
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::GcdOfZeros);
        }
        let var = self.joint_var(other)?;
        let g = ZPoly::from_ratpoly(self).gcd(&ZPoly::from_ratpoly(other));
        Ok(g.to_ratpoly(var).monic())
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(ZPoly::from_ratpoly(self).squarefree_part().to_ratpoly(self.var.clone()).monic())
    }

    /// Yun's square-free factorization: `p = lc · Π f_i^i`; returns
    /// `(i, f_i)` for the non-constant monic `f_i`.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(usize, Self)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(ZPoly::from_ratpoly(self)
            .squarefree_decomposition()
            .into_iter()
            .map(|(i, f)| (i, f.to_ratpoly(self.var.clone()).monic()))
            .collect())
    }

    pub fn eval_q(&self, x: &Q) -> Q {
        self.eval(x)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(q_to_f64).collect()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + q_to_f64(c))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + q_to_f64(c))
    }

    /// Sum of absolute values of the coefficients.
    pub fn norm1(&self) -> Q {
        self.coeffs.iter().fold(Q::from_i64(0), |acc, c| acc + c.abs())
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let v = self.var.as_ref().map(|v| v.name()).unwrap_or("x");
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if Ring::is_zero(c) {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag == Q::from_i64(1);
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        if mag.is_integer() {
                            write!(f, "{mag}*")?;
                        } else {
                            write!(f, "({mag})*")?;
                        }
                    }
                    if k == 1 {
                        write!(f, "{v}")?;
                    } else {
                        write!(f, "{v}^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// JSON form: array of `"num/den"` strings, lowest degree first.
impl Serialize for RatPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(q_to_string))
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| parse_q(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::untagged(coeffs))
    }
}
