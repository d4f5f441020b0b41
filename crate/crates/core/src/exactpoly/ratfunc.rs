use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly::{RatPoly, Var};
use super::ring::{Ring, Q};
use super::PolyError;

/// Reduced quotient of two rational polynomials: coprime, monic denominator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatFunc {
    numerator: RatPoly,
    denominator: RatPoly,
}

impl RatFunc {
    pub fn new(numerator: RatPoly, denominator: RatPoly) -> Result<Self, PolyError> {
        if denominator.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        let var = numerator.var().or(denominator.var()).cloned();
        let (mut n, mut d) = if numerator.is_zero() {
            (numerator.clone(), RatPoly::one())
        } else {
            let g = numerator.gcd(&denominator)?;
            (numerator.divmod(&g)?.0, denominator.divmod(&g)?.0)
        };
        let inv = Q::one() / d.lc();
        n = n.scale(&inv);
        d = d.scale(&inv);
        if let Some(v) = var {
            n = n.with_var(v.clone());
            d = d.with_var(v);
        }
        Ok(RatFunc { numerator: n, denominator: d })
    }

    pub fn from_poly(p: RatPoly) -> Self {
        let var = p.var().cloned();
        let mut d = RatPoly::one();
        if let Some(v) = var {
            d = d.with_var(v);
        }
        RatFunc { numerator: p, denominator: d }
    }

    pub fn numerator(&self) -> &RatPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &RatPoly {
        &self.denominator
    }

    pub fn var(&self) -> Option<&Var> {
        self.numerator.var()
    }

    pub fn add(&self, o: &Self) -> Result<Self, PolyError> {
        let n = self.numerator.checked_mul(&o.denominator)?.checked_add(&o.numerator.checked_mul(&self.denominator)?)?;
        RatFunc::new(n, self.denominator.checked_mul(&o.denominator)?)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, PolyError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc { numerator: -&self.numerator, denominator: self.denominator.clone() }
    }

    pub fn mul(&self, o: &Self) -> Result<Self, PolyError> {
        RatFunc::new(self.numerator.checked_mul(&o.numerator)?, self.denominator.checked_mul(&o.denominator)?)
    }

    pub fn div(&self, o: &Self) -> Result<Self, PolyError> {
        if o.numerator.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        RatFunc::new(self.numerator.checked_mul(&o.denominator)?, self.denominator.checked_mul(&o.numerator)?)
    }

    pub fn recip(&self) -> Result<Self, PolyError> {
        RatFunc::from_poly(RatPoly::one()).div(self)
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &Q) -> Option<Q> {
        let d = self.denominator.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.numerator.eval(x) / d)
        }
    }

    pub fn eval_f64(&self, x: f64) -> Option<f64> {
        let d = self.denominator.eval_f64(x);
        if d == 0.0 {
            None
        } else {
            Some(self.numerator.eval_f64(x) / d)
        }
    }

    /// `f(x^2)` as a function of the new variable.
    pub fn substitute_square(&self, var: Var) -> Self {
        RatFunc {
            numerator: self.numerator.substitute_square(var.clone()),
            denominator: self.denominator.substitute_square(var),
        }
    }

    /// Derivative numerator `n' d - n d'`; the derivative is that over `d^2`.
    pub fn derivative_numerator(&self) -> RatPoly {
        &(&self.numerator.derivative() * &self.denominator) - &(&self.numerator * &self.denominator.derivative())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_constant() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.denominator)
        }
    }
}
