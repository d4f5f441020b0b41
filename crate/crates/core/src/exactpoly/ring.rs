use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational number.
pub type Q = BigRational;

/// Commutative ring with exact (checked) division.
///
/// Implemented for [`Q`] and, recursively, for polynomials over any `Ring`,
/// which is how bivariate polynomials (polynomials in `E` with coefficients
/// in `Q[u]`) are represented.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// `Some(q)` with `q * divisor == self`; `None` if the divisor is zero or
    /// does not divide `self`.
    fn exact_div(&self, divisor: &Self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
}

impl Ring for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Q::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if Zero::is_zero(divisor) {
            None
        } else {
            Some(self / divisor)
        }
    }
}

/// Exact rational value of a finite double (dyadic).
pub fn q_from_f64(v: f64) -> Option<Q> {
    Q::from_float(v)
}

/// Simplest rational that rounds to `v` (`0.35` gives `7/20`); the dyadic
/// value when no simpler one lies strictly inside the rounding interval.
pub fn q_from_f64_simplest(v: f64) -> Option<Q> {
    if !v.is_finite() {
        return None;
    }
    if v == 0.0 {
        return Some(Q::from_integer(BigInt::zero()));
    }
    if v < 0.0 {
        return q_from_f64_simplest(-v).map(|q| -q);
    }
    let exact = Q::from_float(v)?;
    let bits = v.to_bits();
    let (Some(prev), Some(next)) = (Q::from_float(f64::from_bits(bits - 1)), Q::from_float(f64::from_bits(bits + 1)))
    else {
        return Some(exact);
    };
    let two = Q::from_integer(BigInt::from(2));
    let lo = (&prev + &exact) / &two;
    let hi = (&exact + &next) / &two;
    let s = super::roots::simplest_rational_in(&lo, &hi);
    Some(if s == lo || s == hi { exact } else { s })
}

pub fn q_to_f64(v: &Q) -> f64 {
    use num_traits::ToPrimitive;
    match v.to_f64() {
        Some(x) if x.is_finite() => x,
        // num-rational gives up on very large numerators/denominators; scale by hand.
        _ => {
            let n = v.numer().bits() as i64;
            let d = v.denom().bits() as i64;
            let shift = n - d;
            let scaled = if shift > 0 {
                v / Q::from_integer(BigInt::one() << (shift as usize))
            } else {
                v * Q::from_integer(BigInt::one() << ((-shift) as usize))
            };
            scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
        }
    }
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"-0.25"` or `"1e-3"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(Q::from_integer(n));
    }
    // decimal with optional exponent, parsed exactly
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let scale = exp - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10);
    let mut v = Q::from_integer(digits);
    if scale >= 0 {
        v *= Q::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        v /= Q::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -v } else { v })
}

/// `"num/den"`, or just the numerator for integers.
pub fn q_to_string(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_q("3/6"), Some(q(1, 2)));
        assert_eq!(parse_q("-0.25"), Some(q(-1, 4)));
        assert_eq!(parse_q("1e-3"), Some(q(1, 1000)));
        assert_eq!(parse_q("2.5E2"), Some(qi(250)));
        assert_eq!(parse_q("7"), Some(qi(7)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_q("abc"), None);
    }

    #[test]
    fn huge_rationals_convert_to_f64() {
        let big = Q::new(BigInt::one() << 3000usize, (BigInt::one() << 3000usize) * 3);
        assert!((q_to_f64(&big) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn pow_by_squaring() {
        assert_eq!(q(2, 3).pow(5), q(32, 243));
        assert_eq!(q(2, 3).pow(0), qi(1));
    }
}
