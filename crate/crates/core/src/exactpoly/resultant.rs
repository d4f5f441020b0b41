//! Resultants and discriminants via the subresultant pseudo-remainder
//! sequence. Works over any [`Ring`] with exact division, so a polynomial in
//! `E` with coefficients in `Q[u]` yields a resultant in `Q[u]` without ever
//! leaving exact arithmetic.

use super::poly::Poly;
use super::ring::Ring;
use super::PolyError;

/// Resultant with the Sylvester-matrix sign convention:
/// `res(a, b) = lc(a)^deg(b) · Π b(α)` over the roots `α` of `a`.
pub fn resultant<R: Ring>(a: &Poly<R>, b: &Poly<R>) -> Result<R, PolyError> {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return Ok(R::zero());
    };
    if da == 0 {
        return Ok(a.lc().pow(db as u32));
    }
    if db == 0 {
        return Ok(b.lc().pow(da as u32));
    }

    let (mut a, mut b) = (a.clone(), b.clone());
    let mut sign_negative = false;
    if da < db {
        std::mem::swap(&mut a, &mut b);
        if da % 2 == 1 && db % 2 == 1 {
            sign_negative = true;
        }
    }

    let mut g = R::one();
    let mut h = R::one();
    loop {
        let deg_a = a.degree().unwrap();
        let deg_b = b.degree().unwrap();
        let delta = deg_a - deg_b;
        if deg_a % 2 == 1 && deg_b % 2 == 1 {
            sign_negative = !sign_negative;
        }
        let r = a.pseudo_rem(&b)?;
        if r.is_zero() {
            return Ok(R::zero());
        }
        a = b;
        let divisor = g.mul_ref(&h.pow(delta as u32));
        b = r.exact_quotient(&Poly::untagged(vec![divisor])).ok_or(PolyError::InexactDivision)?;
        g = a.lc();
        // h <- h^(1-δ) g^δ
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(delta as u32)
                .exact_div(&h.pow(delta as u32 - 1))
                .ok_or(PolyError::InexactDivision)?,
        };
        if b.degree() == Some(0) {
            break;
        }
    }
    let deg_a = a.degree().unwrap() as u32;
    // h <- h^(1-deg a) lc(b)^deg a
    let lb = b.lc().pow(deg_a);
    let res = if deg_a == 0 {
        h
    } else {
        lb.exact_div(&h.pow(deg_a - 1)).ok_or(PolyError::InexactDivision)?
    };
    Ok(if sign_negative { res.neg_ref() } else { res })
}

/// `disc(p) = (-1)^(n(n-1)/2) · res(p, p') / lc(p)`.
pub fn discriminant<R: Ring>(p: &Poly<R>) -> Result<R, PolyError> {
    let n = p.degree().ok_or(PolyError::ZeroPolynomial)?;
    if n == 0 {
        return Err(PolyError::ZeroPolynomial);
    }
    let res = resultant(p, &p.derivative())?;
    let d = res.exact_div(&p.lc()).ok_or(PolyError::InexactDivision)?;
    Ok(if (n * (n - 1) / 2) % 2 == 1 { d.neg_ref() } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::poly::{RatPoly, VAR_E, VAR_U};
    use crate::exactpoly::ring::{qi, Q};

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_i64s(c, VAR_E)
    }

    /// Sylvester determinant by fraction-free Laplace expansion.
    fn sylvester<R: Ring>(a: &Poly<R>, b: &Poly<R>) -> R {
        let m = a.degree().unwrap();
        let n = b.degree().unwrap();
        let size = m + n;
        let mut rows = vec![vec![R::zero(); size]; size];
        for i in 0..n {
            for k in 0..=m {
                rows[i][i + k] = a.coeff(m - k);
            }
        }
        for i in 0..m {
            for k in 0..=n {
                rows[n + i][i + k] = b.coeff(n - k);
            }
        }
        laplace(&rows)
    }

    fn laplace<R: Ring>(m: &[Vec<R>]) -> R {
        if m.len() == 1 {
            return m[0][0].clone();
        }
        let mut acc = R::zero();
        for (j, a) in m[0].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let minor: Vec<Vec<R>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = a.mul_ref(&laplace(&minor));
            acc = if j % 2 == 0 { acc.add_ref(&term) } else { acc.sub_ref(&term) };
        }
        acc
    }

    #[test]
    fn double_root_resultant_in_parameter() {
        // res_E(E^2 - u, 2E) = -4u
        let u = RatPoly::identity(VAR_U);
        let a: Poly<RatPoly> = Poly::new(vec![-&u, RatPoly::zero(), RatPoly::one()], VAR_E);
        let b: Poly<RatPoly> = Poly::new(vec![RatPoly::zero(), RatPoly::from_i64(2)], VAR_E);
        let expected = RatPoly::from_i64s(&[0, -4], VAR_U);
        assert_eq!(sylvester(&a, &b), expected);
        assert_eq!(resultant(&a, &b).unwrap(), expected);
    }

    #[test]
    fn constants_have_unit_resultant() {
        assert_eq!(resultant(&p(&[1]), &p(&[1])).unwrap(), qi(1));
        assert_eq!(resultant(&p(&[3]), &p(&[0, 0, 1])).unwrap(), qi(9));
    }

    #[test]
    fn matches_sylvester_on_fixed_cases() {
        let cases = [
            (p(&[1, 2, 3, 4]), p(&[-5, 0, 1])),
            (p(&[0, 1, 0, -2, 1]), p(&[7, 1, 1, -3])),
            (p(&[2, 0, 0, 0, 0, 1]), p(&[1, 1])),
            (p(&[-1, 1]), p(&[1, 0, 0, 1, 0, 2])),
            (p(&[1, 0, 1]), p(&[0, 2])),
        ];
        for (a, b) in cases {
            assert_eq!(resultant(&a, &b).unwrap(), sylvester(&a, &b), "{a:?} {b:?}");
            assert_eq!(resultant(&b, &a).unwrap(), sylvester(&b, &a), "{b:?} {a:?}");
        }
    }

    #[test]
    fn common_root_gives_zero() {
        let a = &p(&[-1, 1]) * &p(&[2, 0, 1]);
        let b = &p(&[-1, 1]) * &p(&[3, 1]);
        assert_eq!(resultant(&a, &b).unwrap(), Q::from_i64(0));
    }

    #[test]
    fn cubic_discriminant() {
        // E^3 - E: roots -1, 0, 1 -> disc = Π (ri - rj)^2 = 4
        assert_eq!(discriminant(&p(&[0, -1, 0, 1])).unwrap(), qi(4));
        // x^2 + bx + c -> b^2 - 4c
        assert_eq!(discriminant(&p(&[3, 5, 1])).unwrap(), qi(13));
    }
}
