//! Reference Sturmians and their rearranged forms, entered verbatim.

use crate::exactpoly::{PolyError, RatFunc, RatPoly, VAR_E, VAR_X};

/// `r^2` as a function of `x = E^2` at `u = 0`, ascending coefficients.
#[derive(Clone, Copy, Debug)]
pub struct ReferenceSturmian {
    pub n: usize,
    pub numerator: &'static [i64],
    pub denominator: &'static [i64],
}

pub const REFERENCE_STURMIANS: [ReferenceSturmian; 8] = [
    ReferenceSturmian { n: 2, numerator: &[0, 1], denominator: &[1] },
    ReferenceSturmian { n: 3, numerator: &[-1, 1], denominator: &[1] },
    // x (x - 2) / (x - 1)
    ReferenceSturmian { n: 4, numerator: &[0, -2, 1], denominator: &[-1, 1] },
    ReferenceSturmian { n: 5, numerator: &[1, -3, 1], denominator: &[-2, 1] },
    // x (x - 1)(x - 3) / (x^2 - 3x + 1)
    ReferenceSturmian { n: 6, numerator: &[0, 3, -4, 1], denominator: &[1, -3, 1] },
    // (x^3 - 5x^2 + 6x - 1) / ((x - 1)(x - 3))
    ReferenceSturmian { n: 7, numerator: &[-1, 6, -5, 1], denominator: &[3, -4, 1] },
    // x (x^3 - 6x^2 + 10x - 4) / (x^3 - 5x^2 + 6x - 1)
    ReferenceSturmian { n: 8, numerator: &[0, -4, 10, -6, 1], denominator: &[-1, 6, -5, 1] },
    ReferenceSturmian { n: 9, numerator: &[1, -10, 15, -7, 1], denominator: &[-4, 10, -6, 1] },
];

pub fn reference_sturmian(n: usize) -> Option<RatFunc> {
    let r = REFERENCE_STURMIANS.iter().find(|r| r.n == n)?;
    RatFunc::new(RatPoly::from_i64s(r.numerator, VAR_X), RatPoly::from_i64s(r.denominator, VAR_X)).ok()
}

fn e(c: &[i64]) -> RatPoly {
    RatPoly::from_i64s(c, VAR_E)
}

fn x(c: &[i64]) -> RatFunc {
    RatFunc::from_poly(RatPoly::from_i64s(c, VAR_X))
}

/// Factorized denominators in `E`: `(expanded, factors)`.
pub(crate) fn denominator_factorization(n: usize) -> Option<(RatPoly, Vec<RatPoly>)> {
    match n {
        6 => Some((e(&[1, 0, -3, 0, 1]), vec![e(&[-1, 1, 1]), e(&[-1, -1, 1])])),
        8 => Some((e(&[-1, 0, 6, 0, -5, 0, 1]), vec![e(&[-1, -2, 1, 1]), e(&[1, -2, -1, 1])])),
        // (E^2 - 2)(E^4 - 4E^2 + 2)
        9 => Some((e(&[-4, 0, 10, 0, -6, 0, 1]), vec![e(&[-2, 0, 1]), e(&[2, 0, -4, 0, 1])])),
        _ => None,
    }
}

/// Continued-fraction style rearrangements of `r^2(x)`.
pub(crate) fn rearranged_forms(n: usize) -> Result<Vec<RatFunc>, PolyError> {
    let x_minus_1 = x(&[-1, 1]);
    let one = x(&[1]);
    Ok(match n {
        // x - 1 - 1/(x - 1)
        4 => vec![x_minus_1.sub(&x_minus_1.recip()?)?],
        // x - 1 - 1/(x - 2)
        5 => vec![x_minus_1.sub(&x(&[-2, 1]).recip()?)?],
        6 => {
            // x - 1 - (x - 1)/(x^2 - 3x + 1)
            let a = x_minus_1.sub(&x_minus_1.div(&x(&[1, -3, 1]))?)?;
            // x - 1 - 1/(x - 2 - 1/(x - 1))
            let inner = x(&[-2, 1]).sub(&one.div(&x_minus_1)?)?;
            let b = x_minus_1.sub(&inner.recip()?)?;
            vec![a, b]
        }
        _ => Vec::new(),
    })
}
