//! Primitive integer polynomials: the fast path behind gcds, square-free
//! decomposition and Sturm chains (no per-operation rational normalization).

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{RatPoly, Var};
use super::ring::Q;

/// Integer polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ZPoly(pub(crate) Vec<BigInt>);

impl ZPoly {
    fn trimmed(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        ZPoly(c)
    }

    /// Positive rescaling of `p` to a primitive integer polynomial.
    pub(crate) fn from_ratpoly(p: &RatPoly) -> Self {
        let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        ZPoly::trimmed(p.coeffs().iter().map(|c| c.numer() * (&lcm / c.denom())).collect()).primitive()
    }

    pub(crate) fn to_ratpoly(&self, var: Option<Var>) -> RatPoly {
        RatPoly::from_parts(self.0.iter().map(|c| Q::from_integer(c.clone())).collect(), var)
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lc(&self) -> &BigInt {
        self.0.last().expect("nonzero polynomial")
    }

    fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the (positive) content.
    pub(crate) fn primitive(self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self;
        }
        ZPoly(self.0.into_iter().map(|c| c / &g).collect())
    }

    fn neg(self) -> Self {
        ZPoly(self.0.into_iter().map(|c| -c).collect())
    }

    pub(crate) fn derivative(&self) -> Self {
        ZPoly::trimmed(self.0.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect())
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let zero = BigInt::zero();
        ZPoly::trimmed(
            (0..n).map(|k| self.0.get(k).unwrap_or(&zero) - other.0.get(k).unwrap_or(&zero)).collect(),
        )
    }

    /// `lc(b)^(deg a - deg b + 1) * a mod b`, with the exponent it used.
    fn prem(&self, b: &Self) -> (Self, usize) {
        let db = b.degree();
        if self.is_zero() || self.degree() < db {
            return (self.clone(), 0);
        }
        let lb = b.lc();
        let mut r = self.0.clone();
        let mut e = self.degree() - db + 1;
        while r.len() > db {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            let shift = dr - db;
            for c in r.iter_mut() {
                *c *= lb;
            }
            for (j, bc) in b.0.iter().enumerate() {
                r[shift + j] -= &lr * bc;
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            e -= 1;
        }
        let total = self.degree() - db + 1;
        if e > 0 {
            let f = num_traits::pow(lb.clone(), e);
            for c in r.iter_mut() {
                *c *= &f;
            }
        }
        (ZPoly::trimmed(r), total)
    }

    /// Exact quotient over the integers, `None` unless `b` divides `self`.
    pub(crate) fn div_exact(&self, b: &Self) -> Option<Self> {
        if b.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let db = b.degree();
        if self.degree() < db {
            return None;
        }
        let mut r = self.0.clone();
        let mut q = vec![BigInt::zero(); self.degree() - db + 1];
        for k in (0..q.len()).rev() {
            let (c, rem) = r[k + db].div_rem(b.lc());
            if !rem.is_zero() {
                return None;
            }
            for (j, bc) in b.0.iter().enumerate() {
                r[k + j] -= &c * bc;
            }
            q[k] = c;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(ZPoly::trimmed(q))
    }

    /// Primitive gcd with positive leading coefficient.
    pub(crate) fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone().primitive();
        let mut b = other.clone().primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b).0.primitive();
            a = b;
            b = r;
        }
        if a.0.last().is_some_and(|c| c.is_negative()) {
            a = a.neg();
        }
        a
    }

    /// Yun's algorithm; `(i, f_i)` with `self = c · Π f_i^i`, each `f_i`
    /// primitive, positive leading coefficient and non-constant.
    pub(crate) fn squarefree_decomposition(&self) -> Vec<(usize, ZPoly)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.clone().primitive();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).expect("gcd divides");
        let mut c = df.div_exact(&a0).expect("gcd divides");
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((i, a.clone()));
            }
            b = b.div_exact(&a).expect("gcd divides");
            if b.degree() == 0 {
                break;
            }
            c = d.div_exact(&a).expect("gcd divides");
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Square-free part, primitive with positive leading coefficient.
    pub(crate) fn squarefree_part(&self) -> Self {
        let f = self.clone().primitive();
        if f.degree() == 0 {
            return ZPoly(vec![BigInt::one()]);
        }
        let g = f.gcd(&f.derivative());
        let mut s = f.div_exact(&g).expect("gcd divides");
        if s.lc().is_negative() {
            s = s.neg();
        }
        s
    }

    /// Sturm chain of a square-free polynomial, each member rescaled by a
    /// positive factor.
    pub(crate) fn sturm_chain(&self) -> Vec<ZPoly> {
        let mut seq = vec![self.clone().primitive()];
        let d = seq[0].derivative().primitive();
        if d.is_zero() {
            return seq;
        }
        seq.push(d);
        loop {
            let n = seq.len();
            let (a, b) = (&seq[n - 2], &seq[n - 1]);
            if b.degree() == 0 {
                break;
            }
            let (mut r, e) = a.prem(b);
            if r.is_zero() {
                break;
            }
            if b.lc().is_negative() && e % 2 == 1 {
                r = r.neg();
            }
            seq.push(r.neg().primitive());
        }
        seq
    }

    /// Sign of `p(a/b)` for `b > 0`: sign of `Σ c_k a^k b^(n-k)`.
    pub(crate) fn sign_at(&self, x: &Q) -> Sign {
        let a = x.numer();
        let b = x.denom();
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        for c in self.0.iter().rev() {
            acc = acc * a + c * &bpow;
            bpow *= b;
        }
        acc.sign()
    }

    pub(crate) fn sign_at_pos_inf(&self) -> Sign {
        self.0.last().map(|c| c.sign()).unwrap_or(Sign::NoSign)
    }

    pub(crate) fn sign_at_neg_inf(&self) -> Sign {
        let s = self.sign_at_pos_inf();
        if self.degree() % 2 == 1 {
            -s
        } else {
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(c: &[i64]) -> ZPoly {
        ZPoly::trimmed(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    #[test]
    fn gcd_and_exact_division() {
        // (x - 1)^2 (x + 2) and (x - 1)(x + 3)
        let a = z(&[2, -3, 0, 1]);
        let b = z(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b), z(&[-1, 1]));
        assert_eq!(a.div_exact(&z(&[-1, 1])), Some(z(&[-2, 1, 1])));
        assert_eq!(a.div_exact(&z(&[3, 1])), None);
    }

    #[test]
    fn yun_recovers_multiplicities() {
        // 2 x (x - 1)^2 (x + 2)^3
        let r = |c: &[i64]| z(c).to_ratpoly(None);
        let (f, g) = (r(&[-1, 1]), r(&[2, 1]));
        let p = &(&(&r(&[0, 2]) * &f) * &f) * &(&(&g * &g) * &g);
        let dec = ZPoly::from_ratpoly(&p).squarefree_decomposition();
        assert_eq!(dec, vec![(1, z(&[0, 1])), (2, z(&[-1, 1])), (3, z(&[2, 1]))]);
    }
}
