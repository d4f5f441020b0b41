//! Certified real-root isolation (Sturm sequences over exact integers) and
//! floating-point complex root finding (Aberth–Ehrlich iteration).

use num_bigint::Sign;
use num_complex::Complex64;
use num_traits::Signed;
use serde::Serialize;

use super::poly::RatPoly;
use super::ring::{q_from_f64, q_to_f64, q_to_string, Ring, Q};
use super::zpoly::ZPoly;
use super::PolyError;

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Where a group of roots lives.
#[derive(Clone, Debug, PartialEq)]
pub enum RootLocation {
    /// Real roots in the closed rational interval `[lo, hi]`.
    Real { lo: Q, hi: Q },
    /// Complex roots in the disc `|z - center| <= radius`.
    Complex { center: Complex64, radius: f64 },
}

/// Box certified to contain exactly `multiplicity` roots (counted with
/// multiplicity) of one distinct root, with a refined floating value.
#[derive(Clone, Debug, PartialEq)]
pub struct RootBox {
    pub location: RootLocation,
    pub multiplicity: usize,
    pub refined: Complex64,
}

impl RootBox {
    pub fn real_interval(&self) -> Option<(&Q, &Q)> {
        match &self.location {
            RootLocation::Real { lo, hi } => Some((lo, hi)),
            RootLocation::Complex { .. } => None,
        }
    }

    pub fn midpoint(&self) -> Option<Q> {
        self.real_interval().map(|(lo, hi)| (lo + hi) / Q::from_i64(2))
    }

    pub fn value(&self) -> f64 {
        self.refined.re
    }

    pub fn width(&self) -> f64 {
        match &self.location {
            RootLocation::Real { lo, hi } => q_to_f64(&(hi - lo)),
            RootLocation::Complex { radius, .. } => 2.0 * radius,
        }
    }
}

#[derive(Serialize)]
struct RootBoxJson {
    lo: Option<String>,
    hi: Option<String>,
    center: Option<[f64; 2]>,
    radius: Option<f64>,
    multiplicity: usize,
    value: [f64; 2],
}

impl Serialize for RootBox {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut j = RootBoxJson {
            lo: None,
            hi: None,
            center: None,
            radius: None,
            multiplicity: self.multiplicity,
            value: [self.refined.re, self.refined.im],
        };
        match &self.location {
            RootLocation::Real { lo, hi } => {
                j.lo = Some(q_to_string(lo));
                j.hi = Some(q_to_string(hi));
            }
            RootLocation::Complex { center, radius } => {
                j.center = Some([center.re, center.im]);
                j.radius = Some(*radius);
            }
        }
        j.serialize(s)
    }
}

// ---------------------------------------------------------------------------
// Sturm sequences

/// Sturm chain of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<ZPoly>,
}

impl SturmChain {
    /// Builds the chain of the square-free part of `p`.
    pub fn new(p: &RatPoly) -> Result<Self, PolyError> {
        if p.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(SturmChain { chain: ZPoly::from_ratpoly(p).squarefree_part().sturm_chain() })
    }

    /// Chain of `p`, which must already be square-free.
    pub fn of_squarefree(p: &RatPoly) -> Result<Self, PolyError> {
        if p.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(SturmChain { chain: ZPoly::from_ratpoly(p).sturm_chain() })
    }

    fn variations(signs: impl Iterator<Item = Sign>) -> usize {
        let mut last = Sign::NoSign;
        let mut v = 0;
        for s in signs {
            if s == Sign::NoSign {
                continue;
            }
            if last != Sign::NoSign && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, x: &Q) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_in(&self, lo: &Q, hi: &Q) -> usize {
        self.variations_at(lo).saturating_sub(self.variations_at(hi))
    }

    /// Number of distinct real roots.
    pub fn count_real(&self) -> usize {
        let lo = Self::variations(self.chain.iter().map(ZPoly::sign_at_neg_inf));
        let hi = Self::variations(self.chain.iter().map(ZPoly::sign_at_pos_inf));
        lo.saturating_sub(hi)
    }

    fn sign_at(&self, x: &Q) -> Sign {
        self.chain[0].sign_at(x)
    }
}

/// Strict bound `B` with every root in `(-B, B)` (Cauchy).
pub fn root_bound(p: &RatPoly) -> Q {
    let lc = p.lc().abs();
    let max = p
        .coeffs()
        .iter()
        .take(p.coeffs().len().saturating_sub(1))
        .map(|c| c.abs() / &lc)
        .fold(Q::from_i64(0), |a, b| if b > a { b } else { a });
    (max + Q::from_i64(1)).ceil() + Q::from_i64(1)
}

/// Isolates every distinct real root of `p` in a rational interval of width
/// at most `tol`, with multiplicities from the square-free decomposition.
pub fn isolate_real_roots(p: &RatPoly, tol: f64) -> Result<Vec<RootBox>, PolyError> {
    let tol = q_from_f64(tol.max(f64::MIN_POSITIVE)).ok_or(PolyError::BadTolerance)?;
    isolate_with(p, Some(&tol))
}

/// Isolation to disjoint intervals only (no refinement); refined values are
/// interval midpoints polished by guarded floating-point bisection.
pub fn isolate_real_roots_coarse(p: &RatPoly) -> Result<Vec<RootBox>, PolyError> {
    isolate_with(p, None)
}

fn isolate_with(p: &RatPoly, tol: Option<&Q>) -> Result<Vec<RootBox>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let factors = p.squarefree_decomposition()?;
    let sqf = factors[1..].iter().fold(factors[0].1.clone(), |acc, (_, f)| &acc * f);
    let chain = SturmChain::of_squarefree(&sqf)?;
    let chains: Vec<(usize, SturmChain, RatPoly)> = if factors.len() == 1 {
        vec![(factors[0].0, chain.clone(), factors[0].1.clone())]
    } else {
        factors
            .iter()
            .map(|(m, f)| Ok((*m, SturmChain::of_squarefree(f)?, f.clone())))
            .collect::<Result<_, PolyError>>()?
    };
    let total = chain.count_real();
    let mut out = Vec::with_capacity(total);
    if total == 0 {
        return Ok(out);
    }
    let b = root_bound(p);
    let two = Q::from_i64(2);
    let mut stack = vec![(-b.clone(), b)];
    let mut isolated = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let n = chain.count_in(&lo, &hi);
        match n {
            0 => {}
            1 => isolated.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / &two;
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    isolated.sort_by(|a, b| a.0.cmp(&b.0));
    for (mut lo, mut hi) in isolated {
        if let Some(tol) = tol {
            while &hi - &lo > *tol {
                if chain.sign_at(&hi) == Sign::NoSign {
                    lo = hi.clone();
                    break;
                }
                let mid = (&lo + &hi) / &two;
                if chain.count_in(&lo, &mid) == 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
        }
        if chain.sign_at(&hi) == Sign::NoSign {
            lo = hi.clone();
        } else {
            // rational roots with small denominators are recovered exactly
            let s = simplest_rational_in(&lo, &hi);
            if s > lo && chain.sign_at(&s) == Sign::NoSign {
                lo = s.clone();
                hi = s;
            }
        }
        let multiplicity = chains
            .iter()
            .find(|(_, c, f)| {
                if lo == hi {
                    Ring::is_zero(&f.eval(&lo))
                } else {
                    c.count_in(&lo, &hi) == 1
                }
            })
            .map(|(m, _, _)| *m)
            .unwrap_or(1);
        let refined = polish_real(&sqf, &lo, &hi);
        out.push(RootBox {
            location: RootLocation::Real { lo, hi },
            multiplicity,
            refined: Complex64::new(refined, 0.0),
        });
    }
    Ok(out)
}

/// Rational with the smallest denominator in the closed interval `[lo, hi]`.
pub fn simplest_rational_in(lo: &Q, hi: &Q) -> Q {
    let zero = Q::from_i64(0);
    if *lo <= zero && zero <= *hi {
        return zero;
    }
    if *hi < zero {
        return -simplest_rational_in(&-hi, &-lo);
    }
    let n = lo.ceil();
    if n <= *hi {
        return n;
    }
    let fl = lo.floor();
    let inner = simplest_rational_in(&(Q::from_i64(1) / (hi - &fl)), &(Q::from_i64(1) / (lo - &fl)));
    fl + Q::from_i64(1) / inner
}

/// Floating-point refinement of the single root of square-free `p` inside
/// `(lo, hi]`: exact bracketing, float bisection, then guarded Newton.
fn polish_real(p: &RatPoly, lo: &Q, hi: &Q) -> f64 {
    if lo == hi {
        return q_to_f64(lo);
    }
    let ip = ZPoly::from_ratpoly(p);
    let sign_hi = ip.sign_at(hi);
    if sign_hi == Sign::NoSign {
        return q_to_f64(hi);
    }
    // `lo` may be a neighbouring root; move inward until the sign differs
    let two = Q::from_i64(2);
    let mut a_q = lo.clone();
    let mut b_q = hi.clone();
    for _ in 0..200 {
        let s = ip.sign_at(&a_q);
        if s != Sign::NoSign && s != sign_hi {
            break;
        }
        let m = (&a_q + &b_q) / &two;
        match ip.sign_at(&m) {
            Sign::NoSign => return q_to_f64(&m),
            s if s != sign_hi => {
                a_q = m;
                break;
            }
            _ => b_q = m,
        }
    }
    let c = p.to_f64_coeffs();
    let dc: Vec<f64> = c.iter().enumerate().skip(1).map(|(k, v)| v * k as f64).collect();
    let ev = |x: f64, cs: &[f64]| cs.iter().rev().fold(0.0, |acc, v| acc * x + v);
    let (mut a, mut b) = (q_to_f64(&a_q), q_to_f64(&b_q));
    let neg_at_a = sign_hi == Sign::Plus;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = ev(m, &c);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == neg_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..3 {
        let d = ev(x, &dc);
        if d == 0.0 {
            break;
        }
        let nx = x - ev(x, &c) / d;
        if !(nx >= a && nx <= b) {
            break;
        }
        x = nx;
    }
    x
}

// ---------------------------------------------------------------------------
// Aberth–Ehrlich

#[derive(Clone, Copy, Debug)]
pub struct AberthOptions {
    pub max_iter: usize,
    /// Accepted residual `|p(z)| <= tol · Σ |c_k| |z|^k`.
    pub residual_tol: f64,
}

impl Default for AberthOptions {
    fn default() -> Self {
        AberthOptions { max_iter: 1000, residual_tol: 1e-10 }
    }
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, v| acc * z + v)
}

fn scaled_magnitude(c: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    c.iter().rev().fold(0.0, |acc, v| acc * r + v.norm())
}

/// All complex roots of `Σ c_k z^k` with multiplicity, sorted by `(re, im)`.
pub fn complex_roots(coeffs: &[Complex64], opts: AberthOptions) -> Result<Vec<Complex64>, PolyError> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|v| *v == Complex64::new(0.0, 0.0)) {
        c.pop();
    }
    if c.len() < 2 {
        return Err(PolyError::DegreeTooLow);
    }
    if c.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(PolyError::NonFinite);
    }
    // exact zero roots
    let zeros = c.iter().take_while(|v| **v == Complex64::new(0.0, 0.0)).count();
    let c = c.split_off(zeros);
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if c.len() >= 2 {
        roots.extend(aberth(&c, opts)?);
    }
    sort_roots(&mut roots);
    Ok(roots)
}

pub fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

fn aberth(c: &[Complex64], opts: AberthOptions) -> Result<Vec<Complex64>, PolyError> {
    let n = c.len() - 1;
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|v| v / lead).collect();
    if n == 1 {
        return Ok(vec![-monic[0]]);
    }
    let dc: Vec<Complex64> = monic.iter().enumerate().skip(1).map(|(k, v)| v * k as f64).collect();

    // deterministic start: circle around the centroid, radius from the
    // geometric mean of the root moduli, angles offset to break symmetry
    let center = -monic[n - 1] / n as f64;
    let shifted_const = horner(&monic, center).norm();
    let radius = if shifted_const > 0.0 { shifted_const.powf(1.0 / n as f64) } else { 1.0 };
    let radius = radius.max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            center + Complex64::from_polar(radius, theta)
        })
        .collect();

    let mut converged = vec![false; n];
    for _ in 0..opts.max_iter {
        let mut all = true;
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let pz = horner(&monic, z[k]);
            if pz == Complex64::new(0.0, 0.0) {
                converged[k] = true;
                continue;
            }
            let dpz = horner(&dc, z[k]);
            let ratio = pz / dpz;
            let sum: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !w.re.is_finite() || !w.im.is_finite() {
                // perturb out of a degenerate configuration
                let bump = Complex64::new(1e-8, 1e-8) * (1.0 + z[k].norm());
                z[k] += bump;
                all = false;
                continue;
            }
            z[k] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * (1.0 + z[k].norm()) {
                converged[k] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    // Newton polish, accepted only when it lowers the residual
    for zk in z.iter_mut() {
        for _ in 0..2 {
            let pz = horner(&monic, *zk);
            let dpz = horner(&dc, *zk);
            if dpz.norm() == 0.0 {
                break;
            }
            let cand = *zk - pz / dpz;
            if horner(&monic, cand).norm() < pz.norm() {
                *zk = cand;
            } else {
                break;
            }
        }
    }
    let ok = z
        .iter()
        .all(|zk| horner(&monic, *zk).norm() <= opts.residual_tol * scaled_magnitude(&monic, *zk).max(1.0));
    if ok {
        Ok(z)
    } else {
        let mut best = z;
        sort_roots(&mut best);
        Err(PolyError::NonConvergence { best })
    }
}

/// Complex roots of an exact polynomial: exact square-free decomposition,
/// real roots certified by Sturm isolation, the rest by Aberth iteration on
/// each square-free factor. Repeated roots are therefore reported exactly
/// repeated and real roots have zero imaginary part.
pub fn complex_roots_exact(p: &RatPoly) -> Result<Vec<Complex64>, PolyError> {
    if p.degree().unwrap_or(0) == 0 {
        return Err(PolyError::DegreeTooLow);
    }
    let mut roots = Vec::with_capacity(p.degree().unwrap());
    for (mult, f) in p.squarefree_decomposition()? {
        let real = isolate_real_roots_coarse(&f)?;
        let mut fr: Vec<Complex64> = real.iter().map(|b| b.refined).collect();
        let deg = f.degree().unwrap();
        if fr.len() < deg {
            let coeffs: Vec<Complex64> = f.to_f64_coeffs().into_iter().map(|v| Complex64::new(v, 0.0)).collect();
            let mut all = complex_roots(&coeffs, AberthOptions::default())?;
            // drop the numerically-most-real ones; they are the certified reals
            all.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
            let mut rest: Vec<Complex64> = all.split_off(real.len());
            // enforce exact conjugate pairing
            rest.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
            let mut upper: Vec<Complex64> = rest.iter().filter(|z| z.im > 0.0).copied().collect();
            let lower: Vec<Complex64> = rest.iter().filter(|z| z.im <= 0.0).copied().collect();
            if upper.len() == lower.len() {
                upper.sort_by(|a, b| a.re.total_cmp(&b.re));
                let mut lo_sorted = lower.clone();
                lo_sorted.sort_by(|a, b| a.re.total_cmp(&b.re));
                for (a, b) in upper.iter().zip(lo_sorted.iter()) {
                    let re = 0.5 * (a.re + b.re);
                    let im = 0.5 * (a.im - b.im);
                    fr.push(Complex64::new(re, im));
                    fr.push(Complex64::new(re, -im));
                }
            } else {
                fr.extend(rest);
            }
        }
        for r in fr {
            roots.extend(std::iter::repeat_n(r, mult));
        }
    }
    sort_roots(&mut roots);
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::poly::{VAR_E, VAR_X};
    use crate::exactpoly::ring::qi;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_i64s(c, VAR_E)
    }

    #[test]
    fn cubic_with_three_real_roots() {
        let boxes = isolate_real_roots(&p(&[0, -1, 0, 1]), 1e-12).unwrap();
        let vals: Vec<f64> = boxes.iter().map(|b| b.value()).collect();
        assert_eq!(boxes.len(), 3);
        for (v, e) in vals.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((v - e).abs() < 1e-12);
        }
        for b in &boxes {
            assert!(b.width() <= 1e-12);
            assert_eq!(b.multiplicity, 1);
        }
    }

    #[test]
    fn golden_ratio_cubic() {
        // (1 - x)(1 + x)^2 - 1 = -x^3 - x^2 + x
        let c = RatPoly::from_i64s(&[0, 1, -1, -1], VAR_X);
        let boxes = isolate_real_roots(&c, 1e-12).unwrap();
        let pos: Vec<&RootBox> = boxes.iter().filter(|b| b.value() > 1e-9).collect();
        assert_eq!(pos.len(), 1);
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        assert!((pos[0].value() - golden).abs() < 1e-12);
        assert!((pos[0].value() - 0.6180339887).abs() < 1e-10);
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&p(&[1, 0, 1]), 1e-12).unwrap().is_empty());
    }

    #[test]
    fn multiplicities_are_reported() {
        // E^2 (E - 1)^3
        let f = &p(&[0, 0, 1]) * &(&p(&[-1, 1]) * &(&p(&[-1, 1]) * &p(&[-1, 1])));
        let boxes = isolate_real_roots(&f, 1e-10).unwrap();
        assert_eq!(boxes.iter().map(|b| b.multiplicity).collect::<Vec<_>>(), vec![2, 3]);
        // exact rational roots collapse to point intervals
        assert_eq!(boxes[1].real_interval().unwrap(), (&qi(1), &qi(1)));
    }

    #[test]
    fn simplest_rationals() {
        use crate::exactpoly::ring::q;
        assert_eq!(simplest_rational_in(&q(3, 7), &q(5, 9)), q(1, 2));
        assert_eq!(simplest_rational_in(&q(-5, 9), &q(-3, 7)), q(-1, 2));
        assert_eq!(simplest_rational_in(&q(-1, 3), &q(1, 5)), qi(0));
        assert_eq!(simplest_rational_in(&q(31, 100), &q(32, 100)), q(5, 16));
    }

    #[test]
    fn sturm_count_matches() {
        let f = p(&[1, 0, -3, 0, 1]);
        let c = SturmChain::new(&f).unwrap();
        assert_eq!(c.count_real(), 4);
        assert_eq!(c.count_in(&qi(0), &qi(3)), 2);
    }

    #[test]
    fn unit_imaginary_pair() {
        let r = complex_roots_exact(&p(&[1, 0, 1])).unwrap();
        assert!((r[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn table_row_two_at_three_quarters() {
        // E^2 - r^2 with r = 3/4
        let f = RatPoly::new(vec![-(q_from_f64(0.75).unwrap().pow(2)), qi(0), qi(1)], VAR_E);
        let r = complex_roots_exact(&f).unwrap();
        assert_eq!(r, vec![Complex64::new(-0.75, 0.0), Complex64::new(0.75, 0.0)]);
    }

    #[test]
    fn double_zero_root_is_exact() {
        let r = complex_roots_exact(&p(&[0, 0, 3, 0, -4, 0, 1])).unwrap();
        assert_eq!(r.iter().filter(|z| **z == Complex64::new(0.0, 0.0)).count(), 2);
    }

    #[test]
    fn aberth_on_float_coefficients() {
        let c: Vec<Complex64> = [6.0, -5.0, 1.0].iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let r = complex_roots(&c, AberthOptions::default()).unwrap();
        assert!((r[0].re - 2.0).abs() < 1e-13 && (r[1].re - 3.0).abs() < 1e-13);
        assert!(matches!(complex_roots(&c[..1], AberthOptions::default()), Err(PolyError::DegreeTooLow)));
    }
}
