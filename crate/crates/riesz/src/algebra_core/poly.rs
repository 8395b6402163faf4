//! Complex polynomials and rational functions used as closed-form tail maps.

use crate::C64;

/// Relative size below which a freshly cancelled numerator is treated as zero.
const CANCEL_REL: f64 = 1e-13;
/// Relative remainder below which one denominator counts as dividing another.
const DIVIDE_REL: f64 = 1e-12;

/// Polynomial with ascending coefficients; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(Vec<C64>);

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: C64) -> Self {
        Poly::new(vec![c])
    }

    /// `c0 + c1 x`
    pub fn linear(c0: C64, c1: C64) -> Self {
        Poly::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> C64 {
        self.0.get(i).copied().unwrap_or_default()
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.0.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    /// Quotient `self / divisor` when the division leaves a negligible remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() || divisor.degree() > self.degree() || self.is_zero() {
            return None;
        }
        let (n, d) = (self.degree(), divisor.degree());
        let lead = divisor.0[d];
        let mut rem = self.0.clone();
        let mut quot = vec![C64::new(0.0, 0.0); n - d + 1];
        for i in (0..=n - d).rev() {
            let q = rem[i + d] / lead;
            quot[i] = q;
            for (j, c) in divisor.0.iter().enumerate() {
                rem[i + j] -= q * c;
            }
        }
        let rest = rem[..d].iter().map(|z| z.norm()).fold(0.0, f64::max);
        (rest <= DIVIDE_REL * self.max_abs_coeff()).then(|| Poly::new(quot))
    }

    pub fn scale(&self, s: C64) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Substitutes `x -> x^k`.
    pub fn compose_power(&self, k: usize) -> Poly {
        if k == 1 || self.is_zero() {
            return self.clone();
        }
        let mut out = vec![C64::new(0.0, 0.0); (self.0.len() - 1) * k + 1];
        for (i, c) in self.0.iter().enumerate() {
            out[i * k] = *c;
        }
        Poly::new(out)
    }

    /// Substitutes `x -> inner(x)`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.0.iter().rev().fold(Poly::zero(), |acc, c| acc.mul(inner).add(&Poly::constant(*c)))
    }

    pub fn conj(&self) -> Poly {
        Poly(self.0.iter().map(|c| c.conj()).collect())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sum of `|c_i| s^i` over `i >= from`.
    fn abs_tail_sum(&self, from: usize, s: f64) -> f64 {
        self.0.iter().enumerate().skip(from).map(|(i, c)| c.norm() * s.powi(i as i32)).sum()
    }

    /// Returns `k` when `self = k * other` to relative accuracy.
    pub fn proportional_to(&self, other: &Poly) -> Option<C64> {
        if self.0.len() != other.0.len() || other.is_zero() {
            return None;
        }
        let lead = other.0.len() - 1;
        let k = self.0[lead] / other.0[lead];
        let scale = self.max_abs_coeff().max(other.max_abs_coeff() * k.norm());
        let ok = self.0.iter().zip(&other.0).all(|(a, b)| (a - k * b).norm() <= 1e-12 * scale);
        ok.then_some(k)
    }

    /// Roots via companion-matrix eigenvalues.
    pub fn roots(&self) -> Vec<C64> {
        let d = self.degree();
        if self.is_zero() || d == 0 {
            return Vec::new();
        }
        // Exact zero roots are split off; a nilpotent companion matrix stalls the QR iteration.
        let zeros = self.0.iter().take_while(|c| **c == C64::new(0.0, 0.0)).count();
        if zeros > 0 {
            let mut out = vec![C64::new(0.0, 0.0); zeros];
            out.extend(Poly::new(self.0[zeros..].to_vec()).roots());
            return out;
        }
        let lead = self.0[d];
        if d == 1 {
            return vec![-self.0[0] / lead];
        }
        let mut m = nalgebra::DMatrix::<C64>::zeros(d, d);
        for i in 1..d {
            m[(i, i - 1)] = C64::new(1.0, 0.0);
        }
        for i in 0..d {
            m[(i, d - 1)] = -self.0[i] / lead;
        }
        crate::algebra_core::block::eigenvalues(&m)
    }
}

/// Rational function `num / den` in a single variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Rational {
    num: Poly,
    den: Poly,
}

impl Rational {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Rational::constant(C64::new(0.0, 0.0));
        }
        let mut num = num.0;
        let mut den = den.0;
        while num.len() > 1 && den.len() > 1 && num[0] == C64::new(0.0, 0.0) && den[0] == C64::new(0.0, 0.0) {
            num.remove(0);
            den.remove(0);
        }
        let pivot = *den.iter().find(|c| **c != C64::new(0.0, 0.0)).expect("nonzero denominator");
        let num = Poly::new(num.into_iter().map(|c| c / pivot).collect());
        let den = Poly::new(den.into_iter().map(|c| c / pivot).collect());
        if let Some(k) = num.proportional_to(&den) {
            return Rational::constant(k);
        }
        Rational { num, den }
    }

    pub fn constant(c: C64) -> Self {
        Rational { num: Poly::constant(c), den: Poly::constant(C64::new(1.0, 0.0)) }
    }

    pub fn identity() -> Self {
        Rational::from_poly(Poly::linear(C64::new(0.0, 0.0), C64::new(1.0, 0.0)))
    }

    pub fn from_poly(p: Poly) -> Self {
        Rational::new(p, Poly::constant(C64::new(1.0, 0.0)))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn as_constant(&self) -> Option<C64> {
        (self.num.degree() == 0 && self.den.degree() == 0).then(|| {
            if self.num.is_zero() {
                C64::new(0.0, 0.0)
            } else {
                self.num.coeff(0) / self.den.coeff(0)
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `(a, b)` when the map is `x -> a x + b`.
    pub fn as_affine(&self) -> Option<(C64, C64)> {
        (self.num.degree() <= 1 && self.den.degree() == 0).then(|| {
            let d = self.den.coeff(0);
            (self.num.coeff(1) / d, self.num.coeff(0) / d)
        })
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.num.eval(x) / self.den.eval(x)
    }

    pub fn add(&self, other: &Rational) -> Rational {
        if self.den == other.den {
            return Rational::new(cancel_sum(&self.num, &other.num), self.den.clone());
        }
        // Reuse a denominator that the other one divides, so sums of powers keep their degree.
        if let Some(q) = other.den.div_exact(&self.den) {
            return Rational::new(cancel_sum(&self.num.mul(&q), &other.num), other.den.clone());
        }
        if let Some(q) = self.den.div_exact(&other.den) {
            return Rational::new(cancel_sum(&self.num, &other.num.mul(&q)), self.den.clone());
        }
        let a = self.num.mul(&other.den);
        let b = other.num.mul(&self.den);
        Rational::new(cancel_sum(&a, &b), self.den.mul(&other.den))
    }

    pub fn neg(&self) -> Rational {
        Rational { num: self.num.scale(C64::new(-1.0, 0.0)), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Rational) -> Rational {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: C64) -> Rational {
        Rational::new(self.num.scale(s), self.den.clone())
    }

    pub fn mul(&self, other: &Rational) -> Rational {
        if self.is_zero() || other.is_zero() {
            return Rational::constant(C64::new(0.0, 0.0));
        }
        let (mut n1, mut d1) = (self.num.clone(), self.den.clone());
        let (mut n2, mut d2) = (other.num.clone(), other.den.clone());
        if let Some(k) = n1.proportional_to(&d2) {
            n1 = Poly::constant(k);
            d2 = Poly::constant(C64::new(1.0, 0.0));
        }
        if let Some(k) = n2.proportional_to(&d1) {
            n2 = Poly::constant(k);
            d1 = Poly::constant(C64::new(1.0, 0.0));
        }
        Rational::new(n1.mul(&n2), d1.mul(&d2))
    }

    /// Reciprocal; the caller guarantees the numerator is not identically zero.
    pub fn inv(&self) -> Rational {
        Rational::new(self.den.clone(), self.num.clone())
    }

    pub fn powi(&self, k: usize) -> Rational {
        (0..k).fold(Rational::constant(C64::new(1.0, 0.0)), |acc, _| acc.mul(self))
    }

    /// Substitutes `x -> x^k`.
    pub fn compose_power(&self, k: usize) -> Rational {
        Rational::new(self.num.compose_power(k), self.den.compose_power(k))
    }

    /// Composition `x -> self(inner(x))`.
    pub fn compose(&self, inner: &Rational) -> Rational {
        let top = inner.apply_poly(&self.num);
        let bottom = inner.apply_poly(&self.den);
        top.mul(&bottom.inv())
    }

    /// Post-composes with a polynomial: `x -> p(self(x))`.
    pub fn apply_poly(&self, p: &Poly) -> Rational {
        p.coeffs().iter().rev().fold(Rational::constant(C64::new(0.0, 0.0)), |acc, c| {
            acc.mul(self).add(&Rational::constant(*c))
        })
    }

    pub fn conj(&self) -> Rational {
        Rational { num: self.num.conj(), den: self.den.conj() }
    }

    /// Upper bound on `|R(x) - R(0)|` over `|x| <= s`; infinite when the
    /// denominator bound degenerates.
    pub fn deviation_bound(&self, s: f64) -> f64 {
        let d0 = self.den.coeff(0);
        if d0.norm() == 0.0 {
            return f64::INFINITY;
        }
        let n0 = self.num.coeff(0);
        // R(x) - R(0) = (num(x) d0 - n0 den(x)) / (den(x) d0)
        let lifted = cancel_sum(&self.num.scale(d0), &self.den.scale(-n0));
        let top = lifted.abs_tail_sum(1, s);
        let bottom = d0.norm() - self.den.abs_tail_sum(1, s);
        if bottom <= 0.0 {
            return f64::INFINITY;
        }
        top / (d0.norm() * bottom)
    }

    /// `(R(x) - R(0)) / x`.
    pub fn difference_quotient(&self) -> Rational {
        let lifted = self.num.add(&self.den.scale(-self.value_at_zero()));
        let mut c = lifted.coeffs().to_vec();
        if c.len() <= 1 {
            return Rational::constant(C64::new(0.0, 0.0));
        }
        c.remove(0);
        Rational::new(Poly::new(c), self.den.clone())
    }

    pub fn value_at_zero(&self) -> C64 {
        self.num.coeff(0) / self.den.coeff(0)
    }
}

/// `a + b`, dropping the result when it is pure cancellation noise.
fn cancel_sum(a: &Poly, b: &Poly) -> Poly {
    let s = a.add(b);
    let scale = a.max_abs_coeff().max(b.max_abs_coeff());
    if s.max_abs_coeff() <= CANCEL_REL * scale {
        Poly::zero()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn horner_matches_expansion() {
        let p = Poly::new(vec![c(1.0), c(-2.0), c(3.0)]);
        let x = C64::new(0.3, -0.7);
        assert!((p.eval(x) - (c(1.0) - c(2.0) * x + c(3.0) * x * x)).norm() < 1e-15);
    }

    #[test]
    fn rational_cancels_self_quotient() {
        let r = Rational::new(Poly::linear(c(1.0), c(2.0)), Poly::constant(c(1.0)));
        let q = r.mul(&r.inv());
        assert_eq!(q.as_constant(), Some(c(1.0)));
        assert!(r.sub(&r).is_zero());
    }

    #[test]
    fn deviation_bound_dominates_samples() {
        let r = Rational::new(Poly::linear(c(0.5), c(1.0)), Poly::linear(c(1.0), c(-0.3)));
        for k in 1..50 {
            let s = 0.9f64.powi(k);
            let x = C64::new(0.0, s);
            assert!((r.eval(x) - r.value_at_zero()).norm() <= r.deviation_bound(s) + 1e-15);
        }
    }

    #[test]
    fn roots_of_quadratic() {
        let p = Poly::new(vec![c(2.0), c(-3.0), c(1.0)]);
        let mut r: Vec<f64> = p.roots().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12);
    }
}
