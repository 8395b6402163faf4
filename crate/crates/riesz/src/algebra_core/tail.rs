//! Closed-form tail rules for diagonal lanes.
//!
//! A rule is a rational map applied to a base sequence `beta(n)`:
//! `rho^n` (geometric), `n^-gamma` (power), a deterministic dense sweep of a
//! region, or the constant 0. Arithmetic between rules sharing a base (up to
//! integer powers) stays exact; anything else is `TailNotClosed`.

use std::f64::consts::TAU;

use super::poly::{Poly, Rational};
use super::region::Region;
use crate::error::Error;
use crate::C64;

const R2_A1: f64 = 0.754_877_666_246_692_7;
const R2_A2: f64 = 0.569_840_290_998_053_2;
const MAX_POWER_LINK: usize = 12;

/// Base sequence of a tail rule.
#[derive(Clone, Debug, PartialEq)]
pub enum Base {
    Constant,
    Geometric { ratio: C64 },
    Power { exponent: f64 },
    /// Dense low-discrepancy sweep of `region`; `conj` flips every sample.
    Dense { region: Region, seed: u64, conj: bool },
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// Two-dimensional R2 sequence, shifted by the seed.
fn dense_params(seed: u64, n: u64) -> (f64, f64) {
    let s = (seed % 1_000_003) as f64;
    let n = n as f64;
    (frac(0.5 + s * 0.618_033_988_749_894_9 + n * R2_A1), frac(0.5 + s * 0.414_213_562_373_095 + n * R2_A2))
}

/// The `n`-th sample of a dense sweep of `region`.
pub fn dense_sample(region: &Region, seed: u64, n: u64) -> C64 {
    let (u, v) = dense_params(seed, n);
    match region {
        Region::Point(z) => *z,
        Region::Segment(a, b) => a + (b - a) * u,
        Region::Circle { center, radius } => center + C64::from_polar(*radius, TAU * u),
        Region::Disc { center, radius } => center + C64::from_polar(radius * v.sqrt(), TAU * u),
        Region::Image { base, map } => map.eval(dense_sample(base, seed, n)),
    }
}

impl Base {
    pub fn beta(&self, n: u64) -> C64 {
        match self {
            Base::Constant => C64::new(0.0, 0.0),
            Base::Geometric { ratio } => {
                if n <= u32::MAX as u64 {
                    ratio.powu(n as u32)
                } else {
                    ratio.powf(n as f64)
                }
            }
            Base::Power { exponent } => C64::new((n as f64).powf(-exponent), 0.0),
            Base::Dense { region, seed, conj } => {
                let z = dense_sample(region, *seed, n);
                if *conj {
                    z.conj()
                } else {
                    z
                }
            }
        }
    }

    /// Bound on `|beta(m)|` for all `m >= n`; only meaningful for sequence bases.
    pub fn beta_bound(&self, n: u64) -> f64 {
        match self {
            Base::Geometric { ratio } => ratio.norm().powf(n as f64),
            Base::Power { exponent } => (n.max(1) as f64).powf(-exponent),
            Base::Constant => 0.0,
            Base::Dense { .. } => f64::INFINITY,
        }
    }

    /// Smallest `n >= from` with `beta_bound(n) <= s`.
    fn index_for_bound(&self, from: u64, s: f64) -> u64 {
        let n = match self {
            Base::Geometric { ratio } => {
                let q = ratio.norm();
                if s >= 1.0 {
                    0.0
                } else {
                    (s.ln() / q.ln()).ceil()
                }
            }
            Base::Power { exponent } => s.powf(-1.0 / exponent).ceil(),
            _ => 0.0,
        };
        let n = if n.is_finite() { n.min(1e15) as u64 } else { u64::MAX / 2 };
        n.max(from)
    }

    fn region(&self) -> Option<Region> {
        match self {
            Base::Dense { region, conj, .. } => Some(if *conj { region.conj() } else { region.clone() }),
            _ => None,
        }
    }

    fn conj(&self) -> Base {
        match self {
            Base::Constant => Base::Constant,
            Base::Geometric { ratio } => Base::Geometric { ratio: ratio.conj() },
            Base::Power { exponent } => Base::Power { exponent: *exponent },
            Base::Dense { region, seed, conj } => Base::Dense { region: region.clone(), seed: *seed, conj: !conj },
        }
    }
}

/// Tail of a lane: `value(n) = map(beta(n))` at absolute 1-based index `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailRule {
    base: Base,
    map: Rational,
}

/// Shape of a rule for reporting and serialization.
#[derive(Clone, Debug, PartialEq)]
pub enum TailShape {
    Zero,
    Constant(C64),
    Geometric { c: C64, alpha: C64, ratio: C64 },
    Power { c: C64, alpha: C64, exponent: f64 },
    Dense { region: Region, seed: u64 },
    Rational,
}

fn approx_eq(a: C64, b: C64) -> bool {
    (a - b).norm() <= 1e-14 * (1.0 + a.norm().max(b.norm()))
}

impl TailRule {
    pub fn zero() -> Self {
        TailRule::constant(C64::new(0.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        TailRule { base: Base::Constant, map: Rational::constant(c) }
    }

    /// `c + alpha rho^n`.
    pub fn geometric(c: C64, alpha: C64, ratio: C64) -> Result<Self, Error> {
        if !(ratio.norm() < 1.0) {
            return Err(Error::InvalidTail(format!("geometric ratio {ratio} must satisfy |ratio| < 1")));
        }
        Ok(TailRule::from_parts(Base::Geometric { ratio }, Rational::from_poly(Poly::linear(c, alpha))))
    }

    /// `c + alpha / n^gamma`.
    pub fn power(c: C64, alpha: C64, exponent: f64) -> Result<Self, Error> {
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::InvalidTail(format!("power exponent {exponent} must be positive")));
        }
        Ok(TailRule::from_parts(Base::Power { exponent }, Rational::from_poly(Poly::linear(c, alpha))))
    }

    /// Dense sweep of `region`; its values are dense in the region.
    pub fn dense(region: Region, seed: u64) -> Self {
        TailRule::from_parts(Base::Dense { region, seed, conj: false }, Rational::identity())
    }

    /// Builds a rule from a base and map, normalising degenerate cases.
    pub fn from_parts(base: Base, map: Rational) -> Self {
        if let Some(c) = map.as_constant() {
            return TailRule::constant(c);
        }
        match &base {
            Base::Constant => TailRule::constant(map.value_at_zero()),
            Base::Geometric { ratio } if ratio.norm() == 0.0 => TailRule::constant(map.value_at_zero()),
            Base::Dense { region: Region::Point(z), conj, .. } => {
                let z = if *conj { z.conj() } else { *z };
                TailRule::constant(map.eval(z))
            }
            _ => TailRule { base, map },
        }
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn map(&self) -> &Rational {
        &self.map
    }

    pub fn value(&self, n: u64) -> C64 {
        match self.base {
            Base::Constant => self.map.value_at_zero(),
            _ => self.map.eval(self.base.beta(n)),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.base, Base::Constant)
    }

    pub fn as_constant(&self) -> Option<C64> {
        self.is_constant().then(|| self.map.value_at_zero())
    }

    /// Geometric or power rule: a genuine sequence converging to its limit.
    pub fn is_sequence(&self) -> bool {
        matches!(self.base, Base::Geometric { .. } | Base::Power { .. })
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.base, Base::Dense { .. })
    }

    /// Limit-point set of the tail.
    pub fn limit_set(&self) -> Region {
        match &self.base {
            Base::Dense { .. } => self.base.region().expect("dense base").map(&self.map),
            _ => Region::Point(self.map.value_at_zero()),
        }
    }

    /// Limit of a non-dense rule.
    pub fn limit(&self) -> Option<C64> {
        (!self.is_dense()).then(|| self.map.value_at_zero())
    }

    /// Bound on `|value(m) - limit|` for all `m >= n` (sequence rules).
    pub fn deviation_bound(&self, n: u64) -> f64 {
        match self.base {
            Base::Constant => 0.0,
            Base::Dense { .. } => f64::INFINITY,
            _ => self.map.deviation_bound(self.base.beta_bound(n)),
        }
    }

    /// Smallest `n >= from` after which every value lies within `delta` of the limit.
    pub fn settle_index(&self, from: u64, delta: f64) -> u64 {
        if !self.is_sequence() {
            return from;
        }
        if self.deviation_bound(from) <= delta {
            return from;
        }
        // Bisect on the base modulus; the deviation bound is monotone in it.
        let (mut lo, mut hi) = (0.0f64, self.base.beta_bound(from).min(1.0));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.map.deviation_bound(mid) <= delta {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut n = self.base.index_for_bound(from, lo);
        while n > from && self.deviation_bound(n - 1) <= delta {
            n -= 1;
        }
        while self.deviation_bound(n) > delta {
            n += 1;
        }
        n
    }

    /// Supremum of `|value(n)|` over `n >= from`.
    pub fn sup_abs(&self, from: u64) -> f64 {
        match &self.base {
            Base::Constant => self.map.value_at_zero().norm(),
            Base::Dense { .. } => self.limit_set().max_abs(),
            _ => self.extremal_abs(from, true),
        }
    }

    /// Infimum of `|value(n)|` over `n >= from`; zero when the tail can vanish.
    pub fn inf_abs(&self, from: u64) -> f64 {
        match &self.base {
            Base::Constant => self.map.value_at_zero().norm(),
            Base::Dense { .. } => self.limit_set().distance(C64::new(0.0, 0.0)),
            _ => self.extremal_abs(from, false),
        }
    }

    /// Sup (or inf) of the modulus along a sequence rule.
    ///
    /// Values are enumerated until the deviation bound shows that no later
    /// value can beat the current extreme. When every value so far sits on
    /// the limit's side, a first-order expansion of `|R(x)|^2` near `x = 0`
    /// certifies that the limit modulus is the answer.
    fn extremal_abs(&self, from: u64, want_max: bool) -> f64 {
        const CAP: u64 = 1 << 20;
        let lim_z = self.map.value_at_zero();
        let lim = lim_z.norm();
        if lim.is_nan() {
            return if want_max { f64::INFINITY } else { 0.0 };
        }
        let real_base = match self.base {
            Base::Power { .. } => true,
            Base::Geometric { ratio } => ratio.im == 0.0 && ratio.re > 0.0,
            _ => false,
        };
        let q = self.map.difference_quotient();
        let q0 = q.value_at_zero();
        let drift = 2.0 * (lim_z.conj() * q0).re;
        let mut best = lim;
        for n in from..from + CAP {
            let dev = self.deviation_bound(n);
            let settled = if want_max { lim + dev <= best } else { lim - dev >= best };
            if settled || dev == 0.0 {
                return best;
            }
            if real_base && best == lim && dev.is_finite() {
                let s = self.base.beta_bound(n);
                let dq = q.deviation_bound(s);
                let certified = if want_max {
                    drift + 2.0 * lim * dq + s * (q0.norm() + dq).powi(2) <= 0.0
                } else {
                    drift - 2.0 * lim * dq >= 0.0
                };
                if certified {
                    return best;
                }
            }
            let v = self.value(n).norm();
            if v.is_nan() {
                return if want_max { f64::INFINITY } else { 0.0 };
            }
            best = if want_max { best.max(v) } else { best.min(v) };
        }
        best
    }

    pub fn conj(&self) -> TailRule {
        TailRule { base: self.base.conj(), map: self.map.conj() }
    }

    pub fn scale(&self, s: C64) -> TailRule {
        TailRule::from_parts(self.base.clone(), self.map.scale(s))
    }

    pub fn add(&self, other: &TailRule) -> Result<TailRule, Error> {
        let (base, a, b) = unify(self, other)?;
        Ok(TailRule::from_parts(base, a.add(&b)))
    }

    pub fn sub(&self, other: &TailRule) -> Result<TailRule, Error> {
        let (base, a, b) = unify(self, other)?;
        Ok(TailRule::from_parts(base, a.sub(&b)))
    }

    pub fn mul(&self, other: &TailRule) -> Result<TailRule, Error> {
        let (base, a, b) = unify(self, other)?;
        Ok(TailRule::from_parts(base, a.mul(&b)))
    }

    /// Pointwise reciprocal; the caller has checked that no value vanishes.
    pub fn reciprocal(&self) -> TailRule {
        TailRule::from_parts(self.base.clone(), self.map.inv())
    }

    /// Applies a polynomial pointwise.
    pub fn apply_poly(&self, p: &Poly) -> TailRule {
        TailRule::from_parts(self.base.clone(), self.map.apply_poly(p))
    }

    pub fn shape(&self) -> TailShape {
        match &self.base {
            Base::Constant => {
                let c = self.map.value_at_zero();
                if c == C64::new(0.0, 0.0) {
                    TailShape::Zero
                } else {
                    TailShape::Constant(c)
                }
            }
            Base::Geometric { ratio } => match monomial(&self.map) {
                Some((c, alpha, k)) => TailShape::Geometric { c, alpha, ratio: ratio.powu(k as u32) },
                None => TailShape::Rational,
            },
            Base::Power { exponent } => match monomial(&self.map) {
                Some((c, alpha, k)) => TailShape::Power { c, alpha, exponent: exponent * k as f64 },
                None => TailShape::Rational,
            },
            Base::Dense { region, seed, conj } => {
                if !conj && self.map == Rational::identity() {
                    TailShape::Dense { region: region.clone(), seed: *seed }
                } else {
                    TailShape::Rational
                }
            }
        }
    }

    /// True when both rules agree to relative accuracy `tol` in every parameter.
    pub fn approx_eq(&self, other: &TailRule, tol: f64) -> bool {
        if self.base != other.base {
            return false;
        }
        match (self.as_constant(), other.as_constant()) {
            (Some(a), Some(b)) => return (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm())),
            (None, None) => {}
            _ => return false,
        }
        let diff = self.map.sub(&other.map);
        diff.is_zero() || diff.num().max_abs_coeff() <= tol * (1.0 + self.map.num().max_abs_coeff())
    }
}

/// Splits `c + alpha x^k` into `(c, alpha, k)`.
fn monomial(map: &Rational) -> Option<(C64, C64, usize)> {
    if map.den().degree() != 0 {
        return None;
    }
    let d = map.den().coeff(0);
    let num = map.num().coeffs();
    let mut terms = (1..num.len()).filter(|&i| num[i] != C64::new(0.0, 0.0));
    let k = terms.next()?;
    if terms.next().is_some() {
        return None;
    }
    Some((num[0] / d, num[k] / d, k))
}

/// Integer `k <= MAX_POWER_LINK` with `fine^k = coarse`, if any.
fn power_link(fine: &Base, coarse: &Base) -> Option<usize> {
    match (fine, coarse) {
        (Base::Geometric { ratio: r1 }, Base::Geometric { ratio: r2 }) => {
            (1..=MAX_POWER_LINK).find(|&k| approx_eq(r1.powu(k as u32), *r2))
        }
        (Base::Power { exponent: g1 }, Base::Power { exponent: g2 }) => {
            (1..=MAX_POWER_LINK).find(|&k| (g1 * k as f64 - g2).abs() <= 1e-14 * g2.abs())
        }
        (Base::Dense { .. }, Base::Dense { .. }) => (fine == coarse).then_some(1),
        _ => None,
    }
}

/// Expresses both rules over a common base.
fn unify(a: &TailRule, b: &TailRule) -> Result<(Base, Rational, Rational), Error> {
    if let Some(c) = a.as_constant() {
        return Ok((b.base.clone(), Rational::constant(c), b.map.clone()));
    }
    if let Some(c) = b.as_constant() {
        return Ok((a.base.clone(), a.map.clone(), Rational::constant(c)));
    }
    if let Some(k) = power_link(&a.base, &b.base) {
        return Ok((a.base.clone(), a.map.clone(), b.map.compose_power(k)));
    }
    if let Some(k) = power_link(&b.base, &a.base) {
        return Ok((b.base.clone(), a.map.compose_power(k), b.map.clone()));
    }
    Err(Error::TailNotClosed(format!("{:?} and {:?}", a.base, b.base)))
}
