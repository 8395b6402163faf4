//! Commutative algebra of bounded diagonal sequences split into lanes.
//!
//! Each lane is an explicit prefix followed by a closed-form tail; index `i`
//! (1-based) reads `prefix[i-1]` when `i <= prefix.len()`, otherwise
//! `tail.value(i)`. Prefix length is only a representation detail.

use super::poly::Poly;
use super::region::Region;
use super::tail::TailRule;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::C64;

#[derive(Clone, Debug, PartialEq)]
pub struct Lane {
    pub prefix: Vec<C64>,
    pub tail: TailRule,
}

impl Lane {
    pub fn new(prefix: Vec<C64>, tail: TailRule) -> Self {
        Lane { prefix, tail }.trimmed()
    }

    pub fn constant(c: C64) -> Self {
        Lane { prefix: Vec::new(), tail: TailRule::constant(c) }
    }

    /// Value at 1-based index `i`.
    pub fn value(&self, i: u64) -> C64 {
        let len = self.prefix.len() as u64;
        if i >= 1 && i <= len {
            self.prefix[(i - 1) as usize]
        } else {
            self.tail.value(i)
        }
    }

    /// First index governed by the tail.
    pub fn tail_start(&self) -> u64 {
        self.prefix.len() as u64 + 1
    }

    /// Same sequence with the prefix materialised up to `len`.
    pub fn extended(&self, len: usize) -> Lane {
        let mut prefix = self.prefix.clone();
        for i in prefix.len()..len {
            prefix.push(self.tail.value(i as u64 + 1));
        }
        Lane { prefix, tail: self.tail.clone() }
    }

    /// Drops trailing prefix entries that the tail reproduces exactly.
    fn trimmed(mut self) -> Lane {
        while let Some(last) = self.prefix.last() {
            if *last == self.tail.value(self.prefix.len() as u64) {
                self.prefix.pop();
            } else {
                break;
            }
        }
        self
    }

    fn zip(&self, other: &Lane, f: impl Fn(C64, C64) -> C64, g: impl Fn(&TailRule, &TailRule) -> Result<TailRule>) -> Result<Lane> {
        let len = self.prefix.len().max(other.prefix.len());
        let (a, b) = (self.extended(len), other.extended(len));
        let prefix = a.prefix.iter().zip(&b.prefix).map(|(x, y)| f(*x, *y)).collect();
        Ok(Lane { prefix, tail: g(&a.tail, &b.tail)? }.trimmed())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64, g: impl Fn(&TailRule) -> TailRule) -> Lane {
        Lane { prefix: self.prefix.iter().map(|z| f(*z)).collect(), tail: g(&self.tail) }.trimmed()
    }

    pub fn sup_abs(&self) -> f64 {
        let p = self.prefix.iter().map(|z| z.norm()).fold(0.0, f64::max);
        p.max(self.tail.sup_abs(self.tail_start()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalElement {
    lanes: Vec<Lane>,
}

impl DiagonalElement {
    pub fn new(lanes: Vec<Lane>) -> Result<Self> {
        if lanes.is_empty() {
            return Err(Error::InvalidElement("diagonal element needs at least one lane".into()));
        }
        for (i, l) in lanes.iter().enumerate() {
            if l.prefix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidElement(format!("lane {i} prefix has non-finite entries")));
            }
        }
        Ok(DiagonalElement { lanes: lanes.into_iter().map(Lane::trimmed).collect() })
    }

    pub fn scalar(lanes: usize, c: C64) -> Self {
        DiagonalElement { lanes: vec![Lane::constant(c); lanes] }
    }

    pub fn lanes(&self) -> &[Lane] {
        &self.lanes
    }

    pub fn lane_count(&self) -> usize {
        self.lanes.len()
    }

    pub fn value(&self, lane: usize, i: u64) -> C64 {
        self.lanes[lane].value(i)
    }

    fn check(&self, other: &DiagonalElement) -> Result<()> {
        if self.lanes.len() != other.lanes.len() {
            return Err(Error::LayoutMismatch(format!("{} lanes vs {} lanes", self.lanes.len(), other.lanes.len())));
        }
        Ok(())
    }

    fn zip(
        &self,
        other: &DiagonalElement,
        f: impl Fn(C64, C64) -> C64 + Copy,
        g: impl Fn(&TailRule, &TailRule) -> Result<TailRule> + Copy,
    ) -> Result<Self> {
        self.check(other)?;
        let lanes = self.lanes.iter().zip(&other.lanes).map(|(a, b)| a.zip(b, f, g)).collect::<Result<_>>()?;
        Ok(DiagonalElement { lanes })
    }

    pub fn map_lanes(&self, f: impl Fn(&Lane) -> Lane) -> Self {
        DiagonalElement { lanes: self.lanes.iter().map(f).collect() }
    }

    pub fn add(&self, other: &DiagonalElement) -> Result<Self> {
        self.zip(other, |a, b| a + b, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &DiagonalElement) -> Result<Self> {
        self.zip(other, |a, b| a - b, |a, b| a.sub(b))
    }

    pub fn mul(&self, other: &DiagonalElement) -> Result<Self> {
        self.zip(other, |a, b| a * b, |a, b| a.mul(b))
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map_lanes(|l| l.map(|z| z * s, |t| t.scale(s)))
    }

    pub fn adjoint(&self) -> Self {
        self.map_lanes(|l| l.map(|z| z.conj(), |t| t.conj()))
    }

    /// Applies a polynomial pointwise.
    pub fn apply_poly(&self, p: &Poly) -> Self {
        self.map_lanes(|l| l.map(|z| p.eval(z), |t| t.apply_poly(p)))
    }

    /// Exact sup-norm.
    pub fn norm(&self) -> f64 {
        self.lanes.iter().map(Lane::sup_abs).fold(0.0, f64::max)
    }

    /// Every lane's limit set is `{0}` up to `tol`.
    pub fn in_ideal(&self, tol: f64) -> bool {
        self.lanes.iter().all(|l| matches!(l.tail.limit_set(), Region::Point(z) if z.norm() <= tol))
    }

    pub fn limit_sets(&self) -> Vec<Region> {
        self.lanes.iter().map(|l| l.tail.limit_set()).collect()
    }

    /// Pointwise reciprocal, refusing values within the invertibility threshold of 0.
    pub fn invert(&self, cfg: &Config) -> Result<Self> {
        let threshold = cfg.tol_inv(self.norm());
        let mut lanes = Vec::with_capacity(self.lanes.len());
        for (k, l) in self.lanes.iter().enumerate() {
            if let Some(i) = l.prefix.iter().position(|z| z.norm() <= threshold) {
                return Err(Error::NotInvertible { witness: format!("lane {k}, index {}: |value| = {:e}", i + 1, l.prefix[i].norm()) });
            }
            let inf = l.tail.inf_abs(l.tail_start());
            if inf <= threshold {
                return Err(Error::NotInvertible { witness: format!("lane {k} tail: inf |value| <= {inf:e}") });
            }
            lanes.push(l.map(|z| z.inv(), |t| t.reciprocal()));
        }
        Ok(DiagonalElement { lanes })
    }

    /// Largest prefix length over the lanes.
    pub fn max_prefix(&self) -> usize {
        self.lanes.iter().map(|l| l.prefix.len()).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn prefixes_align_automatically() {
        let a = DiagonalElement::new(vec![Lane::new(vec![c(1.0), c(2.0)], TailRule::constant(c(1.0)))]).unwrap();
        let b = DiagonalElement::new(vec![Lane::new(vec![c(5.0)], TailRule::constant(c(0.0)))]).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.value(0, 1), c(6.0));
        assert_eq!(s.value(0, 2), c(2.0));
        assert_eq!(s.value(0, 9), c(1.0));
    }

    #[test]
    fn lane_count_mismatch() {
        let a = DiagonalElement::scalar(1, c(1.0));
        let b = DiagonalElement::scalar(2, c(1.0));
        assert!(matches!(a.add(&b), Err(Error::LayoutMismatch(_))));
    }

    #[test]
    fn invert_prefix_and_constant_tail() {
        let a = DiagonalElement::new(vec![Lane::new(vec![c(1.0), c(0.5), c(1.0 / 3.0)], TailRule::constant(c(1.0)))]).unwrap();
        let b = a.invert(&Config::default()).unwrap();
        for (i, want) in [(1, 1.0), (2, 2.0), (3, 3.0), (4, 1.0), (50, 1.0)] {
            assert!((b.value(0, i) - c(want)).norm() < 1e-14);
        }
    }

    #[test]
    fn harmonic_tail_is_not_invertible() {
        let a = DiagonalElement::new(vec![Lane::new(vec![], TailRule::power(c(0.0), c(1.0), 1.0).unwrap())]).unwrap();
        assert!(matches!(a.invert(&Config::default()), Err(Error::NotInvertible { .. })));
        assert!((a.norm() - 1.0).abs() < 1e-15);
        assert!(a.in_ideal(0.0));
    }
}
