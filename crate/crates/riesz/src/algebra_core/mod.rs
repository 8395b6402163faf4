//! The two model algebras and the operations shared by both.

pub mod block;
pub mod diagonal;
pub mod poly;
pub mod region;
pub mod tail;

use nalgebra::DMatrix;

pub use block::{BlockElement, BlockLayout, BlockSpec};
pub use diagonal::{DiagonalElement, Lane};
pub use poly::{Poly, Rational};
pub use region::Region;
pub use tail::{Base, TailRule, TailShape};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::C64;

/// Element of one of the model algebras.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgebraElement {
    Block(BlockElement),
    Diagonal(DiagonalElement),
}

/// Image of an element under the quotient map onto the algebra modulo its ideal.
#[derive(Clone, Debug, PartialEq)]
pub enum QuotientElement {
    /// Non-ideal blocks.
    Block(Vec<DMatrix<C64>>),
    /// Limit-point set of each lane.
    Diagonal(Vec<Region>),
}

impl QuotientElement {
    pub fn is_zero(&self, tol: f64) -> bool {
        match self {
            QuotientElement::Block(ms) => ms.iter().all(|m| m.iter().all(|z| z.norm() <= tol)),
            QuotientElement::Diagonal(rs) => rs.iter().all(|r| matches!(r, Region::Point(z) if z.norm() <= tol)),
        }
    }
}

impl From<BlockElement> for AlgebraElement {
    fn from(b: BlockElement) -> Self {
        AlgebraElement::Block(b)
    }
}

impl From<DiagonalElement> for AlgebraElement {
    fn from(d: DiagonalElement) -> Self {
        AlgebraElement::Diagonal(d)
    }
}

fn backend_mismatch() -> Error {
    Error::LayoutMismatch("block and diagonal elements do not mix".into())
}

impl AlgebraElement {
    pub fn as_block(&self) -> Option<&BlockElement> {
        match self {
            AlgebraElement::Block(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_diagonal(&self) -> Option<&DiagonalElement> {
        match self {
            AlgebraElement::Diagonal(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_block(&self) -> bool {
        matches!(self, AlgebraElement::Block(_))
    }

    /// `c` times the unit of the same algebra.
    pub fn scalar_like(&self, c: C64) -> Self {
        match self {
            AlgebraElement::Block(b) => BlockElement::scalar(b.layout(), c).into(),
            AlgebraElement::Diagonal(d) => DiagonalElement::scalar(d.lane_count(), c).into(),
        }
    }

    pub fn unit(&self) -> Self {
        self.scalar_like(C64::new(1.0, 0.0))
    }

    pub fn zero(&self) -> Self {
        self.scalar_like(C64::new(0.0, 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (AlgebraElement::Block(a), AlgebraElement::Block(b)) => Ok(a.add(b)?.into()),
            (AlgebraElement::Diagonal(a), AlgebraElement::Diagonal(b)) => Ok(a.add(b)?.into()),
            _ => Err(backend_mismatch()),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (AlgebraElement::Block(a), AlgebraElement::Block(b)) => Ok(a.sub(b)?.into()),
            (AlgebraElement::Diagonal(a), AlgebraElement::Diagonal(b)) => Ok(a.sub(b)?.into()),
            _ => Err(backend_mismatch()),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (AlgebraElement::Block(a), AlgebraElement::Block(b)) => Ok(a.mul(b)?.into()),
            (AlgebraElement::Diagonal(a), AlgebraElement::Diagonal(b)) => Ok(a.mul(b)?.into()),
            _ => Err(backend_mismatch()),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        match self {
            AlgebraElement::Block(a) => a.scale(s).into(),
            AlgebraElement::Diagonal(a) => a.scale(s).into(),
        }
    }

    /// `self + c·1`.
    pub fn shift(&self, c: C64) -> Self {
        self.add(&self.scalar_like(c)).expect("scalars combine with every element")
    }

    /// `c·1 - self`.
    pub fn shifted_neg(&self, c: C64) -> Self {
        self.scale(C64::new(-1.0, 0.0)).shift(c)
    }

    pub fn adjoint(&self) -> Self {
        match self {
            AlgebraElement::Block(a) => a.adjoint().into(),
            AlgebraElement::Diagonal(a) => a.adjoint().into(),
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            AlgebraElement::Block(a) => a.norm(),
            AlgebraElement::Diagonal(a) => a.norm(),
        }
    }

    pub fn invert(&self, cfg: &Config) -> Result<Self> {
        match self {
            AlgebraElement::Block(a) => Ok(a.invert(cfg)?.into()),
            AlgebraElement::Diagonal(a) => Ok(a.invert(cfg)?.into()),
        }
    }

    /// Membership in the designated ideal.
    pub fn in_ideal(&self, tol: f64) -> bool {
        match self {
            AlgebraElement::Block(a) => a.in_ideal() || a.quotient_blocks().iter().all(|m| m.iter().all(|z| z.norm() <= tol)),
            AlgebraElement::Diagonal(a) => a.in_ideal(tol),
        }
    }

    pub fn quotient_project(&self) -> QuotientElement {
        match self {
            AlgebraElement::Block(a) => QuotientElement::Block(a.quotient_blocks()),
            AlgebraElement::Diagonal(a) => QuotientElement::Diagonal(a.limit_sets()),
        }
    }

    /// Spectral radius from eigenvalues or value sets.
    pub fn spectral_radius(&self) -> f64 {
        match self {
            AlgebraElement::Block(a) => {
                a.blocks().iter().flat_map(block::eigenvalues).map(|z| z.norm()).fold(0.0, f64::max)
            }
            // Sup of the value-set closure, which for diagonal sequences is the sup-norm.
            AlgebraElement::Diagonal(a) => a.norm(),
        }
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut result = self.unit();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Evaluates a polynomial (ascending coefficients) at the element.
    pub fn horner(&self, coeffs: &[C64]) -> Result<Self> {
        match self {
            AlgebraElement::Diagonal(d) => Ok(d.apply_poly(&Poly::new(coeffs.to_vec())).into()),
            AlgebraElement::Block(_) => {
                let mut acc = self.zero();
                for c in coeffs.iter().rev() {
                    acc = acc.mul(self)?.shift(*c);
                }
                Ok(acc)
            }
        }
    }

    /// `‖self - other‖`.
    pub fn dist(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    /// `‖p² - p‖`.
    pub fn idempotent_residual(&self) -> Result<f64> {
        self.dist(&self.mul(self)?)
    }

    /// `‖ab - ba‖`.
    pub fn commutator(&self, other: &Self) -> Result<f64> {
        self.mul(other)?.dist(&other.mul(self)?)
    }

    /// Splits `a` along a commuting idempotent into `(ap, a(1-p))`.
    pub fn pierce_corner(&self, p: &Self, cfg: &Config) -> Result<(Self, Self)> {
        let r = p.idempotent_residual()?;
        if r > cfg.tol {
            return Err(Error::NotIdempotent(r));
        }
        let c = self.commutator(p)?;
        if c > cfg.tol * (1.0 + self.norm()) {
            return Err(Error::NotCommuting(c));
        }
        let q = p.shifted_neg(C64::new(1.0, 0.0));
        Ok((self.mul(p)?, self.mul(&q)?))
    }

    /// Invertibility of `self` inside the corner algebra with unit `p`: `self + (1 - p)` is invertible.
    pub fn corner_invert(&self, p: &Self, cfg: &Config) -> Result<Self> {
        let q = p.shifted_neg(C64::new(1.0, 0.0));
        let inv = self.add(&q)?.invert(cfg)?;
        inv.mul(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn e1() -> AlgebraElement {
        let layout = BlockLayout::new(vec![BlockSpec { dim: 2, ideal: true }, BlockSpec { dim: 2, ideal: false }]).unwrap();
        let n = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        let two = DMatrix::from_diagonal_element(2, 2, c(2.0));
        BlockElement::new(layout, vec![n, two]).unwrap().into()
    }

    #[test]
    fn nilpotent_squares_to_zero() {
        let a = e1();
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.as_block().unwrap().blocks()[0], DMatrix::zeros(2, 2));
    }

    #[test]
    fn quotient_drops_ideal_blocks() {
        match e1().quotient_project() {
            QuotientElement::Block(ms) => {
                assert_eq!(ms.len(), 1);
                assert_eq!(ms[0], DMatrix::from_diagonal_element(2, 2, c(2.0)));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn pierce_corner_of_e1() {
        let a = e1();
        let layout = a.as_block().unwrap().layout().clone();
        let p: AlgebraElement =
            BlockElement::new(layout, vec![DMatrix::identity(2, 2), DMatrix::zeros(2, 2)]).unwrap().into();
        let (ap, aq) = a.pierce_corner(&p, &Config::default()).unwrap();
        assert_eq!(ap.as_block().unwrap().blocks()[1], DMatrix::zeros(2, 2));
        assert_eq!(aq.as_block().unwrap().blocks()[0], DMatrix::zeros(2, 2));
    }

    #[test]
    fn adjoint_of_i_unit() {
        let u = e1().unit().scale(C64::new(0.0, 1.0));
        assert_eq!(u.adjoint(), u.scale(c(-1.0)));
    }

    #[test]
    fn horner_matches_powers() {
        let a = e1();
        let h = a.horner(&[c(1.0), c(0.0), c(2.0)]).unwrap();
        let direct = a.pow(2).unwrap().scale(c(2.0)).shift(c(1.0));
        assert!(h.dist(&direct).unwrap() < 1e-14);
    }
}
