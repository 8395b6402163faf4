//! Seeded random elements for property suites.
//!
//! Every generator is deterministic in its seed. Block elements plant their
//! eigenvalues: ideal blocks stay upper triangular (so nilpotent parts are exact),
//! non-ideal blocks are unitarily rotated and only carry diagonalizable zeros.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra_core::{AlgebraElement, BlockElement, BlockLayout, BlockSpec, DiagonalElement, Lane, Region, TailRule};
use crate::error::{Error, Result};
use crate::spectra::SpectralSet;
use crate::C64;

/// Minimum separation between distinct planted eigenvalues.
const SEPARATION: f64 = 0.1;
/// Attempts before a rejection sampler gives up.
const MAX_ATTEMPTS: usize = 1000;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Seed of trial `trial` under master seed `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(trial);
    r.next_u64()
}

/// Which family a generated element was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Block,
    Diagonal,
    /// Diagonal with a dense lane whose limit set passes through 0.
    Obstruction,
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub element: AlgebraElement,
    pub family: Family,
}

impl Sample {
    /// Whether the family guarantees generalized Drazin-Riesz invertibility.
    pub fn expected_gdr(&self) -> bool {
        self.family != Family::Obstruction
    }
}

/// Element with a target part of its spectrum separated from the rest.
#[derive(Clone, Debug)]
pub struct PlantedGap {
    pub element: AlgebraElement,
    pub target: SpectralSet,
    /// Planted distance between the target and the rest of the spectrum.
    pub gap: f64,
}

/// Commuting `a, b, v, w` with `av + bw = 1`.
#[derive(Clone, Debug)]
pub struct Bezout {
    pub a: AlgebraElement,
    pub b: AlgebraElement,
    pub v: AlgebraElement,
    pub w: AlgebraElement,
}

/// Role of one lane or block in a Bézout tuple.
#[derive(Clone, Copy, PartialEq)]
enum Side {
    A,
    B,
}

pub struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn for_trial(seed: u64, trial: u64) -> Self {
        Generator::new(trial_seed(seed, trial))
    }

    /// Uniform integer in `lo..=hi`.
    pub fn exponent(&mut self, lo: u32, hi: u32) -> u32 {
        self.rng.gen_range(lo..=hi)
    }

    /// Uniform point of the annulus `lo ≤ |z| < hi`.
    pub fn annulus(&mut self, lo: f64, hi: f64) -> C64 {
        self.polar(lo, hi)
    }

    /// Uniform angle in `[0, 2π)`.
    pub fn angle(&mut self) -> f64 {
        self.uniform(0.0, TAU)
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn polar(&mut self, lo: f64, hi: f64) -> C64 {
        let r = self.uniform(lo, hi);
        let t = self.uniform(0.0, TAU);
        C64::from_polar(r, t)
    }

    fn entry(&mut self, scale: f64) -> C64 {
        C64::new(self.uniform(-scale, scale), self.uniform(-scale, scale))
    }

    /// `k` values of modulus in `[lo, hi]`, pairwise and from `taken` at least `SEPARATION` apart.
    fn separated(&mut self, k: usize, lo: f64, hi: f64, taken: &mut Vec<C64>) -> Vec<C64> {
        let mut out = Vec::with_capacity(k);
        let mut attempts = 0;
        while out.len() < k && attempts < MAX_ATTEMPTS {
            attempts += 1;
            let z = self.polar(lo, hi);
            if taken.iter().all(|t| (t - z).norm() >= SEPARATION) {
                taken.push(z);
                out.push(z);
            }
        }
        out
    }

    fn unitary(&mut self, n: usize) -> DMatrix<C64> {
        let m = DMatrix::from_fn(n, n, |_, _| C64::new(0.0, 0.0));
        let m = m.map(|_| self.entry(1.0));
        m.qr().q()
    }

    /// Matrix with eigenvalues `eigs`; off-diagonal coupling between two zeros only when `ideal`.
    fn planted_matrix(&mut self, eigs: &[C64], ideal: bool, coupling: f64) -> DMatrix<C64> {
        let n = eigs.len();
        let mut t = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(eigs));
        for i in 0..n {
            for j in i + 1..n {
                let both_zero = eigs[i].norm() == 0.0 && eigs[j].norm() == 0.0;
                if ideal || !both_zero {
                    t[(i, j)] = self.entry(coupling);
                }
            }
        }
        if ideal || n == 1 {
            return t;
        }
        let q = self.unitary(n);
        &q * t * q.adjoint()
    }

    fn layout(&mut self, max_blocks: usize, max_dim: usize) -> BlockLayout {
        let k = self.rng.gen_range(1..=max_blocks);
        let mut specs: Vec<BlockSpec> = (0..k).map(|_| BlockSpec { dim: self.rng.gen_range(1..=max_dim), ideal: self.chance(0.5) }).collect();
        if specs.iter().all(|s| s.ideal) {
            let i = self.rng.gen_range(0..k);
            specs[i].ideal = false;
        }
        BlockLayout::new(specs).expect("layout has a non-ideal block")
    }

    /// Block element whose nonzero eigenvalues have modulus in `[lo, hi]`.
    fn block_with(&mut self, zero_chance: f64, lo: f64, hi: f64) -> AlgebraElement {
        let layout = self.layout(3, 4);
        let mut taken = Vec::new();
        let mats = layout
            .blocks()
            .iter()
            .map(|spec| {
                let eigs: Vec<C64> = (0..spec.dim)
                    .map(|_| {
                        if self.chance(zero_chance) {
                            return c(0.0);
                        }
                        self.separated(1, lo, hi, &mut taken).first().copied().unwrap_or(c(0.0))
                    })
                    .collect();
                self.planted_matrix(&eigs, spec.ideal, 0.3)
            })
            .collect();
        BlockElement::new(layout, mats).expect("planted blocks fit the layout").into()
    }

    /// Block element; every block element is generalized Drazin-Riesz invertible.
    pub fn gdr_block(&mut self) -> AlgebraElement {
        self.block_with(0.3, 0.3, 2.0)
    }

    fn prefix(&mut self, max_len: usize, lo: f64, hi: f64) -> Vec<C64> {
        let len = self.rng.gen_range(0..=max_len);
        (0..len).map(|_| if self.chance(0.25) { c(0.0) } else { self.polar(lo, hi) }).collect()
    }

    /// Tail converging to 0 with values of modulus at most `scale`.
    fn vanishing_tail(&mut self, lo: f64, scale: f64) -> TailRule {
        self.vanishing_tail_from(lo, scale, 1)
    }

    /// Like `vanishing_tail`, with the first value at index `start` of modulus in `[lo, scale]`.
    fn vanishing_tail_from(&mut self, lo: f64, scale: f64, start: usize) -> TailRule {
        let alpha = self.polar(lo, scale);
        let start = start.max(1);
        if self.chance(0.5) {
            TailRule::power(c(0.0), alpha * start as f64, 1.0).expect("positive exponent")
        } else {
            let ratio = self.uniform(0.2, 0.5);
            TailRule::geometric(c(0.0), alpha / ratio.powi(start as i32), c(ratio)).expect("ratio below 1")
        }
    }

    /// Tail with values of modulus in about `[lo, hi]`, away from 0.
    fn invertible_tail(&mut self, lo: f64, hi: f64) -> TailRule {
        let base = self.polar(lo + 0.1, hi);
        if self.chance(0.4) {
            return TailRule::constant(base);
        }
        let ratio = C64::from_polar(self.uniform(0.2, 0.5), self.uniform(0.0, TAU));
        let alpha = self.polar(0.01, 0.1) / ratio;
        TailRule::geometric(base, alpha, ratio).expect("ratio below 1")
    }

    fn dense_away(&mut self, lo: f64) -> TailRule {
        let seed = self.rng.next_u64() % 1_000_003;
        let r = self.uniform(0.1, 0.4);
        let center = self.polar(lo + r, lo + r + 1.0);
        let region = if self.chance(0.5) { Region::circle(center, r) } else { Region::disc(center, r) };
        TailRule::dense(region, seed)
    }

    /// Diagonal element whose accumulation points stay away from 0.
    pub fn gdr_diagonal(&mut self) -> AlgebraElement {
        let lanes = self.rng.gen_range(1..=3);
        let zero_lane = if self.chance(0.7) { Some(self.rng.gen_range(0..lanes)) } else { None };
        let lanes: Vec<Lane> = (0..lanes)
            .map(|k| {
                let prefix = self.prefix(3, 0.3, 2.0);
                let tail = if zero_lane == Some(k) {
                    self.vanishing_tail(0.2, 1.0)
                } else if self.chance(0.15) {
                    self.dense_away(0.5)
                } else {
                    self.invertible_tail(0.5, 2.0)
                };
                Lane::new(prefix, tail)
            })
            .collect();
        DiagonalElement::new(lanes).expect("lanes are valid").into()
    }

    /// Dense limit set through 0: circle, segment or disc.
    fn obstruction_tail(&mut self) -> TailRule {
        let seed = self.rng.next_u64() % 1_000_003;
        let region = match self.rng.gen_range(0..5) {
            0 => Region::circle(c(1.0), 1.0),
            1 => {
                let center = self.polar(0.3, 1.5);
                Region::circle(center, center.norm())
            }
            2 => {
                let u = self.polar(0.2, 1.0);
                Region::Segment(-u, u)
            }
            3 => Region::Segment(c(0.0), self.polar(0.2, 1.0)),
            _ => {
                let r = self.uniform(0.3, 1.0);
                Region::disc(self.polar(0.0, 0.8 * r), r)
            }
        };
        TailRule::dense(region, seed)
    }

    /// Diagonal element with 0 in the accumulation of its Browder spectrum.
    pub fn non_gdr(&mut self) -> AlgebraElement {
        let lanes = self.rng.gen_range(1..=3);
        let obstruction = self.rng.gen_range(0..lanes);
        let lanes: Vec<Lane> = (0..lanes)
            .map(|k| {
                let prefix = self.prefix(2, 0.3, 2.0);
                let tail = if k == obstruction { self.obstruction_tail() } else { self.invertible_tail(0.5, 2.0) };
                Lane::new(prefix, tail)
            })
            .collect();
        DiagonalElement::new(lanes).expect("lanes are valid").into()
    }

    /// Mixture: 35% block, 30% diagonal, 35% obstruction.
    pub fn sample(&mut self) -> Sample {
        let u = self.uniform(0.0, 1.0);
        if u < 0.35 {
            Sample { element: self.gdr_block(), family: Family::Block }
        } else if u < 0.65 {
            Sample { element: self.gdr_diagonal(), family: Family::Diagonal }
        } else {
            Sample { element: self.non_gdr(), family: Family::Obstruction }
        }
    }

    /// Generalized Drazin-Riesz invertible element whose spectrum is `{0}`-like near 0
    /// (moduli below `0.2`) plus points and limits of modulus at least `0.8`.
    pub fn separated_element(&mut self) -> AlgebraElement {
        if self.chance(0.5) {
            return self.block_with(0.35, 0.8, 2.0);
        }
        let lanes = self.rng.gen_range(1..=3);
        let zero_lane = self.rng.gen_range(0..lanes);
        let lanes: Vec<Lane> = (0..lanes)
            .map(|k| {
                let mut prefix = self.prefix(3, 0.8, 2.0);
                let tail = if k == zero_lane {
                    prefix = vec![c(0.0); prefix.len()];
                    self.vanishing_tail_from(0.05, 0.2, prefix.len())
                } else {
                    self.invertible_tail(0.9, 2.0)
                };
                Lane::new(prefix, tail)
            })
            .collect();
        DiagonalElement::new(lanes).expect("lanes are valid").into()
    }

    /// Block element with a cluster of eigenvalues at distance at least `0.1` from the rest.
    pub fn planted_gap(&mut self) -> PlantedGap {
        let layout = self.layout(3, 4);
        let dim: usize = layout.blocks().iter().map(|b| b.dim).sum();
        let center = self.polar(0.0, 1.5);
        let spread = 0.05;
        let gap = self.uniform(0.1, 0.4);
        let inside = self.rng.gen_range(1..=dim.max(1));
        let mut eigs = Vec::with_capacity(dim);
        let mut taken = Vec::new();
        for k in 0..dim {
            if k < inside {
                let z = center + self.polar(0.0, spread);
                eigs.push(z);
                taken.push(z);
                continue;
            }
            let mut attempts = 0;
            loop {
                attempts += 1;
                let z = center + self.polar(3.0 * spread + gap, 3.0 * spread + gap + 1.5);
                if taken.iter().all(|t| (t - z).norm() >= SEPARATION) || attempts > MAX_ATTEMPTS {
                    eigs.push(z);
                    taken.push(z);
                    break;
                }
            }
        }
        // Shuffle the planted values over the blocks.
        for i in (1..eigs.len()).rev() {
            let j = self.rng.gen_range(0..=i);
            eigs.swap(i, j);
        }
        let mut offset = 0;
        let mats = layout
            .blocks()
            .iter()
            .map(|spec| {
                let m = self.planted_matrix(&eigs[offset..offset + spec.dim], false, 0.2);
                offset += spec.dim;
                m
            })
            .collect();
        let target = SpectralSet::from_regions(vec![Region::disc(center, spread)]);
        let element = BlockElement::new(layout, mats).expect("planted blocks fit the layout").into();
        PlantedGap { element, target, gap: 2.0 * spread + gap }
    }

    /// Commuting tuple solving `av + bw = 1` lane by lane (or block by block).
    pub fn bezout(&mut self) -> Result<Bezout> {
        let t = if self.chance(0.5) { self.bezout_diagonal() } else { self.bezout_block() };
        let cfg = crate::config::Config::default();
        let one = t.a.unit();
        let lhs = t.a.mul(&t.v)?.add(&t.b.mul(&t.w)?)?;
        let err = lhs.dist(&one)?;
        if err > cfg.tol * (1.0 + t.a.norm() * t.v.norm() + t.b.norm() * t.w.norm()) {
            return Err(Error::GeneratorExhausted(format!("Bézout residual {err:e}")));
        }
        Ok(t)
    }

    fn lane_pair(&mut self) -> (Lane, Lane, Side) {
        let side = if self.chance(0.5) { Side::A } else { Side::B };
        let free = match self.rng.gen_range(0..3) {
            0 => Lane::new(self.prefix(2, 0.3, 2.0), self.vanishing_tail(0.2, 1.0)),
            1 => Lane::new(self.prefix(2, 0.3, 2.0), self.obstruction_tail()),
            _ => Lane::new(self.prefix(2, 0.3, 2.0), self.invertible_tail(0.5, 2.0)),
        };
        // Products of two non-constant tails with different bases leave the closed-form family.
        let prefix = self.prefix(2, 0.5, 2.0).into_iter().map(|z| if z.norm() == 0.0 { c(1.0) } else { z }).collect();
        let invertible = Lane::new(prefix, TailRule::constant(self.polar(0.5, 2.0)));
        match side {
            Side::A => (invertible, free, side),
            Side::B => (free, invertible, side),
        }
    }

    fn bezout_diagonal(&mut self) -> Bezout {
        let k = self.rng.gen_range(1..=3);
        let (mut la, mut lb, mut lv, mut lw) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for _ in 0..k {
            let (a, b, side) = self.lane_pair();
            let inverse = |l: &Lane| l.map(|z| z.inv(), |t| t.reciprocal());
            match side {
                Side::A => {
                    lv.push(inverse(&a));
                    lw.push(Lane::constant(c(0.0)));
                }
                Side::B => {
                    lv.push(Lane::constant(c(0.0)));
                    lw.push(inverse(&b));
                }
            }
            la.push(a);
            lb.push(b);
        }
        let el = |lanes: Vec<Lane>| -> AlgebraElement { DiagonalElement::new(lanes).expect("lanes are valid").into() };
        Bezout { a: el(la), b: el(lb), v: el(lv), w: el(lw) }
    }

    fn bezout_block(&mut self) -> Bezout {
        let layout = self.layout(3, 4);
        let (mut ma, mut mb, mut mv, mut mw) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let mut taken = Vec::new();
        for spec in layout.blocks() {
            let eigs: Vec<C64> = (0..spec.dim)
                .map(|_| if self.chance(0.3) { c(0.0) } else { self.separated(1, 0.3, 2.0, &mut taken).first().copied().unwrap_or(c(0.0)) })
                .collect();
            let m = self.planted_matrix(&eigs, spec.ideal, 0.3);
            // Shift moving every eigenvalue to modulus at least 0.5.
            let shift = c(3.0);
            let inv = &m + DMatrix::from_diagonal_element(spec.dim, spec.dim, shift);
            let inv_inverse = inv.clone().try_inverse().expect("shifted block is invertible");
            let zero = DMatrix::zeros(spec.dim, spec.dim);
            if self.chance(0.5) {
                ma.push(inv);
                mb.push(m);
                mv.push(inv_inverse);
                mw.push(zero);
            } else {
                ma.push(m);
                mb.push(inv);
                mv.push(zero);
                mw.push(inv_inverse);
            }
        }
        let el = |mats: Vec<DMatrix<C64>>| -> AlgebraElement { BlockElement::new(layout.clone(), mats).expect("blocks fit the layout").into() };
        Bezout { a: el(ma), b: el(mb), v: el(mv), w: el(mw) }
    }

    /// Riesz element: vanishing lanes, or blocks whose non-ideal parts are strictly upper triangular.
    pub fn riesz_element(&mut self) -> AlgebraElement {
        if self.chance(0.5) {
            let layout = self.layout(3, 4);
            let mats = layout
                .blocks()
                .iter()
                .map(|spec| {
                    if spec.ideal {
                        let mut taken = Vec::new();
                        let eigs = self.separated(spec.dim, 0.3, 2.0, &mut taken);
                        self.planted_matrix(&eigs, true, 0.3)
                    } else {
                        self.planted_matrix(&vec![c(0.0); spec.dim], true, 0.5)
                    }
                })
                .collect();
            return BlockElement::new(layout, mats).expect("planted blocks fit the layout").into();
        }
        let lanes = self.rng.gen_range(1..=3);
        let lanes: Vec<Lane> = (0..lanes)
            .map(|_| {
                let prefix = self.prefix(3, 0.3, 2.0);
                let tail = if self.chance(0.3) { TailRule::zero() } else { self.vanishing_tail(0.2, 1.0) };
                Lane::new(prefix, tail)
            })
            .collect();
        DiagonalElement::new(lanes).expect("lanes are valid").into()
    }

    /// Coefficients of a random polynomial of degree `1..=max_degree`, constant term 0 if `through_zero`.
    pub fn polynomial(&mut self, max_degree: u32, through_zero: bool) -> Vec<C64> {
        let degree = self.exponent(1, max_degree) as usize;
        let mut coeffs: Vec<C64> = (0..=degree).map(|_| self.polar(0.2, 1.0)).collect();
        if through_zero {
            coeffs[0] = c(0.0);
        }
        coeffs
    }

    /// Random idempotent commuting with everything in the backend of `a`: a block or lane indicator.
    pub fn coordinate_idempotent(&mut self, a: &AlgebraElement) -> AlgebraElement {
        match a {
            AlgebraElement::Block(b) => {
                let mats = b
                    .layout()
                    .blocks()
                    .iter()
                    .map(|s| DMatrix::from_diagonal_element(s.dim, s.dim, if self.chance(0.5) { c(1.0) } else { c(0.0) }))
                    .collect();
                BlockElement::new(b.layout().clone(), mats).expect("indicator fits the layout").into()
            }
            AlgebraElement::Diagonal(d) => {
                let lanes = (0..d.lane_count()).map(|_| Lane::constant(if self.chance(0.5) { c(1.0) } else { c(0.0) })).collect();
                DiagonalElement::new(lanes).expect("lanes are valid").into()
            }
        }
    }

    /// Commuting diagonal pair with complementary vanishing lanes, satisfying the pencil hypothesis.
    pub fn commuting_pair(&mut self) -> (AlgebraElement, AlgebraElement) {
        let (mut la, mut lb) = (Vec::new(), Vec::new());
        let small = self.vanishing_tail(0.05, 0.2);
        la.push(Lane::new(vec![], small));
        // Unit partner: a b^D p_a then reproduces a's own window values on this lane.
        lb.push(Lane::constant(c(1.0)));
        let small = self.vanishing_tail(0.05, 0.2);
        la.push(Lane::constant(self.polar(0.8, 1.5)));
        lb.push(Lane::new(vec![], small));
        if self.chance(0.5) {
            la.push(Lane::new(vec![], self.invertible_tail(0.8, 1.5)));
            lb.push(Lane::constant(self.polar(0.8, 1.5)));
        }
        let el = |lanes: Vec<Lane>| -> AlgebraElement { DiagonalElement::new(lanes).expect("lanes are valid").into() };
        (el(la), el(lb))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::spectra;

    #[test]
    fn generators_are_deterministic() {
        let a = Generator::for_trial(3, 9).sample().element;
        let b = Generator::for_trial(3, 9).sample().element;
        assert_eq!(a, b);
        assert_ne!(trial_seed(3, 9), trial_seed(3, 10));
    }

    #[test]
    fn families_match_their_oracle() {
        let cfg = Config::default();
        let mut g = Generator::new(1);
        for _ in 0..40 {
            let s = g.sample();
            let dr = spectra::gdr_spectrum(&s.element, &cfg);
            assert_eq!(dr.distance(c(0.0)) > cfg.cluster_radius, s.expected_gdr(), "{s:?}");
        }
    }

    #[test]
    fn bezout_tuples_commute() {
        let mut g = Generator::new(5);
        for _ in 0..20 {
            let t = g.bezout().unwrap();
            for (x, y) in [(&t.a, &t.b), (&t.a, &t.v), (&t.b, &t.w), (&t.v, &t.w)] {
                assert!(x.commutator(y).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn planted_gap_is_separated() {
        let cfg = Config::default();
        let mut g = Generator::new(2);
        for _ in 0..20 {
            let p = g.planted_gap();
            let cls = crate::calculus::classify(&p.element, &p.target, &cfg).unwrap();
            assert!(cls.gap >= 0.1, "{}", cls.gap);
        }
    }
}
