//! Resolvents, spectral idempotents, spectral-set certification and the `{0, 1/λ}` functional calculus.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::algebra_core::block::riesz_projection;
use crate::algebra_core::{AlgebraElement, BlockElement, DiagonalElement, Lane, Region, TailRule};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::spectra::{self, Piece, SpectralSet};
use crate::C64;

/// Relative agreement demanded between the two `holo_calc` paths.
pub const HOLO_AGREEMENT: f64 = 1e-7;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Circle { center: C64, radius: f64 },
    /// Axis-parallel rectangle with opposite corners `lo` and `hi`.
    Rectangle { lo: C64, hi: C64 },
}

/// Counterclockwise closed path with a node budget.
#[derive(Clone, Debug, PartialEq)]
pub struct Contour {
    pub shape: Shape,
    pub nodes: usize,
}

impl Contour {
    pub fn circle(center: C64, radius: f64, nodes: usize) -> Self {
        Contour { shape: Shape::Circle { center, radius }, nodes }
    }

    pub fn rectangle(lo: C64, hi: C64, nodes: usize) -> Self {
        Contour { shape: Shape::Rectangle { lo, hi }, nodes }
    }

    pub fn with_nodes(&self, nodes: usize) -> Self {
        Contour { shape: self.shape.clone(), nodes }
    }

    /// Nodes and weights with `Σ w f(λ) ≈ (1/2πi) ∮ f(λ) dλ`.
    pub fn quadrature(&self) -> Vec<(C64, C64)> {
        match &self.shape {
            Shape::Circle { center, radius } => (0..self.nodes)
                .map(|k| {
                    let e = C64::from_polar(1.0, TAU * k as f64 / self.nodes as f64);
                    (center + e * radius, e * radius / self.nodes as f64)
                })
                .collect(),
            Shape::Rectangle { lo, hi } => {
                let corners = [*lo, C64::new(hi.re, lo.im), *hi, C64::new(lo.re, hi.im)];
                let per_side = (self.nodes / 4).max(16);
                let panels = per_side.div_ceil(16);
                let (gx, gw) = gauss_legendre(16);
                let mut out = Vec::with_capacity(4 * panels * 16);
                for s in 0..4 {
                    let (a, b) = (corners[s], corners[(s + 1) % 4]);
                    for p in 0..panels {
                        let pa = a + (b - a) * (p as f64 / panels as f64);
                        let pb = a + (b - a) * ((p + 1) as f64 / panels as f64);
                        let half = (pb - pa) * 0.5;
                        for (x, w) in gx.iter().zip(&gw) {
                            let z = pa + half * (x + 1.0);
                            out.push((z, half * *w / C64::new(0.0, TAU)));
                        }
                    }
                }
                out
            }
        }
    }

    /// Winding number one around `z`.
    pub fn encloses(&self, z: C64) -> bool {
        match &self.shape {
            Shape::Circle { center, radius } => (z - center).norm() < *radius,
            Shape::Rectangle { lo, hi } => z.re > lo.re && z.re < hi.re && z.im > lo.im && z.im < hi.im,
        }
    }

    /// Distance from `z` to the path.
    pub fn distance(&self, z: C64) -> f64 {
        match &self.shape {
            Shape::Circle { center, radius } => ((z - center).norm() - radius).abs(),
            Shape::Rectangle { lo, hi } => {
                let corners = [*lo, C64::new(hi.re, lo.im), *hi, C64::new(lo.re, hi.im)];
                (0..4).map(|s| Region::Segment(corners[s], corners[(s + 1) % 4]).distance(z)).fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; m];
    let mut ws = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        xs[m - 1 - i] = x;
        ws[i] = w;
        ws[m - 1 - i] = w;
    }
    (xs, ws)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Invariant-subspace split (block) or indicator sequence (diagonal).
    Exact,
    /// Trapezoidal quadrature of the resolvent over an auto-fitted circle.
    Contour,
}

/// `(λ - a)^{-1}`.
pub fn resolvent(a: &AlgebraElement, lambda: C64, cfg: &Config) -> Result<AlgebraElement> {
    a.shifted_neg(lambda).invert(cfg).map_err(|e| match e {
        Error::NotInvertible { witness } => Error::OnSpectrum(format!("λ = {lambda}: {witness}")),
        e => e,
    })
}

/// Resolution at which sequence tails are replaced by a ball around their limit.
fn resolution(cfg: &Config) -> f64 {
    cfg.clearance / 4.0
}

/// Pieces of `σ(a)` sorted into those inside `target` and the rest.
#[derive(Clone, Debug)]
pub struct Classification {
    pub inside: Vec<Piece>,
    pub outside: Vec<Piece>,
    /// Distance from the outside pieces to `target`.
    pub gap: f64,
}

pub fn classify(a: &AlgebraElement, target: &SpectralSet, cfg: &Config) -> Result<Classification> {
    let sigma = spectra::spectrum(a, cfg);
    let delta = resolution(cfg);
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    let mut gap = f64::INFINITY;
    let mut sort = |piece: Piece, d: f64, reach: f64| {
        if d <= cfg.cluster_radius {
            inside.push(piece);
        } else {
            gap = gap.min(d - reach);
            outside.push(piece);
        }
    };
    for p in &sigma.points {
        sort(Piece::Point(p.z), target.distance(p.z), 0.0);
    }
    for r in &sigma.regions {
        sort(Piece::Region(r.clone()), region_distance(r, target, cfg)?, 0.0);
    }
    for s in &sigma.sequences {
        let end = s.settle(delta);
        for n in s.start..end {
            sort(Piece::Point(s.value(n)), target.distance_to_value(&s.rule, n), 0.0);
        }
        let radius = s.rule.deviation_bound(end);
        sort(Piece::Ball { center: s.limit(), radius }, target.distance(s.limit()), radius);
    }
    if gap < 2.0 * cfg.clearance {
        return Err(Error::NotClopen(format!("gap {gap:e} to the rest of the spectrum is below {:e}", 2.0 * cfg.clearance)));
    }
    Ok(Classification { inside, outside, gap })
}

/// Zero when `target` covers `r`, the distance when it misses `r`, an error when it splits `r`.
fn region_distance(r: &Region, target: &SpectralSet, cfg: &Config) -> Result<f64> {
    if target.regions.contains(r) {
        return Ok(0.0);
    }
    let samples: Vec<C64> = r.fill_samples(256).into_iter().chain(r.boundary_samples(256)).collect();
    let ds: Vec<f64> = samples.iter().map(|z| target.distance(*z)).collect();
    let hit = ds.iter().filter(|d| **d <= cfg.cluster_radius).count();
    if hit == ds.len() {
        Ok(0.0)
    } else if hit == 0 {
        Ok(ds.into_iter().fold(f64::INFINITY, f64::min))
    } else {
        Err(Error::TailStraddles(format!("{r:?} is split by the target set")))
    }
}

/// Circle around the inside pieces that keeps the outside pieces outside.
pub fn fit_contour(cls: &Classification, cfg: &Config) -> Result<Contour> {
    if cls.inside.is_empty() {
        return Err(Error::NotClopen("no spectrum inside the target".into()));
    }
    let (mut lo, mut hi) = (C64::new(f64::INFINITY, f64::INFINITY), C64::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in &cls.inside {
        let (c, r) = (p.center(), p.reach_from(p.center()));
        lo = C64::new(lo.re.min(c.re - r), lo.im.min(c.im - r));
        hi = C64::new(hi.re.max(c.re + r), hi.im.max(c.im + r));
    }
    let center = (lo + hi) * 0.5;
    let reach = cls.inside.iter().map(|p| p.reach_from(center)).fold(0.0, f64::max);
    let margin = if cls.gap.is_finite() { cls.gap / 2.0 } else { (0.5 * reach).max(1.0) };
    let radius = reach + margin;
    for p in &cls.outside {
        if p.distance(center) < radius + cfg.clearance {
            return Err(Error::NotClopen(format!("no circle separates the target from {:?}", p.center())));
        }
    }
    Ok(Contour::circle(center, radius, cfg.nodes))
}

/// Spectral idempotent of `a` for a clopen part `target` of its spectrum.
pub fn spectral_idempotent(a: &AlgebraElement, target: &SpectralSet, method: Method, cfg: &Config) -> Result<AlgebraElement> {
    let cls = classify(a, target, cfg)?;
    let inside = |z: C64| target.distance(z) <= cfg.cluster_radius;
    match method {
        Method::Exact => match a {
            AlgebraElement::Block(b) => {
                let mats = b.blocks().iter().map(|m| riesz_projection(m, inside)).collect();
                Ok(BlockElement::new(b.layout().clone(), mats)?.into())
            }
            AlgebraElement::Diagonal(d) => diagonal_split(d, target, cfg, |_| one(), |_| TailRule::constant(one()), |_| zero()),
        },
        Method::Contour => {
            if cls.inside.is_empty() {
                return Ok(a.zero());
            }
            if cls.outside.is_empty() {
                return Ok(a.unit());
            }
            let contour = fit_contour(&cls, cfg)?;
            match a {
                AlgebraElement::Block(_) => adaptive(&contour, cfg, |c| contour_integral(a, c, |_| one())),
                AlgebraElement::Diagonal(d) => {
                    let quad = contour.quadrature();
                    diagonal_split(
                        d,
                        target,
                        cfg,
                        |v| quad.iter().map(|(l, w)| w / (l - v)).sum(),
                        |_| TailRule::constant(one()),
                        |v| quad.iter().map(|(l, w)| w / (l - v)).sum(),
                    )
                }
            }
        }
    }
}

/// Builds a diagonal element lane by lane from the inside/outside status of each value.
///
/// Explicit values use `f_in` or `f_out`; tails beyond the resolution index use
/// `tail_in` when their limit set is inside the target and 0 otherwise.
fn diagonal_split(
    d: &DiagonalElement,
    target: &SpectralSet,
    cfg: &Config,
    f_in: impl Fn(C64) -> C64,
    tail_in: impl Fn(&TailRule) -> TailRule,
    f_out: impl Fn(C64) -> C64,
) -> Result<AlgebraElement> {
    diagonal_split_with(d, target, cfg, f_in, tail_in, f_out, |_| TailRule::zero())
}

#[allow(clippy::too_many_arguments)]
fn diagonal_split_with(
    d: &DiagonalElement,
    target: &SpectralSet,
    cfg: &Config,
    f_in: impl Fn(C64) -> C64,
    tail_in: impl Fn(&TailRule) -> TailRule,
    f_out: impl Fn(C64) -> C64,
    tail_out: impl Fn(&TailRule) -> TailRule,
) -> Result<AlgebraElement> {
    let inside = |z: C64| target.distance(z) <= cfg.cluster_radius;
    let eval = |z: C64| if inside(z) { f_in(z) } else { f_out(z) };
    let mut lanes = Vec::with_capacity(d.lane_count());
    for lane in d.lanes() {
        let start = lane.tail_start();
        let end = lane.tail.settle_index(start, resolution(cfg));
        let mut prefix: Vec<C64> = lane.prefix.iter().map(|z| eval(*z)).collect();
        prefix.extend((start..end).map(|n| {
            let z = lane.tail.value(n);
            if target.distance_to_value(&lane.tail, n) <= cfg.cluster_radius {
                f_in(z)
            } else {
                f_out(z)
            }
        }));
        let limit_inside = match lane.tail.limit_set() {
            Region::Point(z) => inside(z),
            r => region_distance(&r, target, cfg)? == 0.0,
        };
        let tail = if limit_inside { tail_in(&lane.tail) } else { tail_out(&lane.tail) };
        lanes.push(Lane::new(prefix, tail));
    }
    Ok(DiagonalElement::new(lanes)?.into())
}

/// `Σ w g(λ) (λ - a)^{-1}` over the contour's quadrature nodes (block backend).
fn contour_integral(a: &AlgebraElement, contour: &Contour, g: impl Fn(C64) -> C64 + Sync) -> Result<AlgebraElement> {
    let b = a.as_block().ok_or_else(|| Error::InvalidElement("block element expected".into()))?;
    let quad = contour.quadrature();
    let mut mats = Vec::with_capacity(b.blocks().len());
    for m in b.blocks() {
        let n = m.nrows();
        let terms: Vec<Result<DMatrix<C64>>> = quad
            .par_iter()
            .map(|(l, w)| {
                let shifted = DMatrix::from_diagonal_element(n, n, *l) - m;
                let inv = shifted.lu().try_inverse().ok_or_else(|| Error::OnSpectrum(format!("contour node {l}")))?;
                Ok(inv * (w * g(*l)))
            })
            .collect();
        let mut acc = DMatrix::<C64>::zeros(n, n);
        for t in terms {
            acc += t?;
        }
        mats.push(acc);
    }
    Ok(BlockElement::new(b.layout().clone(), mats)?.into())
}

/// Doubles the node count until successive estimates agree or the cap is reached.
fn adaptive(contour: &Contour, cfg: &Config, eval: impl Fn(&Contour) -> Result<AlgebraElement>) -> Result<AlgebraElement> {
    let mut nodes = contour.nodes.max(1);
    let mut prev = eval(&contour.with_nodes(nodes))?;
    while nodes * 2 <= cfg.max_nodes {
        nodes *= 2;
        let next = eval(&contour.with_nodes(nodes))?;
        let delta = next.dist(&prev)?;
        prev = next;
        if delta <= cfg.contour_eps {
            break;
        }
    }
    Ok(prev)
}

/// `ξ = -1` when `2r < 1`, otherwise `2r + 1`.
pub fn default_xi(r: f64) -> C64 {
    if 2.0 * r < 1.0 {
        C64::new(-1.0, 0.0)
    } else {
        C64::new(2.0 * r + 1.0, 0.0)
    }
}

/// Outcome of certifying `p` as the spectral idempotent of `sigma`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSetCheck {
    pub commutes: bool,
    pub corner_matches: bool,
    pub shifts_invertible: bool,
    pub corner_distance: f64,
}

impl SpectralSetCheck {
    pub fn passed(&self) -> bool {
        self.commutes && self.corner_matches && self.shifts_invertible
    }
}

/// Checks that `p` commutes with `a`, that `σ(ap)` in `p𝒜p` is `sigma`, and that `a - μ - ξp` is invertible on `sigma`.
pub fn verify_spectral_set(a: &AlgebraElement, p: &AlgebraElement, sigma: &SpectralSet, xi: C64, cfg: &Config) -> Result<SpectralSetCheck> {
    if sigma.distance(zero()) > cfg.cluster_radius {
        return Err(Error::ZeroNotInSet);
    }
    let bound = 2.0 * sigma.sup_abs();
    if xi.norm() <= bound {
        return Err(Error::XiTooSmall { xi: xi.norm(), bound });
    }
    let tol = cfg.tol * (1.0 + a.norm());
    let commutes = p.idempotent_residual()? <= cfg.tol && a.commutator(p)? <= tol;
    let (ap, _) = match a.pierce_corner(p, cfg) {
        Ok(c) => c,
        Err(Error::NotIdempotent(_) | Error::NotCommuting(_)) => {
            return Ok(SpectralSetCheck { commutes: false, corner_matches: false, shifts_invertible: false, corner_distance: f64::INFINITY })
        }
        Err(e) => return Err(e),
    };
    let corner = spectra::corner_spectra(&ap, p, cfg)?.sigma;
    let corner_distance = corner.hausdorff(sigma);
    // Eigenvalues of a defective cluster carry error of order sqrt(eps); the match allows for index-2 blocks.
    let defect = 4.0 * (f64::EPSILON * (1.0 + a.norm())).sqrt();
    let corner_matches = corner_distance <= cfg.cluster_radius.max(1e-8).max(defect);
    let base = a.sub(&p.scale(xi))?;
    let shifts_invertible = sigma.samples(64, 64).into_iter().all(|mu| nonsingular(&base.shift(-mu)));
    Ok(SpectralSetCheck { commutes, corner_matches, shifts_invertible, corner_distance })
}

/// Invertibility without the norm-relative threshold: LU succeeds, or no value is exactly 0.
fn nonsingular(x: &AlgebraElement) -> bool {
    match x {
        AlgebraElement::Block(b) => b.invert_unchecked().is_ok_and(|inv| inv.blocks().iter().all(|m| m.iter().all(|z| z.re.is_finite() && z.im.is_finite()))),
        AlgebraElement::Diagonal(d) => d.invert(&Config { tol: 0.0, ..Config::default() }).is_ok(),
    }
}

/// A clopen part of `σ(a)` with its idempotent and an admissible `ξ`.
#[derive(Clone, Debug)]
pub struct SpectralSplit {
    pub sigma: SpectralSet,
    pub complement: SpectralSet,
    pub idempotent: AlgebraElement,
    pub xi: C64,
}

impl SpectralSplit {
    pub fn new(a: &AlgebraElement, sigma: SpectralSet, cfg: &Config) -> Result<Self> {
        let complement = spectra::spectrum(a, cfg).difference(&sigma, cfg.cluster_radius);
        let idempotent = spectral_idempotent(a, &sigma, Method::Exact, cfg)?;
        let xi = default_xi(sigma.sup_abs());
        Ok(SpectralSplit { sigma, complement, idempotent, xi })
    }
}

/// `h(a)` for `h = 0` near `sigma` and `h = 1/λ` near the complement, computed two ways.
#[derive(Clone, Debug)]
pub struct HoloResult {
    /// `(a - ξp)^{-1}(1 - p)`.
    pub value: AlgebraElement,
    /// `-(1/2πi) ∮ λ^{-1}(λ - a)^{-1} dλ` around `sigma`.
    pub contour_value: AlgebraElement,
    pub disagreement: f64,
}

pub fn holo_calc(a: &AlgebraElement, split: &SpectralSplit, cfg: &Config) -> Result<HoloResult> {
    let check = verify_spectral_set(a, &split.idempotent, &split.sigma, split.xi, cfg)
        .map_err(|_| Error::SplitNotCertified)?;
    if !check.passed() {
        return Err(Error::SplitNotCertified);
    }
    if split.complement.distance(zero()) <= cfg.cluster_radius {
        return Err(Error::ZeroOutside);
    }
    let p = &split.idempotent;
    let q = p.shifted_neg(one());
    let value = a.sub(&p.scale(split.xi))?.invert(cfg)?.mul(&q)?;
    let contour_value = match a {
        AlgebraElement::Block(_) => {
            let cls = classify(a, &split.sigma, cfg)?;
            if cls.outside.is_empty() {
                a.zero()
            } else {
                let contour = fit_contour(&cls, cfg)?;
                adaptive(&contour, cfg, |c| contour_integral(a, c, |l| -l.inv()))?
            }
        }
        AlgebraElement::Diagonal(d) => {
            let cls = classify(a, &split.sigma, cfg)?;
            let contour = fit_contour(&cls, cfg)?;
            let quad = contour.quadrature();
            let f = |v: C64| -quad.iter().map(|(l, w)| w / (l * (l - v))).sum::<C64>();
            diagonal_split_with(d, &split.sigma, cfg, f, |_| TailRule::zero(), f, |t| t.reciprocal())?
        }
    };
    let disagreement = value.dist(&contour_value)?;
    if disagreement > HOLO_AGREEMENT * value.norm().max(1.0) {
        return Err(Error::InternalDisagreement(format!("functional calculus paths differ by {disagreement:e}")));
    }
    Ok(HoloResult { value, contour_value, disagreement })
}

/// Generalized Drazin inverse: the `σ = {0}` case of `(b - ξp)^{-1}(1 - p)`.
pub fn drazin_at_zero(b: &AlgebraElement, cfg: &Config) -> Result<AlgebraElement> {
    let p = spectral_idempotent(b, &SpectralSet::point(zero()), Method::Exact, cfg)?;
    let q = p.shifted_neg(one());
    b.add(&p)?.invert(cfg)?.mul(&q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_core::{BlockLayout, BlockSpec};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn e1() -> AlgebraElement {
        let layout = BlockLayout::new(vec![BlockSpec { dim: 2, ideal: true }, BlockSpec { dim: 2, ideal: false }]).unwrap();
        let n = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        BlockElement::new(layout, vec![n, DMatrix::from_diagonal_element(2, 2, c(2.0))]).unwrap().into()
    }

    fn harmonic() -> AlgebraElement {
        DiagonalElement::new(vec![Lane::new(vec![], TailRule::power(c(0.0), c(1.0), 1.0).unwrap())]).unwrap().into()
    }

    fn sigma2() -> SpectralSet {
        spectra::spectrum(&harmonic(), &Config::default()).split_by_disc(0.4).unwrap().0
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(16);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn rectangle_and_circle_agree() {
        let cfg = Config::default();
        let a = e1();
        let circ = contour_integral(&a, &Contour::circle(c(0.0), 1.0, 512), |_| one()).unwrap();
        let rect = contour_integral(&a, &Contour::rectangle(C64::new(-1.0, -1.0), C64::new(1.0, 1.0), 1024), |_| one()).unwrap();
        assert!(circ.dist(&rect).unwrap() < 1e-12);
        let exact = spectral_idempotent(&a, &SpectralSet::point(c(0.0)), Method::Exact, &cfg).unwrap();
        assert!(circ.dist(&exact).unwrap() < 1e-12);
    }

    #[test]
    fn resolvent_of_e1() {
        let cfg = Config::default();
        let r = resolvent(&e1(), c(1.0), &cfg).unwrap();
        let b = r.as_block().unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(1.0)]);
        assert!((&b.blocks()[0] - want).norm() < 1e-14);
        assert!((&b.blocks()[1] + DMatrix::<C64>::identity(2, 2)).norm() < 1e-14);
        assert!(matches!(resolvent(&e1(), c(2.0), &cfg), Err(Error::OnSpectrum(_))));
    }

    #[test]
    fn harmonic_idempotent_both_ways() {
        let cfg = Config::default();
        let a = harmonic();
        let exact = spectral_idempotent(&a, &sigma2(), Method::Exact, &cfg).unwrap();
        let d = exact.as_diagonal().unwrap();
        assert_eq!(d.lanes()[0].prefix, vec![c(0.0), c(0.0)]);
        assert_eq!(d.lanes()[0].tail.as_constant(), Some(c(1.0)));
        let contour = spectral_idempotent(&a, &sigma2(), Method::Contour, &cfg).unwrap();
        assert!(contour.dist(&exact).unwrap() < 1e-8);
    }

    #[test]
    fn straddling_target_is_rejected() {
        let cfg = Config::default();
        let a: AlgebraElement = DiagonalElement::new(vec![Lane::new(vec![], TailRule::dense(Region::circle(c(0.0), 1.0), 0))]).unwrap().into();
        let half = SpectralSet::from_regions(vec![Region::Segment(c(1.0), c(0.0))]);
        assert!(matches!(spectral_idempotent(&a, &half, Method::Exact, &cfg), Err(Error::TailStraddles(_))));
        assert!(matches!(
            spectral_idempotent(&harmonic(), &SpectralSet::point(c(0.0)), Method::Exact, &cfg),
            Err(Error::NotClopen(_))
        ));
    }

    #[test]
    fn e1_certified_split_and_holo() {
        let cfg = Config::default();
        let a = e1();
        let split = SpectralSplit::new(&a, SpectralSet::point(c(0.0)), &cfg).unwrap();
        let check = verify_spectral_set(&a, &split.idempotent, &split.sigma, c(-1.0), &cfg).unwrap();
        assert!(check.passed());
        assert!(verify_spectral_set(&a, &split.idempotent, &split.sigma, c(1e-12), &cfg).unwrap().passed());
        let h = holo_calc(&a, &split, &cfg).unwrap();
        let b = h.value.as_block().unwrap();
        assert!(b.blocks()[0].norm() < 1e-15);
        assert!((&b.blocks()[1] - DMatrix::from_diagonal_element(2, 2, c(0.5))).norm() < 1e-15);
        assert!(h.disagreement < 1e-10);
    }

    #[test]
    fn zero_outside_sigma_is_rejected() {
        let cfg = Config::default();
        let a = e1().unit().scale(c(2.0));
        let p = a.zero();
        assert!(matches!(verify_spectral_set(&a, &p, &SpectralSet::empty(), c(-1.0), &cfg), Err(Error::ZeroNotInSet)));
    }

    #[test]
    fn harmonic_holo_calc() {
        let cfg = Config::default();
        let a = harmonic();
        let split = SpectralSplit::new(&a, sigma2(), &cfg).unwrap();
        let h = holo_calc(&a, &split, &cfg).unwrap();
        let d = h.value.as_diagonal().unwrap();
        for (i, want) in [(1, 1.0), (2, 2.0), (3, 0.0), (100, 0.0)] {
            assert!((d.value(0, i) - c(want)).norm() < 1e-12, "index {i}");
        }
    }

    #[test]
    fn drazin_of_e1() {
        let cfg = Config::default();
        let bd = drazin_at_zero(&e1(), &cfg).unwrap();
        assert!((&bd.as_block().unwrap().blocks()[1] - DMatrix::from_diagonal_element(2, 2, c(0.5))).norm() < 1e-15);
    }
}
