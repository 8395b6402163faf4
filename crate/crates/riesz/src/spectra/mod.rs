//! Spectrum taxonomy: σ, σ_e, σ_b, Riesz points and σ_DR, with the Riesz and Browder predicates.

pub mod set;

use rayon::prelude::*;

pub use set::{Piece, PointKind, PointSequence, SpectralPoint, SpectralSet};

use crate::algebra_core::block;
use crate::algebra_core::{AlgebraElement, Region};
use crate::calculus::{spectral_idempotent, Method};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::C64;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Closure of the value set (diagonal) or the merged eigenvalues (block).
pub fn spectrum(a: &AlgebraElement, cfg: &Config) -> SpectralSet {
    match a {
        AlgebraElement::Block(b) => {
            let eig: Vec<C64> = b.blocks().iter().flat_map(block::eigenvalues).collect();
            SpectralSet::from_points(&eig, cfg.cluster_radius)
        }
        AlgebraElement::Diagonal(d) => {
            let mut s = SpectralSet::empty();
            for lane in d.lanes() {
                s.points.extend(lane.prefix.iter().map(|&z| SpectralPoint { z, kind: PointKind::Isolated }));
                let start = lane.tail_start();
                if let Some(c) = lane.tail.as_constant() {
                    s.points.push(SpectralPoint { z: c, kind: PointKind::Isolated });
                } else if lane.tail.is_sequence() {
                    s.sequences.push(PointSequence { rule: lane.tail.clone(), start });
                } else {
                    s.regions.push(lane.tail.limit_set());
                }
            }
            s.normalize(cfg.cluster_radius);
            s
        }
    }
}

/// Spectrum of the image in the quotient algebra.
pub fn essential_spectrum(a: &AlgebraElement, cfg: &Config) -> SpectralSet {
    match a {
        AlgebraElement::Block(b) => {
            let eig: Vec<C64> = b.quotient_blocks().iter().flat_map(block::eigenvalues).collect();
            SpectralSet::from_points(&eig, cfg.cluster_radius)
        }
        AlgebraElement::Diagonal(d) => limit_set_union(d.limit_sets(), cfg),
    }
}

fn limit_set_union(sets: Vec<Region>, cfg: &Config) -> SpectralSet {
    let mut s = SpectralSet::empty();
    for r in sets {
        match r {
            Region::Point(z) => s.points.push(SpectralPoint { z, kind: PointKind::Isolated }),
            r => s.regions.push(r),
        }
    }
    s.normalize(cfg.cluster_radius);
    s
}

/// `acc σ(a)`: empty for the block backend, symbolic limits for the diagonal one.
pub fn accumulation(a: &AlgebraElement, cfg: &Config) -> SpectralSet {
    spectrum(a, cfg).acc(cfg.cluster_radius)
}

/// `σ_b(a) = σ_e(a) ∪ acc σ(a)`.
pub fn browder_spectrum(a: &AlgebraElement, cfg: &Config) -> SpectralSet {
    essential_spectrum(a, cfg).union(&accumulation(a, cfg), cfg.cluster_radius)
}

/// `p₀₀(a) = σ(a) ∖ σ_b(a)`.
pub fn riesz_points(a: &AlgebraElement, cfg: &Config) -> SpectralSet {
    spectrum(a, cfg).difference(&browder_spectrum(a, cfg), cfg.cluster_radius)
}

/// `σ_DR(a) = acc σ_b(a)`, the non-degenerate regions of the Browder spectrum.
pub fn gdr_spectrum(a: &AlgebraElement, cfg: &Config) -> SpectralSet {
    browder_spectrum(a, cfg).region_part()
}

/// Membership of each grid point in `σ_DR(a)`.
pub fn gdr_grid(a: &AlgebraElement, grid: &[C64], cfg: &Config) -> Vec<bool> {
    let dr = gdr_spectrum(a, cfg);
    grid.par_iter().map(|z| dr.distance(*z) <= cfg.cluster_radius).collect()
}

/// Sample points of `σ(a)` together with midpoints of consecutive samples.
pub fn default_grid(a: &AlgebraElement, cfg: &Config) -> Vec<C64> {
    let pts = spectrum(a, cfg).samples(32, 16);
    let mids: Vec<C64> = pts.windows(2).map(|w| (w[0] + w[1]) * 0.5).collect();
    pts.into_iter().chain(mids).collect()
}

/// The quotient image is quasinilpotent.
pub fn is_riesz(a: &AlgebraElement, cfg: &Config) -> bool {
    essential_spectrum(a, cfg).sup_abs() <= cfg.tol_zero
}

#[derive(Clone, Debug)]
pub struct BrowderReport {
    pub fredholm: bool,
    pub zero_isolated: bool,
    pub browder: bool,
    /// `(b, c)` with `b` invertible, `c` in the ideal, `bc = cb` and `a = b + c`.
    pub witness: Option<(AlgebraElement, AlgebraElement)>,
}

pub fn is_fredholm(a: &AlgebraElement, cfg: &Config) -> bool {
    essential_spectrum(a, cfg).distance(zero()) > cfg.tol_zero
}

pub fn is_browder(a: &AlgebraElement, cfg: &Config) -> Result<BrowderReport> {
    let fredholm = is_fredholm(a, cfg);
    let zero_isolated = accumulation(a, cfg).distance(zero()) > cfg.tol_zero;
    let browder = fredholm && zero_isolated;
    let witness = if browder { Some(browder_decompose(a, cfg)?) } else { None };
    Ok(BrowderReport { fredholm, zero_isolated, browder, witness })
}

/// Splits a Browder element as `b + c` with `b = a + p₀` and `c = -p₀`, `p₀` the idempotent at 0.
pub fn browder_decompose(a: &AlgebraElement, cfg: &Config) -> Result<(AlgebraElement, AlgebraElement)> {
    if !is_fredholm(a, cfg) || accumulation(a, cfg).distance(zero()) <= cfg.tol_zero {
        return Err(Error::NotBrowder);
    }
    if spectrum(a, cfg).distance(zero()) > cfg.cluster_radius {
        return Ok((a.clone(), a.zero()));
    }
    let p0 = spectral_idempotent(a, &SpectralSet::point(zero()), Method::Exact, cfg)?;
    let b = a.add(&p0)?;
    let c = p0.scale(C64::new(-1.0, 0.0));
    Ok((b, c))
}

/// Spectra of `x` inside the corner algebra `p𝒜p`.
#[derive(Clone, Debug)]
pub struct CornerSpectra {
    pub sigma: SpectralSet,
    pub essential: SpectralSet,
    pub browder: SpectralSet,
}

/// `x + μ(1-p)` with `μ` outside every relevant spectrum; its spectra are the corner spectra plus `μ`.
fn corner_lift(x: &AlgebraElement, p: &AlgebraElement) -> Result<(AlgebraElement, C64)> {
    let mu = C64::new(2.0 * (x.norm() + 1.0) + 1.0, 0.0);
    let q = p.shifted_neg(C64::new(1.0, 0.0));
    Ok((x.add(&q.scale(mu))?, mu))
}

pub fn corner_spectra(x: &AlgebraElement, p: &AlgebraElement, cfg: &Config) -> Result<CornerSpectra> {
    let (lift, mu) = corner_lift(x, p)?;
    let strip = |s: SpectralSet| s.without_point(mu, cfg.cluster_radius.max(cfg.tol * (1.0 + mu.norm())));
    Ok(CornerSpectra {
        sigma: strip(spectrum(&lift, cfg)),
        essential: strip(essential_spectrum(&lift, cfg)),
        browder: strip(browder_spectrum(&lift, cfg)),
    })
}

/// Browder property of `x` in the corner algebra with unit `p`.
pub fn corner_is_browder(x: &AlgebraElement, p: &AlgebraElement, cfg: &Config) -> Result<bool> {
    let (lift, _) = corner_lift(x, p)?;
    Ok(is_browder_predicate(&lift, cfg))
}

/// Browder predicate without building the decomposition witness.
pub fn is_browder_predicate(a: &AlgebraElement, cfg: &Config) -> bool {
    is_fredholm(a, cfg) && accumulation(a, cfg).distance(zero()) > cfg.tol_zero
}
