//! Generalized Drazin-Riesz inverses: certificates, the seven-way characterization, and the
//! series, limit, power, uniqueness and pair identities built on windowed inverses.

pub mod regularity;
pub mod window;

use std::f64::consts::TAU;

pub use window::{auto_window, select_window, SpectralWindow};

use crate::algebra_core::{AlgebraElement, Poly};
use crate::calculus::{drazin_at_zero, resolvent, spectral_idempotent, Method};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::spectra::{self, SpectralSet};
use crate::C64;

/// Relative agreement demanded between inverses built from two admissible `ξ`.
pub const XI_AGREEMENT: f64 = 1e-8;
/// Factor applied to `ξ` for the independence check.
const XI_SECOND: f64 = 1.7;
/// Differences above `DISTINCT_FACTOR · tol` count as distinct inverses.
const DISTINCT_FACTOR: f64 = 10.0;
/// Joint window raises tried when separating the idempotents of a pair.
const MAX_RAISES: usize = 64;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Residuals certifying `b` as a generalized Drazin-Riesz inverse of `a`.
#[derive(Clone, Debug)]
pub struct GdrCertificate {
    pub inverse: AlgebraElement,
    /// `1 - ab`.
    pub idempotent: AlgebraElement,
    /// `‖ab - ba‖`.
    pub residual_comm: f64,
    /// `‖bab - b‖`.
    pub residual_inner: f64,
    /// Spectral radius of the quotient image of `a - a²b`.
    pub riesz_defect: f64,
    pub valid: bool,
    pub window_n: Option<usize>,
    pub xi: Option<C64>,
}

pub fn is_gdr_inverse(a: &AlgebraElement, b: &AlgebraElement, cfg: &Config) -> Result<GdrCertificate> {
    let ab = a.mul(b)?;
    let ba = b.mul(a)?;
    let residual_comm = ab.dist(&ba)?;
    let residual_inner = b.mul(&ab)?.dist(b)?;
    let defect = a.sub(&a.mul(&ab)?)?;
    let riesz_defect = spectra::essential_spectrum(&defect, cfg).sup_abs();
    let (na, nb) = (a.norm(), b.norm());
    let valid = residual_comm <= cfg.tol * (1.0 + na * nb) && residual_inner <= cfg.tol * (1.0 + nb) && riesz_defect <= cfg.tol_zero;
    Ok(GdrCertificate {
        inverse: b.clone(),
        idempotent: ab.shifted_neg(one()),
        residual_comm,
        residual_inner,
        riesz_defect,
        valid,
        window_n: None,
        xi: None,
    })
}

/// `(a - ξp)^{-1}(1 - p)`.
fn relative_inverse(a: &AlgebraElement, p: &AlgebraElement, xi: C64, cfg: &Config) -> Result<AlgebraElement> {
    a.sub(&p.scale(xi))?.invert(cfg)?.mul(&p.shifted_neg(one()))
}

/// Idempotent of the window's spectral part (0 for an empty part).
pub fn window_idempotent(a: &AlgebraElement, w: &SpectralWindow, cfg: &Config) -> Result<AlgebraElement> {
    if w.sigma_n.is_empty() {
        return Ok(a.zero());
    }
    spectral_idempotent(a, &w.sigma_n, Method::Exact, cfg)
}

/// `a^{D,σₙ}` for the window, with its certificate; `ξ` defaults to the window policy.
pub fn drazin_window_inverse(a: &AlgebraElement, w: &SpectralWindow, xi: Option<C64>, cfg: &Config) -> Result<GdrCertificate> {
    let xi = xi.unwrap_or_else(|| w.xi());
    let bound = 2.0 * w.r_n;
    if xi.norm() <= bound {
        return Err(Error::XiTooSmall { xi: xi.norm(), bound });
    }
    let p = window_idempotent(a, w, cfg)?;
    let b = relative_inverse(a, &p, xi, cfg)?;
    let b2 = relative_inverse(a, &p, xi * XI_SECOND, cfg)?;
    let spread = b.dist(&b2)?;
    if spread > XI_AGREEMENT * b.norm().max(1.0) {
        return Err(Error::InternalDisagreement(format!("inverses for two admissible ξ differ by {spread:e}")));
    }
    let mut cert = is_gdr_inverse(a, &b, cfg)?;
    cert.window_n = Some(w.n);
    cert.xi = Some(xi);
    Ok(cert)
}

/// The seven conditions of the characterization, each evaluated on explicit witnesses.
#[derive(Clone, Debug)]
pub struct CharacterizationReport {
    /// Conditions (i) to (vii) in order.
    pub conditions: [bool; 7],
    /// Idempotent witnessing (i), (ii), (v) and (vi).
    pub idempotent: Option<AlgebraElement>,
    /// Inverse witnessing (iii).
    pub inverse: Option<AlgebraElement>,
    /// `q = ab` witnessing (iv) with `u = v = b`.
    pub quasi_polar: Option<AlgebraElement>,
    /// Decomposition of `a + p` witnessing (v).
    pub browder_witness: Option<(AlgebraElement, AlgebraElement)>,
    pub window_n: Option<usize>,
}

impl CharacterizationReport {
    /// Generalized Drazin-Riesz invertibility (all conditions agree).
    pub fn gdr(&self) -> bool {
        self.conditions[6]
    }

    pub fn consistent(&self) -> bool {
        self.conditions.iter().all(|c| *c == self.conditions[6])
    }

    /// First condition disagreeing with the symbolic one, numbered from 1.
    pub fn failing_condition(&self) -> Option<usize> {
        self.conditions.iter().position(|c| *c != self.conditions[6]).map(|i| i + 1)
    }
}

#[derive(Default)]
struct Witnesses {
    idempotent: Option<AlgebraElement>,
    inverse: Option<AlgebraElement>,
    quasi_polar: Option<AlgebraElement>,
    browder: Option<(AlgebraElement, AlgebraElement)>,
}

/// Evaluates conditions (i) to (vi) for one candidate idempotent.
fn conditions_for(a: &AlgebraElement, p: &AlgebraElement, cfg: &Config, wit: &mut Witnesses) -> Result<[bool; 6]> {
    let q = p.shifted_neg(one());
    let ap = a.mul(p)?;
    let aq = a.mul(&q)?;
    let riesz_ap = spectra::is_riesz(&ap, cfg);
    let a_plus_p = a.add(p)?;
    let c1 = riesz_ap && a_plus_p.invert(cfg).is_ok();
    let corner_inv = aq.corner_invert(&q, cfg).ok();
    let c2 = riesz_ap && corner_inv.is_some();
    let (mut c3, mut c4) = (false, false);
    if let Some(b) = corner_inv {
        let cert = is_gdr_inverse(a, &b, cfg)?;
        c3 = cert.valid;
        let qq = a.mul(&b)?;
        let tol = cfg.tol * (1.0 + a.norm() * b.norm());
        c4 = qq.idempotent_residual()? <= tol
            && a.commutator(&qq)? <= tol
            && qq.dist(&b.mul(a)?)? <= tol
            && spectra::is_riesz(&a.mul(&qq.shifted_neg(one()))?, cfg);
        if c3 && wit.inverse.is_none() {
            wit.inverse = Some(b);
        }
        if c4 && wit.quasi_polar.is_none() {
            wit.quasi_polar = Some(qq);
        }
    }
    let c5 = riesz_ap && spectra::is_browder_predicate(&a_plus_p, cfg);
    let c6 = riesz_ap && spectra::corner_is_browder(&aq, &q, cfg)?;
    if c1 && wit.idempotent.is_none() {
        wit.idempotent = Some(p.clone());
    }
    if c5 && wit.browder.is_none() {
        wit.browder = spectra::is_browder(&a_plus_p, cfg)?.witness;
    }
    Ok([c1, c2, c3, c4, c5, c6])
}

/// Evaluates every condition on the window idempotent and the trivial idempotents 0 and 1.
pub fn characterize(a: &AlgebraElement, cfg: &Config) -> Result<CharacterizationReport> {
    let report = characterize_unchecked(a, cfg)?;
    if !report.consistent() {
        return Err(Error::InternalDisagreement(format!("characterization conditions disagree: {:?}", report.conditions)));
    }
    Ok(report)
}

/// As `characterize`, returning the report even when the conditions disagree.
pub fn characterize_unchecked(a: &AlgebraElement, cfg: &Config) -> Result<CharacterizationReport> {
    let oracle = spectra::gdr_spectrum(a, cfg).distance(zero()) > cfg.cluster_radius;
    let mut candidates = Vec::new();
    let mut window_n = None;
    match auto_window(a, cfg) {
        Ok(w) => {
            window_n = Some(w.n);
            candidates.push(window_idempotent(a, &w, cfg)?);
        }
        Err(Error::NotGdrInvertible(_)) => {}
        Err(e) => return Err(e),
    }
    candidates.push(a.zero());
    candidates.push(a.unit());
    let mut wit = Witnesses::default();
    let mut conditions = [false; 7];
    for p in &candidates {
        let c = conditions_for(a, p, cfg, &mut wit)?;
        for (slot, v) in conditions.iter_mut().zip(c) {
            *slot |= v;
        }
    }
    conditions[6] = oracle;
    Ok(CharacterizationReport {
        conditions,
        idempotent: wit.idempotent,
        inverse: wit.inverse,
        quasi_polar: wit.quasi_polar,
        browder_witness: wit.browder,
        window_n,
    })
}

/// Partial-sum residual of a series identity.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesReport {
    pub residual: f64,
    /// Terms summed in each series.
    pub terms: usize,
}

/// `‖(λ - a)^{-1} - (Σ_{k≥1} λ^{-k} a^{k-1} p - Σ_{k≥0} λ^k b^{k+1})‖` with `K` terms (adaptive when `None`).
pub fn resolvent_expansion_check(a: &AlgebraElement, w: &SpectralWindow, lambda: C64, k: Option<usize>, cfg: &Config) -> Result<SeriesReport> {
    if !w.in_domain(lambda) {
        return Err(Error::OutsideDomain(format!("|λ| = {} outside ({}, {})", lambda.norm(), w.r_n, w.m_n)));
    }
    let cert = drazin_window_inverse(a, w, None, cfg)?;
    let b = &cert.inverse;
    let p = &cert.idempotent;
    let exact = resolvent(a, lambda, cfg)?;
    let inv = lambda.inv();
    // a^{k-1}p = (ap)^{k-1}p; stepping with ap keeps rounding noise from growing like (‖a‖/|λ|)^k.
    let ap = a.mul(p)?;
    // First terms: λ^{-1} p and b.
    let mut t1 = p.scale(inv);
    let mut t2 = b.clone();
    let mut s1 = t1.clone();
    let mut s2 = t2.clone();
    let limit = k.unwrap_or(cfg.series_max);
    let mut terms = 1;
    while terms < limit {
        t1 = ap.mul(&t1)?.scale(inv);
        t2 = b.mul(&t2)?.scale(lambda);
        s1 = s1.add(&t1)?;
        s2 = s2.add(&t2)?;
        terms += 1;
        let size = t1.norm() + t2.norm();
        if !size.is_finite() || (k.is_none() && size <= cfg.series_eps) {
            break;
        }
    }
    Ok(SeriesReport { residual: exact.dist(&s1.sub(&s2)?)?, terms })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport {
    /// `‖((λ + a^s)(1-p) + p)^{-l}(1-p) b^t - b^{sl+t}‖` per `λ`, with `b^0 = 1 - p`.
    pub residuals: Vec<f64>,
    /// `‖(a(1-p) - λ)^{-1}(1-p) - b‖` per `λ`, for `s = l = 1, t = 0`.
    pub variant_residuals: Vec<f64>,
}

impl LimitReport {
    /// Residual at the last (smallest) `λ`.
    pub fn last(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(0.0).max(self.variant_residuals.last().copied().unwrap_or(0.0))
    }
}

/// Limit formula `(λ + a^s)^{-l} b^t → b^{sl+t}` along a sequence `λ → 0`, evaluated on the `1 - p` corner.
pub fn limit_formula_check(a: &AlgebraElement, w: &SpectralWindow, s: u32, l: u32, t: u32, lambdas: &[C64], cfg: &Config) -> Result<LimitReport> {
    let cert = drazin_window_inverse(a, w, None, cfg)?;
    let b = &cert.inverse;
    let p = &cert.idempotent;
    let q = p.shifted_neg(one());
    let a_s = a.pow(s)?;
    let tail = if t == 0 { q.clone() } else { b.pow(t)? };
    let target = b.pow(s * l + t)?;
    let reach = w.m_n.powi(s as i32);
    let mut residuals = Vec::with_capacity(lambdas.len());
    let mut variant_residuals = Vec::new();
    for &lambda in lambdas {
        if lambda.norm() == 0.0 || lambda.norm() >= 0.5 * reach {
            return Err(Error::OutsideDomain(format!("λ = {lambda} with |(σ′ₙ)^s| ≥ {reach}")));
        }
        let x = a_s.shift(lambda).mul(&q)?.add(p)?.invert(cfg)?.mul(&q)?;
        let value = x.pow(l)?.mul(&tail)?;
        residuals.push(value.dist(&target)?);
        if s == 1 && l == 1 && t == 0 {
            // Left factor q removes the `p/λ` part, which otherwise amplifies rounding in `pq` by `1/|λ|`.
            let v = q.mul(&a.mul(&q)?.shift(-lambda).invert(cfg)?)?.mul(&q)?;
            variant_residuals.push(v.dist(b)?);
        }
    }
    Ok(LimitReport { residuals, variant_residuals })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerReport {
    /// `‖(a^{D,σₙ})^s - (a^s)^{D,(σₙ)^s}‖`.
    pub residual: f64,
    /// `‖b^D - a²b‖`.
    pub drazin_of_inverse: f64,
    /// `‖b b^D - ab‖`.
    pub inverse_product: f64,
    /// `‖(b^D)^D - b‖`.
    pub double_drazin: f64,
}

impl PowerReport {
    pub fn max(&self) -> f64 {
        self.residual.max(self.drazin_of_inverse).max(self.inverse_product).max(self.double_drazin)
    }
}

pub fn power_identity_check(a: &AlgebraElement, w: &SpectralWindow, s: u32, cfg: &Config) -> Result<PowerReport> {
    let cert = drazin_window_inverse(a, w, None, cfg)?;
    let b = &cert.inverse;
    let a_s = a.pow(s)?;
    let w_s = w.power(&a_s, s, cfg)?;
    let b_s = drazin_window_inverse(&a_s, &w_s, None, cfg)?.inverse;
    let residual = b.pow(s)?.dist(&b_s)?;
    let bd = drazin_at_zero(b, cfg)?;
    let a2b = a.mul(a)?.mul(b)?;
    Ok(PowerReport {
        residual,
        drazin_of_inverse: bd.dist(&a2b)?,
        inverse_product: b.mul(&bd)?.dist(&a.mul(b)?)?,
        double_drazin: drazin_at_zero(&bd, cfg)?.dist(b)?,
    })
}

#[derive(Clone, Debug)]
pub struct UniquenessReport {
    pub unique: bool,
    pub witnesses: Vec<GdrCertificate>,
    /// `‖b₀ - b₁‖` for two windows when not unique.
    pub difference: Option<f64>,
    /// Distance of the sole witness from the generalized Drazin inverse when unique.
    pub drazin_distance: Option<f64>,
}

/// Unique inverse exactly when `σ(a) = σ_b(a) ∪ {0}`; otherwise two distinct windowed inverses.
pub fn uniqueness_analysis(a: &AlgebraElement, cfg: &Config) -> Result<UniquenessReport> {
    let w0 = auto_window(a, cfg)?;
    let sigma = spectra::spectrum(a, cfg);
    if sigma.distance(zero()) > cfg.cluster_radius {
        return Err(Error::ZeroNotInSpectrum);
    }
    let sb0 = spectra::browder_spectrum(a, cfg).union(&SpectralSet::point(zero()), cfg.cluster_radius);
    let unique = sigma.hausdorff(&sb0) <= cfg.cluster_radius;
    let c0 = drazin_window_inverse(a, &w0, None, cfg)?;
    if unique {
        let gd = drazin_at_zero(a, cfg)?;
        let d = c0.inverse.dist(&gd)?;
        if d > XI_AGREEMENT * gd.norm().max(1.0) {
            return Err(Error::InternalDisagreement(format!("unique inverse differs from the Drazin inverse by {d:e}")));
        }
        return Ok(UniquenessReport { unique, witnesses: vec![c0], difference: None, drazin_distance: Some(d) });
    }
    let w1 = second_window(a, &w0, cfg)?;
    let c1 = drazin_window_inverse(a, &w1, None, cfg)?;
    let difference = c0.inverse.dist(&c1.inverse)?;
    if difference <= DISTINCT_FACTOR * cfg.tol {
        return Err(Error::InternalDisagreement(format!("inverses of distinct windows differ by only {difference:e}")));
    }
    Ok(UniquenessReport { unique, witnesses: vec![c0, c1], difference: Some(difference), drazin_distance: None })
}

const SECOND_WINDOW_TRIES: usize = 4;

/// A window differing from `w0` by Riesz points.
fn second_window(a: &AlgebraElement, w0: &SpectralWindow, cfg: &Config) -> Result<SpectralWindow> {
    if spectra::accumulation(a, cfg).distance(zero()) <= cfg.cluster_radius {
        // Inner windows have geometrically shrinking gaps; prefer the outer neighbour.
        let outer = w0.n.checked_sub(1).filter(|&n| n >= 1);
        let mut last = Error::NotClopen("no neighbouring window".into());
        for n in outer.into_iter().chain(w0.n + 1..w0.n + 1 + SECOND_WINDOW_TRIES) {
            match select_window(a, n, cfg) {
                Ok(w) => return Ok(w),
                Err(e @ (Error::NotClopen(_) | Error::WindowTooSmall(_))) => last = e,
                Err(e) => return Err(e),
            }
        }
        return Err(last);
    }
    if w0.n >= 1 {
        return SpectralWindow::at(a, w0.n - 1, cfg);
    }
    // The extra Riesz point lies outside the disc around 0; adjoin it to `{0}` directly.
    let p00 = spectra::riesz_points(a, cfg).without_point(zero(), cfg.cluster_radius);
    let mu = p00
        .points
        .iter()
        .map(|p| p.z)
        .chain(p00.sequences.iter().map(|s| s.value(s.start)))
        .min_by(|x, y| x.norm().total_cmp(&y.norm()))
        .ok_or_else(|| Error::InternalDisagreement("no Riesz point besides 0".into()))?;
    let sigma = w0.sigma_n.union(&SpectralSet::point(mu), cfg.cluster_radius);
    Ok(SpectralWindow::from_sigma(a, sigma, w0.n, cfg))
}

/// Certificate for `a + b` with inverse `a′ + b′` when `ab = ba = 0`.
pub fn sum_gdr(a: &AlgebraElement, a_inv: &AlgebraElement, b: &AlgebraElement, b_inv: &AlgebraElement, cfg: &Config) -> Result<GdrCertificate> {
    let prod = a.mul(b)?.norm().max(b.mul(a)?.norm());
    if prod > cfg.tol * (1.0 + a.norm() * b.norm()) {
        return Err(Error::ProductsNotZero(prod));
    }
    is_gdr_inverse(&a.add(b)?, &a_inv.add(b_inv)?, cfg)
}

#[derive(Clone, Debug)]
pub struct CornerGdrReport {
    /// Certificate for `aq` with inverse `a^{D,σₙ} q`.
    pub corner: GdrCertificate,
    /// Certificate for `a(1-q)` with inverse `a^{D,σₙ}(1-q)`.
    pub complement: GdrCertificate,
    /// Hausdorff distance between `σ_DR(a)` and `σ_DR(aq) ∪ σ_DR(a(1-q))`.
    pub dr_distance: f64,
}

pub fn corner_gdr(a: &AlgebraElement, q: &AlgebraElement, cfg: &Config) -> Result<CornerGdrReport> {
    let (aq, ar) = a.pierce_corner(q, cfg)?;
    let w = auto_window(a, cfg)?;
    let b = drazin_window_inverse(a, &w, None, cfg)?.inverse;
    let r = q.shifted_neg(one());
    let corner = is_gdr_inverse(&aq, &b.mul(q)?, cfg)?;
    let complement = is_gdr_inverse(&ar, &b.mul(&r)?, cfg)?;
    let joined = spectra::gdr_spectrum(&aq, cfg).union(&spectra::gdr_spectrum(&ar, cfg), cfg.cluster_radius);
    let dr = spectra::gdr_spectrum(a, cfg);
    let dr_distance = if dr.is_empty() && joined.is_empty() { 0.0 } else { dr.hausdorff(&joined) };
    Ok(CornerGdrReport { corner, complement, dr_distance })
}

/// The 16 trial values for `a + λb`: eight angles on each of `|λ| = 1` and `|λ| = 10`.
pub fn combination_grid() -> Vec<C64> {
    [1.0, 10.0].iter().flat_map(|r| (0..8).map(move |k| C64::from_polar(*r, TAU * k as f64 / 8.0))).collect()
}

#[derive(Clone, Debug)]
pub struct PairReport {
    /// `‖(1 - a a^D) b b^D - (1 - a a^D)‖`.
    pub residual: f64,
    /// A `λ` with `a + λb` invertible.
    pub lambda: C64,
    pub cert_a: GdrCertificate,
    pub cert_b: GdrCertificate,
    pub window_a: SpectralWindow,
    pub window_b: SpectralWindow,
}

/// Orthogonality of the window idempotents of a commuting pair, raising both windows together.
pub fn pair_orthogonality_check(a: &AlgebraElement, b: &AlgebraElement, cfg: &Config) -> Result<PairReport> {
    let comm = a.commutator(b)?;
    if comm > cfg.tol * (1.0 + a.norm() * b.norm()) {
        return Err(Error::NotCommuting(comm));
    }
    let lambda = combination_grid()
        .into_iter()
        .find(|l| a.add(&b.scale(*l)).and_then(|s| s.invert(cfg)).is_ok())
        .ok_or(Error::NoInvertibleCombination)?;
    let mut wa = auto_window(a, cfg)?;
    let mut wb = auto_window(b, cfg)?;
    let mut best = None;
    for _ in 0..=MAX_RAISES {
        let ca = drazin_window_inverse(a, &wa, None, cfg)?;
        let cb = drazin_window_inverse(b, &wb, None, cfg)?;
        let pa = &ca.idempotent;
        let residual = pa.mul(&b.mul(&cb.inverse)?)?.dist(pa)?;
        let done = residual <= cfg.tol;
        best = Some(PairReport { residual, lambda, cert_a: ca, cert_b: cb, window_a: wa.clone(), window_b: wb.clone() });
        if done {
            break;
        }
        match (select_window(a, wa.n + 1, cfg), select_window(b, wb.n + 1, cfg)) {
            (Ok(na), Ok(nb)) => {
                wa = na;
                wb = nb;
            }
            _ => break,
        }
    }
    Ok(best.expect("at least one window pair is tried"))
}

fn radii(pair: &PairReport, a: &AlgebraElement, b: &AlgebraElement) -> Result<(f64, f64)> {
    let lo = a.mul(&pair.cert_b.inverse)?.mul(&pair.cert_a.idempotent)?.spectral_radius();
    let rho = pair.cert_a.inverse.mul(b)?.spectral_radius();
    Ok((lo, if rho > 0.0 { 1.0 / rho } else { f64::INFINITY }))
}

/// The annulus `ρ(a b^D p_a) < |λ| < 1/ρ(a^D b)` where the pencil expansion converges.
pub fn pencil_radii(a: &AlgebraElement, b: &AlgebraElement, cfg: &Config) -> Result<(f64, f64)> {
    let pair = pair_orthogonality_check(a, b, cfg)?;
    radii(&pair, a, b)
}

/// Pencil expansion of `(λb - a)^{-1}` from the windowed inverses of a commuting pair.
pub fn pencil_expansion_check(a: &AlgebraElement, b: &AlgebraElement, lambda: C64, k: Option<usize>, cfg: &Config) -> Result<SeriesReport> {
    let pair = pair_orthogonality_check(a, b, cfg)?;
    let (ad, bd) = (&pair.cert_a.inverse, &pair.cert_b.inverse);
    let pa = &pair.cert_a.idempotent;
    let first_op = a.mul(bd)?;
    let second_op = ad.mul(b)?;
    // (a b^D)^k b^D p_a = (a b^D p_a)^k b^D p_a, and the corner form keeps rounding noise down.
    let first_op = first_op.mul(pa)?;
    let inner = spectra::spectrum(&first_op, cfg);
    let (lo, hi) = radii(&pair, a, b)?;
    let m = lambda.norm();
    if m <= lo {
        return Err(Error::HypothesisUnsatisfied(format!("|λ| = {m} ≤ ρ(a b^D p_a) = {lo}")));
    }
    if m >= hi {
        return Err(Error::HypothesisUnsatisfied(format!("|λ| = {m} ≥ 1/ρ(a^D b) = {hi}")));
    }
    let windows = pair.window_a.sigma_n.union(&pair.window_b.sigma_n, cfg.cluster_radius);
    let excess = inner.excess(&windows);
    if excess > cfg.cluster_radius.max(1e-8) {
        return Err(Error::HypothesisUnsatisfied(format!("σ(a b^D p_a) leaves the windows by {excess:e}")));
    }
    if windows.distance(lambda) <= cfg.cluster_radius {
        return Err(Error::HypothesisUnsatisfied(format!("λ = {lambda} lies on a window")));
    }
    let exact = b.scale(lambda).sub(a)?.invert(cfg).map_err(|_| Error::HypothesisUnsatisfied(format!("λb - a singular at λ = {lambda}")))?;
    let inv = lambda.inv();
    let mut t1 = bd.mul(pa)?.scale(inv);
    let mut t2 = ad.clone();
    let mut s1 = t1.clone();
    let mut s2 = t2.clone();
    let limit = k.unwrap_or(cfg.series_max);
    let mut terms = 1;
    while terms < limit {
        t1 = first_op.mul(&t1)?.scale(inv);
        t2 = second_op.mul(&t2)?.scale(lambda);
        s1 = s1.add(&t1)?;
        s2 = s2.add(&t2)?;
        terms += 1;
        let size = t1.norm() + t2.norm();
        if !size.is_finite() || (k.is_none() && size <= cfg.series_eps) {
            break;
        }
    }
    Ok(SeriesReport { residual: exact.dist(&s1.sub(&s2)?)?, terms })
}

/// `a` and `a*` are generalized Drazin-Riesz invertible together; returns the shared answer.
pub fn adjoint_gdr_check(a: &AlgebraElement, cfg: &Config) -> Result<bool> {
    let x = characterize(a, cfg)?.gdr();
    let y = characterize(&a.adjoint(), cfg)?.gdr();
    if x != y {
        return Err(Error::InternalDisagreement(format!("element {x}, adjoint {y}")));
    }
    Ok(x)
}

/// Hausdorff distance between `f(σ_DR(a))` and `σ_DR(f(a))`.
pub fn spectral_mapping_check(a: &AlgebraElement, coeffs: &[C64], cfg: &Config) -> Result<f64> {
    let f = Poly::new(coeffs.to_vec());
    if f.degree() == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let mapped = spectra::gdr_spectrum(a, cfg).map_poly(&f, cfg.cluster_radius);
    let direct = spectra::gdr_spectrum(&a.horner(coeffs)?, cfg);
    if mapped.is_empty() && direct.is_empty() {
        return Ok(0.0);
    }
    Ok(mapped.hausdorff(&direct))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_core::{BlockElement, BlockLayout, BlockSpec, DiagonalElement, Lane, Region, TailRule};
    use nalgebra::DMatrix;

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

    fn shift_analog() -> AlgebraElement {
        let s: AlgebraElement = DiagonalElement::new(vec![Lane::new(vec![], TailRule::dense(Region::circle(c(0.0), 1.0), 0))]).unwrap().into();
        s.shifted_neg(c(1.0))
    }

    #[test]
    fn e1_certificate() {
        let cfg = Config::default();
        let a = e1();
        let b = BlockElement::new(
            a.as_block().unwrap().layout().clone(),
            vec![DMatrix::zeros(2, 2), DMatrix::from_diagonal_element(2, 2, c(0.5))],
        )
        .unwrap()
        .into();
        let cert = is_gdr_inverse(&a, &b, &cfg).unwrap();
        assert!(cert.valid);
        assert_eq!(cert.riesz_defect, 0.0);
        let w = auto_window(&a, &cfg).unwrap();
        let d = drazin_window_inverse(&a, &w, Some(c(-1.0)), &cfg).unwrap();
        assert!(d.inverse.dist(&b).unwrap() < 1e-14);
    }

    #[test]
    fn zero_inverse_of_riesz_element() {
        let cfg = Config::default();
        let a = harmonic();
        let cert = is_gdr_inverse(&a, &a.zero(), &cfg).unwrap();
        assert!(cert.valid);
        assert_eq!(cert.idempotent, a.unit());
    }

    #[test]
    fn harmonic_window_two_inverse() {
        let cfg = Config::default();
        let a = harmonic();
        let w = select_window(&a, 2, &cfg).unwrap();
        let cert = drazin_window_inverse(&a, &w, Some(c(-1.0)), &cfg).unwrap();
        let d = cert.inverse.as_diagonal().unwrap().clone();
        assert_eq!(d.lanes()[0].prefix, vec![c(1.0), c(2.0)]);
        assert_eq!(d.lanes()[0].tail.as_constant(), Some(c(0.0)));
        assert!(cert.valid);
    }

    #[test]
    fn characterizations() {
        let cfg = Config::default();
        assert!(characterize(&e1().unit(), &cfg).unwrap().gdr());
        assert!(characterize(&harmonic(), &cfg).unwrap().gdr());
        let r = characterize(&shift_analog(), &cfg).unwrap();
        assert_eq!(r.conditions, [false; 7]);
    }

    #[test]
    fn harmonic_is_not_unique() {
        let cfg = Config::default();
        let u = uniqueness_analysis(&harmonic(), &cfg).unwrap();
        assert!(!u.unique);
        assert!(u.difference.unwrap() > 1e-8);
    }

    #[test]
    fn nilpotent_inverse_is_unique_zero() {
        let cfg = Config::default();
        let layout = BlockLayout::new(vec![BlockSpec { dim: 2, ideal: false }]).unwrap();
        let n: AlgebraElement = BlockElement::new(layout, vec![DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)])]).unwrap().into();
        let u = uniqueness_analysis(&n, &cfg).unwrap();
        assert!(u.unique);
        assert_eq!(u.witnesses[0].inverse.norm(), 0.0);
    }

    #[test]
    fn harmonic_expansion() {
        let cfg = Config::default();
        let a = harmonic();
        let w = select_window(&a, 2, &cfg).unwrap();
        let rep = resolvent_expansion_check(&a, &w, C64::new(0.4, 0.1), None, &cfg).unwrap();
        assert!(rep.residual < 1e-8, "{rep:?}");
        assert!(matches!(resolvent_expansion_check(&a, &w, C64::new(0.2, 0.1), None, &cfg), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn harmonic_limits() {
        let cfg = Config::default();
        let a = harmonic();
        let w = select_window(&a, 2, &cfg).unwrap();
        let lambdas: Vec<C64> = (1..=8).map(|k| c(-(10f64).powi(-k))).collect();
        let r = limit_formula_check(&a, &w, 1, 1, 0, &lambdas, &cfg).unwrap();
        assert!(r.last() < 1e-6, "{r:?}");
        let r = limit_formula_check(&a, &w, 2, 1, 1, &lambdas, &cfg).unwrap();
        assert!(r.last() < 1e-6, "{r:?}");
    }

    #[test]
    fn e1_cube_identity() {
        let cfg = Config::default();
        let a = e1();
        let w = auto_window(&a, &cfg).unwrap();
        let rep = power_identity_check(&a, &w, 3, &cfg).unwrap();
        assert!(rep.max() < 1e-12, "{rep:?}");
    }

    #[test]
    fn pencil_on_swapped_lanes() {
        let cfg = Config::default();
        let small = TailRule::power(c(0.0), c(0.2), 1.0).unwrap();
        let a: AlgebraElement = DiagonalElement::new(vec![Lane::new(vec![], small.clone()), Lane::constant(c(1.0))]).unwrap().into();
        let b: AlgebraElement = DiagonalElement::new(vec![Lane::constant(c(1.0)), Lane::new(vec![], small)]).unwrap().into();
        let pair = pair_orthogonality_check(&a, &b, &cfg).unwrap();
        assert_eq!(pair.residual, 0.0);
        let rep = pencil_expansion_check(&a, &b, c(0.5), None, &cfg).unwrap();
        assert!(rep.residual < 1e-7, "{rep:?}");
    }

    #[test]
    fn circle_mapping() {
        let cfg = Config::default();
        let s: AlgebraElement = DiagonalElement::new(vec![Lane::new(vec![], TailRule::dense(Region::circle(c(0.0), 1.0), 0))]).unwrap().into();
        assert!(spectral_mapping_check(&s, &[c(0.0), c(0.0), c(1.0)], &cfg).unwrap() < 1e-6);
        assert!(matches!(spectral_mapping_check(&s, &[c(3.0)], &cfg), Err(Error::ConstantPolynomial)));
    }
}
