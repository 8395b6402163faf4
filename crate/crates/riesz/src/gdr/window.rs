//! Spectral windows `σₙ = {0, λ_{n+1}, λ_{n+2}, …}` around 0.

use crate::algebra_core::AlgebraElement;
use crate::calculus::default_xi;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::spectra::{self, SpectralSet};
use crate::C64;

/// Halvings of the enumeration threshold before giving up on finding more Riesz points.
const MAX_HALVINGS: usize = 200;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Window data: the clopen part `σₙ`, its complement, and the radii around them.
#[derive(Clone, Debug)]
pub struct SpectralWindow {
    pub n: usize,
    pub sigma_n: SpectralSet,
    pub sigma_n_prime: SpectralSet,
    /// `sup |σₙ|`.
    pub r_n: f64,
    /// `inf |σ′ₙ|`, infinite when `σ′ₙ` is empty.
    pub m_n: f64,
    /// Radius of the disc separating `σₙ` from `σ′ₙ`.
    pub cut: f64,
    /// The excluded Riesz points `λ₁, …, λₙ`, by decreasing modulus.
    pub excluded: Vec<C64>,
}

impl SpectralWindow {
    /// Window of index `n` with no size requirement on `r_n`.
    pub fn at(a: &AlgebraElement, n: usize, cfg: &Config) -> Result<Self> {
        let omega = Omega::new(a, cfg)?;
        omega.window(a, n, cfg)
    }

    /// Window with an arbitrary spectral part `sigma ∋ 0`; `n` counts the Riesz points it leaves out.
    pub fn from_sigma(a: &AlgebraElement, sigma: SpectralSet, n: usize, cfg: &Config) -> Self {
        let rest = spectra::spectrum(a, cfg).difference(&sigma, cfg.cluster_radius);
        SpectralWindow {
            n,
            r_n: sigma.sup_abs(),
            m_n: rest.inf_abs(),
            cut: sigma.sup_abs(),
            sigma_n: sigma,
            sigma_n_prime: rest,
            excluded: Vec::new(),
        }
    }

    /// `m′ₙ - rₙ`.
    pub fn gap(&self) -> f64 {
        self.m_n - self.r_n
    }

    /// Default `ξ` for this window.
    pub fn xi(&self) -> C64 {
        default_xi(self.r_n)
    }

    /// The punctured domain of the resolvent expansion: `rₙ < |λ| < m′ₙ`.
    pub fn in_domain(&self, lambda: C64) -> bool {
        let m = lambda.norm();
        m > self.r_n && m < self.m_n
    }

    /// The window of `a^s` whose spectral part is `(σₙ)^s`.
    pub fn power(&self, a_pow: &AlgebraElement, s: u32, cfg: &Config) -> Result<SpectralWindow> {
        let (r, m) = (self.r_n.powi(s as i32), self.m_n.powi(s as i32));
        if m - r < 2.0 * cfg.clearance {
            return Err(Error::PowerCollision);
        }
        let cut = if m.is_finite() { 0.5 * (r + m) } else { r + 1.0 };
        let (sigma_n, sigma_n_prime) = spectra::spectrum(a_pow, cfg).split_by_disc(cut)?;
        Ok(SpectralWindow {
            n: self.n,
            r_n: sigma_n.sup_abs(),
            m_n: sigma_n_prime.inf_abs(),
            sigma_n,
            sigma_n_prime,
            cut,
            excluded: self.excluded.iter().map(|z| z.powu(s)).collect(),
        })
    }
}

/// Riesz points near 0 in decreasing modulus, enumerated lazily.
struct Omega {
    /// `D̄(0, η₁)` radius; infinite when no other accumulation is near 0.
    eta1: f64,
    p00: SpectralSet,
    zero_in_spectrum: bool,
    zero_accumulates: bool,
}

impl Omega {
    fn new(a: &AlgebraElement, cfg: &Config) -> Result<Self> {
        let dr = spectra::gdr_spectrum(a, cfg);
        if dr.distance(zero()) <= cfg.cluster_radius {
            return Err(Error::NotGdrInvertible("0 lies in acc σ_b".into()));
        }
        let sigma = spectra::spectrum(a, cfg);
        let sb = spectra::browder_spectrum(a, cfg);
        let p00 = sigma.difference(&sb, cfg.cluster_radius);
        // Distance from 0 to the accumulation of Riesz points and to σ_b, both away from 0.
        let mut eta = f64::INFINITY;
        for s in &p00.sequences {
            let l = s.limit().norm();
            if l > cfg.cluster_radius {
                eta = eta.min(l);
            }
        }
        for z in sb.without_point(zero(), cfg.cluster_radius).samples(64, 0) {
            eta = eta.min(z.norm());
        }
        for r in &sb.regions {
            eta = eta.min(r.distance(zero()));
        }
        Ok(Omega {
            eta1: eta / 2.0,
            p00,
            zero_in_spectrum: sigma.distance(zero()) <= cfg.cluster_radius,
            zero_accumulates: sigma.acc(cfg.cluster_radius).distance(zero()) <= cfg.cluster_radius,
        })
    }

    /// All Riesz points of modulus in `[t, η₁]`, excluding 0, by decreasing modulus.
    fn above(&self, t: f64, cfg: &Config) -> Vec<C64> {
        let keep = |z: C64| {
            let m = z.norm();
            m >= t && m <= self.eta1 && m > cfg.cluster_radius
        };
        let mut out: Vec<C64> = self.p00.points.iter().map(|p| p.z).filter(|z| keep(*z)).collect();
        for s in &self.p00.sequences {
            let l = s.limit().norm();
            // Beyond this index every value is within `δ` of the limit and so below `t` or beyond `η₁`.
            let delta = if l <= cfg.cluster_radius { t } else { l - self.eta1 };
            let end = s.settle(delta.max(f64::MIN_POSITIVE));
            out.extend((s.start..end).map(|n| s.value(n)).filter(|z| keep(*z)));
        }
        out.sort_by(|x, y| y.norm().total_cmp(&x.norm()));
        out.dedup_by(|x, y| (*x - *y).norm() <= cfg.cluster_radius);
        out
    }

    /// The `k` largest Riesz points, or all of them when there are fewer.
    fn top(&self, k: usize, cfg: &Config) -> (Vec<C64>, bool) {
        let mut t = if self.eta1.is_finite() { self.eta1 } else { self.p00.sup_abs().max(cfg.cluster_radius) };
        for _ in 0..MAX_HALVINGS {
            let pts = self.above(t, cfg);
            if pts.len() >= k {
                return (pts, false);
            }
            if t <= cfg.cluster_radius {
                return (pts, true);
            }
            t /= 2.0;
        }
        (self.above(cfg.cluster_radius, cfg), true)
    }

    fn window(&self, a: &AlgebraElement, n: usize, cfg: &Config) -> Result<SpectralWindow> {
        let sigma = spectra::spectrum(a, cfg);
        if !self.zero_in_spectrum {
            return Ok(SpectralWindow {
                n: 0,
                sigma_n: SpectralSet::empty(),
                m_n: sigma.inf_abs(),
                sigma_n_prime: sigma,
                r_n: 0.0,
                cut: 0.0,
                excluded: Vec::new(),
            });
        }
        let (pts, exhausted) = self.top(n + 1, cfg);
        if exhausted && n > pts.len() {
            return Err(Error::NotClopen(format!("window index {n} exceeds the {} Riesz points near 0", pts.len())));
        }
        let lower = pts.get(n).map_or(0.0, |z| z.norm());
        let upper = if n >= 1 {
            pts[n - 1].norm()
        } else {
            let (_, rest) = sigma.split_by_disc(lower.max(cfg.cluster_radius))?;
            rest.inf_abs()
        };
        if upper - lower <= cfg.cluster_radius {
            return Err(Error::NotClopen(format!("Riesz points {n} and {} share the modulus {upper}", n + 1)));
        }
        let cut = if upper.is_finite() { 0.5 * (lower + upper) } else { lower + 1.0 };
        let (sigma_n, sigma_n_prime) = sigma.split_by_disc(cut)?;
        Ok(SpectralWindow {
            n,
            r_n: sigma_n.sup_abs(),
            m_n: sigma_n_prime.inf_abs(),
            sigma_n,
            sigma_n_prime,
            cut,
            excluded: pts.into_iter().take(n).collect(),
        })
    }
}

/// Window of index `n`, requiring `rₙ < ½` and a gap of `2·clearance`.
pub fn select_window(a: &AlgebraElement, n: usize, cfg: &Config) -> Result<SpectralWindow> {
    let w = SpectralWindow::at(a, n, cfg)?;
    if w.r_n >= 0.5 {
        return Err(Error::WindowTooSmall(w.r_n));
    }
    if w.gap() < 2.0 * cfg.clearance {
        return Err(Error::NotClopen(format!("window gap {:e}", w.gap())));
    }
    Ok(w)
}

/// The smallest admissible window: `σ₀`-style `{0}` when 0 is isolated, else the first `n` with `rₙ < ¼`.
pub fn auto_window(a: &AlgebraElement, cfg: &Config) -> Result<SpectralWindow> {
    let omega = Omega::new(a, cfg)?;
    if !omega.zero_in_spectrum {
        return omega.window(a, 0, cfg);
    }
    if !omega.zero_accumulates {
        let (pts, _) = omega.top(usize::MAX, cfg);
        return omega.window(a, pts.len(), cfg);
    }
    let mut last = None;
    for n in 0..4096 {
        let w = omega.window(a, n, cfg)?;
        if w.r_n < 0.25 && w.gap() >= 2.0 * cfg.clearance {
            return Ok(w);
        }
        last = Some(w.r_n);
    }
    Err(Error::WindowTooSmall(last.unwrap_or(f64::INFINITY)))
}
