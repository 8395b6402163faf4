//! Seeded property suite behind `verify`: one entry per theorem tag with reproducer seeds.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra_core::{AlgebraElement, DiagonalElement, Lane, Region, TailRule};
use crate::calculus::{holo_calc, spectral_idempotent, verify_spectral_set, Method, SpectralSplit};
use crate::config::Config;
use crate::gdr::regularity::{factor_trial, power_trial};
use crate::gdr::{
    adjoint_gdr_check, auto_window, characterize, corner_gdr, drazin_window_inverse, limit_formula_check, pair_orthogonality_check,
    pencil_expansion_check, pencil_radii, power_identity_check, resolvent_expansion_check, spectral_mapping_check, sum_gdr, uniqueness_analysis,
    window_idempotent, SpectralWindow,
};
use crate::generate::{trial_seed, Generator};
use crate::spectra;
use crate::C64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub trial: u64,
    /// Seed reproducing the trial through `Generator::new`.
    pub seed: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub tag: &'static str,
    pub title: &'static str,
    pub trials: usize,
    pub passed: bool,
    /// Largest residual over passing trials.
    pub max_residual: f64,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    /// Tolerances outside the validated range.
    pub config_warnings: Vec<String>,
    pub theorems: Vec<TheoremReport>,
}

type Check = fn(&mut Generator, &Config) -> Result<f64, String>;

fn within(label: &str, value: f64, bound: f64) -> Result<f64, String> {
    if value <= bound && value.is_finite() {
        Ok(value)
    } else {
        Err(format!("{label} = {value:e} exceeds {bound:e}"))
    }
}

fn err(e: crate::error::Error) -> String {
    e.to_string()
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn riesz_stability(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let x = g.riesz_element();
    let (p, q) = (g.polynomial(3, true), g.polynomial(3, true));
    let (a, b) = (x.horner(&p).map_err(err)?, x.horner(&q).map_err(err)?);
    let sum = spectra::essential_spectrum(&a.add(&b).map_err(err)?, cfg).sup_abs();
    let prod = spectra::essential_spectrum(&a.mul(&b).map_err(err)?, cfg).sup_abs();
    within("quotient radius of a+b", sum, cfg.tol_zero)?;
    within("quotient radius of ab", prod, cfg.tol_zero)
}

fn browder_product(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let x = g.sample().element;
    let (p, q) = (g.polynomial(2, false), g.polynomial(2, false));
    let (a, b) = (x.horner(&p).map_err(err)?, x.horner(&q).map_err(err)?);
    let ab = a.mul(&b).map_err(err)?;
    let (ba, bb, bab) = (spectra::is_browder_predicate(&a, cfg), spectra::is_browder_predicate(&b, cfg), spectra::is_browder_predicate(&ab, cfg));
    if bab != (ba && bb) {
        return Err(format!("a: {ba}, b: {bb}, ab: {bab}"));
    }
    Ok(0.0)
}

fn spectral_sets(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let fine = Config { nodes: 512, max_nodes: 512, ..cfg.clone() };
    let inst = g.planted_gap();
    let exact = spectral_idempotent(&inst.element, &inst.target, Method::Exact, &fine).map_err(err)?;
    let contour = spectral_idempotent(&inst.element, &inst.target, Method::Contour, &fine).map_err(err)?;
    let d = within("contour against exact idempotent", exact.dist(&contour).map_err(err)?, 1e-8)?;
    let a = g.separated_element();
    let w = auto_window(&a, cfg).map_err(err)?;
    if w.sigma_n.is_empty() {
        return Ok(d);
    }
    let p = window_idempotent(&a, &w, cfg).map_err(err)?;
    let check = verify_spectral_set(&a, &p, &w.sigma_n, w.xi(), cfg).map_err(err)?;
    if !check.passed() {
        return Err(format!("window idempotent not certified: {check:?}"));
    }
    Ok(d.max(check.corner_distance))
}

fn certificates(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let a = if g.exponent(0, 1) == 0 { g.gdr_block() } else { g.gdr_diagonal() };
    let w = auto_window(&a, cfg).map_err(err)?;
    let cert = drazin_window_inverse(&a, &w, None, cfg).map_err(err)?;
    if !cert.valid {
        return Err(format!("invalid certificate: comm {:e}, inner {:e}, defect {:e}", cert.residual_comm, cert.residual_inner, cert.riesz_defect));
    }
    Ok(cert.residual_comm.max(cert.residual_inner))
}

fn seven_way(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let s = g.sample();
    let rep = characterize(&s.element, cfg).map_err(err)?;
    if rep.gdr() != s.expected_gdr() {
        return Err(format!("oracle says {} for a {:?} element", rep.gdr(), s.family));
    }
    Ok(0.0)
}

/// Point of the annulus `r_n < |λ| < m_n` at the geometric mean of its radii, kept at least
/// `m_n / 4` away from 0 since rounding-level eigenvalues make `r_n` tiny.
fn annulus_point(g: &mut Generator, w: &SpectralWindow) -> C64 {
    let hi = if w.m_n.is_finite() { w.m_n } else { 2.0 };
    let m = (w.r_n * hi).sqrt().max(0.25 * hi);
    C64::from_polar(m, g.angle())
}

fn expansion(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let a = g.separated_element();
    let w = auto_window(&a, cfg).map_err(err)?;
    let lambda = annulus_point(g, &w);
    let rep = resolvent_expansion_check(&a, &w, lambda, None, cfg).map_err(err)?;
    within("expansion residual", rep.residual, 1e-8)
}

fn limit_sequence() -> Vec<C64> {
    (1..=8).map(|k| c(-(10f64).powi(-k))).collect()
}

fn limit_first(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let a = g.separated_element();
    let w = auto_window(&a, cfg).map_err(err)?;
    let rep = limit_formula_check(&a, &w, 1, 1, 0, &limit_sequence(), cfg).map_err(err)?;
    within("limit residual", rep.last(), 1e-6)
}

fn limit_grid(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let a = g.separated_element();
    let w = auto_window(&a, cfg).map_err(err)?;
    let mut worst = 0.0f64;
    for s in 1..=2 {
        for l in 1..=2 {
            for t in 0..=1 {
                let rep = limit_formula_check(&a, &w, s, l, t, &limit_sequence(), cfg).map_err(|e| format!("(s,l,t) = ({s},{l},{t}): {e}"))?;
                worst = worst.max(within(&format!("limit residual at (s,l,t) = ({s},{l},{t})"), rep.last(), 1e-6)?);
            }
        }
    }
    Ok(worst)
}

fn uniqueness(g: &mut Generator, cfg: &Config, want_unique: bool) -> Result<f64, String> {
    let a = g.separated_element();
    if spectra::spectrum(&a, cfg).distance(c(0.0)) > cfg.cluster_radius {
        return Ok(0.0);
    }
    let rep = uniqueness_analysis(&a, cfg).map_err(err)?;
    if rep.unique != want_unique {
        return Ok(0.0);
    }
    Ok(rep.drazin_distance.unwrap_or(0.0))
}

fn non_unique(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    uniqueness(g, cfg, false)
}

fn unique(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    uniqueness(g, cfg, true)
}

fn holomorphic(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let a = g.separated_element();
    let w = auto_window(&a, cfg).map_err(err)?;
    if w.sigma_n.is_empty() {
        return Ok(0.0);
    }
    let split = SpectralSplit::new(&a, w.sigma_n.clone(), cfg).map_err(err)?;
    let holo = holo_calc(&a, &split, cfg).map_err(err)?;
    let b = drazin_window_inverse(&a, &w, None, cfg).map_err(err)?.inverse;
    let d = holo.value.dist(&b).map_err(err)?;
    within("holomorphic calculus against the windowed inverse", d, 1e-7 * b.norm().max(1.0))?;
    within("path disagreement", holo.disagreement, 1e-7)
}

fn sums(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let a = if g.exponent(0, 1) == 0 { g.gdr_block() } else { g.gdr_diagonal() };
    let q = g.coordinate_idempotent(&a);
    let rep = corner_gdr(&a, &q, cfg).map_err(err)?;
    if !rep.corner.valid || !rep.complement.valid {
        return Err("corner certificate invalid".into());
    }
    within("σ_DR split distance", rep.dr_distance, 1e-6)?;
    let (aq, ar) = a.pierce_corner(&q, cfg).map_err(err)?;
    let cert = sum_gdr(&aq, &rep.corner.inverse, &ar, &rep.complement.inverse, cfg).map_err(err)?;
    if !cert.valid {
        return Err("recombined certificate invalid".into());
    }
    Ok(cert.residual_comm.max(cert.residual_inner))
}

fn drazin_of_inverse(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let a = g.separated_element();
    let w = auto_window(&a, cfg).map_err(err)?;
    let rep = power_identity_check(&a, &w, 1, cfg).map_err(err)?;
    within("inverse Drazin identities", rep.drazin_of_inverse.max(rep.inverse_product).max(rep.double_drazin), 1e-8)
}

fn regularity(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let (ps, fs) = (g.exponent(0, u32::MAX) as u64, g.exponent(0, u32::MAX) as u64);
    if let Some(d) = power_trial(ps, cfg).map_err(err)? {
        return Err(format!("power axiom: {d}"));
    }
    match factor_trial(fs, cfg) {
        Ok(None) | Err(crate::error::Error::GeneratorExhausted(_)) => Ok(0.0),
        Ok(Some(d)) => Err(format!("factorization axiom: {d}")),
        Err(e) => Err(e.to_string()),
    }
}

fn mapping(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let a = match g.exponent(0, 2) {
        0 => g.gdr_block(),
        1 => g.non_gdr(),
        _ => {
            let (center, r) = (g.annulus(0.0, 1.0), g.annulus(0.2, 1.0).norm());
            DiagonalElement::new(vec![Lane::new(vec![], TailRule::dense(Region::circle(center, r), 7))]).map_err(err)?.into()
        }
    };
    let mut worst = 0.0f64;
    for f in [vec![c(0.0), c(0.0), c(1.0)], vec![c(0.0), c(-1.0), c(1.0)], vec![c(1.0), c(0.0), c(0.0), c(1.0)]] {
        worst = worst.max(within("spectral mapping distance", spectral_mapping_check(&a, &f, cfg).map_err(err)?, 1e-6)?);
    }
    Ok(worst)
}

fn powers(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let a = g.separated_element();
    let w = auto_window(&a, cfg).map_err(err)?;
    let mut worst = 0.0f64;
    for s in 2..=3 {
        worst = worst.max(within(&format!("power identity at s = {s}"), power_identity_check(&a, &w, s, cfg).map_err(err)?.residual, 1e-8)?);
    }
    Ok(worst)
}

fn pairs(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let (a, b) = g.commuting_pair();
    within("orthogonality residual", pair_orthogonality_check(&a, &b, cfg).map_err(err)?.residual, 1e-8)
}

fn pencils(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let (a, b) = g.commuting_pair();
    let (lo, hi) = pencil_radii(&a, &b, cfg).map_err(err)?;
    let lambda = C64::from_polar((lo * hi.min(1e3)).sqrt(), g.angle());
    within("pencil residual", pencil_expansion_check(&a, &b, lambda, None, cfg).map_err(err)?.residual, 1e-7)
}

fn involution(g: &mut Generator, cfg: &Config) -> Result<f64, String> {
    let s = g.sample();
    let v = adjoint_gdr_check(&s.element, cfg).map_err(err)?;
    if v != s.expected_gdr() {
        return Err(format!("adjoint check says {v} for a {:?} element", s.family));
    }
    Ok(0.0)
}

/// Every suite entry: tag, title and trial check.
const THEOREMS: [(&str, &str, Check); 19] = [
    ("T2.1", "sums and products of commuting Riesz elements are Riesz", riesz_stability),
    ("L2.4", "commuting product is Browder iff both factors are", browder_product),
    ("T2.7", "spectral idempotents: contour against exact, certified splits", spectral_sets),
    ("T3.2", "seven-way characterization agrees with the symbolic oracle", seven_way),
    ("T4.2", "windowed inverses carry valid certificates", certificates),
    ("T4.3", "resolvent Laurent expansion around the window", expansion),
    ("T4.4", "resolvent limit on the complementary corner", limit_first),
    ("T4.6", "distinct windows give distinct inverses", non_unique),
    ("T4.7", "unique inverse equals the generalized Drazin inverse", unique),
    ("T4.8", "holomorphic calculus reproduces the windowed inverse", holomorphic),
    ("T4.10", "corner splits and orthogonal sums", sums),
    ("P4.13", "Drazin inverse of the windowed inverse", drazin_of_inverse),
    ("T5.3", "power and factorization axioms of a regularity", regularity),
    ("T5.4", "spectral mapping for the Drazin-Riesz spectrum", mapping),
    ("T6.1", "powers of windowed inverses", powers),
    ("T6.2", "orthogonality of window idempotents of a commuting pair", pairs),
    ("T6.3", "pencil resolvent expansion", pencils),
    ("T6.4", "limit formula over the (s, l, t) grid", limit_grid),
    ("P6.5", "invertibility is preserved by the adjoint", involution),
];

pub fn tags() -> Vec<&'static str> {
    THEOREMS.iter().map(|t| t.0).collect()
}

fn run_theorem(index: usize, seed: u64, trials: usize, cfg: &Config) -> TheoremReport {
    let (tag, title, check) = THEOREMS[index];
    let stream = (index as u64 + 1) << 32;
    let outcomes: Vec<(u64, u64, Result<f64, String>)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(seed, stream + t);
            (t, s, check(&mut Generator::new(s), cfg))
        })
        .collect();
    let mut max_residual = 0.0f64;
    let mut failures = Vec::new();
    for (trial, seed, r) in outcomes {
        match r {
            Ok(v) => max_residual = max_residual.max(v),
            Err(detail) => failures.push(Failure { trial, seed, detail }),
        }
    }
    TheoremReport { tag, title, trials, passed: failures.is_empty(), max_residual, failures }
}

/// Deterministic extra checks pinned to fixed elements.
fn pinned(cfg: &Config) -> Vec<Failure> {
    let mut out = Vec::new();
    let harmonic: AlgebraElement = DiagonalElement::new(vec![Lane::new(vec![], TailRule::power(c(0.0), c(1.0), 1.0).expect("valid tail"))]).expect("one lane").into();
    let diff = (|| -> crate::error::Result<f64> {
        let b1 = drazin_window_inverse(&harmonic, &SpectralWindow::at(&harmonic, 1, cfg)?, None, cfg)?;
        let b2 = drazin_window_inverse(&harmonic, &SpectralWindow::at(&harmonic, 2, cfg)?, None, cfg)?;
        b1.inverse.dist(&b2.inverse)
    })();
    match diff {
        Ok(d) if d == 2.0 => {}
        other => out.push(Failure { trial: 0, seed: 0, detail: format!("harmonic windows 1 and 2 differ by {other:?}, expected 2") }),
    }
    out
}

/// Runs every theorem entry with `trials` seeded trials each.
pub fn run_suite(seed: u64, trials: usize, cfg: &Config) -> SuiteReport {
    let mut theorems: Vec<TheoremReport> = (0..THEOREMS.len()).map(|i| run_theorem(i, seed, trials, cfg)).collect();
    let extra = pinned(cfg);
    if let Some(t) = theorems.iter_mut().find(|t| t.tag == "T4.6") {
        t.passed &= extra.is_empty();
        t.failures.extend(extra);
    }
    let passed = theorems.iter().all(|t| t.passed);
    SuiteReport { seed, trials, passed, config_warnings: cfg.range_warnings(), theorems }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_every_required_tag() {
        let t = tags();
        for tag in ["T2.1", "L2.4", "T3.2", "T4.3", "T4.4", "T4.6", "T4.7", "T4.8", "T4.10", "P4.13", "T5.3", "T5.4", "T6.1", "T6.2", "T6.3", "T6.4", "P6.5"] {
            assert!(t.contains(&tag), "{tag}");
        }
    }

    #[test]
    fn one_trial_suite_is_deterministic() {
        let cfg = Config::default();
        let a = run_suite(7, 1, &cfg);
        let b = run_suite(7, 1, &cfg);
        assert_eq!(a, b);
        assert!(a.passed, "{:#?}", a.theorems.iter().filter(|t| !t.passed).collect::<Vec<_>>());
    }

    #[test]
    fn loose_tolerance_is_flagged() {
        let cfg = Config { tol: 1e-2, ..Config::default() };
        assert!(!cfg.range_warnings().is_empty());
    }
}
