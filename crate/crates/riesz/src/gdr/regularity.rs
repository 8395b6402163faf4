//! Randomized trials of the two regularity axioms for generalized Drazin-Riesz invertibility.

use rayon::prelude::*;
use serde::Serialize;

use super::characterize;
use crate::algebra_core::AlgebraElement;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::generate::{trial_seed, Generator};

/// Fresh Bézout tuples tried per trial before giving up.
const MAX_REGENERATIONS: u64 = 16;

/// A failed trial with the seed that reproduces it through `Generator::new`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialFailure {
    pub axiom: &'static str,
    pub trial: u64,
    pub seed: u64,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RegularityReport {
    pub power_trials: usize,
    pub factor_trials: usize,
    /// Bézout tuples discarded and redrawn.
    pub regenerated: usize,
    pub failures: Vec<TrialFailure>,
}

impl RegularityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn gdr(a: &AlgebraElement, cfg: &Config) -> Result<bool> {
    Ok(characterize(a, cfg)?.gdr())
}

/// `a` is invertible in the generalized Drazin-Riesz sense exactly when `a^k` is.
pub fn power_trial(seed: u64, cfg: &Config) -> Result<Option<String>> {
    let mut g = Generator::new(seed);
    let a = g.sample().element;
    let k = g.exponent(2, 4);
    let (x, y) = (gdr(&a, cfg)?, gdr(&a.pow(k)?, cfg)?);
    Ok((x != y).then(|| format!("a: {x}, a^{k}: {y}")))
}

/// For commuting `a, b` with `av + bw = 1`, `ab` is invertible exactly when both are.
pub fn factor_trial(seed: u64, cfg: &Config) -> Result<Option<String>> {
    let t = Generator::new(seed).bezout()?;
    let (x, y, z) = (gdr(&t.a, cfg)?, gdr(&t.b, cfg)?, gdr(&t.a.mul(&t.b)?, cfg)?);
    Ok((z != (x && y)).then(|| format!("a: {x}, b: {y}, ab: {z}")))
}

fn record(axiom: &'static str, trial: u64, seed: u64, outcome: Result<Option<String>>) -> Option<TrialFailure> {
    let detail = match outcome {
        Ok(None) => return None,
        Ok(Some(d)) => d,
        Err(e) => e.to_string(),
    };
    Some(TrialFailure { axiom, trial, seed, detail })
}

/// Runs `trials` power-axiom and `trials` factorization-axiom trials in parallel.
pub fn regularity_suite(seed: u64, trials: usize, cfg: &Config) -> Result<RegularityReport> {
    if trials == 0 {
        return Err(Error::InvalidElement("regularity suite needs at least one trial".into()));
    }
    let outcomes: Vec<(Option<TrialFailure>, Option<TrialFailure>, usize)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let ps = trial_seed(seed, 2 * t);
            let power = record("power", t, ps, power_trial(ps, cfg));
            let mut redrawn = 0;
            let mut factor = None;
            for k in 0..MAX_REGENERATIONS {
                let fs = trial_seed(seed, 2 * t + 1 + (k << 32));
                match factor_trial(fs, cfg) {
                    Err(Error::GeneratorExhausted(_)) => redrawn += 1,
                    outcome => {
                        factor = record("factorization", t, fs, outcome);
                        break;
                    }
                }
            }
            if redrawn as u64 == MAX_REGENERATIONS {
                factor = Some(TrialFailure { axiom: "factorization", trial: t, seed, detail: "no Bézout tuple could be generated".into() });
            }
            (power, factor, redrawn)
        })
        .collect();
    let mut report = RegularityReport { power_trials: trials, factor_trials: trials, ..Default::default() };
    for (p, f, r) in outcomes {
        report.failures.extend(p);
        report.failures.extend(f);
        report.regenerated += r;
    }
    Ok(report)
}
