//! Coefficient optimizers for the two extremal problems
//!
//! * the majorant numerator `sup_{|a_n| ≤ 1} ‖Σ a_n e(n·x)‖_p`, and
//! * the `Λ(p)` constant `K(S) = sup_{|a|_{l²} ≤ 1} ‖Σ a_n e(n·x)‖_p`,
//!
//! together with exhaustive-grid oracles for supports of at most three
//! frequencies. Both optimizers return lower bounds for the sup: the
//! reported value is always the certified norm of the reported coefficients.

mod brute;
mod lambda;
mod majorant;

pub use brute::{brute_force_sup, BruteForceResult, Constraint};
pub use lambda::lambda_p_constant;
pub use majorant::{majorant_numerator, majorant_ratio};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trigpoly::{
    check_p, mean_abs_pow, FrequencySet, GridTransform, NormPolicy, NormResult, TrigPolynomial,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop a restart once the objective changes by less than this, relatively.
    pub rel_tol: f64,
    /// Tolerance of the adaptive quadrature used to certify non-even `p`.
    pub norm_rel_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_iters: 500,
            rel_tol: 1e-8,
            norm_rel_tol: 1e-9,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::invalid("restarts", "must be at least 1"));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters", "must be at least 1"));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::invalid("rel_tol", "must lie in (0, 1)"));
        }
        if !(self.norm_rel_tol > 0.0 && self.norm_rel_tol < 1.0) {
            return Err(Error::invalid("norm_rel_tol", "must lie in (0, 1)"));
        }
        Ok(())
    }

    /// Exact convolution for even `p`, adaptive quadrature otherwise.
    pub fn norm_policy(&self, p: f64) -> NormPolicy {
        NormPolicy::for_p(p, self.norm_rel_tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub value: f64,
    #[serde(with = "complex_vec")]
    pub coeffs: Vec<Complex64>,
    /// Iterations summed over restarts.
    pub iterations_used: usize,
    /// Whether the winning restart met its stopping rule before `max_iters`.
    pub converged: bool,
    pub restart_values: Vec<f64>,
    pub best_restart: usize,
    /// Certification of `value` for `coeffs`.
    pub norm: NormResult,
}

/// Outcome of one restart.
#[derive(Debug, Clone)]
pub(crate) struct RestartOutcome {
    pub coeffs: Vec<Complex64>,
    pub norm: NormResult,
    pub iterations: usize,
    pub converged: bool,
}

/// Objective and gradient evaluation on a fixed working grid.
pub(crate) struct Workspace {
    support: TrigPolynomial,
    p: f64,
    transform: GridTransform,
    slots: Vec<usize>,
}

impl Workspace {
    pub fn new(set: &FrequencySet, p: f64) -> Result<Self> {
        let support = TrigPolynomial::ones(set).reduced();
        // Large enough that the Riemann sum is exact for even p; powers of
        // two keep the transforms fast.
        let mult = p.ceil() as u64;
        let grid: Vec<usize> = support
            .spreads()
            .iter()
            .map(|&s| ((mult * s + 1) as usize).next_power_of_two())
            .collect();
        let transform = GridTransform::new(&grid)?;
        let slots = support.freqs().map(|n| transform.slot(n)).collect();
        Ok(Self {
            support,
            p,
            transform,
            slots,
        })
    }

    pub fn values(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut poly = self.support.clone();
        poly.coeffs_mut().copy_from_slice(coeffs);
        self.transform.synthesize(&poly)
    }

    pub fn objective(&self, values: &[Complex64]) -> f64 {
        mean_abs_pow(values, self.p).powf(1.0 / self.p)
    }

    /// Fourier coefficients of `f|f|^{p−2}` on the support.
    pub fn dual_coeffs(&self, mut values: Vec<Complex64>) -> Vec<Complex64> {
        let e = self.p - 2.0;
        if e != 0.0 {
            for v in values.iter_mut() {
                let r2 = v.norm_sqr();
                if r2 > 0.0 {
                    *v *= r2.powf(e / 2.0);
                }
            }
        }
        self.transform.analyze(&mut values);
        self.slots.iter().map(|&k| values[k]).collect()
    }

    pub fn poly(&self, coeffs: Vec<Complex64>) -> TrigPolynomial {
        let mut poly = self.support.clone();
        poly.coeffs_mut().copy_from_slice(&coeffs);
        poly
    }
}

pub(crate) fn validate_problem(set: &FrequencySet, p: f64, cfg: &OptimizerConfig) -> Result<()> {
    check_p(p)?;
    if set.is_empty() {
        return Err(Error::EmptySupport);
    }
    cfg.validate()
}

/// Run `restarts` independent restarts and merge them by value, breaking
/// ties (relative 1e-12) towards the lowest restart index.
pub(crate) fn run_restarts<F>(cfg: &OptimizerConfig, restart: F) -> Result<ExtremalResult>
where
    F: Fn(usize) -> Result<RestartOutcome> + Sync,
{
    let outcomes = (0..cfg.restarts)
        .into_par_iter()
        .map(&restart)
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate().skip(1) {
        let incumbent = outcomes[best].norm.value;
        if o.norm.value > incumbent * (1.0 + 1e-12) {
            best = i;
        }
    }
    let restart_values: Vec<f64> = outcomes.iter().map(|o| o.norm.value).collect();
    let iterations_used = outcomes.iter().map(|o| o.iterations).sum();
    let win = outcomes.into_iter().nth(best).expect("at least one restart");
    Ok(ExtremalResult {
        value: win.norm.value,
        coeffs: win.coeffs,
        iterations_used,
        converged: win.converged,
        restart_values,
        best_restart: best,
        norm: win.norm,
    })
}

/// Certify `coeffs` and, for the deterministic restart, fall back to the
/// starting point if the iteration ended below it.
pub(crate) fn certify(
    ws: &Workspace,
    policy: NormPolicy,
    start: Option<Vec<Complex64>>,
    end: Vec<Complex64>,
) -> Result<(Vec<Complex64>, NormResult)> {
    let end_norm = policy.norm(&ws.poly(end.clone()), ws.p)?;
    if let Some(start) = start {
        let start_norm = policy.norm(&ws.poly(start.clone()), ws.p)?;
        if start_norm.value > end_norm.value {
            return Ok((start, start_norm));
        }
    }
    Ok((end, end_norm))
}

mod complex_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}
