use std::time::{Duration, Instant};

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{mean, quantile, sample_variance, Z_99};
use crate::error::{Error, Result};
use crate::extremal::{lambda_p_constant, majorant_numerator, OptimizerConfig};
use crate::randsets::{RandomSetModel, SeededRng};
use crate::trigpoly::{check_p, even_half, lp_norm_even_exact, FrequencySet, NormPolicy, NormResult, TrigPolynomial};

/// Per-trial quantity computed from a sampled set `S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Statistic {
    /// `|S|`.
    SetSize,
    /// `‖Σ_{n∈S} e(n·x)‖_p^p`.
    #[serde(rename = "I_pN")]
    IpN,
    /// `‖Σ_{n∈S} e(n·x)‖_p`.
    AllOnesNorm,
    /// Optimized majorant numerator over the all-ones norm.
    MajorantRatio,
    /// `K(S)^p` with `K` from the power iteration.
    #[serde(rename = "lambda_K_to_the_p")]
    LambdaKToTheP,
    /// `|A ∩ S|^q` for a fixed one-dimensional target set `A`.
    SelectorBlockSum { q: f64, targets: Vec<i64> },
}

impl Statistic {
    pub fn name(&self) -> &'static str {
        match self {
            Statistic::SetSize => "set_size",
            Statistic::IpN => "I_pN",
            Statistic::AllOnesNorm => "all_ones_norm",
            Statistic::MajorantRatio => "majorant_ratio",
            Statistic::LambdaKToTheP => "lambda_K_to_the_p",
            Statistic::SelectorBlockSum { .. } => "selector_block_sum",
        }
    }

    /// Whether the value comes from an optimizer and so bounds a sup from below.
    pub fn is_lower_estimate(&self) -> bool {
        matches!(self, Statistic::MajorantRatio | Statistic::LambdaKToTheP)
    }

    fn uses_norm_policy(&self) -> bool {
        matches!(self, Statistic::IpN | Statistic::AllOnesNorm)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub model: RandomSetModel,
    pub p: f64,
    pub statistic: Statistic,
    pub trials: usize,
    pub master_seed: u64,
    pub norm_policy: NormPolicy,
    /// Used by the optimizer statistics; its `seed` is replaced per trial.
    pub optimizer: OptimizerConfig,
}

impl ExperimentSpec {
    /// Spec with the default norm policy for `p` and default optimizer settings.
    pub fn new(model: RandomSetModel, p: f64, statistic: Statistic, trials: usize, master_seed: u64) -> Self {
        let optimizer = OptimizerConfig::default();
        Self {
            model,
            p,
            statistic,
            trials,
            master_seed,
            norm_policy: optimizer.norm_policy(p),
            optimizer,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials", "must be at least 1"));
        }
        self.model.validate()?;
        check_p(self.p)?;
        if self.statistic.uses_norm_policy() {
            self.norm_policy.validate(self.p)?;
        }
        if self.statistic.is_lower_estimate() {
            self.optimizer.validate()?;
        }
        if let Statistic::SelectorBlockSum { q, targets } = &self.statistic {
            if !(q.is_finite() && *q >= 1.0) {
                return Err(Error::invalid("q", format!("must be at least 1, got {q}")));
            }
            if self.model.dim() != 1 {
                return Err(Error::invalid("targets", "block sums need a one-dimensional model"));
            }
            let n = self.model.n() as i64;
            if let Some(bad) = targets.iter().find(|&&a| a < 1 || a > n) {
                return Err(Error::invalid("targets", format!("{bad} lies outside [1, {n}]")));
            }
        }
        Ok(())
    }
}

/// One row of the per-trial table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed_stream: u64,
    pub statistic_value: f64,
    /// Norm route behind the value, empty when no norm was needed.
    pub norm_method: String,
    pub grid: String,
}

pub const CSV_HEADER: &str = "trial,seed_stream,statistic_value,norm_method,grid";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub spec_echo: serde_json::Value,
    pub per_trial: Vec<TrialRecord>,
    pub mean: f64,
    pub var: f64,
    pub q05: f64,
    pub q50: f64,
    pub q95: f64,
    pub ci99_halfwidth: f64,
    pub fitted_constant: Option<f64>,
    pub flags: Vec<String>,
    /// Left empty by the library so identical specs serialize identically.
    pub runtime_seconds: Option<f64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ExperimentReport {
    pub fn values(&self) -> Vec<f64> {
        self.per_trial.iter().map(|r| r.statistic_value).collect()
    }

    /// Sample standard deviation of the mean.
    pub fn std_error(&self) -> f64 {
        (self.var / self.per_trial.len() as f64).sqrt()
    }

    /// Set `fitted_constant = mean / bound`.
    pub fn fit(&mut self, bound: f64) -> f64 {
        let c = self.mean / bound;
        self.fitted_constant = Some(c);
        c
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.per_trial {
            out.push_str(&csv_row(r));
            out.push('\n');
        }
        out
    }
}

pub(crate) fn csv_row(r: &TrialRecord) -> String {
    format!(
        "{},{},{},{},{}",
        r.trial, r.seed_stream, r.statistic_value, r.norm_method, r.grid
    )
}

struct Evaluation {
    value: f64,
    norm: Option<NormResult>,
}

impl Evaluation {
    fn plain(value: f64) -> Self {
        Self { value, norm: None }
    }
}

fn evaluate(spec: &ExperimentSpec, set: &FrequencySet, optimizer_seed: u64) -> Result<Evaluation> {
    let p = spec.p;
    if set.is_empty() {
        // Empty sums: every norm is 0 and the ratio is taken as 1.
        let v = if spec.statistic == Statistic::MajorantRatio { 1.0 } else { 0.0 };
        return Ok(Evaluation::plain(v));
    }
    let cfg = OptimizerConfig {
        seed: optimizer_seed,
        ..spec.optimizer
    };
    match &spec.statistic {
        Statistic::SetSize => Ok(Evaluation::plain(set.len() as f64)),
        Statistic::IpN if even_half(p) == Some(1) => Ok(Evaluation {
            value: set.len() as f64,
            norm: Some(lp_norm_even_exact(&TrigPolynomial::ones(set), 1)?),
        }),
        Statistic::IpN | Statistic::AllOnesNorm => {
            let norm = spec.norm_policy.norm(&TrigPolynomial::ones(set), p)?;
            let value = if spec.statistic == Statistic::IpN {
                norm.value.powf(p)
            } else {
                norm.value
            };
            Ok(Evaluation {
                value,
                norm: Some(norm),
            })
        }
        Statistic::MajorantRatio => {
            let num = majorant_numerator(set, p, &cfg)?;
            let ones = cfg.norm_policy(p).norm(&TrigPolynomial::ones(set), p)?;
            Ok(Evaluation {
                value: num.value / ones.value,
                norm: Some(num.norm),
            })
        }
        Statistic::LambdaKToTheP => {
            let k = lambda_p_constant(set, p, &cfg)?;
            Ok(Evaluation {
                value: k.value.powf(p),
                norm: Some(k.norm),
            })
        }
        Statistic::SelectorBlockSum { q, targets } => {
            let hits = targets.iter().filter(|&&a| set.contains(&[a])).count();
            Ok(Evaluation::plain((hits as f64).powf(*q)))
        }
    }
}

fn run_trial(spec: &ExperimentSpec, trial: usize) -> Result<(TrialRecord, bool)> {
    let stream = trial as u64;
    let mut g = SeededRng::new(spec.master_seed, stream).generator();
    let set = spec.model.sample_from(&mut g)?;
    let eval = evaluate(spec, &set, g.next_u64())?;
    let (norm_method, grid) = match &eval.norm {
        Some(n) => (n.method.as_str().to_string(), n.grid_label()),
        None => (String::new(), String::new()),
    };
    Ok((
        TrialRecord {
            trial,
            seed_stream: stream,
            statistic_value: eval.value,
            norm_method,
            grid,
        },
        set.is_empty(),
    ))
}

/// Run `spec.trials` independent trials and aggregate them.
///
/// Trial `t` draws its set, and then its optimizer seed, from stream `t` of
/// the master seed. Quadrature that fails to converge drops the trial when
/// fewer than 1% of trials fail; any other error aborts the run.
pub fn run_trials(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let start = Instant::now();
    let outcomes: Vec<Result<(TrialRecord, bool)>> =
        (0..spec.trials).into_par_iter().map(|t| run_trial(spec, t)).collect();

    let mut records = Vec::with_capacity(spec.trials);
    let mut excluded = Vec::new();
    let mut empty = 0usize;
    for (t, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok((rec, was_empty)) => {
                empty += usize::from(was_empty);
                records.push(rec);
            }
            Err(e @ Error::NotConverged { .. }) => excluded.push((t, e)),
            Err(e) => return Err(e),
        }
    }
    if !excluded.is_empty() && excluded.len() * 100 >= spec.trials {
        return Err(Error::TrialFailures {
            failed: excluded.len(),
            trials: spec.trials,
            first: format!("trial {}: {}", excluded[0].0, excluded[0].1),
        });
    }

    let mut flags = Vec::new();
    if spec.statistic.is_lower_estimate() {
        flags.push("lower_estimate".to_string());
    }
    if empty > 0 {
        flags.push(format!("empty_sets:{empty}"));
    }
    flags.extend(excluded.iter().map(|(t, e)| format!("excluded_trial:{t}:{e}")));

    let mut report = summarize(records, flags);
    report.spec_echo = serde_json::to_value(spec).expect("spec serializes");
    report.elapsed = start.elapsed();
    Ok(report)
}

pub(crate) fn summarize(per_trial: Vec<TrialRecord>, flags: Vec<String>) -> ExperimentReport {
    let values: Vec<f64> = per_trial.iter().map(|r| r.statistic_value).collect();
    let var = sample_variance(&values);
    ExperimentReport {
        spec_echo: serde_json::Value::Null,
        mean: mean(&values),
        var,
        q05: quantile(&values, 0.05),
        q50: quantile(&values, 0.50),
        q95: quantile(&values, 0.95),
        ci99_halfwidth: Z_99 * (var / values.len() as f64).sqrt(),
        fitted_constant: None,
        flags,
        runtime_seconds: None,
        elapsed: Duration::ZERO,
        per_trial,
    }
}
