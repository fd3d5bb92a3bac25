//! One routine per quantitative bound, each returning the raw report plus
//! the derived quantities the bound is judged by.

use serde::{Deserialize, Serialize};

use super::experiment::{run_trials, ExperimentReport, ExperimentSpec, Statistic};
use super::stats::{binomial_moment, binomial_window, linear_fit};
use crate::error::{Error, Result};
use crate::extremal::OptimizerConfig;
use crate::randsets::{floor_power, CurveKind, RandomSetModel};
use crate::trigpoly::{check_p, FrequencySet, NormPolicy};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChernoffCheck {
    #[serde(flatten)]
    pub report: ExperimentReport,
    pub window: [f64; 2],
    pub empirical_probability: f64,
    /// Binomial probability of the window.
    pub exact_probability: f64,
    /// Standard error of the empirical probability under the exact law.
    pub std_error: f64,
}

/// Fraction of trials with `|S| ∈ [τN/2, 2τN]` for a Bernoulli selector model.
pub fn check_chernoff(model: &RandomSetModel, trials: usize, master_seed: u64) -> Result<ChernoffCheck> {
    let RandomSetModel::BernoulliSelector { n, .. } = *model else {
        return Err(Error::invalid("model", "the concentration check needs a bernoulli model"));
    };
    model.validate()?;
    let tau = model.tau().unwrap_or(1.0);
    let mean = tau * n as f64;
    if mean < 8.0 {
        return Err(Error::invalid("delta", format!("need tau*N >= 8, got {mean}")));
    }
    let spec = ExperimentSpec::new(model.clone(), 2.0, Statistic::SetSize, trials, master_seed);
    let report = run_trials(&spec)?;
    let (lo, hi) = (mean / 2.0, 2.0 * mean);
    let inside = report.values().iter().filter(|&&x| lo <= x && x <= hi).count();
    let empirical_probability = inside as f64 / report.per_trial.len() as f64;
    let exact_probability = binomial_window(n, tau, lo.ceil() as u64, hi.floor() as u64);
    let std_error = (exact_probability * (1.0 - exact_probability) / report.per_trial.len() as f64).sqrt();
    Ok(ChernoffCheck {
        report,
        window: [lo, hi],
        empirical_probability,
        exact_probability,
        std_error,
    })
}

/// A Monte Carlo mean compared with a bound expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedCheck {
    #[serde(flatten)]
    pub report: ExperimentReport,
    pub bound: f64,
}

impl FittedCheck {
    pub fn fitted_constant(&self) -> f64 {
        self.report.fitted_constant.unwrap_or(f64::NAN)
    }

    fn new(spec: &ExperimentSpec, bound: f64) -> Result<Self> {
        let mut report = run_trials(spec)?;
        report.fit(bound);
        Ok(Self { report, bound })
    }
}

/// `E ‖Σ_{n∈S} e(n·x)‖_p^p` against `τ^p N^{p−Σα} + (τN)^{p/2}` for a
/// Bernoulli selector model, possibly lifted onto a curve.
pub fn check_lower_bound_product(
    model: &RandomSetModel,
    p: f64,
    trials: usize,
    master_seed: u64,
    policy: NormPolicy,
) -> Result<FittedCheck> {
    let bernoulli = match model {
        RandomSetModel::BernoulliSelector { .. } => true,
        RandomSetModel::CurveEmbedding { base, .. } => matches!(**base, RandomSetModel::BernoulliSelector { .. }),
        _ => false,
    };
    if !bernoulli {
        return Err(Error::invalid("model", "needs a bernoulli model, optionally curve-embedded"));
    }
    let spec = ExperimentSpec {
        norm_policy: policy,
        ..ExperimentSpec::new(model.clone(), p, Statistic::IpN, trials, master_seed)
    };
    spec.validate()?;
    let tau = model.tau().unwrap_or(1.0);
    let n = model.n() as f64;
    let bound = tau.powf(p) * n.powf(p - model.box_exponent_sum()) + (tau * n).powf(p / 2.0);
    FittedCheck::new(&spec, bound)
}

/// `E ‖Σ_{n∈S} e(nx)‖_p^p` against `L^{p−1}/s + L^{p/2}` for a perturbed
/// progression.
pub fn check_lower_bound_pap(
    model: &RandomSetModel,
    p: f64,
    trials: usize,
    master_seed: u64,
    policy: NormPolicy,
) -> Result<FittedCheck> {
    let RandomSetModel::PerturbedAp { l, s, .. } = *model else {
        return Err(Error::invalid("model", "needs a perturbed progression"));
    };
    let spec = ExperimentSpec {
        norm_policy: policy,
        ..ExperimentSpec::new(model.clone(), p, Statistic::IpN, trials, master_seed)
    };
    spec.validate()?;
    let (l, s) = (l as f64, s as f64);
    FittedCheck::new(&spec, l.powf(p - 1.0) / s + l.powf(p / 2.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectorMomentCheck {
    #[serde(flatten)]
    pub report: ExperimentReport,
    pub l: u64,
    pub s: u64,
    pub q: f64,
    /// `(E X^q)^{1/q}` from the trials.
    pub empirical_root: f64,
    /// Delta-method standard error of `empirical_root`.
    pub std_error_root: f64,
    /// Same root for `X ~ Binomial(l, 1/s)`.
    pub exact_root: f64,
    /// `l/s + q / ln(2 + qs/l)`.
    pub bound: f64,
    /// `empirical_root / bound`.
    pub ratio: f64,
}

/// `q`-th moment of `|A ∩ S|` for a block-uniform model, where `A` holds at
/// most one target per block.
pub fn check_selector_moment(
    model: &RandomSetModel,
    targets: &FrequencySet,
    q: f64,
    trials: usize,
    master_seed: u64,
) -> Result<SelectorMomentCheck> {
    let RandomSetModel::BlockUniform { .. } = *model else {
        return Err(Error::invalid("model", "needs a block-uniform model"));
    };
    model.validate()?;
    if targets.dim() != 1 {
        return Err(Error::invalid("targets", "must be one-dimensional"));
    }
    if targets.is_empty() {
        return Err(Error::invalid("targets", "must be non-empty"));
    }
    let blocks = model.blocks().unwrap_or_default();
    let mut used = vec![false; blocks.len()];
    let mut width = None;
    for t in targets.iter() {
        let a = t[0];
        let j = blocks
            .iter()
            .position(|&(lo, hi)| lo <= a && a <= hi)
            .ok_or_else(|| Error::invalid("targets", format!("{a} lies outside [1, {}]", model.n())))?;
        if std::mem::replace(&mut used[j], true) {
            return Err(Error::invalid("targets", format!("two targets in block {}", j + 1)));
        }
        let w = (blocks[j].1 - blocks[j].0 + 1) as u64;
        if *width.get_or_insert(w) != w {
            return Err(Error::invalid("targets", "targets must sit in blocks of equal size"));
        }
    }
    let s = width.unwrap_or(1);
    let l = targets.len() as u64;
    let spec = ExperimentSpec::new(
        model.clone(),
        2.0,
        Statistic::SelectorBlockSum {
            q,
            targets: targets.iter().map(|t| t[0]).collect(),
        },
        trials,
        master_seed,
    );
    let mut report = run_trials(&spec)?;
    let m = report.mean;
    let empirical_root = m.powf(1.0 / q);
    let std_error_root = if m > 0.0 {
        report.std_error() * m.powf(1.0 / q - 1.0) / q
    } else {
        0.0
    };
    let exact_root = binomial_moment(l, 1.0 / s as f64, q).powf(1.0 / q);
    let (lf, sf) = (l as f64, s as f64);
    let bound = lf / sf + q / (2.0 + q * sf / lf).ln();
    let ratio = empirical_root / bound;
    report.fitted_constant = Some(ratio);
    Ok(SelectorMomentCheck {
        report,
        l,
        s,
        q,
        empirical_root,
        std_error_root,
        exact_root,
        bound,
        ratio,
    })
}

/// A one-parameter family of models indexed by `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelFamily {
    Bernoulli { delta: f64 },
    CorrelatedDyadic { delta: f64 },
    /// Block-uniform with `L = ⌊N^exponent⌋` blocks.
    BlockUniform { exponent: f64 },
    /// Bernoulli selectors lifted onto a curve.
    Curve { delta: f64, kind: CurveKind },
}

impl ModelFamily {
    pub fn at(&self, n: u64) -> RandomSetModel {
        match *self {
            ModelFamily::Bernoulli { delta } => RandomSetModel::BernoulliSelector { n, delta },
            ModelFamily::CorrelatedDyadic { delta } => RandomSetModel::CorrelatedDyadic { n, delta },
            ModelFamily::BlockUniform { exponent } => RandomSetModel::BlockUniform {
                n,
                l: floor_power(n, exponent),
            },
            ModelFamily::Curve { delta, kind } => RandomSetModel::CurveEmbedding {
                base: Box::new(RandomSetModel::BernoulliSelector { n, delta }),
                kind,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub n: u64,
    pub mean: f64,
    pub q05: f64,
    pub q50: f64,
    pub q95: f64,
    pub report: ExperimentReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingStudy {
    pub points: Vec<ScalingPoint>,
    /// Least-squares slope of `ln q95` against `ln N`.
    pub slope: f64,
    pub intercept: f64,
    pub slope_std_error: f64,
    pub flags: Vec<String>,
}

/// Majorant ratio quantiles across `ns` and the growth exponent of the 95th
/// percentile.
pub fn majorant_scaling_study(
    family: &ModelFamily,
    ns: &[u64],
    p: f64,
    trials: usize,
    master_seed: u64,
    cfg: &OptimizerConfig,
) -> Result<ScalingStudy> {
    if ns.len() < 3 {
        return Err(Error::invalid("ns", format!("need at least 3 values of N, got {}", ns.len())));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("ns", "values of N must increase"));
    }
    check_p(p)?;
    let specs: Vec<ExperimentSpec> = ns
        .iter()
        .map(|&n| ExperimentSpec {
            optimizer: *cfg,
            ..ExperimentSpec::new(family.at(n), p, Statistic::MajorantRatio, trials, master_seed)
        })
        .collect();
    for spec in &specs {
        spec.validate()?;
    }
    let mut points = Vec::with_capacity(ns.len());
    for (spec, &n) in specs.iter().zip(ns) {
        let report = run_trials(spec)?;
        points.push(ScalingPoint {
            n,
            mean: report.mean,
            q05: report.q05,
            q50: report.q50,
            q95: report.q95,
            report,
        });
    }
    let x: Vec<f64> = points.iter().map(|pt| (pt.n as f64).ln()).collect();
    let y: Vec<f64> = points.iter().map(|pt| pt.q95.ln()).collect();
    let (slope, intercept, slope_std_error) = linear_fit(&x, &y);
    Ok(ScalingStudy {
        points,
        slope,
        intercept,
        slope_std_error,
        flags: vec!["lower_estimate".to_string()],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityEstimate {
    #[serde(flatten)]
    pub report: ExperimentReport,
    pub thresholds: Vec<f64>,
    /// Fraction of trials with ratio `≥` each threshold.
    pub probabilities: Vec<f64>,
}

/// Empirical `P(majorant ratio ≥ C)` for each `C` in `thresholds`, all
/// measured on the same trials.
pub fn probability_estimate(
    model: &RandomSetModel,
    p: f64,
    thresholds: &[f64],
    trials: usize,
    master_seed: u64,
    cfg: &OptimizerConfig,
) -> Result<ProbabilityEstimate> {
    if thresholds.is_empty() {
        return Err(Error::invalid("thresholds", "need at least one threshold"));
    }
    if let Some(bad) = thresholds.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
        return Err(Error::invalid("thresholds", format!("must be positive, got {bad}")));
    }
    let spec = ExperimentSpec {
        optimizer: *cfg,
        ..ExperimentSpec::new(model.clone(), p, Statistic::MajorantRatio, trials, master_seed)
    };
    let report = run_trials(&spec)?;
    let values = report.values();
    let probabilities = thresholds
        .iter()
        .map(|&c| values.iter().filter(|&&r| r >= c).count() as f64 / values.len() as f64)
        .collect();
    Ok(ProbabilityEstimate {
        report,
        thresholds: thresholds.to_vec(),
        probabilities,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaExpectation {
    #[serde(flatten)]
    pub report: ExperimentReport,
    /// Exponent at which the model sits at the `Λ(p)` threshold, if defined.
    pub critical_exponent: Option<f64>,
    pub critical: bool,
}

/// Trials of `K(S)^p` for a perturbed progression or block-uniform model.
pub fn lambda_expectation(
    model: &RandomSetModel,
    p: f64,
    cfg: &OptimizerConfig,
    trials: usize,
    master_seed: u64,
) -> Result<LambdaExpectation> {
    if !matches!(model, RandomSetModel::PerturbedAp { .. } | RandomSetModel::BlockUniform { .. }) {
        return Err(Error::invalid("model", "needs a perturbed progression or block-uniform model"));
    }
    let spec = ExperimentSpec {
        optimizer: *cfg,
        ..ExperimentSpec::new(model.clone(), p, Statistic::LambdaKToTheP, trials, master_seed)
    };
    let mut report = run_trials(&spec)?;
    let critical_exponent = model.critical_exponent();
    let critical = critical_exponent.is_some_and(|pc| (pc - p).abs() <= 1e-9 * pc);
    report.flags.push(if critical { "critical_exponent" } else { "non_critical_exponent" }.to_string());
    Ok(LambdaExpectation {
        report,
        critical_exponent,
        critical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chernoff_edge_and_precondition() {
        let full = RandomSetModel::BernoulliSelector { n: 100, delta: 0.0 };
        let c = check_chernoff(&full, 20, 1).unwrap();
        assert_eq!(c.empirical_probability, 1.0);
        assert!((c.exact_probability - 1.0).abs() < 1e-12);
        let sparse = RandomSetModel::BernoulliSelector { n: 100, delta: 0.6 };
        assert!(matches!(check_chernoff(&sparse, 20, 1), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn product_bound_at_p2_is_exact_in_expectation() {
        let model = RandomSetModel::BernoulliSelector { n: 400, delta: 0.5 };
        let c = check_lower_bound_product(&model, 2.0, 400, 2, NormPolicy::ExactEven).unwrap();
        // E I_2 = τN, bound τ²N + τN.
        let tau = 0.05;
        let exact = 1.0 / (tau + 1.0);
        assert!((c.fitted_constant() - exact).abs() <= 3.0 * c.report.std_error() / c.bound);
    }

    #[test]
    fn pap_p2_and_singleton() {
        let model = RandomSetModel::PerturbedAp { n: 700, l: 32, s: 8, a: 20, b: 5 };
        let c = check_lower_bound_pap(&model, 2.0, 10, 0, NormPolicy::ExactEven).unwrap();
        assert!(c.report.values().iter().all(|&v| v == 32.0));
        assert!((c.fitted_constant() - 8.0 / 9.0).abs() < 1e-12);
        let one = RandomSetModel::PerturbedAp { n: 40, l: 1, s: 3, a: 10, b: 5 };
        let c = check_lower_bound_pap(&one, 6.0, 5, 0, NormPolicy::ExactEven).unwrap();
        assert!(c.report.values().iter().all(|&v| (v - 1.0).abs() < 1e-12));
        assert!((c.fitted_constant() - 1.0 / (1.0 / 3.0 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn selector_moment_q1_and_validation() {
        let model = RandomSetModel::BlockUniform { n: 64, l: 8 };
        let targets = FrequencySet::one_dim(64, (0..8).map(|j| 8 * j + 1)).unwrap();
        let c = check_selector_moment(&model, &targets, 1.0, 2000, 4).unwrap();
        assert_eq!((c.l, c.s), (8, 8));
        assert!((c.exact_root - 1.0).abs() < 1e-12);
        assert!((c.empirical_root - 1.0).abs() <= 3.0 * c.std_error_root);
        let bound = 1.0 + 1.0 / 3f64.ln();
        assert!((c.bound - bound).abs() < 1e-12 && c.ratio < 1.0);

        let twice = FrequencySet::one_dim(64, [1, 2]).unwrap();
        let err = check_selector_moment(&model, &twice, 2.0, 10, 0).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { param, .. } if param == "targets"));
    }

    #[test]
    fn scaling_needs_three_increasing_points() {
        let fam = ModelFamily::Bernoulli { delta: 0.5 };
        let cfg = OptimizerConfig::default();
        assert!(majorant_scaling_study(&fam, &[64], 3.0, 2, 0, &cfg).is_err());
        assert!(majorant_scaling_study(&fam, &[64, 32, 128], 3.0, 2, 0, &cfg).is_err());
    }

    #[test]
    fn even_p_scaling_is_flat() {
        let fam = ModelFamily::Bernoulli { delta: 0.5 };
        let cfg = OptimizerConfig {
            restarts: 3,
            ..Default::default()
        };
        let study = majorant_scaling_study(&fam, &[32, 64, 128], 4.0, 8, 1, &cfg).unwrap();
        for pt in &study.points {
            assert!(pt.report.values().iter().all(|&r| (r - 1.0).abs() <= 1e-6));
        }
        assert!(study.slope.abs() <= 1e-6);
    }

    #[test]
    fn probabilities_are_monotone() {
        let model = RandomSetModel::BernoulliSelector { n: 64, delta: 0.4 };
        let cfg = OptimizerConfig {
            restarts: 3,
            ..Default::default()
        };
        let est = probability_estimate(&model, 3.0, &[1.0 - 1e-9, 1.01, 1.1, 1.5], 10, 2, &cfg).unwrap();
        assert_eq!(est.probabilities[0], 1.0);
        assert!(est.probabilities.windows(2).all(|w| w[0] >= w[1]));
        let even = probability_estimate(&model, 4.0, &[1.01], 10, 2, &cfg).unwrap();
        assert_eq!(even.probabilities, vec![0.0]);
    }

    #[test]
    fn lambda_expectation_flags() {
        let cfg = OptimizerConfig {
            restarts: 2,
            ..Default::default()
        };
        let single = RandomSetModel::BlockUniform { n: 16, l: 1 };
        let r = lambda_expectation(&single, 4.0, &cfg, 4, 0).unwrap();
        assert!(r.report.values().iter().all(|&v| (v - 1.0).abs() < 1e-12));
        assert!(!r.critical);
        let crit = RandomSetModel::BlockUniform { n: 256, l: 16 };
        let r = lambda_expectation(&crit, 4.0, &cfg, 3, 0).unwrap();
        assert!(r.critical);
        assert!(r.report.flags.contains(&"lower_estimate".to_string()));
        assert!(r.report.flags.contains(&"critical_exponent".to_string()));
    }
}
