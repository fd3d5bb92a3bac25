use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;

use super::{certify, run_restarts, validate_problem, ExtremalResult, OptimizerConfig, RestartOutcome, Workspace};
use crate::error::Result;
use crate::randsets::SeededRng;
use crate::trigpoly::{FrequencySet, TrigPolynomial};

const MAX_HALVINGS: usize = 10;

fn wrap(angle: f64) -> f64 {
    let a = (angle + PI).rem_euclid(TAU) - PI;
    if a == -PI {
        PI
    } else {
        a
    }
}

fn unimodular(theta: &[f64]) -> Vec<Complex64> {
    theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect()
}

/// Lower bound for `sup_{|a_n| ≤ 1} ‖Σ a_n e(n·x)‖_p` over unimodular
/// coefficients.
///
/// Each restart iterates `a_n ← phase ⟨f|f|^{p−2}, e(n·x)⟩`, the stationarity
/// condition of the objective. A step is kept only if the objective does not
/// drop; otherwise the step toward the proposed phases is halved, and after
/// ten halvings the restart stops. Restart 0 starts from the all-ones vector,
/// so the result never falls below the all-ones norm.
pub fn majorant_numerator(set: &FrequencySet, p: f64, cfg: &OptimizerConfig) -> Result<ExtremalResult> {
    validate_problem(set, p, cfg)?;
    let ws = Workspace::new(set, p)?;
    let policy = cfg.norm_policy(p);
    let len = set.len();
    run_restarts(cfg, |r| {
        let mut theta: Vec<f64> = if r == 0 {
            vec![0.0; len]
        } else {
            let mut g = SeededRng::new(cfg.seed, r as u64).generator();
            (0..len).map(|_| g.random_range(0.0..TAU)).collect()
        };
        let start = unimodular(&theta);
        let mut values = ws.values(&start);
        let mut obj = ws.objective(&values);
        let mut iterations = 0;
        let mut converged = false;
        while iterations < cfg.max_iters {
            iterations += 1;
            let dual = ws.dual_coeffs(values.clone());
            let target: Vec<f64> = dual
                .iter()
                .zip(&theta)
                .map(|(d, &t)| if d.norm_sqr() > 0.0 { d.arg() } else { t })
                .collect();
            let mut step = 1.0;
            let mut accepted = None;
            for _ in 0..=MAX_HALVINGS {
                let trial: Vec<f64> = theta
                    .iter()
                    .zip(&target)
                    .map(|(&t, &u)| t + step * wrap(u - t))
                    .collect();
                let trial_values = ws.values(&unimodular(&trial));
                let trial_obj = ws.objective(&trial_values);
                if trial_obj >= obj {
                    accepted = Some((trial, trial_values, trial_obj));
                    break;
                }
                step *= 0.5;
            }
            let Some((next, next_values, next_obj)) = accepted else {
                converged = true;
                break;
            };
            let change = if obj > 0.0 { (next_obj - obj) / obj } else { 0.0 };
            theta = next;
            values = next_values;
            obj = next_obj;
            if change < cfg.rel_tol {
                converged = true;
                break;
            }
        }
        let (coeffs, norm) = certify(&ws, policy, (r == 0).then_some(start), unimodular(&theta))?;
        Ok(RestartOutcome {
            coeffs,
            norm,
            iterations,
            converged,
        })
    })
}

/// Majorant numerator divided by the all-ones norm of the same set.
pub fn majorant_ratio(set: &FrequencySet, p: f64, cfg: &OptimizerConfig) -> Result<f64> {
    let numerator = majorant_numerator(set, p, cfg)?;
    let ones = cfg.norm_policy(p).norm(&TrigPolynomial::ones(set), p)?;
    Ok(numerator.value / ones.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn set(elems: &[i64]) -> FrequencySet {
        FrequencySet::one_dim(64, elems.iter().copied()).unwrap()
    }

    #[test]
    fn wrap_range() {
        for a in [-7.0, -PI, 0.0, PI, 3.5, 10.0] {
            let w = wrap(a);
            assert!(w > -PI && w <= PI);
            assert!(((a - w) / TAU - ((a - w) / TAU).round()).abs() < 1e-12);
        }
    }

    #[test]
    fn single_frequency_is_one() {
        let cfg = OptimizerConfig::default();
        for p in [2.0, 3.0, 4.0, 5.5] {
            let r = majorant_numerator(&set(&[17]), p, &cfg).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12);
            assert_eq!(majorant_ratio(&set(&[17]), p, &cfg).unwrap(), 1.0);
        }
    }

    #[test]
    fn even_p_cannot_beat_all_ones() {
        let cfg = OptimizerConfig::default();
        let s = set(&[1, 2, 5, 9, 14, 30]);
        let ones = crate::trigpoly::lp_norm_even_exact(&TrigPolynomial::ones(&s), 2).unwrap().value;
        let r = majorant_numerator(&s, 4.0, &cfg).unwrap();
        assert!(r.value <= ones * (1.0 + 1e-6));
        assert!(r.value >= ones);
    }

    #[test]
    fn result_is_consistent() {
        let cfg = OptimizerConfig {
            restarts: 4,
            ..Default::default()
        };
        let r = majorant_numerator(&set(&[1, 3, 4, 9, 10]), 3.0, &cfg).unwrap();
        assert_eq!(r.restart_values.len(), 4);
        let max = r.restart_values.iter().cloned().fold(f64::MIN, f64::max);
        assert_eq!(r.value, max);
        assert!(r.coeffs.iter().all(|a| a.norm() <= 1.0 + 1e-12));
        assert!(majorant_ratio(&set(&[1, 3, 4, 9, 10]), 3.0, &cfg).unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn rejects_bad_input() {
        let cfg = OptimizerConfig::default();
        let empty = FrequencySet::one_dim(4, []).unwrap();
        assert_eq!(majorant_numerator(&empty, 3.0, &cfg).unwrap_err(), Error::EmptySupport);
        assert!(majorant_numerator(&set(&[1]), 1.0, &cfg).is_err());
        let bad = OptimizerConfig {
            restarts: 0,
            ..Default::default()
        };
        assert!(majorant_numerator(&set(&[1]), 3.0, &bad).is_err());
    }
}
