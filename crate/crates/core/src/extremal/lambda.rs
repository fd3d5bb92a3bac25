use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use super::{certify, run_restarts, validate_problem, ExtremalResult, OptimizerConfig, RestartOutcome, Workspace};
use crate::error::Result;
use crate::randsets::SeededRng;
use crate::trigpoly::FrequencySet;

fn normalize(a: &mut [Complex64]) -> bool {
    let norm = a.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return false;
    }
    a.iter_mut().for_each(|c| *c /= norm);
    true
}

/// Lower bound for `K(S) = sup_{|a|_{l²} ≤ 1} ‖Σ a_n e(n·x)‖_p` by nonlinear
/// power iteration.
///
/// Each step maps `a` to the normalized projection of `f|f|^{p−2}` onto the
/// frequencies of `S`. Restart 0 starts from equal weights `1/√|S|`, the
/// others from normalized complex Gaussian vectors.
pub fn lambda_p_constant(set: &FrequencySet, p: f64, cfg: &OptimizerConfig) -> Result<ExtremalResult> {
    validate_problem(set, p, cfg)?;
    let ws = Workspace::new(set, p)?;
    let policy = cfg.norm_policy(p);
    let len = set.len();
    run_restarts(cfg, |r| {
        let mut a: Vec<Complex64> = if r == 0 {
            vec![Complex64::new(1.0, 0.0); len]
        } else {
            let mut g = SeededRng::new(cfg.seed, r as u64).generator();
            (0..len)
                .map(|_| Complex64::new(StandardNormal.sample(&mut g), StandardNormal.sample(&mut g)))
                .collect()
        };
        if !normalize(&mut a) {
            a = vec![Complex64::new(1.0, 0.0); len];
            normalize(&mut a);
        }
        let start = a.clone();
        let mut values = ws.values(&a);
        let mut obj = ws.objective(&values);
        let mut iterations = 0;
        let mut converged = false;
        while iterations < cfg.max_iters {
            iterations += 1;
            let mut next = ws.dual_coeffs(values.clone());
            if !normalize(&mut next) {
                converged = true;
                break;
            }
            let next_values = ws.values(&next);
            let next_obj = ws.objective(&next_values);
            if next_obj < obj {
                // Only rounding can make a step descend; the current point
                // is stationary at working precision.
                converged = true;
                break;
            }
            let change = (next_obj - obj) / obj;
            a = next;
            values = next_values;
            obj = next_obj;
            if change < cfg.rel_tol {
                converged = true;
                break;
            }
        }
        let (coeffs, norm) = certify(&ws, policy, (r == 0).then_some(start), a)?;
        Ok(RestartOutcome {
            coeffs,
            norm,
            iterations,
            converged,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trigpoly::{lp_norm_even_exact, TrigPolynomial};

    #[test]
    fn singleton_is_one() {
        let s = FrequencySet::one_dim(10, [4]).unwrap();
        for p in [2.0, 3.0, 4.0] {
            let r = lambda_p_constant(&s, p, &OptimizerConfig::default()).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_point_closed_form() {
        // ∫|a e(x) + b e(2x)|⁴ = 1 + 2|a|²|b|² on the unit sphere, maximal
        // at |a|² = |b|² = 1/2.
        let s = FrequencySet::one_dim(2, [1, 2]).unwrap();
        let cfg = OptimizerConfig {
            restarts: 5,
            ..Default::default()
        };
        let r = lambda_p_constant(&s, 4.0, &cfg).unwrap();
        assert!((r.value - 1.5f64.powf(0.25)).abs() < 1e-4);
    }

    #[test]
    fn feasible_and_reproducible() {
        let s = FrequencySet::one_dim(40, [1, 4, 9, 16, 25, 36]).unwrap();
        let cfg = OptimizerConfig {
            restarts: 3,
            ..Default::default()
        };
        let r = lambda_p_constant(&s, 6.0, &cfg).unwrap();
        let l2: f64 = r.coeffs.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        assert!((l2 - 1.0).abs() <= 1e-12);
        let again = lambda_p_constant(&s, 6.0, &cfg).unwrap();
        assert_eq!(r, again);
        let poly = TrigPolynomial::from_set(&s, r.coeffs.clone()).unwrap();
        let check = lp_norm_even_exact(&poly, 3).unwrap().value;
        assert!((check - r.value).abs() <= 1e-9 * r.value);
        let flat = lp_norm_even_exact(&TrigPolynomial::ones(&s), 3).unwrap().value / 6f64.sqrt();
        assert!(r.value >= flat - 1e-9);
    }
}
