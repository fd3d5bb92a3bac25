use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trigpoly::{check_p, FrequencySet, NormPolicy, TrigPolynomial};

const MAX_SUPPORT: usize = 3;
const ORACLE_REL_TOL: f64 = 1e-10;
const RADII: [f64; 3] = [0.5, 0.75, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// `|a_n| ≤ 1` for every `n`.
    Polydisc,
    /// `Σ |a_n|² = 1`.
    Sphere,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub value: f64,
    pub coeffs: Vec<Complex64>,
    /// Polydisc with `|S| ≤ 2` only: whether an interior radius from
    /// `{0.5, 0.75}` ever beat the unimodular maximum.
    pub interior_beats_boundary: Option<bool>,
}

/// Exhaustive grid search for the two sup problems on supports of at most
/// three frequencies.
///
/// `‖f‖_p` is unchanged by a global phase and by translation `x ↦ x + t`,
/// which multiplies `a_n` by `e(n·t)`. Together these set the phases of the
/// first two frequencies to zero, so only the remaining phase is scanned on
/// `(2π/grid_density)·Z`. Sphere radii are parameterized by polar angles on
/// the same angular spacing.
pub fn brute_force_sup(
    set: &FrequencySet,
    p: f64,
    constraint: Constraint,
    grid_density: usize,
) -> Result<BruteForceResult> {
    check_p(p)?;
    if set.is_empty() {
        return Err(Error::EmptySupport);
    }
    if set.len() > MAX_SUPPORT {
        return Err(Error::invalid(
            "support",
            format!("brute force handles at most {MAX_SUPPORT} frequencies, got {}", set.len()),
        ));
    }
    if grid_density < 8 {
        return Err(Error::invalid("grid_density", "must be at least 8"));
    }
    let policy = NormPolicy::for_p(p, ORACLE_REL_TOL);
    let support = TrigPolynomial::ones(set);
    let eval = |coeffs: Vec<Complex64>| -> Result<(f64, Vec<Complex64>)> {
        let v = policy.norm(&support.with_coeffs(coeffs.clone())?, p)?.value;
        Ok((v, coeffs))
    };
    let phases: Vec<f64> = (0..grid_density).map(|k| TAU * k as f64 / grid_density as f64).collect();
    let quarter = (grid_density / 4).max(1);
    let polar: Vec<f64> = (0..=quarter).map(|k| FRAC_PI_2 * k as f64 / quarter as f64).collect();

    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut consider = |cand: (f64, Vec<Complex64>)| {
        if cand.0 > best.0 {
            best = cand;
        }
    };
    let mut interior_beats_boundary = None;
    let one = Complex64::new(1.0, 0.0);
    match (constraint, set.len()) {
        (_, 1) => consider(eval(vec![one])?),
        (Constraint::Polydisc, 2) => {
            let mut boundary = f64::NEG_INFINITY;
            let mut interior = f64::NEG_INFINITY;
            for &r0 in &RADII {
                for &r1 in &RADII {
                    let cand = eval(vec![Complex64::new(r0, 0.0), Complex64::new(r1, 0.0)])?;
                    if r0 == 1.0 && r1 == 1.0 {
                        boundary = cand.0;
                    } else {
                        interior = interior.max(cand.0);
                    }
                    consider(cand);
                }
            }
            interior_beats_boundary = Some(interior > boundary);
        }
        (Constraint::Polydisc, _) => {
            for &phi in &phases {
                consider(eval(vec![one, one, Complex64::from_polar(1.0, phi)])?);
            }
        }
        (Constraint::Sphere, 2) => {
            for &alpha in &polar {
                consider(eval(vec![
                    Complex64::new(alpha.cos(), 0.0),
                    Complex64::new(alpha.sin(), 0.0),
                ])?);
            }
        }
        (Constraint::Sphere, _) => {
            for &alpha in &polar {
                for &beta in &polar {
                    for &phi in &phases {
                        consider(eval(vec![
                            Complex64::new(alpha.cos(), 0.0),
                            Complex64::new(alpha.sin() * beta.cos(), 0.0),
                            Complex64::from_polar(alpha.sin() * beta.sin(), phi),
                        ])?);
                    }
                }
            }
        }
    }
    Ok(BruteForceResult {
        value: best.0,
        coeffs: best.1,
        interior_beats_boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(elems: &[i64]) -> FrequencySet {
        FrequencySet::one_dim(8, elems.iter().copied()).unwrap()
    }

    #[test]
    fn singleton() {
        for c in [Constraint::Polydisc, Constraint::Sphere] {
            for p in [2.0, 3.0, 4.0] {
                assert!((brute_force_sup(&set(&[1]), p, c, 8).unwrap().value - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn two_point_closed_forms() {
        let r = brute_force_sup(&set(&[1, 2]), 4.0, Constraint::Sphere, 64).unwrap();
        assert!((r.value - 1.5f64.powf(0.25)).abs() < 1e-12);
        let r = brute_force_sup(&set(&[1, 2]), 4.0, Constraint::Polydisc, 8).unwrap();
        assert!((r.value - 6f64.powf(0.25)).abs() < 1e-12);
        assert_eq!(r.interior_beats_boundary, Some(false));
    }

    #[test]
    fn translation_reduction_matches_full_phase_grid() {
        // Full three-phase scan at a coarse density agrees with the reduced
        // scan, which contains every full-grid point up to symmetry.
        let s = set(&[1, 2, 4]);
        let reduced = brute_force_sup(&s, 3.0, Constraint::Polydisc, 16).unwrap().value;
        let support = TrigPolynomial::ones(&s);
        let mut full = f64::NEG_INFINITY;
        for i in 0..16 {
            for j in 0..16 {
                for k in 0..16 {
                    let c: Vec<Complex64> = [i, j, k]
                        .iter()
                        .map(|&t| Complex64::from_polar(1.0, TAU * t as f64 / 16.0))
                        .collect();
                    let v = crate::trigpoly::lp_norm_adaptive(&support.with_coeffs(c).unwrap(), 3.0, 1e-10)
                        .unwrap()
                        .value;
                    full = full.max(v);
                }
            }
        }
        assert!(reduced >= full - 1e-9);
    }

    #[test]
    fn rejects_large_support_and_coarse_grids() {
        assert!(brute_force_sup(&set(&[1, 2, 3, 4]), 4.0, Constraint::Sphere, 8).is_err());
        assert!(brute_force_sup(&set(&[1, 2]), 4.0, Constraint::Sphere, 4).is_err());
    }
}
