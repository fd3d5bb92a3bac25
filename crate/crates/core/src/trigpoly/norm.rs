use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{check_alias_free, GridTransform};
use super::TrigPolynomial;
use crate::error::{Error, Result};

/// Largest dense convolution box (entries) accepted by [`lp_norm_even_exact`].
pub const DEFAULT_CONVOLUTION_BUDGET: usize = 1 << 25;

/// Largest grid (points) the adaptive quadrature will try.
pub const DEFAULT_GRID_BUDGET: usize = 1 << 23;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    Parseval,
    EvenConvolution,
    Quadrature,
}

impl NormMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            NormMethod::Parseval => "parseval",
            NormMethod::EvenConvolution => "even_convolution",
            NormMethod::Quadrature => "quadrature",
        }
    }
}

/// An `L^p([0,1]^d)` norm together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub p: f64,
    pub value: f64,
    pub method: NormMethod,
    /// Per-axis sample counts; empty for the exact methods.
    pub grid: Vec<usize>,
    pub rel_error_estimate: f64,
}

impl NormResult {
    /// Grid rendered as `M1xM2x…`, empty for exact methods.
    pub fn grid_label(&self) -> String {
        self.grid
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("x")
    }
}

/// `Some(m)` when `p == 2m` for a positive integer `m`.
pub fn even_half(p: f64) -> Option<u32> {
    let m = p / 2.0;
    (m >= 1.0 && m.fract() == 0.0 && m <= u32::MAX as f64).then_some(m as u32)
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if !(p.is_finite() && p >= 2.0) {
        return Err(Error::invalid("p", format!("must be a finite real >= 2, got {p}")));
    }
    Ok(())
}

/// Smallest grid on which the Riemann sum of `|f|^p` is exact for even `p`.
pub fn exact_grid(poly: &TrigPolynomial, p: f64) -> Vec<usize> {
    let mult = p.ceil() as u64;
    poly.spreads().iter().map(|&s| (mult * s + 1) as usize).collect()
}

/// Mean of `|v|^p` over grid samples.
pub fn mean_abs_pow(values: &[Complex64], p: f64) -> f64 {
    let sum: f64 = match even_half(p) {
        Some(1) => values.iter().map(Complex64::norm_sqr).sum(),
        Some(m) if m <= 16 => values.iter().map(|v| v.norm_sqr().powi(m as i32)).sum(),
        _ => {
            let half = p / 2.0;
            values.iter().map(|v| v.norm_sqr().powf(half)).sum()
        }
    };
    sum / values.len() as f64
}

fn quadrature_value(poly: &TrigPolynomial, p: f64, grid: &[usize]) -> Result<f64> {
    let t = GridTransform::new(grid)?;
    Ok(mean_abs_pow(&t.synthesize(poly), p).powf(1.0 / p))
}

fn validate_input(poly: &TrigPolynomial, p: f64) -> Result<()> {
    check_p(p)?;
    if poly.is_empty() {
        return Err(Error::EmptySupport);
    }
    Ok(())
}

fn rel_change(prev: f64, last: f64) -> f64 {
    let scale = prev.abs().max(last.abs());
    if scale == 0.0 {
        0.0
    } else {
        (last - prev).abs() / scale
    }
}

/// Uniform-grid Riemann sum `((1/ΠM) Σ |f|^p)^{1/p}`.
///
/// When `p` is an even integer and every `M_i > p · spread_i`, the sum is
/// the integral exactly and the error estimate is zero. Otherwise the
/// estimate is the relative change against the grid doubled on every axis.
pub fn lp_norm_quadrature(poly: &TrigPolynomial, p: f64, grid: &[usize]) -> Result<NormResult> {
    validate_input(poly, p)?;
    if grid.len() != poly.dim() {
        return Err(Error::DimensionMismatch {
            expected: poly.dim(),
            found: grid.len(),
        });
    }
    check_alias_free(poly, grid)?;
    let value = quadrature_value(poly, p, grid)?;
    let exact = even_half(p).is_some()
        && grid
            .iter()
            .zip(poly.spreads())
            .all(|(&m, s)| m as f64 > p * s as f64);
    let rel_error_estimate = if exact {
        0.0
    } else {
        let doubled: Vec<usize> = grid.iter().map(|m| 2 * m).collect();
        rel_change(quadrature_value(poly, p, &doubled)?, value)
    };
    Ok(NormResult {
        p,
        value,
        method: NormMethod::Quadrature,
        grid: grid.to_vec(),
        rel_error_estimate,
    })
}

/// Exact `L^{2m}` norm via `‖f‖_{2m}^{2m} = ‖f^m‖_2^2`, with `f^m` formed by
/// direct `m`-fold convolution of the coefficient sequence.
pub fn lp_norm_even_exact(poly: &TrigPolynomial, m: u32) -> Result<NormResult> {
    lp_norm_even_exact_with_budget(poly, m, DEFAULT_CONVOLUTION_BUDGET)
}

pub fn lp_norm_even_exact_with_budget(poly: &TrigPolynomial, m: u32, budget: usize) -> Result<NormResult> {
    if m == 0 {
        return Err(Error::invalid("m", "must be at least 1"));
    }
    if poly.is_empty() {
        return Err(Error::EmptySupport);
    }
    let p = 2.0 * m as f64;
    if m == 1 {
        return Ok(NormResult {
            p,
            value: poly.l2_norm_sqr().sqrt(),
            method: NormMethod::Parseval,
            grid: Vec::new(),
            rel_error_estimate: 0.0,
        });
    }
    let energy = power_l2_sqr(&poly.reduced(), m, budget)?;
    Ok(NormResult {
        p,
        value: energy.powf(1.0 / p),
        method: NormMethod::EvenConvolution,
        grid: Vec::new(),
        rel_error_estimate: 0.0,
    })
}

/// `‖f^m‖_2^2` by dense convolution inside the box of `f^m`'s support.
fn power_l2_sqr(poly: &TrigPolynomial, m: u32, budget: usize) -> Result<f64> {
    let dim = poly.dim();
    let widths: Vec<u128> = poly
        .spreads()
        .iter()
        .map(|&s| m as u128 * s as u128 + 1)
        .collect();
    let needed: u128 = widths.iter().product();
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "convolution support",
            needed,
            budget,
        });
    }
    let total = needed as usize;
    let mut strides = vec![1usize; dim];
    for i in (0..dim.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * widths[i + 1] as usize;
    }
    let mins: Vec<i64> = (0..dim).map(|a| poly.min_coord(a)).collect();
    // Offsets from the minimum corner never carry between axes, so sums of
    // flat indices are flat indices of sums.
    let terms: Vec<(usize, Complex64)> = poly
        .freqs()
        .zip(poly.coeffs())
        .map(|(n, &a)| {
            let idx = n
                .iter()
                .zip(&mins)
                .zip(&strides)
                .map(|((&c, &lo), &st)| (c - lo) as usize * st)
                .sum();
            (idx, a)
        })
        .collect();

    let mut current = terms.clone();
    let mut dense = vec![Complex64::new(0.0, 0.0); total];
    for _ in 1..m {
        dense.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for &(i, c) in &current {
            for &(j, a) in &terms {
                dense[i + j] += c * a;
            }
        }
        current = dense
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
            .map(|(i, v)| (i, *v))
            .collect();
    }
    Ok(current.iter().map(|(_, v)| v.norm_sqr()).sum())
}

/// Stopping contract for [`lp_norm_adaptive_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub rel_tol: f64,
    /// Largest total number of grid points tried.
    pub max_points: usize,
}

impl AdaptiveOptions {
    pub fn new(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            max_points: DEFAULT_GRID_BUDGET,
        }
    }
}

/// Riemann sums on grids doubled from the alias-free minimum until two
/// successive values agree to `rel_tol`.
///
/// The support is first reduced by [`TrigPolynomial::reduced`], and
/// agreement only counts once the coarser grid of the pair exceeds
/// `⌈p/2⌉` times the spread on every axis. The reported grid refers to
/// the reduced support.
pub fn lp_norm_adaptive(poly: &TrigPolynomial, p: f64, rel_tol: f64) -> Result<NormResult> {
    lp_norm_adaptive_with(poly, p, AdaptiveOptions::new(rel_tol))
}

pub fn lp_norm_adaptive_with(poly: &TrigPolynomial, p: f64, opts: AdaptiveOptions) -> Result<NormResult> {
    validate_input(poly, p)?;
    if !(opts.rel_tol > 0.0 && opts.rel_tol < 1.0) {
        return Err(Error::invalid("rel_tol", "must lie in (0, 1)"));
    }
    // Periodicity in a progression would let coarse grids agree by accident.
    let poly = &poly.reduced();
    let spreads = poly.spreads();
    let trusted_mult = (p / 2.0).ceil() as u64;
    let trusted = |g: &[usize]| g.iter().zip(&spreads).all(|(&m, &s)| m as u64 > trusted_mult * s);
    let mut grid: Vec<usize> = spreads.iter().map(|&s| s as usize + 1).collect();
    let points = |g: &[usize]| g.iter().map(|&m| m as u128).product::<u128>();
    if points(&grid) > opts.max_points as u128 {
        return Err(Error::BudgetExceeded {
            what: "quadrature grid",
            needed: points(&grid),
            budget: opts.max_points,
        });
    }
    let mut prev = quadrature_value(poly, p, &grid)?;
    loop {
        let next: Vec<usize> = grid.iter().map(|m| 2 * m).collect();
        if points(&next) > opts.max_points as u128 {
            // One more level is unaffordable; report the last pair seen.
            let last = prev;
            let half: Vec<usize> = grid.iter().map(|m| (m / 2).max(1)).collect();
            let previous = if half != grid {
                quadrature_value(poly, p, &half)?
            } else {
                last
            };
            return Err(Error::NotConverged {
                previous,
                last,
                rel_change: rel_change(previous, last),
            });
        }
        let value = quadrature_value(poly, p, &next)?;
        let change = rel_change(prev, value);
        grid = next;
        if change < opts.rel_tol && trusted(&half_of(&grid)) {
            return Ok(NormResult {
                p,
                value,
                method: NormMethod::Quadrature,
                grid,
                rel_error_estimate: change,
            });
        }
        prev = value;
    }
}

fn half_of(grid: &[usize]) -> Vec<usize> {
    grid.iter().map(|m| m / 2).collect()
}

/// How Monte Carlo statistics and optimizers certify a norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum NormPolicy {
    /// Adaptive quadrature with the given relative tolerance.
    Adaptive { rel_tol: f64 },
    /// Exact convolution route; only valid for even integer `p`.
    ExactEven,
}

impl Default for NormPolicy {
    fn default() -> Self {
        NormPolicy::Adaptive { rel_tol: 1e-9 }
    }
}

impl NormPolicy {
    /// Exact for even `p`, adaptive otherwise.
    pub fn for_p(p: f64, rel_tol: f64) -> Self {
        if even_half(p).is_some() {
            NormPolicy::ExactEven
        } else {
            NormPolicy::Adaptive { rel_tol }
        }
    }

    pub fn validate(&self, p: f64) -> Result<()> {
        check_p(p)?;
        match *self {
            NormPolicy::ExactEven if even_half(p).is_none() => Err(Error::invalid(
                "method",
                format!("exact-even requires an even integer p, got {p}"),
            )),
            NormPolicy::Adaptive { rel_tol } if !(rel_tol > 0.0 && rel_tol < 1.0) => {
                Err(Error::invalid("rel_tol", "must lie in (0, 1)"))
            }
            _ => Ok(()),
        }
    }

    pub fn norm(&self, poly: &TrigPolynomial, p: f64) -> Result<NormResult> {
        self.validate(p)?;
        match *self {
            NormPolicy::ExactEven => lp_norm_even_exact(poly, even_half(p).unwrap_or(1)),
            NormPolicy::Adaptive { rel_tol } => lp_norm_adaptive(poly, p, rel_tol),
        }
    }
}
