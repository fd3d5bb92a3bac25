use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::TrigPolynomial;
use crate::error::{Error, Result};

/// Samples of a function on the uniform grid `k_i / M_i` of the torus,
/// stored row-major (last axis contiguous).
#[derive(Debug, Clone, PartialEq)]
pub struct GridValues {
    pub shape: Vec<usize>,
    pub data: Vec<Complex64>,
}

impl GridValues {
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Value at multi-index `k`.
    pub fn at(&self, k: &[usize]) -> Complex64 {
        let mut idx = 0;
        for (&ki, &m) in k.iter().zip(&self.shape) {
            idx = idx * m + ki;
        }
        self.data[idx]
    }
}

/// Planned multi-dimensional DFTs for a fixed grid shape.
///
/// `synthesize` maps coefficients to grid values and `analyze` maps grid
/// values back to Fourier coefficients, so one instance can be reused
/// across the iterations of an optimizer.
pub struct GridTransform {
    shape: Vec<usize>,
    strides: Vec<usize>,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
}

impl std::fmt::Debug for GridTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GridTransform").field("shape", &self.shape).finish()
    }
}

impl GridTransform {
    pub fn new(shape: &[usize]) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::invalid("grid", "no dimensions"));
        }
        if let Some(axis) = shape.iter().position(|&m| m == 0) {
            return Err(Error::invalid("grid", format!("axis {axis} has zero samples")));
        }
        let mut planner = FftPlanner::<f64>::new();
        let forward = shape.iter().map(|&m| planner.plan_fft_forward(m)).collect();
        let inverse = shape.iter().map(|&m| planner.plan_fft_inverse(m)).collect();
        let mut strides = vec![1; shape.len()];
        for i in (0..shape.len() - 1).rev() {
            strides[i] = strides[i + 1] * shape[i + 1];
        }
        Ok(Self {
            shape: shape.to_vec(),
            strides,
            forward,
            inverse,
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn total(&self) -> usize {
        self.shape.iter().product()
    }

    /// Flat grid index of frequency `n` reduced modulo the grid.
    pub fn slot(&self, n: &[i64]) -> usize {
        n.iter()
            .zip(&self.shape)
            .zip(&self.strides)
            .map(|((&c, &m), &st)| c.rem_euclid(m as i64) as usize * st)
            .sum()
    }

    /// Grid values `Σ a_n e(Σ n_i k_i / M_i)`. Frequencies that collide
    /// modulo the grid are summed, which is still exact pointwise.
    pub fn synthesize(&self, poly: &TrigPolynomial) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.total()];
        for (n, a) in poly.freqs().zip(poly.coeffs()) {
            buf[self.slot(n)] += a;
        }
        self.apply(&mut buf, &self.inverse);
        buf
    }

    /// Fourier coefficients `(1/ΠM) Σ_k g(k) e(−n·k/M)`, indexed like the grid.
    pub fn analyze(&self, values: &mut [Complex64]) {
        self.apply(values, &self.forward);
        let scale = 1.0 / self.total() as f64;
        values.iter_mut().for_each(|v| *v *= scale);
    }

    fn apply(&self, buf: &mut [Complex64], plans: &[Arc<dyn Fft<f64>>]) {
        let total = buf.len();
        for (axis, plan) in plans.iter().enumerate() {
            let m = self.shape[axis];
            if m == 1 {
                continue;
            }
            let stride = self.strides[axis];
            if stride == 1 {
                plan.process(buf);
                continue;
            }
            // Gather each line along `axis`, transform, scatter back.
            let mut line = vec![Complex64::new(0.0, 0.0); m];
            let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
            let block = stride * m;
            for base in (0..total).step_by(block) {
                for offset in 0..stride {
                    let start = base + offset;
                    for (j, slot) in line.iter_mut().enumerate() {
                        *slot = buf[start + j * stride];
                    }
                    plan.process_with_scratch(&mut line, &mut scratch);
                    for (j, v) in line.iter().enumerate() {
                        buf[start + j * stride] = *v;
                    }
                }
            }
        }
    }
}

/// Check that every axis of `grid` strictly exceeds the support spread.
pub fn check_alias_free(poly: &TrigPolynomial, grid: &[usize]) -> Result<()> {
    for (axis, &m) in grid.iter().enumerate() {
        let spread = poly.spread(axis);
        if (m as u64) <= spread {
            return Err(Error::Aliased {
                axis,
                size: m,
                spread,
            });
        }
    }
    Ok(())
}

/// Evaluate `poly` on the grid with per-axis counts `grid` using an
/// inverse DFT of the zero-embedded coefficients.
pub fn evaluate_on_grid(poly: &TrigPolynomial, grid: &[usize], alias_free: bool) -> Result<GridValues> {
    if poly.is_empty() {
        return Err(Error::EmptySupport);
    }
    if grid.len() != poly.dim() {
        return Err(Error::DimensionMismatch {
            expected: poly.dim(),
            found: grid.len(),
        });
    }
    if alias_free {
        check_alias_free(poly, grid)?;
    }
    let transform = GridTransform::new(grid)?;
    Ok(GridValues {
        shape: grid.to_vec(),
        data: transform.synthesize(poly),
    })
}
