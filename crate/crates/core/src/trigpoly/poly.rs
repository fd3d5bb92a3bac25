use std::collections::HashSet;

use num_complex::Complex64;

use super::FrequencySet;
use crate::error::{Error, Result};

/// `f(x) = Σ a_n e(n·x)` on the `d`-torus.
///
/// Frequencies are arbitrary distinct integer vectors, so translated or
/// centred supports are representable; box constraints belong to
/// [`FrequencySet`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    dim: usize,
    coords: Vec<i64>,
    coeffs: Vec<Complex64>,
}

impl TrigPolynomial {
    pub fn new(freqs: Vec<Vec<i64>>, coeffs: Vec<Complex64>) -> Result<Self> {
        if freqs.len() != coeffs.len() {
            return Err(Error::invalid(
                "coeffs",
                format!("{} coefficients for {} frequencies", coeffs.len(), freqs.len()),
            ));
        }
        let dim = freqs.first().map_or(1, Vec::len);
        if dim == 0 {
            return Err(Error::invalid("freqs", "zero-dimensional frequency"));
        }
        let mut seen = HashSet::with_capacity(freqs.len());
        for v in &freqs {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if !seen.insert(v.as_slice()) {
                return Err(Error::invalid("freqs", format!("duplicate frequency {v:?}")));
            }
        }
        Ok(Self {
            dim,
            coords: freqs.iter().flatten().copied().collect(),
            coeffs,
        })
    }

    /// One-dimensional polynomial from `(frequency, coefficient)` pairs.
    pub fn one_dim(terms: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        let (freqs, coeffs): (Vec<_>, Vec<_>) = terms.into_iter().map(|(n, a)| (vec![n], a)).unzip();
        Self::new(freqs, coeffs)
    }

    pub fn from_set(set: &FrequencySet, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != set.len() {
            return Err(Error::invalid(
                "coeffs",
                format!("{} coefficients for {} frequencies", coeffs.len(), set.len()),
            ));
        }
        Ok(Self {
            dim: set.dim(),
            coords: set.coords().to_vec(),
            coeffs,
        })
    }

    /// The all-ones exponential sum over `set`.
    pub fn ones(set: &FrequencySet) -> Self {
        Self {
            dim: set.dim(),
            coords: set.coords().to_vec(),
            coeffs: vec![Complex64::new(1.0, 0.0); set.len()],
        }
    }

    /// Dirichlet kernel `Σ_{n=1}^{N} e(nx)`.
    pub fn dirichlet(n: u64) -> Result<Self> {
        Ok(Self::ones(&FrequencySet::full_range(n)?))
    }

    /// Same support, new coefficients.
    pub fn with_coeffs(&self, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != self.coeffs.len() {
            return Err(Error::invalid(
                "coeffs",
                format!("{} coefficients for {} frequencies", coeffs.len(), self.len()),
            ));
        }
        Ok(Self {
            dim: self.dim,
            coords: self.coords.clone(),
            coeffs,
        })
    }

    /// Shift every frequency by `offset`.
    pub fn translated(&self, offset: &[i64]) -> Result<Self> {
        if offset.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: offset.len(),
            });
        }
        let coords = self
            .coords
            .chunks_exact(self.dim)
            .flat_map(|v| v.iter().zip(offset).map(|(c, o)| c + o))
            .collect();
        Ok(Self {
            dim: self.dim,
            coords,
            coeffs: self.coeffs.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn freq(&self, i: usize) -> &[i64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn freqs(&self) -> impl ExactSizeIterator<Item = &[i64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Smallest coordinate along `axis` (0 for an empty support).
    pub fn min_coord(&self, axis: usize) -> i64 {
        self.freqs().map(|v| v[axis]).min().unwrap_or(0)
    }

    /// `max − min` of coordinate `axis` over the support.
    pub fn spread(&self, axis: usize) -> u64 {
        let mut it = self.freqs().map(|v| v[axis]);
        let Some(first) = it.next() else { return 0 };
        let (lo, hi) = it.fold((first, first), |(lo, hi), c| (lo.min(c), hi.max(c)));
        (hi - lo) as u64
    }

    pub fn spreads(&self) -> Vec<u64> {
        (0..self.dim).map(|a| self.spread(a)).collect()
    }

    /// Same coefficients on frequencies `(n_i − min_i) / g_i`, where `g_i` is
    /// the gcd of the offsets along axis `i`.
    ///
    /// `x_i ↦ g_i x_i` preserves Lebesgue measure on the torus, so every
    /// `L^p` norm is unchanged while the spread shrinks by `g_i`.
    pub fn reduced(&self) -> TrigPolynomial {
        let mut coords = self.coords.clone();
        for axis in 0..self.dim {
            let lo = self.min_coord(axis);
            let g = self
                .freqs()
                .fold(0i64, |g, v| num_integer::gcd(g, v[axis] - lo))
                .max(1);
            for v in coords.chunks_exact_mut(self.dim) {
                v[axis] = (v[axis] - lo) / g;
            }
        }
        Self {
            dim: self.dim,
            coords,
            coeffs: self.coeffs.clone(),
        }
    }

    /// `Σ |a_n|²`, the squared L² norm by Parseval.
    pub fn l2_norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(Complex64::norm_sqr).sum()
    }

    /// Direct evaluation at a point of the torus.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.freqs()
            .zip(&self.coeffs)
            .map(|(n, a)| {
                let t: f64 = n.iter().zip(x).map(|(&ni, xi)| ni as f64 * xi).sum();
                a * Complex64::from_polar(1.0, std::f64::consts::TAU * t.rem_euclid(1.0))
            })
            .sum()
    }
}
