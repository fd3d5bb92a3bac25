use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite set of distinct integer frequency vectors inside the box
/// `[1, N^{α_1}] × … × [1, N^{α_d}]`.
///
/// Vectors are kept in lexicographic order; coordinates live in one flat
/// buffer with stride `dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencySet {
    dim: usize,
    coords: Vec<i64>,
    box_exponents: Vec<f64>,
    n: u64,
}

/// `⌈N^α⌉`, treating values within rounding noise of an integer as that integer.
pub fn box_bound(n: u64, alpha: f64) -> u64 {
    let x = (n as f64).powf(alpha);
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

impl FrequencySet {
    pub fn new(dim: usize, freqs: Vec<Vec<i64>>, box_exponents: Vec<f64>, n: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dim", "must be positive"));
        }
        if n == 0 {
            return Err(Error::invalid("n", "must be positive"));
        }
        if box_exponents.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: box_exponents.len(),
            });
        }
        if let Some(a) = box_exponents.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::invalid("box_exponents", format!("exponent {a} is not positive")));
        }
        let bounds: Vec<u64> = box_exponents.iter().map(|&a| box_bound(n, a)).collect();
        let mut freqs = freqs;
        for v in &freqs {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            for (axis, (&c, &hi)) in v.iter().zip(&bounds).enumerate() {
                if c < 1 || c as u64 > hi {
                    return Err(Error::invalid(
                        "freqs",
                        format!("coordinate {axis} of {v:?} lies outside [1, {hi}]"),
                    ));
                }
            }
        }
        freqs.sort_unstable();
        if let Some(w) = freqs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid("freqs", format!("duplicate frequency {:?}", w[0])));
        }
        Ok(Self {
            dim,
            coords: freqs.into_iter().flatten().collect(),
            box_exponents,
            n,
        })
    }

    /// One-dimensional set inside `[1, N]`.
    pub fn one_dim(n: u64, elems: impl IntoIterator<Item = i64>) -> Result<Self> {
        Self::new(1, elems.into_iter().map(|e| vec![e]).collect(), vec![1.0], n)
    }

    /// The full range `[1, N]`.
    pub fn full_range(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "must be positive"));
        }
        Ok(Self {
            dim: 1,
            coords: (1..=n as i64).collect(),
            box_exponents: vec![1.0],
            n,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn box_exponents(&self) -> &[f64] {
        &self.box_exponents
    }

    /// Upper bound of coordinate `axis`.
    pub fn bound(&self, axis: usize) -> u64 {
        box_bound(self.n, self.box_exponents[axis])
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn get(&self, i: usize) -> &[i64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[i64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(v) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub(crate) fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Serialize as one vector per line, coordinates comma-separated, in
    /// lexicographic order.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for v in self.iter() {
            for (i, c) in v.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write!(out, "{c}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Parse the line format written by [`FrequencySet::to_lines`].
    ///
    /// The file carries no box metadata, so the result uses unit box
    /// exponents and `N` equal to the largest coordinate.
    pub fn from_lines(text: &str) -> Result<Self> {
        let mut freqs = Vec::new();
        let mut dim = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v = line
                .split(',')
                .map(|t| t.trim().parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line: lineno + 1,
                    reason: e.to_string(),
                })?;
            match dim {
                None => dim = Some(v.len()),
                Some(d) if d != v.len() => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        reason: format!("expected {d} coordinates, found {}", v.len()),
                    })
                }
                _ => {}
            }
            freqs.push(v);
        }
        let dim = dim.ok_or(Error::EmptySupport)?;
        let n = freqs.iter().flatten().copied().max().unwrap_or(1).max(1) as u64;
        Self::new(dim, freqs, vec![1.0; dim], n)
    }
}
