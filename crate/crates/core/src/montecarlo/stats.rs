//! Summary statistics over per-trial values. All reductions run in index
//! order so results do not depend on scheduling.

use statrs::distribution::{Binomial, Discrete, DiscreteCDF};

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance; zero for fewer than two values.
pub fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Linear-interpolation quantile (Hyndman–Fan type 7) of unsorted data.
pub fn quantile(xs: &[f64], q: f64) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Least-squares line through `(x, y)`: `(slope, intercept, slope standard error)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = mean(x);
    let my = mean(y);
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let se = if x.len() > 2 {
        let rss: f64 = x
            .iter()
            .zip(y)
            .map(|(a, b)| (b - intercept - slope * a).powi(2))
            .sum();
        (rss / (n - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    (slope, intercept, se)
}

/// `P(lo ≤ X ≤ hi)` for `X ~ Binomial(n, prob)`.
pub fn binomial_window(n: u64, prob: f64, lo: u64, hi: u64) -> f64 {
    if lo > hi {
        return 0.0;
    }
    let dist = Binomial::new(prob, n).expect("valid binomial parameters");
    let upper = dist.cdf(hi.min(n));
    let lower = if lo == 0 { 0.0 } else { dist.cdf(lo - 1) };
    (upper - lower).max(0.0)
}

/// `E X^q` for `X ~ Binomial(n, prob)`.
pub fn binomial_moment(n: u64, prob: f64, q: f64) -> f64 {
    let dist = Binomial::new(prob, n).expect("valid binomial parameters");
    (0..=n).map(|k| (k as f64).powf(q) * dist.pmf(k)).sum()
}
