use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::curve::{embed_curve, CurveKind};
use super::SeededRng;
use crate::error::{Error, Result};
use crate::trigpoly::FrequencySet;

/// The random frequency-set distributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum RandomSetModel {
    /// Each `n ∈ [1, N]` kept independently with probability `τ = N^{−δ}`.
    BernoulliSelector { n: u64, delta: f64 },
    /// One uniform element from each window `[(b+aj)−s, (b+aj)+s]`, `j = 1..L`.
    PerturbedAp { n: u64, l: u64, s: u64, a: u64, b: u64 },
    /// One uniform element from each of `L` consecutive blocks of `[1, N]`.
    BlockUniform { n: u64, l: u64 },
    /// Two-stage sampler: one element per fine block, then one fine block
    /// per coarse block.
    NestedBlock { n: u64, p: f64, p1: f64 },
    /// `{ j ∈ [1, N] : frac(2^j ω) < τ }` for a single uniform `ω`.
    CorrelatedDyadic { n: u64, delta: f64 },
    /// The deterministic set `[1, N]`.
    FullRange { n: u64 },
    /// A one-dimensional model lifted onto squares, the parabola or the
    /// paraboloid.
    CurveEmbedding {
        base: Box<RandomSetModel>,
        kind: CurveKind,
    },
}

/// Block layout of a block-structured model: inclusive `[lo, hi]` ranges.
pub type Blocks = Vec<(i64, i64)>;

fn check_delta(delta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::invalid("delta", format!("must lie in [0, 1), got {delta}")));
    }
    Ok(())
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n", "must be positive"));
    }
    Ok(())
}

/// Integer layout of the nested sampler after flooring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NestedLayout {
    /// Coarse block count `⌊N^{2/p}⌋`.
    pub coarse: u64,
    /// Fine blocks per coarse block, `⌊L₁/L⌋` with `L₁ = ⌊N^{2/p₁}⌋`.
    pub per_coarse: u64,
    /// Width of every fine block but the last, which absorbs the remainder.
    pub fine_width: u64,
}

impl NestedLayout {
    pub fn fine_blocks(&self, n: u64) -> Blocks {
        let count = self.coarse * self.per_coarse;
        partition(n, count, self.fine_width)
    }
}

/// `count` consecutive blocks of `width` with the last one extended to `n`.
fn partition(n: u64, count: u64, width: u64) -> Blocks {
    (0..count)
        .map(|j| {
            let lo = j * width + 1;
            let hi = if j + 1 == count { n } else { (j + 1) * width };
            (lo as i64, hi as i64)
        })
        .collect()
}

impl RandomSetModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            RandomSetModel::BernoulliSelector { n, delta } | RandomSetModel::CorrelatedDyadic { n, delta } => {
                check_n(*n)?;
                check_delta(*delta)
            }
            RandomSetModel::PerturbedAp { n, l, s, a, b } => {
                check_n(*n)?;
                if *l == 0 {
                    return Err(Error::invalid("l", "must be positive"));
                }
                if *s == 0 {
                    return Err(Error::invalid("s", "must be positive"));
                }
                if 2 * s >= *a {
                    return Err(Error::invalid("a", format!("need 2s < a, got s = {s}, a = {a}")));
                }
                if *b == 0 || b >= a {
                    return Err(Error::invalid("b", format!("need 0 < b < a, got b = {b}, a = {a}")));
                }
                let top = b + a * l + s;
                if top > *n {
                    return Err(Error::invalid(
                        "n",
                        format!("need b + a*L + s <= N, got {top} > {n}"),
                    ));
                }
                Ok(())
            }
            RandomSetModel::BlockUniform { n, l } => {
                check_n(*n)?;
                if *l == 0 || l > n {
                    return Err(Error::invalid("l", format!("need 1 <= L <= N, got L = {l}")));
                }
                Ok(())
            }
            RandomSetModel::NestedBlock { n, .. } => {
                check_n(*n)?;
                self.nested_layout().map(|_| ())
            }
            RandomSetModel::FullRange { n } => check_n(*n),
            RandomSetModel::CurveEmbedding { base, kind } => {
                if matches!(**base, RandomSetModel::CurveEmbedding { .. }) {
                    return Err(Error::invalid("base", "curve embeddings do not nest"));
                }
                base.validate()?;
                if *kind == CurveKind::Paraboloid {
                    if !matches!(
                        **base,
                        RandomSetModel::BernoulliSelector { .. }
                            | RandomSetModel::CorrelatedDyadic { .. }
                            | RandomSetModel::FullRange { .. }
                    ) {
                        return Err(Error::invalid(
                            "base",
                            "the paraboloid needs a selector model (bernoulli, dyadic or full range)",
                        ));
                    }
                    if paraboloid_side(base.n()) == 0 {
                        return Err(Error::invalid("n", "paraboloid needs N >= 2"));
                    }
                }
                Ok(())
            }
        }
    }

    /// Scale parameter `N`.
    pub fn n(&self) -> u64 {
        match self {
            RandomSetModel::BernoulliSelector { n, .. }
            | RandomSetModel::PerturbedAp { n, .. }
            | RandomSetModel::BlockUniform { n, .. }
            | RandomSetModel::NestedBlock { n, .. }
            | RandomSetModel::CorrelatedDyadic { n, .. }
            | RandomSetModel::FullRange { n } => *n,
            RandomSetModel::CurveEmbedding { base, .. } => base.n(),
        }
    }

    /// Selector mean `τ = N^{−δ}` for selector models, 1 for the full range.
    pub fn tau(&self) -> Option<f64> {
        match self {
            RandomSetModel::BernoulliSelector { n, delta } | RandomSetModel::CorrelatedDyadic { n, delta } => {
                Some((*n as f64).powf(-delta))
            }
            RandomSetModel::FullRange { .. } => Some(1.0),
            RandomSetModel::CurveEmbedding { base, .. } => base.tau(),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            RandomSetModel::CurveEmbedding { kind, .. } => kind.dim(),
            _ => 1,
        }
    }

    /// Sum of the box exponents of the sampled sets.
    pub fn box_exponent_sum(&self) -> f64 {
        match self {
            RandomSetModel::CurveEmbedding { kind, .. } => kind.box_exponents().iter().sum(),
            _ => 1.0,
        }
    }

    /// Blocks of a block-structured model: the windows `I_j` of a perturbed
    /// progression or the partition of a block-uniform model.
    pub fn blocks(&self) -> Option<Blocks> {
        match *self {
            RandomSetModel::PerturbedAp { l, s, a, b, .. } => Some(
                (1..=l)
                    .map(|j| {
                        let c = (b + a * j) as i64;
                        (c - s as i64, c + s as i64)
                    })
                    .collect(),
            ),
            RandomSetModel::BlockUniform { n, l } => Some(partition(n, l, n / l)),
            RandomSetModel::NestedBlock { n, .. } => {
                let layout = self.nested_layout().ok()?;
                let fine = layout.fine_blocks(n);
                Some(
                    fine.chunks(layout.per_coarse as usize)
                        .map(|c| (c[0].0, c[c.len() - 1].1))
                        .collect(),
                )
            }
            _ => None,
        }
    }

    /// Layout of a [`RandomSetModel::NestedBlock`] model.
    pub fn nested_layout(&self) -> Result<NestedLayout> {
        let RandomSetModel::NestedBlock { n, p, p1 } = *self else {
            return Err(Error::invalid("model", "not a nested block model"));
        };
        if !(p.is_finite() && p > 4.0) {
            return Err(Error::invalid("p", format!("nested sampler needs p > 4, got {p}")));
        }
        if !(p1 > p / 2.0 && p1 < p) {
            return Err(Error::invalid("p1", format!("need p/2 < p1 < p, got p1 = {p1}")));
        }
        let coarse = floor_power(n, 2.0 / p);
        let fine = floor_power(n, 2.0 / p1);
        if coarse == 0 {
            return Err(Error::invalid("n", "N^{2/p} < 1"));
        }
        let per_coarse = fine / coarse;
        if per_coarse == 0 {
            return Err(Error::invalid("p1", "s' = floor(L1/L) must be at least 1"));
        }
        let fine_width = n / (coarse * per_coarse);
        if fine_width == 0 {
            return Err(Error::invalid("n", "fine blocks would be empty"));
        }
        Ok(NestedLayout {
            coarse,
            per_coarse,
            fine_width,
        })
    }

    /// Exponent `p` at which the model sits at the `Λ(p)` size threshold:
    /// `L = N^{2/p}` for block models, `L = (Ls)^{2/p}` for perturbed
    /// progressions.
    pub fn critical_exponent(&self) -> Option<f64> {
        match *self {
            RandomSetModel::BlockUniform { n, l } if l > 1 => Some(2.0 * (n as f64).ln() / (l as f64).ln()),
            RandomSetModel::PerturbedAp { l, s, .. } if l > 1 => {
                Some(2.0 * ((l * s) as f64).ln() / (l as f64).ln())
            }
            _ => None,
        }
    }

    /// Draw one set. A pure function of the model and the stream key.
    pub fn sample(&self, rng: SeededRng) -> Result<FrequencySet> {
        self.sample_from(&mut rng.generator())
    }

    /// Draw one set from an existing generator, leaving it positioned after
    /// the draw.
    pub fn sample_from<R: Rng>(&self, g: &mut R) -> Result<FrequencySet> {
        self.validate()?;
        self.sample_with(g)
    }

    fn sample_with<R: Rng>(&self, g: &mut R) -> Result<FrequencySet> {
        match self {
            RandomSetModel::BernoulliSelector { n, .. } => {
                let tau = self.tau().unwrap_or(1.0);
                FrequencySet::one_dim(*n, bernoulli_indices(*n, tau, g))
            }
            RandomSetModel::CorrelatedDyadic { n, .. } => {
                let tau = self.tau().unwrap_or(1.0);
                FrequencySet::one_dim(*n, dyadic_indices(*n, tau, g))
            }
            RandomSetModel::FullRange { n } => FrequencySet::full_range(*n),
            RandomSetModel::PerturbedAp { n, .. } | RandomSetModel::BlockUniform { n, .. } => {
                let blocks = self.blocks().unwrap_or_default();
                let elems: Vec<i64> = blocks.iter().map(|&(lo, hi)| g.random_range(lo..=hi)).collect();
                FrequencySet::one_dim(*n, elems)
            }
            RandomSetModel::NestedBlock { n, .. } => {
                let layout = self.nested_layout()?;
                let fine = layout.fine_blocks(*n);
                // Stage one: an element in every fine block.
                let eta: Vec<i64> = fine.iter().map(|&(lo, hi)| g.random_range(lo..=hi)).collect();
                // Stage two: one fine block inside every coarse block.
                let k = layout.per_coarse as usize;
                let elems: Vec<i64> = (0..layout.coarse as usize)
                    .map(|j| eta[j * k + g.random_range(0..k)])
                    .collect();
                FrequencySet::one_dim(*n, elems)
            }
            RandomSetModel::CurveEmbedding { base, kind } => match kind {
                CurveKind::Paraboloid => {
                    let n = base.n();
                    let side = paraboloid_side(n);
                    let cells = side * side;
                    let tau = base.tau().unwrap_or(1.0);
                    let chosen: Vec<i64> = match **base {
                        RandomSetModel::CorrelatedDyadic { .. } => dyadic_indices(cells, tau, g),
                        RandomSetModel::FullRange { .. } => (1..=cells as i64).collect(),
                        _ => bernoulli_indices(cells, tau, g),
                    };
                    let pairs = chosen
                        .into_iter()
                        .map(|k| vec![(k - 1) / side as i64 + 1, (k - 1) % side as i64 + 1])
                        .collect();
                    let plane = FrequencySet::new(2, pairs, vec![0.5, 0.5], n)?;
                    embed_curve(&plane, *kind)
                }
                _ => embed_curve(&base.sample_with(g)?, *kind),
            },
        }
    }
}

/// `⌊N^e⌋`, treating values within rounding noise of an integer as that integer.
pub fn floor_power(n: u64, e: f64) -> u64 {
    let x = (n as f64).powf(e);
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r as u64
    } else {
        x.floor() as u64
    }
}

/// Side `r` of the square `[1, r]²` feeding the paraboloid, chosen so that
/// `n² + m² ≤ N`.
pub fn paraboloid_side(n: u64) -> u64 {
    let mut r = ((n / 2) as f64).sqrt().floor() as u64;
    while 2 * (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r > 0 && 2 * r * r > n {
        r -= 1;
    }
    r
}

fn bernoulli_indices<R: Rng>(n: u64, tau: f64, g: &mut R) -> Vec<i64> {
    if tau >= 1.0 {
        return (1..=n as i64).collect();
    }
    (1..=n as i64).filter(|_| g.random_bool(tau)).collect()
}

/// Indices `j ∈ [1, n]` with `frac(2^j ω) < τ`, where `ω`'s binary digits
/// are drawn 64 at a time. The 64-bit window after digit `j` decides
/// membership at `2^{−64}` resolution.
fn dyadic_indices<R: RngCore>(n: u64, tau: f64, g: &mut R) -> Vec<i64> {
    if tau >= 1.0 {
        return (1..=n as i64).collect();
    }
    let threshold = (tau * 18_446_744_073_709_551_616.0) as u64;
    let words: Vec<u64> = (0..(n as usize + 64).div_ceil(64) + 1).map(|_| g.next_u64()).collect();
    let window = |start: usize| -> u64 {
        let (w, o) = (start / 64, start % 64);
        if o == 0 {
            words[w]
        } else {
            (words[w] << o) | (words[w + 1] >> (64 - o))
        }
    };
    // Digit j+1 of ω sits at zero-based bit offset j.
    (1..=n as usize)
        .filter(|&j| window(j) < threshold)
        .map(|j| j as i64)
        .collect()
}
