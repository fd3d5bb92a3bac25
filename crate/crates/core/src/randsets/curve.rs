use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trigpoly::FrequencySet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    /// `n ↦ n²` inside `[1, N²]`.
    Squares,
    /// `n ↦ (n, n²)` inside `[1, N] × [1, N²]`.
    Parabola,
    /// `(n, m) ↦ (n, m, n² + m²)` inside `[1, N^{1/2}]² × [1, N]`.
    Paraboloid,
}

impl CurveKind {
    pub fn dim(self) -> usize {
        match self {
            CurveKind::Squares => 1,
            CurveKind::Parabola => 2,
            CurveKind::Paraboloid => 3,
        }
    }

    pub fn base_dim(self) -> usize {
        match self {
            CurveKind::Squares | CurveKind::Parabola => 1,
            CurveKind::Paraboloid => 2,
        }
    }

    pub fn box_exponents(self) -> Vec<f64> {
        match self {
            CurveKind::Squares => vec![2.0],
            CurveKind::Parabola => vec![1.0, 2.0],
            CurveKind::Paraboloid => vec![0.5, 0.5, 1.0],
        }
    }
}

impl std::str::FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "squares" => Ok(CurveKind::Squares),
            "parabola" => Ok(CurveKind::Parabola),
            "paraboloid" => Ok(CurveKind::Paraboloid),
            other => Err(Error::invalid(
                "kind",
                format!("unknown curve `{other}` (squares, parabola, paraboloid)"),
            )),
        }
    }
}

/// Lift a base set onto a curve, keeping the scale `N`.
pub fn embed_curve(base: &FrequencySet, kind: CurveKind) -> Result<FrequencySet> {
    if base.dim() != kind.base_dim() {
        return Err(Error::DimensionMismatch {
            expected: kind.base_dim(),
            found: base.dim(),
        });
    }
    let freqs = base
        .iter()
        .map(|v| match kind {
            CurveKind::Squares => vec![v[0] * v[0]],
            CurveKind::Parabola => vec![v[0], v[0] * v[0]],
            CurveKind::Paraboloid => vec![v[0], v[1], v[0] * v[0] + v[1] * v[1]],
        })
        .collect();
    FrequencySet::new(kind.dim(), freqs, kind.box_exponents(), base.n())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords(s: &FrequencySet) -> Vec<Vec<i64>> {
        s.iter().map(<[i64]>::to_vec).collect()
    }

    #[test]
    fn examples() {
        let base = FrequencySet::one_dim(3, [1, 2, 3]).unwrap();
        let sq = embed_curve(&base, CurveKind::Squares).unwrap();
        assert_eq!(coords(&sq), vec![vec![1], vec![4], vec![9]]);
        assert_eq!(sq.box_exponents(), &[2.0]);

        let two = FrequencySet::one_dim(3, [2]).unwrap();
        let par = embed_curve(&two, CurveKind::Parabola).unwrap();
        assert_eq!(coords(&par), vec![vec![2, 4]]);
        assert_eq!(par.box_exponents(), &[1.0, 2.0]);

        let plane = FrequencySet::new(2, vec![vec![1, 2]], vec![0.5, 0.5], 25).unwrap();
        let pb = embed_curve(&plane, CurveKind::Paraboloid).unwrap();
        assert_eq!(coords(&pb), vec![vec![1, 2, 5]]);
    }

    #[test]
    fn dimension_mismatch() {
        let base = FrequencySet::one_dim(3, [1]).unwrap();
        assert!(matches!(
            embed_curve(&base, CurveKind::Paraboloid),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }
}
