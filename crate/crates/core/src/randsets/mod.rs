//! Seeded samplers for the random frequency-set models.

mod curve;
mod model;
mod rng;

pub use curve::{embed_curve, CurveKind};
pub use model::{floor_power, paraboloid_side, Blocks, NestedLayout, RandomSetModel};
pub use rng::SeededRng;

use crate::error::Result;
use crate::trigpoly::{FrequencySet, TrigPolynomial};

/// The set `[1, N]`.
pub fn full_range(n: u64) -> Result<FrequencySet> {
    FrequencySet::full_range(n)
}

/// The Dirichlet kernel `Σ_{n=1}^{N} e(nx)`.
pub fn dirichlet(n: u64) -> Result<TrigPolynomial> {
    TrigPolynomial::dirichlet(n)
}

/// Perturbed progression with `L = ⌊N^{ε₀}⌋` and `s = ⌊N^{ε₁}⌋`.
pub fn perturbed_ap_from_exponents(n: u64, eps0: f64, eps1: f64, a: u64, b: u64) -> Result<RandomSetModel> {
    let model = RandomSetModel::PerturbedAp {
        n,
        l: floor_power(n, eps0),
        s: floor_power(n, eps1),
        a,
        b,
    };
    model.validate()?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trigpoly::{evaluate_on_grid, lp_norm_even_exact, lp_norm_quadrature};

    #[test]
    fn dirichlet_examples() {
        let d3 = dirichlet(3).unwrap();
        let g = evaluate_on_grid(&d3, &[4], true).unwrap();
        assert!((g.data[0].re - 3.0).abs() < 1e-12);
        let d1 = dirichlet(1).unwrap();
        for p in [2.0, 3.0, 4.5] {
            assert!((lp_norm_quadrature(&d1, p, &[1]).unwrap().value - 1.0).abs() < 1e-15);
        }
        assert!((lp_norm_even_exact(&d3, 2).unwrap().value - 19f64.powf(0.25)).abs() < 1e-14);
    }

    #[test]
    fn exponent_helper() {
        let m = perturbed_ap_from_exponents(10_000, 0.25, 0.25, 40, 5).unwrap();
        assert_eq!(
            m,
            RandomSetModel::PerturbedAp { n: 10_000, l: 10, s: 10, a: 40, b: 5 }
        );
        assert!(perturbed_ap_from_exponents(100, 0.5, 0.5, 10, 5).is_err());
    }
}
