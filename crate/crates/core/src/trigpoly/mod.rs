//! Trigonometric polynomials on the `d`-torus and their `L^p` norms.
//!
//! Norms are computed three ways: Parseval (`p = 2`), exact convolution
//! for even `p`, and uniform-grid quadrature. The uniform Riemann sum is
//! exact for even `p` once every axis exceeds `p` times the support
//! spread, and converges spectrally otherwise.

mod grid;
mod norm;
mod poly;
mod set;

pub use grid::{check_alias_free, evaluate_on_grid, GridTransform, GridValues};
pub use norm::{
    even_half, exact_grid, lp_norm_adaptive, lp_norm_adaptive_with, lp_norm_even_exact,
    lp_norm_even_exact_with_budget, lp_norm_quadrature, mean_abs_pow, AdaptiveOptions, NormMethod,
    NormPolicy, NormResult, DEFAULT_CONVOLUTION_BUDGET, DEFAULT_GRID_BUDGET,
};
pub(crate) use norm::check_p;
pub use poly::TrigPolynomial;
pub use set::{box_bound, FrequencySet};
