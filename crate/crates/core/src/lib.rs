//! Numerical laboratory for the majorant property and `Λ(p)` constants of
//! random frequency sets.
//!
//! * [`trigpoly`]: exponential sums on the torus and their `L^p` norms.
//! * [`randsets`]: seeded samplers for the random set models.
//! * [`extremal`]: coefficient optimizers for the majorant numerator and
//!   the `Λ(p)` constant, plus brute-force oracles.
//! * [`montecarlo`]: trial ensembles and the bound checks built on them.
//! * [`cli`]: argument/config handling behind the `majorant-lab` binary.

pub mod cli;
pub mod error;
pub mod extremal;
pub mod montecarlo;
pub mod randsets;
pub mod trigpoly;

pub use error::{Error, Result};
