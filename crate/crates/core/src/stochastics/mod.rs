//! Seeded randomness, bridge samplers, special functions and quadrature.
//!
//! Every sampler is a pure function of its parameters and a [`RandomSource`];
//! Monte-Carlo work is sharded by deriving one substream per path, so results
//! do not depend on how paths are distributed over workers.

mod bridge;
mod poisson;
mod quadrature;
mod random;
mod special;

pub use bridge::{sample_brownian_bridge, sample_brownian_bridge_into, BridgePath};
pub use poisson::{poisson_pmf, poisson_tail_bound};
pub use quadrature::{
    gauss_legendre, integrate, integrate_to_infinity, quadrature, QuadOptions, QuadResult,
    Singularity, TailEnvelope,
};
pub use random::RandomSource;
pub use special::{bessel_i0_scaled, ln_binomial, ln_factorial, ln_gamma};
