//! Eigenvalue-counting bounds of CLR and Lieb–Thirring type for Schrödinger
//! operators `H = H₀ - W`, the heat-kernel diagonals `π(t)` they consume, and
//! exact counting oracles on finite truncations.
//!
//! Module map:
//! - [`weights`]: convex weights `G`, `g(1)` and the hinge constant `c(σ)`.
//! - [`heatkernels`]: providers of `π(t)` for lattices, Lévy generators,
//!   free groups, subordinated walks, Monte-Carlo tables and envelopes.
//! - [`stochastics`]: seeded streams, Brownian bridges, Poisson weights,
//!   quadrature and special functions.
//! - [`bounds`]: the bound evaluators over a [`bounds::PotentialField`].
//! - [`oracle`]: exact eigenvalue counts for truncated operators.
//! - [`groupwalks`]: exact return probabilities of discrete group walks.

pub mod bounds;
pub mod error;
pub mod groupwalks;
pub mod heatkernels;
pub mod oracle;
pub mod stochastics;
pub mod weights;

pub use error::{Error, Result};
