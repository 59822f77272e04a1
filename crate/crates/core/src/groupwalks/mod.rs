//! Exact return probabilities of discrete group walks: dynamic programming
//! on the discrete Heisenberg group, enumeration and the local-time formula
//! on the affine group, the confined-bridge lemma and its envelope.

mod affine;
mod confinement;
mod heisenberg;
mod table;

pub use affine::{
    affine_return_bridge, affine_return_bruteforce, affine_return_table, AFFINE_BRIDGE_MAX, AFFINE_BRUTE_MAX,
};
pub use confinement::{
    confined_bridge_exact_and_bound, envelope_exponent_fit, envelope_log_max, ConfinedBridge,
    ConfinedBridgeQuery, EnvelopeFit, EnvelopePoint, CONFINED_MAX_RADIUS, CONFINED_MAX_STEPS,
};
pub use heisenberg::{heisenberg_return_dp, heisenberg_return_dp_detailed, HeisenbergDp, HEISENBERG_MAX_STEPS};
pub use table::{rational_to_f64, WalkMethod, WalkReturnEntry, WalkReturnTable};
