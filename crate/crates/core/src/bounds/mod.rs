//! Eigenvalue-counting bounds of CLR and Lieb–Thirring type.
//!
//! Every evaluator returns a [`BoundReport`] whose value is a rigorous upper
//! bound whenever `certified` is set: quadrature tails are replaced by
//! certified tail bounds of the heat-kernel model, and two-regime constants
//! are computed from the envelope rather than assumed.
//!
//! Site contributions are summed after sorting, so every value is invariant
//! under permutations of the site list.

mod clr;
mod field;
mod regimes;
mod report;
mod tail;

pub use clr::{
    clr_general, clr_general_dirichlet_box, clr_general_site_dependent, clr_general_with, clr_hinge,
    clr_hinge_optimized, clr_hinge_with, discrete_split, hinge_objective, lt_moment, lt_moment_hinge,
    lt_moment_with, HingeOptimum, SIGMA_SEARCH_MAX,
};
pub use field::{FieldKind, PotentialField, Site};
pub use regimes::{
    quantum_graph_edge_bounds, shell_sum, two_regime_exp, two_regime_exp_radial, two_regime_power,
    two_regime_power_radial, QuantumGraphBounds, RadialField, ShellOutcome, TwoRegimeConstants,
    SHELL_MAX_DOUBLINGS, TWO_REGIME_SIGMA, TWO_REGIME_SIGMA_MAX,
};
pub use report::{BoundPart, BoundReport, BoundValue};
pub use tail::{TimeIntegrals, TAIL_REL_TOL, TAU_MIN};

/// Sum that does not depend on the order of its terms: ascending sort, then
/// compensated summation.
pub(crate) fn invariant_sum(mut terms: Vec<f64>) -> f64 {
    if terms.iter().any(|t| t.is_nan()) {
        return f64::NAN;
    }
    terms.sort_by(|a, b| a.total_cmp(b));
    let (mut s, mut c) = (0.0_f64, 0.0_f64);
    for t in terms {
        let y = t - c;
        let u = s + y;
        c = (u - s) - y;
        s = u;
    }
    s
}
