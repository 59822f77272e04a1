use std::f64::consts::PI;

use clrlab::groupwalks::WalkReturnTable;
use clrlab::heatkernels::{lattice_pi, lattice_resolvent, subordinated_pi};
use clrlab::stochastics::{quadrature, Singularity, TailEnvelope};
use num_complex::Complex64;

use crate::config::SubordinationIdentity;
use crate::outcome::{num, Outcome};
use crate::RunError;

pub fn run(c: &SubordinationIdentity, _seed: u64) -> Result<Outcome, RunError> {
    let mut out = Outcome::with_columns(&["t", "direct", "subordinated", "abs_diff"]);
    let table = WalkReturnTable::z1_simple_walk(c.table_steps);
    let mut worst: f64 = 0.0;
    for &t in &c.times {
        let direct = lattice_pi(1, t);
        let sub = subordinated_pi(&table, c.rate, t)?;
        let diff = (direct - sub).abs();
        worst = worst.max(diff);
        out.row(vec![num(t), num(direct), num(sub), num(diff)]);
    }
    out.check(
        "subordinated Z1 walk equals the lattice diagonal",
        worst < c.tolerance,
        format!("max |diff| {} vs {}", num(worst), num(c.tolerance)),
    );
    out.metric("max_abs_diff", worst);

    // ∫₀^∞ e^{-λt} π(t) dt = -(2π)^{-d} R_{2d+λ}(0).
    let mut worst_rel: f64 = 0.0;
    for &d in &c.laplace_dims {
        for &lam in &c.laplace_lambdas {
            let env = TailEnvelope::Exponential { scale: 1.0, rate: lam };
            let lt = quadrature(|t| (-lam * t).exp() * lattice_pi(d, t), 0.0, None, Singularity::None, Some(&env), 1e-12)?;
            let r = lattice_resolvent(d, Complex64::new(2.0 * d as f64 + lam, 0.0), &vec![0; d])?;
            let via_resolvent = -r.re / (2.0 * PI).powi(d as i32);
            let rel = (lt.value - via_resolvent).abs() / via_resolvent;
            worst_rel = worst_rel.max(rel);
            out.metric(&format!("laplace_d{d}_lambda{lam}"), lt.value);
        }
    }
    out.check(
        "Laplace transform of the diagonal equals the resolvent",
        worst_rel < c.laplace_tolerance,
        format!("max relative gap {} vs {}", num(worst_rel), num(c.laplace_tolerance)),
    );
    out.metric("laplace_max_rel", worst_rel);
    Ok(out)
}
