use clrlab::bounds::{two_regime_exp_radial, BoundValue, RadialField};
use clrlab::heatkernels::{anderson_ep0_curve, envelope_pi, HeatKernelModel};

use crate::config::Anderson;
use crate::outcome::{linear_fit, num, Outcome};
use crate::RunError;

pub fn run(c: &Anderson, seed: u64) -> Result<Outcome, RunError> {
    let mut out = Outcome::with_columns(&["t", "estimate", "stderr", "log_estimate", "sqrt_t", "envelope"]);
    let env = HeatKernelModel::ExpEnvelope {
        alpha: 0.0,
        gamma_decay: c.envelope_gamma,
        a: c.envelope_a,
        h: c.h,
        c_small: 1.0,
        c_exp: 1.0,
    };
    env.validate()?;
    let curve = anderson_ep0_curve(c.d, c.l, c.p, &c.times, c.samples, seed)?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (&t, e) in c.times.iter().zip(&curve) {
        xs.push(t.sqrt());
        ys.push(e.estimate.ln());
        out.row(vec![num(t), num(e.estimate), num(e.stderr), num(e.estimate.ln()), num(t.sqrt()), num(envelope_pi(&env, t)?)]);
    }
    let (slope, intercept, r2) = linear_fit(&xs, &ys);
    out.check(
        "log E p0 decays linearly in sqrt(t)",
        slope < 0.0 && r2 >= c.r2_min,
        format!("slope {} r2 {} (min {})", num(slope), num(r2), num(c.r2_min)),
    );
    out.metric("slope", slope);
    out.metric("intercept", intercept);
    out.metric("r2", r2);

    let finite = two_regime_exp_radial(&env, &RadialField::LogPower { sigma: c.sigma_finite }, c.h, c.big_a)?;
    let infinite = two_regime_exp_radial(&env, &RadialField::LogPower { sigma: c.sigma_infinite }, c.h, c.big_a)?;
    out.check(
        "two-regime bound is finite for the summable log potential",
        finite.is_finite(),
        format!("value {} ({})", finite.value, finite.diagnostics.join("; ")),
    );
    out.check(
        "two-regime bound flags +inf for the slowly decaying log potential",
        infinite.value == BoundValue::Infinite,
        format!("value {} ({})", infinite.value, infinite.diagnostics.join("; ")),
    );
    out.metric("finite_bound", finite.value_f64());
    Ok(out)
}
