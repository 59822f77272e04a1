use clrlab::heatkernels::{levy_pi, levy_symbol, LevyMeasureSpec};

use crate::config::LevyExponents;
use crate::outcome::{linear_fit, num, Outcome};
use crate::RunError;

/// `2 log₂(π(t/2)/π(t))`, the dimension implied by `π(t) ∝ t^{-dim/2}`.
fn ratio_dimension(spec: &LevyMeasureSpec, t: f64) -> Result<f64, RunError> {
    Ok(2.0 * (levy_pi(spec, 0.5 * t)? / levy_pi(spec, t)?).log2())
}

pub fn run(c: &LevyExponents, _seed: u64) -> Result<Outcome, RunError> {
    let mut out = Outcome::with_columns(&["section", "t", "pi", "estimate", "target"]);
    let power = LevyMeasureSpec::power(c.d, c.rho, c.a_amp, c.delta, c.b_amp)?;
    let d = c.d as f64;
    for (label, t, target) in [("local", c.small_t, 2.0 * d / c.rho), ("global", c.large_t, 2.0 * d / c.delta)] {
        let est = ratio_dimension(&power, t)?;
        let rel = (est / target - 1.0).abs();
        out.row(vec![label.into(), num(t), num(levy_pi(&power, t)?), num(est), num(target)]);
        out.check(
            format!("{label} dimension from the halving ratio"),
            rel <= c.tolerance,
            format!("estimate {} target {} rel {}", num(est), num(target), num(rel)),
        );
        out.metric(&format!("{label}_dimension"), est);
    }

    let k = [1.7; 1];
    let sym = levy_symbol(&power, &k)?;
    let sym_neg = levy_symbol(&power, &[-1.7])?;
    let zero = levy_symbol(&power, &[0.0])?;
    out.check(
        "symbol is even and vanishes at the origin",
        zero == 0.0 && (sym - sym_neg).abs() <= 1e-12 * sym && sym > 0.0,
        format!("Phi(0) {} Phi(1.7) {} Phi(-1.7) {}", num(zero), num(sym), num(sym_neg)),
    );

    let logs = LevyMeasureSpec::log_tail(c.d, c.rho, c.a_amp, c.sigma_log, c.c_amp)?;
    let (t0, t1) = (c.log_window[0].ln(), c.log_window[1].ln());
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..c.log_points {
        let t = (t0 + (t1 - t0) * i as f64 / (c.log_points - 1) as f64).exp();
        let p = levy_pi(&logs, t)?;
        xs.push(t.ln());
        ys.push((-p.ln()).ln());
        out.row(vec!["log_tail".into(), num(t), num(p), num(-p.ln()), "".into()]);
    }
    let (slope, _, r2) = linear_fit(&xs, &ys);
    let target = 1.0 / c.sigma_log;
    out.check(
        "stretched-exponential exponent of the log-tail generator",
        (slope - target).abs() <= c.slope_tolerance,
        format!("slope {} target {} (r2 {})", num(slope), num(target), num(r2)),
    );
    out.metric("log_tail_slope", slope);
    Ok(out)
}
