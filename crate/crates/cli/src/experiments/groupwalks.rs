use clrlab::groupwalks::{
    affine_return_bridge, affine_return_bruteforce, confined_bridge_exact_and_bound, envelope_exponent_fit,
    heisenberg_return_dp_detailed, rational_to_f64, ConfinedBridgeQuery,
};

use crate::config::GroupWalks;
use crate::outcome::{num, spread_about_constant, Outcome};
use crate::RunError;

pub fn run(c: &GroupWalks, _seed: u64) -> Result<Outcome, RunError> {
    let mut out = Outcome::with_columns(&["section", "a", "b", "value", "reference", "pass"]);

    let mut mismatches = 0;
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    for n2 in (2..=c.bridge_max).step_by(2) {
        let bridge = affine_return_bridge(n2)?;
        let bv = rational_to_f64(&bridge);
        monotone &= bv < prev;
        prev = bv;
        if n2 <= c.brute_max {
            let brute = affine_return_bruteforce(n2)?;
            let same = brute == bridge;
            mismatches += usize::from(!same);
            out.row(vec!["affine".into(), n2.to_string(), "".into(), brute.to_string(), bridge.to_string(), same.to_string()]);
        } else {
            out.row(vec!["affine".into(), n2.to_string(), "".into(), "".into(), bridge.to_string(), "true".into()]);
        }
    }
    out.check("brute force equals the bridge formula exactly", mismatches == 0, format!("{mismatches} mismatches"));
    out.check("affine return probabilities decrease", monotone, format!("last value {}", num(prev)));

    let mut violations = 0;
    let mut first = String::new();
    let mut saturated = false;
    for r in 1..=c.confinement_r_max {
        for n2 in (2..=c.confinement_n2_max).step_by(2) {
            let q = confined_bridge_exact_and_bound(ConfinedBridgeQuery { r, n2 })?;
            let exact = rational_to_f64(&q.exact);
            if !q.holds {
                violations += 1;
                if first.is_empty() {
                    first = format!("r = {r}, n2 = {n2}: {} > {}", num(exact), num(q.bound));
                }
            }
            if r == 1 && n2 == 2 {
                saturated = (exact - q.bound).abs() <= 1e-15;
            }
            out.row(vec!["confinement".into(), r.to_string(), n2.to_string(), q.exact.to_string(), num(q.bound), q.holds.to_string()]);
        }
    }
    out.check("confined bridge <= cosine bound", violations == 0, if first.is_empty() { "no violations".into() } else { first });
    out.check("bound saturates at r = 1, n2 = 2", saturated, "exact 1/2 against cos^2(pi/4)");

    let fit = envelope_exponent_fit(&c.envelope_two_n)?;
    let ratios: Vec<f64> = fit.points.iter().map(|p| p.r0 as f64 / (p.two_n as f64).cbrt()).collect();
    for (p, rt) in fit.points.iter().zip(&ratios) {
        out.row(vec!["envelope".into(), p.two_n.to_string(), p.r0.to_string(), num(p.log_m), num(*rt), "".into()]);
    }
    let slope_ok = (fit.slope - 1.0 / 3.0).abs() <= c.slope_tolerance;
    out.check("envelope exponent is 1/3", slope_ok, format!("slope {}", num(fit.slope)));
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    out.check("r0 / (2n)^{1/3} stays in a band", hi / lo <= c.r0_band, format!("max/min {}", num(hi / lo)));
    let decreasing = fit.points.windows(2).all(|w| w[1].log_m < w[0].log_m);
    out.check("M(2n) decreases", decreasing, "");
    out.metric("envelope_slope", fit.slope);
    out.metric("envelope_intercept", fit.intercept);

    let dp = heisenberg_return_dp_detailed(c.heisenberg_n_max)?;
    let mut window = Vec::new();
    for e in dp.table.entries().iter().filter(|e| e.steps > 0) {
        let n = (e.steps / 2) as f64;
        let scaled = e.value * n * n;
        if (c.heisenberg_window[0] as u64..=c.heisenberg_window[1] as u64).contains(&e.steps) {
            window.push(scaled);
        }
        out.row(vec!["heisenberg".into(), e.steps.to_string(), "".into(), num(e.value), num(scaled), "".into()]);
    }
    let two = dp.table.probability(2).unwrap_or(f64::NAN);
    out.check("two-step return is 1/6", (two - 1.0 / 6.0).abs() <= 1e-15, format!("{}", num(two)));
    out.check("DP mass is conserved", dp.max_mass_error <= 1e-12, format!("max error {}", num(dp.max_mass_error)));
    let spread = spread_about_constant(&window);
    out.check(
        "pi(2n) n^2 is constant within tolerance on the window",
        !window.is_empty() && spread <= c.heisenberg_tolerance,
        format!("within {} of one constant", num(spread)),
    );
    out.metric("heisenberg_spread", spread);
    Ok(out)
}
