use clrlab::heatkernels::{affine_pi_mc, heisenberg_pi_mc, McEstimate};
use clrlab::stochastics::RandomSource;
use rand::RngCore;

use crate::config::{AffineMc, HeisenbergMc};
use crate::outcome::{num, Outcome};
use crate::RunError;

/// Seed of the `i`-th estimator, split from the experiment root.
fn child_seed(seed: u64, i: usize) -> u64 {
    RandomSource::new(seed).substream(i as u64).next_u64()
}

/// Pairwise agreement of scaled estimates `(value, stderr)`:
/// `|a - b| ≤ tol·(a + b)/2 + k·√(se_a² + se_b²)`.
fn pairwise(scaled: &[(f64, f64, f64)], tol: f64, k: f64) -> (bool, String) {
    let mut worst = (0.0f64, String::new());
    let mut ok = true;
    for i in 0..scaled.len() {
        for j in i + 1..scaled.len() {
            let (ti, a, sa) = scaled[i];
            let (tj, b, sb) = scaled[j];
            let allowed = tol * 0.5 * (a + b) + k * (sa * sa + sb * sb).sqrt();
            let gap = (a - b).abs();
            if gap > allowed {
                ok = false;
            }
            let excess = gap / allowed;
            if excess >= worst.0 {
                worst = (excess, format!("t = {ti} vs {tj}: |{} - {}| = {} allowed {}", num(a), num(b), num(gap), num(allowed)));
            }
        }
    }
    (ok, worst.1)
}

fn mc_row(out: &mut Outcome, label: String, t: f64, e: &McEstimate, power: f64) -> (f64, f64, f64) {
    let scale = t.powf(power);
    out.row(vec![
        label,
        num(t),
        num(e.estimate),
        num(e.stderr),
        num(e.median_of_means),
        num(e.estimate * scale),
        num(e.stderr * scale),
        e.rejected.to_string(),
    ]);
    (t, e.estimate * scale, e.stderr * scale)
}

const COLUMNS: [&str; 8] = ["series", "t", "estimate", "stderr", "median_of_means", "scaled", "scaled_stderr", "rejected"];

pub fn affine(c: &AffineMc, seed: u64) -> Result<Outcome, RunError> {
    let mut out = Outcome::with_columns(&COLUMNS);
    let mut scaled = Vec::new();
    for (i, &t) in c.times.iter().enumerate() {
        let e = affine_pi_mc(t, c.n_paths, c.n_steps, child_seed(seed, i))?;
        scaled.push(mc_row(&mut out, "affine".into(), t, &e, 1.5));
    }
    let (ok, detail) = pairwise(&scaled, c.tolerance, c.stderr_multiple);
    out.check("estimate * t^{3/2} agrees across times", ok, detail);
    for (t, s, _) in &scaled {
        out.metric(&format!("scaled_t{t}"), *s);
    }
    Ok(out)
}

pub fn heisenberg(c: &HeisenbergMc, seed: u64) -> Result<Outcome, RunError> {
    let mut out = Outcome::with_columns(&COLUMNS);
    let mut k = 0;
    for &s in &c.sigma_h {
        let mut scaled = Vec::new();
        for &t in &c.times {
            let e = heisenberg_pi_mc(s, t, c.n_paths, c.n_steps, child_seed(seed, k))?;
            k += 1;
            scaled.push(mc_row(&mut out, format!("sigma_h={s}"), t, &e, 2.0));
            out.metric(&format!("scaled_sigma{s}_t{t}"), e.estimate * t * t);
        }
        let (ok, detail) = pairwise(&scaled, c.tolerance, c.stderr_multiple);
        out.check(format!("estimate * t^2 agrees across times (sigma_h = {s})"), ok, detail);
    }
    Ok(out)
}
