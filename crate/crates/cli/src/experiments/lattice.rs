use clrlab::bounds::{
    clr_general_with, clr_hinge_optimized, discrete_split, lt_moment_hinge, two_regime_power, PotentialField, TimeIntegrals,
};
use clrlab::heatkernels::HeatKernelModel;
use clrlab::oracle::{count_eigs_below, LatticeBox, LatticeOperator};
use clrlab::stochastics::RandomSource;
use clrlab::weights::GWeight;
use rand::Rng;

use crate::config::{BoundVsOracleLattice, DiscreteSplit};
use crate::outcome::{num, Outcome};
use crate::RunError;

pub fn bound_vs_oracle(c: &BoundVsOracleLattice, seed: u64) -> Result<Outcome, RunError> {
    let mut out = Outcome::with_columns(&[
        "instance", "density", "support", "sigma", "hinge_bound", "general_bound", "moment_bound", "two_regime_bound", "oracle_count",
        "sound",
    ]);
    // On Z³, π ≤ 1 on (0, 1] and π ≤ 0.1 t^{-3/2} beyond.
    let envelope = HeatKernelModel::PowerEnvelope { alpha: 0.0, beta: 3.0, h: 1.0, c_small: 1.0, c_large: 0.1 };
    let mut two_regime_violations = 0usize;
    let lb = LatticeBox::new(c.d, c.l)?;
    // One table of time integrals serves every instance.
    let ti = TimeIntegrals::new(&HeatKernelModel::Lattice { d: c.d })?;
    let root = RandomSource::new(seed);
    let (mut violations, mut general_violations, mut form_order) = (0usize, 0usize, 0usize);
    let mut first_bad = None;
    let mut min_ratio = f64::INFINITY;
    for i in 0..c.instances {
        let mut rng = root.substream(i as u64);
        let density = c.density[0] + (c.density[1] - c.density[0]) * rng.random::<f64>();
        let w: Vec<f64> = (0..lb.n_sites())
            .map(|_| if rng.random::<f64>() < density { c.w_max * rng.random::<f64>() } else { 0.0 })
            .collect();
        let support = w.iter().filter(|&&x| x > 0.0).count();
        let pot = PotentialField::discrete(&w)?;
        let opt = clr_hinge_optimized(&ti, &pot)?;
        let hinge = opt.report.value_f64();
        let general = clr_general_with(&ti, &GWeight::hinge(opt.sigma)?, &pot).value_f64();
        let moment = lt_moment_hinge(&ti, opt.sigma, &pot, c.moment_gamma)?.value_f64();
        let count = LatticeOperator::new(lb, &w, None)?.count_leq_blocked(0.0)?;
        let two_regime = if c.d == 3 { two_regime_power(&envelope, &pot, 1.0)?.value_f64() } else { f64::NAN };
        if c.d == 3 && count as f64 > two_regime {
            two_regime_violations += 1;
        }
        let sound = count as f64 <= hinge;
        if !sound {
            violations += 1;
            first_bad.get_or_insert(i);
        }
        if count as f64 > general {
            general_violations += 1;
        }
        if general > hinge {
            form_order += 1;
        }
        if count > 0 {
            min_ratio = min_ratio.min(hinge / count as f64);
        }
        out.row(vec![
            i.to_string(),
            num(density),
            support.to_string(),
            num(opt.sigma),
            num(hinge),
            num(general),
            num(moment),
            if c.d == 3 { num(two_regime) } else { String::new() },
            count.to_string(),
            sound.to_string(),
        ]);
    }
    let detail = match first_bad {
        Some(i) => format!("{violations} of {} instances violate; first failing row: {}", c.instances, out.rows[i].join(",")),
        None => format!("0 of {} instances violate", c.instances),
    };
    out.check("oracle count <= optimized hinge bound", violations == 0, detail);
    out.check(
        "oracle count <= general-form bound at the same sigma",
        general_violations == 0,
        format!("{general_violations} violations"),
    );
    if c.d == 3 {
        out.check(
            "oracle count <= two-regime bound from the Z3 envelope",
            two_regime_violations == 0,
            format!("{two_regime_violations} violations"),
        );
    }
    out.check("general form <= hinge form", form_order == 0, format!("{form_order} instances out of order"));
    out.metric("instances", c.instances as f64);
    out.metric("violations", violations as f64);
    out.metric("min_bound_over_count", min_ratio);
    Ok(out)
}

pub fn discrete_split_advantage(c: &DiscreteSplit, _seed: u64) -> Result<Outcome, RunError> {
    let mut out = Outcome::with_columns(&["quantity", "value"]);
    let lb = LatticeBox::new(3, c.l)?;
    let mut w = vec![0.0; lb.n_sites()];
    w[lb.center()] = c.well;
    let pot = PotentialField::discrete(&w)?;
    let ti = TimeIntegrals::new(&HeatKernelModel::Lattice { d: 3 })?;
    let split = discrete_split(&ti, &pot, c.h, &GWeight::hinge(c.sigma)?)?.value_f64();
    let hinge = clr_hinge_optimized(&ti, &pot)?;
    let count = count_eigs_below(&LatticeOperator::new(lb, &w, None)?.to_dense()?, 0.0)?.count_leq;
    let ratio = split / hinge.report.value_f64();
    for (q, v) in [
        ("discrete_split", num(split)),
        ("clr_hinge", num(hinge.report.value_f64())),
        ("hinge_sigma", num(hinge.sigma)),
        ("ratio", num(ratio)),
        ("oracle_count", count.to_string()),
    ] {
        out.row(vec![q.to_string(), v]);
    }
    out.check("split <= ratio_max * hinge", ratio <= c.ratio_max, format!("ratio {} vs {}", num(ratio), num(c.ratio_max)));
    out.check("oracle count <= split", count as f64 <= split, format!("count {count}, split {}", num(split)));
    out.check("oracle count is one", count == 1, format!("count {count}"));
    out.metric("ratio", ratio);
    out.metric("split", split);
    Ok(out)
}
