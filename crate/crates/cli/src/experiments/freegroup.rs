use clrlab::heatkernels::{free_group_pi, free_group_resolvent, free_group_roots, FreeGroupModel};
use clrlab::oracle::{build_tree_ball_hamiltonian, heat_kernel_diagonal_dense, FreeGroupBall};
use num_complex::Complex64;

use crate::config::FreeGroup;
use crate::outcome::{num, spread_about_constant, Outcome};
use crate::RunError;

pub fn run(c: &FreeGroup, _seed: u64) -> Result<Outcome, RunError> {
    let mut out = Outcome::with_columns(&["section", "t", "value", "reference", "deviation"]);
    let model = FreeGroupModel::new(c.d)?;
    let q = 2.0 * c.d as f64 - 1.0;

    let gamma_closed = 2.0 * c.d as f64 - 2.0 * q.sqrt();
    let gamma_gap = (model.gamma - gamma_closed).abs();
    out.check(
        "gamma matches 2d - 2 sqrt(2d - 1)",
        gamma_gap <= c.gamma_tolerance,
        format!("gamma {} gap {}", num(model.gamma), num(gamma_gap)),
    );
    out.metric("gamma", model.gamma);

    // The ball operator is -Δ_Γ - γ, so its diagonal is e^{γt} times the ball heat kernel.
    let n = FreeGroupBall::size(c.d, c.radius).unwrap_or(0);
    let h = build_tree_ball_hamiltonian(c.d, c.radius, &vec![0.0; n])?;
    let ball = heat_kernel_diagonal_dense(&h, 0, &c.ball_times);
    let mut worst: f64 = 0.0;
    for (&t, &b) in c.ball_times.iter().zip(&ball) {
        let reference = (-model.gamma * t).exp() * b;
        let v = free_group_pi(&model, t);
        let dev = (v - reference).abs();
        worst = worst.max(dev);
        out.row(vec!["ball".into(), num(t), num(v), num(reference), num(dev)]);
    }
    out.check(
        "free_group_pi matches the Dirichlet tree-ball diagonal",
        worst <= c.ball_tolerance,
        format!("max |diff| {} vs {}", num(worst), num(c.ball_tolerance)),
    );
    out.metric("ball_max_abs_diff", worst);

    let plateau: Vec<f64> =
        c.plateau_times.iter().map(|&t| free_group_pi(&model, t) * (model.gamma * t).exp() * t.powf(1.5)).collect();
    let lo = plateau.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = plateau.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for (&t, &v) in c.plateau_times.iter().zip(&plateau) {
        out.row(vec!["plateau".into(), num(t), num(v), num(lo), num(v / lo - 1.0)]);
    }
    let spread = spread_about_constant(&plateau);
    out.check(
        "pi(t) e^{gamma t} t^{3/2} is constant within tolerance",
        spread <= c.plateau_tolerance,
        format!("within {} of one constant (max/min {}) vs {}", num(spread), num(hi / lo), num(c.plateau_tolerance)),
    );
    out.metric("plateau_spread", spread);

    let mut worst_root: f64 = 0.0;
    for &[re, im] in &c.resolvent_points {
        let lam = Complex64::new(re, im);
        let (plus, minus) = free_group_roots(&model, lam);
        let gap = (plus * minus - 1.0 / q).norm() * q;
        worst_root = worst_root.max(gap);
        let r = free_group_resolvent(&model, lam)?;
        out.row(vec![format!("resolvent({re}{im:+}i)"), "".into(), num(r.re), num(r.im), num(gap)]);
    }
    out.check(
        "root product is 1/(2d - 1)",
        worst_root <= c.root_tolerance,
        format!("max relative gap {}", num(worst_root)),
    );
    Ok(out)
}
