use clrlab::bounds::quantum_graph_edge_bounds;
use clrlab::heatkernels::HeatKernelModel;
use clrlab::oracle::{chain_count_neumann, delta_well_count_fd, delta_well_eigenvalue, interval_counts_neumann_dirichlet};
use clrlab::stochastics::RandomSource;
use rand::Rng;

use crate::config::QuantumGraphEdges;
use crate::outcome::{num, Outcome};
use crate::RunError;

/// Newton iteration on `tanh(κ/2) - 2κ/A` from `κ = A/2`, where the function
/// is negative and concave, so the iterates decrease monotonically to the root.
fn delta_kappa_newton(a: f64) -> f64 {
    let mut k = 0.5 * a;
    for _ in 0..200 {
        let f = (0.5 * k).tanh() - 2.0 * k / a;
        let df = 0.5 / (0.5 * k).cosh().powi(2) - 2.0 / a;
        let next = k - f / df;
        if (next - k).abs() <= 1e-16 * k {
            return next;
        }
        k = next;
    }
    k
}

fn sums(v: &[f64], scale: f64) -> Result<(usize, usize), RunError> {
    let (mut dir, mut neu) = (0, 0);
    for &x in v {
        let c = interval_counts_neumann_dirichlet(scale * x)?;
        dir += c.dirichlet;
        neu += c.neumann;
    }
    Ok((dir, neu))
}

pub fn run(c: &QuantumGraphEdges, seed: u64) -> Result<Outcome, RunError> {
    let mut out = Outcome::with_columns(&[
        "set", "edges", "dirichlet_sum", "exact", "neumann_sum", "bound_lower", "bound_upper", "pass",
    ]);
    let env = HeatKernelModel::quantum_graph(c.d, c.h, c.c_small, c.c_large)?;
    let root = RandomSource::new(seed);
    let (mut bracket_fail, mut bound_fail) = (Vec::new(), 0);
    for s in 0..c.edge_sets {
        let mut rng = root.substream(s as u64);
        let n = rng.random_range(1..=c.max_edges);
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(c.v_range[0]..=c.v_range[1])).collect();
        let exact = chain_count_neumann(&v)?;
        let (dir, neu) = sums(&v, 1.0)?;
        let b = quantum_graph_edge_bounds(&v, c.d, c.h, &env)?;
        let high: Vec<f64> = v.iter().copied().filter(|&x| x > 1.0 / c.h).collect();
        let (dir2, neu2) = sums(&high, 2.0)?;
        let bracket = dir <= exact && exact <= neu;
        let bounds = dir2 as f64 <= b.lower + 1e-12 && b.lower <= neu2 as f64 + 1e-12 && neu2 as f64 <= b.upper.value_f64();
        let row = vec![
            s.to_string(),
            n.to_string(),
            dir.to_string(),
            exact.to_string(),
            neu.to_string(),
            num(b.lower),
            num(b.upper.value_f64()),
            (bracket && bounds).to_string(),
        ];
        if !bracket {
            bracket_fail.push(row.join(","));
        }
        bound_fail += usize::from(!bounds);
        out.row(row);
    }
    out.check(
        "Dirichlet sum <= exact chain count <= Neumann sum",
        bracket_fail.is_empty(),
        bracket_fail.first().map_or_else(|| format!("{} edge sets", c.edge_sets), |r| format!("first failing row: {r}")),
    );
    out.check("edge bounds bracket the decoupled counts at 2v", bound_fail == 0, format!("{bound_fail} failures"));

    let a = c.delta_strength;
    let w = delta_well_eigenvalue(a)?;
    let kn = delta_kappa_newton(a);
    let gap = (w.lambda + kn * kn).abs();
    out.check(
        "delta-well eigenvalue matches the Newton oracle",
        gap <= c.delta_tolerance,
        format!("lambda {} gap {}", num(w.lambda), num(gap)),
    );
    out.metric("delta_lambda", w.lambda);
    let fd_ok = delta_well_count_fd(a, c.fd_half_cells, w.lambda + 0.5) == 1
        && delta_well_count_fd(a, c.fd_half_cells, w.lambda - 0.5) == 0;
    out.check("finite-difference well has one level near lambda", fd_ok, "");

    let mut wells_ok = true;
    for &m in &c.wells {
        // Dirichlet decoupling into m cells, each with one well.
        let count: usize = (0..m).map(|_| delta_well_count_fd(a, c.fd_half_cells, 0.0)).sum();
        wells_ok &= count >= m;
        out.metric(&format!("wells_{m}_dirichlet_count"), count as f64);
    }
    out.check("m wells give at least m bound states", wells_ok, "");
    out.metric("envelope_at_h", env.pi(c.h)?);
    Ok(out)
}
