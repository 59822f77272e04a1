use std::f64::consts::PI;

use clrlab::oracle::{
    bisect_eigenvalues_below, build_lattice_hamiltonian, count_eigs_below, householder_tridiagonalize,
    jacobi_eigenvalues, sturm_count, DenseSymmetricMatrix,
};
use clrlab::stochastics::RandomSource;
use rand::Rng;

use crate::config::OracleIntegrity;
use crate::outcome::{num, Outcome};
use crate::RunError;

/// Closed-form Dirichlet spectrum of the box `{-l..l}^d`: sums of
/// `2 - 2cos(kπ/(n+1))`, `n = 2l + 1`.
fn box_spectrum(d: usize, l: usize) -> Vec<f64> {
    let n = 2 * l + 1;
    let chain: Vec<f64> = (1..=n).map(|k| 2.0 - 2.0 * (k as f64 * PI / (n + 1) as f64).cos()).collect();
    let mut all = vec![0.0];
    for _ in 0..d {
        all = all.iter().flat_map(|a| chain.iter().map(move |b| a + b)).collect();
    }
    all.sort_by(f64::total_cmp);
    all
}

pub fn run(c: &OracleIntegrity, seed: u64) -> Result<Outcome, RunError> {
    let mut out = Outcome::with_columns(&["section", "case", "probe", "expected", "got", "pass"]);
    let root = RandomSource::new(seed);
    let mut mismatches = Vec::new();
    for i in 0..c.matrices {
        let mut rng = root.substream(i as u64);
        let mut m = DenseSymmetricMatrix::zeros(c.order);
        for r in 0..c.order {
            for s in 0..=r {
                m.set(r, s, rng.random_range(-1.0..1.0));
            }
        }
        let eig = jacobi_eigenvalues(&m);
        for _ in 0..c.thresholds {
            let e = rng.random_range(-8.0..8.0);
            let expected = eig.iter().filter(|&&l| l < e).count();
            let got = count_eigs_below(&m, e)?.count_strict;
            let row = vec!["random".into(), i.to_string(), num(e), expected.to_string(), got.to_string(), (expected == got).to_string()];
            if expected != got {
                mismatches.push(row.join(","));
            }
            out.row(row);
        }
    }
    out.check(
        "Sturm counts equal Jacobi counts",
        mismatches.is_empty(),
        mismatches.first().map_or_else(|| format!("{} comparisons", c.matrices * c.thresholds), |r| format!("first failing row: {r}")),
    );

    let (mut count_fail, mut worst) = (0usize, 0.0f64);
    for &d in &c.dims {
        for l in 1..=c.l_max {
            let exact = box_spectrum(d, l);
            let n = exact.len();
            let h = build_lattice_hamiltonian(d, l, &vec![0.0; n], None)?;
            let t = householder_tridiagonalize(&h);
            let computed = bisect_eigenvalues_below(&t, 4.0 * d as f64 + 1.0, 1e-13);
            let err = if computed.len() == n {
                computed.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            } else {
                f64::INFINITY
            };
            worst = worst.max(err);
            // Counts at the midpoints of every spectral gap.
            let mut bad = 0;
            for k in 0..n - 1 {
                if exact[k + 1] - exact[k] > 1e-8 {
                    let mid = 0.5 * (exact[k] + exact[k + 1]);
                    bad += usize::from(sturm_count(&t, mid) != k + 1);
                }
            }
            count_fail += bad;
            out.row(vec![
                "lattice".into(),
                format!("d={d}"),
                l.to_string(),
                n.to_string(),
                num(err),
                (bad == 0 && err <= c.eigenvalue_tolerance).to_string(),
            ]);
        }
    }
    out.check("gap-midpoint counts match the closed-form spectra", count_fail == 0, format!("{count_fail} mismatches"));
    out.check(
        "eigenvalues match the closed-form spectra",
        worst <= c.eigenvalue_tolerance,
        format!("max error {}", num(worst)),
    );
    out.metric("max_eigenvalue_error", worst);
    Ok(out)
}
