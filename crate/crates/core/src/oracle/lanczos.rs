use super::dense::{tridiagonal_eigen_first_components, Tridiagonal};

/// Lanczos recursion from a unit vector `start` with full reorthogonalization.
///
/// Stops after `max_steps` or on breakdown (an invariant subspace was found,
/// in which case the tridiagonal matrix is exact for functions of the
/// operator applied to `start`).
pub fn lanczos(
    matvec: &dyn Fn(&[f64], &mut [f64]),
    start: &[f64],
    max_steps: usize,
) -> (Tridiagonal, bool) {
    let n = start.len();
    let norm = start.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(norm > 0.0, "Lanczos start vector must be non-zero");
    let mut basis: Vec<Vec<f64>> = vec![start.iter().map(|x| x / norm).collect()];
    let mut diag = Vec::new();
    let mut off = Vec::new();
    let mut w = vec![0.0; n];
    let steps = max_steps.min(n);
    let mut exact = false;
    for k in 0..steps {
        matvec(&basis[k], &mut w);
        let alpha: f64 = w.iter().zip(&basis[k]).map(|(a, b)| a * b).sum();
        diag.push(alpha);
        // Two passes of classical Gram–Schmidt against the whole basis.
        for _ in 0..2 {
            for q in &basis {
                let c: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        if k + 1 == steps {
            exact = k + 1 == n;
            break;
        }
        let beta = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if beta <= 1e-13 * alpha.abs().max(1.0) {
            exact = true;
            break;
        }
        off.push(beta);
        basis.push(w.iter().map(|x| x / beta).collect());
    }
    (Tridiagonal { diag, off }, exact)
}

/// `f(A)₀₀` for the tridiagonal Lanczos matrix as `Σ f(θ_j) z_j²` (Gauss quadrature).
pub fn gauss_quadrature(t: &Tridiagonal, f: impl Fn(f64) -> f64) -> f64 {
    let (theta, z) = tridiagonal_eigen_first_components(t);
    theta.iter().zip(&z).map(|(th, zj)| f(*th) * zj * zj).sum()
}

/// Diagonal heat kernel `⟨e_s, e^{-tH} e_s⟩` for every `t` in `ts`, by Lanczos
/// Gauss quadrature grown in blocks until successive estimates agree to `rel_tol`.
pub fn heat_kernel_diagonal(
    matvec: &dyn Fn(&[f64], &mut [f64]),
    n: usize,
    site: usize,
    ts: &[f64],
    rel_tol: f64,
) -> Vec<f64> {
    let mut start = vec![0.0; n];
    start[site] = 1.0;
    let mut steps = 24.min(n);
    let mut prev: Option<Vec<f64>> = None;
    loop {
        let (t, exact) = lanczos(matvec, &start, steps);
        let (theta, z) = tridiagonal_eigen_first_components(&t);
        let vals: Vec<f64> = ts
            .iter()
            .map(|&tt| {
                // Shift by the smallest Ritz value to avoid overflow of e^{-tθ}.
                let th0 = theta.iter().cloned().fold(f64::INFINITY, f64::min);
                let s: f64 = theta.iter().zip(&z).map(|(th, zj)| (-(th - th0) * tt).exp() * zj * zj).sum();
                s * (-th0 * tt).exp()
            })
            .collect();
        if exact || steps >= n {
            return vals;
        }
        if let Some(p) = &prev {
            let ok = p.iter().zip(&vals).all(|(a, b)| (a - b).abs() <= rel_tol * b.abs());
            if ok {
                return vals;
            }
        }
        prev = Some(vals);
        steps = (steps + 16).min(n);
    }
}
