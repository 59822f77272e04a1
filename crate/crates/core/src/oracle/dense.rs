use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest order accepted by the dense tridiagonalization path.
pub const DENSE_MAX_ORDER: usize = 4000;

/// Symmetric matrix in full row-major storage; every write updates both triangles.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseSymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseSymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    /// Builds from `f(i, j)` evaluated on the lower triangle `j ≤ i`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn add_to_diagonal(&mut self, i: usize, v: f64) {
        self.data[i * self.n + i] += v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Maximum absolute row sum, an upper bound on the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n).map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub(crate) fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Symmetric tridiagonal matrix: `diag[0..n]`, `off[0..n-1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn order(&self) -> usize {
        self.diag.len()
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.order();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }
}

/// Exact eigenvalue counts at a threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralCount {
    pub threshold: f64,
    /// Number of eigenvalues `< threshold`.
    pub count_strict: usize,
    /// Number of eigenvalues `≤ threshold`.
    pub count_leq: usize,
    pub eigenvalues_below: Option<Vec<f64>>,
}

/// Householder reduction to tridiagonal form.
///
/// Reflectors act on indices `1..n` only, so `e₀` is invariant: the returned
/// matrix `T = QᵀMQ` satisfies `Q e₀ = e₀`, hence `f(M)₀₀ = f(T)₀₀`.
pub fn householder_tridiagonalize(m: &DenseSymmetricMatrix) -> Tridiagonal {
    let n = m.order();
    let mut a = m.data.clone();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let mut norm2 = 0.0;
        for i in 0..len {
            let x = a[(k + 1 + i) * n + k];
            v[i] = x;
            norm2 += x * x;
        }
        diag[k] = a[k * n + k];
        let norm = norm2.sqrt();
        if norm == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let alpha = if v[0] > 0.0 { -norm } else { norm };
        off[k] = alpha;
        v[0] -= alpha;
        let vnorm2: f64 = v[..len].iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let scale = (2.0 / vnorm2).sqrt();
        for x in v[..len].iter_mut() {
            *x *= scale;
        }
        // p = A22 v, K = vᵀp / 2, w = p - K v, A22 -= v wᵀ + w vᵀ.
        for i in 0..len {
            let row = &a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            p[i] = row.iter().zip(&v[..len]).map(|(x, y)| x * y).sum();
        }
        let kk = 0.5 * v[..len].iter().zip(&p[..len]).map(|(x, y)| x * y).sum::<f64>();
        for i in 0..len {
            p[i] -= kk * v[i];
        }
        for i in 0..len {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            for (j, x) in row.iter_mut().enumerate() {
                *x -= vi * p[j] + wi * v[j];
            }
        }
    }
    if n >= 2 {
        diag[n - 2] = a[(n - 2) * n + n - 2];
        off[n - 2] = a[(n - 1) * n + n - 2];
    }
    if n >= 1 {
        diag[n - 1] = a[(n - 1) * n + n - 1];
    }
    Tridiagonal { diag, off }
}

/// Number of eigenvalues of `t` strictly below `x` (Sturm sequence / LDLᵀ pivots).
///
/// Exact-zero pivots are replaced by `-pivmin` so that they count as negative
/// in a consistent way, which makes the function non-decreasing in `x`.
pub fn sturm_count(t: &Tridiagonal, x: f64) -> usize {
    let n = t.order();
    if n == 0 {
        return 0;
    }
    let emax2 = t.off.iter().map(|e| e * e).fold(0.0, f64::max);
    let pivmin = f64::MIN_POSITIVE * emax2.max(1.0);
    let mut count = 0;
    let mut q = t.diag[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        q = t.diag[i] - x - t.off[i - 1] * t.off[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues of `t` below `upper` by bisection on the Sturm count,
/// each to absolute accuracy `tol`, in increasing order.
pub fn bisect_eigenvalues_below(t: &Tridiagonal, upper: f64, tol: f64) -> Vec<f64> {
    let (lo, _) = t.gershgorin();
    let m = sturm_count(t, upper);
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        // k-th eigenvalue (0-based): smallest x with count(x) > k.
        let (mut a, mut b) = (lo - 1.0, upper);
        while b - a > tol.max(f64::EPSILON * a.abs().max(b.abs())) {
            let c = 0.5 * (a + b);
            if sturm_count(t, c) > k {
                b = c;
            } else {
                a = c;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// Counting tolerance around a threshold: `1e-10 · max(‖M‖, 1)`.
pub fn count_tolerance(norm: f64) -> f64 {
    1e-10 * norm.max(1.0)
}

/// Eigenvalue counts of `m` at `e` (Householder + Sturm).
///
/// Eigenvalues within `count_tolerance(‖M‖)` of `e` are treated as equal to
/// `e`: they are excluded from `count_strict` and included in `count_leq`.
pub fn count_eigs_below(m: &DenseSymmetricMatrix, e: f64) -> Result<SpectralCount> {
    count_eigs_below_with(m, e, false)
}

/// As [`count_eigs_below`], optionally refining the eigenvalues below `e` to 1e-10.
pub fn count_eigs_below_with(
    m: &DenseSymmetricMatrix,
    e: f64,
    want_eigenvalues: bool,
) -> Result<SpectralCount> {
    if m.order() > DENSE_MAX_ORDER {
        return Err(Error::TooLarge(format!(
            "dense count needs order <= {DENSE_MAX_ORDER}, got {}",
            m.order()
        )));
    }
    if !m.is_finite() {
        return Err(crate::error::invalid("matrix has non-finite entries"));
    }
    let t = householder_tridiagonalize(m);
    let tol = count_tolerance(m.norm_inf());
    let count_strict = sturm_count(&t, e - tol);
    let count_leq = sturm_count(&t, e + tol);
    let eigenvalues_below =
        want_eigenvalues.then(|| bisect_eigenvalues_below(&t, e - tol, 1e-10));
    Ok(SpectralCount { threshold: e, count_strict, count_leq, eigenvalues_below })
}

/// Eigenvalues of `t` and the first component of each normalized eigenvector
/// (implicit QL with Wilkinson shifts, tracking only the first row of the
/// eigenvector matrix).
pub fn tridiagonal_eigen_first_components(t: &Tridiagonal) -> (Vec<f64>, Vec<f64>) {
    let n = t.order();
    let mut d = t.diag.clone();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&t.off);
    let mut z = vec![0.0; n];
    if n > 0 {
        z[0] = 1.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 200, "QL iteration did not converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    (d, z)
}

/// `⟨e_s, e^{-tM} e_s⟩` for every `t` in `ts`: the site is swapped to index 0,
/// reduced with [`householder_tridiagonalize`] and diagonalized by implicit QL.
pub fn heat_kernel_diagonal_dense(m: &DenseSymmetricMatrix, site: usize, ts: &[f64]) -> Vec<f64> {
    let n = m.order();
    let perm = |i: usize| {
        if i == 0 {
            site
        } else if i == site {
            0
        } else {
            i
        }
    };
    let pm = DenseSymmetricMatrix::from_fn(n, |i, j| m.get(perm(i), perm(j)));
    let t = householder_tridiagonalize(&pm);
    let (theta, z) = tridiagonal_eigen_first_components(&t);
    let th0 = theta.iter().cloned().fold(f64::INFINITY, f64::min);
    ts.iter()
        .map(|&tt| {
            let s: f64 = theta.iter().zip(&z).map(|(th, zj)| (-(th - th0) * tt).exp() * zj * zj).sum();
            s * (-th0 * tt).exp()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_identity() {
        let m = DenseSymmetricMatrix::from_fn(5, |i, j| if i == j { -1.0 } else { 0.0 });
        let c = count_eigs_below(&m, 0.0).unwrap();
        assert_eq!(c.count_strict, 5);
        assert_eq!(c.count_leq, 5);
    }

    #[test]
    fn swap_matrix() {
        let m = DenseSymmetricMatrix::from_fn(2, |i, j| if i != j { 1.0 } else { 0.0 });
        let c = count_eigs_below(&m, 0.0).unwrap();
        assert_eq!(c.count_strict, 1);
    }

    #[test]
    fn dirichlet_chain_three_sites() {
        let m = DenseSymmetricMatrix::from_fn(3, |i, j| {
            if i == j {
                2.0
            } else if i.abs_diff(j) == 1 {
                -1.0
            } else {
                0.0
            }
        });
        let c = count_eigs_below_with(&m, 1.0, true).unwrap();
        assert_eq!(c.count_strict, 1);
        let ev = c.eigenvalues_below.unwrap();
        let exact = 2.0 - 2.0 * (std::f64::consts::PI / 4.0).cos();
        assert!((ev[0] - exact).abs() < 1e-10);
    }

    #[test]
    fn zero_eigenvalue_counts_only_in_leq() {
        let m = DenseSymmetricMatrix::from_fn(2, |i, j| if i == j { 1.0 } else { 1.0 });
        let c = count_eigs_below(&m, 0.0).unwrap();
        assert_eq!((c.count_strict, c.count_leq), (0, 1));
    }

    #[test]
    fn ql_first_components_reconstruct_diagonal_entry() {
        let t = Tridiagonal { diag: vec![1.0, -2.0, 0.5, 3.0], off: vec![0.7, -1.1, 0.4] };
        let (ev, z) = tridiagonal_eigen_first_components(&t);
        let s: f64 = z.iter().map(|x| x * x).sum();
        assert!((s - 1.0).abs() < 1e-13);
        let t00: f64 = ev.iter().zip(&z).map(|(l, z)| l * z * z).sum();
        assert!((t00 - 1.0).abs() < 1e-13);
        let t00sq: f64 = ev.iter().zip(&z).map(|(l, z)| l * l * z * z).sum();
        assert!((t00sq - (1.0 + 0.49)).abs() < 1e-12);
    }
}
