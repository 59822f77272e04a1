//! Bunch–Kaufman symmetric indefinite factorization `P A Pᵀ = L D Lᵀ`,
//! used for inertia counts (Sylvester's law) and explicit inverses.

use super::DenseSymmetricMatrix;

/// Inertia triple of a symmetric matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl std::ops::AddAssign for Inertia {
    fn add_assign(&mut self, o: Self) {
        self.negative += o.negative;
        self.zero += o.zero;
        self.positive += o.positive;
    }
}

/// Factorization output: unit lower `L` (row-major, strict part), block
/// diagonal `D` as (diag, sub) with `sub[k] ≠ 0` marking a 2×2 block at
/// `(k, k+1)`, and the permutation `perm` with `(PAPᵀ)[i][j] = A[perm[i]][perm[j]]`.
pub struct BunchKaufman {
    n: usize,
    l: Vec<f64>,
    d_diag: Vec<f64>,
    d_sub: Vec<f64>,
    two_by_two: Vec<bool>,
    perm: Vec<usize>,
}

const BK_ALPHA: f64 = 0.640_388_203_202_208_0; // (1 + √17) / 8

impl BunchKaufman {
    /// Factorizes `a`, which is consumed as workspace.
    pub fn factor(a: DenseSymmetricMatrix) -> Self {
        let n = a.order();
        let mut w = a.into_data();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut d_diag = vec![0.0; n];
        let mut d_sub = vec![0.0; n];
        let mut two_by_two = vec![false; n];
        let mut col = vec![0.0; n];
        let mut col2 = vec![0.0; n];
        let mut k = 0;
        while k < n {
            let absakk = w[k * n + k].abs();
            let (mut imax, mut colmax) = (k, 0.0);
            for i in k + 1..n {
                let v = w[i * n + k].abs();
                if v > colmax {
                    colmax = v;
                    imax = i;
                }
            }
            let (kp, kstep) = if absakk.max(colmax) == 0.0 {
                (k, 1)
            } else if absakk >= BK_ALPHA * colmax {
                (k, 1)
            } else {
                let mut rowmax = 0.0_f64;
                // Row imax of the active block, read from lower storage.
                for j in k..imax {
                    rowmax = rowmax.max(w[imax * n + j].abs());
                }
                for j in imax + 1..n {
                    rowmax = rowmax.max(w[j * n + imax].abs());
                }
                if absakk >= BK_ALPHA * colmax * (colmax / rowmax) {
                    (k, 1)
                } else if w[imax * n + imax].abs() >= BK_ALPHA * rowmax {
                    (imax, 1)
                } else {
                    (imax, 2)
                }
            };
            let kk = k + kstep - 1;
            if kp != kk {
                symmetric_swap(&mut w, n, kk, kp);
                perm.swap(kk, kp);
            }
            if kstep == 1 {
                let d = w[k * n + k];
                d_diag[k] = d;
                if d != 0.0 {
                    for i in k + 1..n {
                        col[i] = w[i * n + k];
                    }
                    let inv = 1.0 / d;
                    for i in k + 1..n {
                        let ci = col[i] * inv;
                        let row = &mut w[i * n..i * n + i + 1];
                        for j in k + 1..=i {
                            row[j] -= ci * col[j];
                        }
                        w[i * n + k] = ci;
                    }
                } else {
                    for i in k + 1..n {
                        w[i * n + k] = 0.0;
                    }
                }
                k += 1;
            } else {
                let d11 = w[k * n + k];
                let d21 = w[(k + 1) * n + k];
                let d22 = w[(k + 1) * n + k + 1];
                d_diag[k] = d11;
                d_diag[k + 1] = d22;
                d_sub[k] = d21;
                two_by_two[k] = true;
                // The block's off-diagonal lives in D; L is the identity there.
                w[(k + 1) * n + k] = 0.0;
                let det = d11 * d22 - d21 * d21;
                for i in k + 2..n {
                    col[i] = w[i * n + k];
                    col2[i] = w[i * n + k + 1];
                }
                for i in k + 2..n {
                    // [l1, l2] = [a_ik, a_ik1] D⁻¹
                    let l1 = (col[i] * d22 - col2[i] * d21) / det;
                    let l2 = (col2[i] * d11 - col[i] * d21) / det;
                    let row = &mut w[i * n..i * n + i + 1];
                    for j in k + 2..=i {
                        row[j] -= l1 * col[j] + l2 * col2[j];
                    }
                    w[i * n + k] = l1;
                    w[i * n + k + 1] = l2;
                }
                k += 2;
            }
        }
        Self { n, l: w, d_diag, d_sub, two_by_two, perm }
    }

    /// Inertia of `D`, equal to the inertia of `A`. Pivots with
    /// `|d| ≤ zero_tol` count as zero eigenvalues.
    pub fn inertia(&self, zero_tol: f64) -> Inertia {
        let mut out = Inertia::default();
        let mut k = 0;
        while k < self.n {
            if self.two_by_two[k] {
                let (a, b, c) = (self.d_diag[k], self.d_sub[k], self.d_diag[k + 1]);
                let det = a * c - b * b;
                if det < 0.0 {
                    out.negative += 1;
                    out.positive += 1;
                } else {
                    let tr = a + c;
                    if tr < 0.0 {
                        out.negative += 2;
                    } else {
                        out.positive += 2;
                    }
                }
                k += 2;
            } else {
                let d = self.d_diag[k];
                if d.abs() <= zero_tol {
                    out.zero += 1;
                } else if d < 0.0 {
                    out.negative += 1;
                } else {
                    out.positive += 1;
                }
                k += 1;
            }
        }
        out
    }

    /// `A⁻¹ = Pᵀ L⁻ᵀ D⁻¹ L⁻¹ P`; returns `None` if `D` is singular.
    pub fn inverse(&self) -> Option<DenseSymmetricMatrix> {
        let n = self.n;
        // X = L⁻¹ (unit lower), row-major.
        let mut x = vec![0.0; n * n];
        for i in 0..n {
            x[i * n + i] = 1.0;
        }
        for i in 0..n {
            // Row i of X: x_i = e_i - Σ_{k<i} L[i][k] x_k.
            for k in 0..i {
                let lik = self.l[i * n + k];
                if lik != 0.0 {
                    let (head, tail) = x.split_at_mut(i * n);
                    let xk = &head[k * n..k * n + k + 1];
                    let xi = &mut tail[..k + 1];
                    for j in 0..=k {
                        xi[j] -= lik * xk[j];
                    }
                }
            }
        }
        // Y = D⁻¹ X.
        let mut y = x.clone();
        let mut k = 0;
        while k < n {
            if self.two_by_two[k] {
                let (a, b, c) = (self.d_diag[k], self.d_sub[k], self.d_diag[k + 1]);
                let det = a * c - b * b;
                if det == 0.0 {
                    return None;
                }
                for j in 0..=k + 1 {
                    let (u, v) = (x[k * n + j], x[(k + 1) * n + j]);
                    y[k * n + j] = (c * u - b * v) / det;
                    y[(k + 1) * n + j] = (a * v - b * u) / det;
                }
                k += 2;
            } else {
                let d = self.d_diag[k];
                if d == 0.0 {
                    return None;
                }
                for j in 0..=k {
                    y[k * n + j] = x[k * n + j] / d;
                }
                k += 1;
            }
        }
        // B = Xᵀ Y is symmetric; only its lower triangle is accumulated.
        // Rows of X and Y are supported on columns ≤ row + 1.
        let mut b = vec![0.0; n * n];
        for r in 0..n {
            let lim = (r + 2).min(n);
            let xr = &x[r * n..r * n + lim];
            let yr = &y[r * n..r * n + lim];
            for i in 0..lim {
                let xi = xr[i];
                if xi == 0.0 {
                    continue;
                }
                let brow = &mut b[i * n..i * n + i + 1];
                for j in 0..=i {
                    brow[j] += xi * yr[j];
                }
            }
        }
        let mut out = DenseSymmetricMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                out.set(self.perm[i], self.perm[j], b[i * n + j]);
            }
        }
        Some(out)
    }
}

fn symmetric_swap(w: &mut [f64], n: usize, p: usize, q: usize) {
    // Lower-triangle storage, p < q: swaps rows/columns p and q of the
    // symmetric matrix, including the computed rows of L left of p.
    let (p, q) = (p.min(q), p.max(q));
    if p == q {
        return;
    }
    for j in 0..p {
        w.swap(p * n + j, q * n + j);
    }
    w.swap(p * n + p, q * n + q);
    for j in p + 1..q {
        w.swap(j * n + p, q * n + j);
    }
    for i in q + 1..n {
        w.swap(i * n + p, i * n + q);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::jacobi_eigenvalues;
    use crate::stochastics::RandomSource;
    use rand::Rng;

    fn random_sym(n: usize, seed: u64) -> DenseSymmetricMatrix {
        let mut rng = RandomSource::new(seed);
        let mut m = DenseSymmetricMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, rng.random::<f64>() * 2.0 - 1.0);
            }
        }
        m
    }

    #[test]
    fn inertia_matches_jacobi() {
        for seed in 0..20 {
            let m = random_sym(23, seed);
            let ev = jacobi_eigenvalues(&m);
            let neg = ev.iter().filter(|&&x| x < 0.0).count();
            let bk = BunchKaufman::factor(m);
            let inr = bk.inertia(0.0);
            assert_eq!(inr.negative, neg);
            assert_eq!(inr.negative + inr.positive + inr.zero, 23);
        }
    }

    #[test]
    fn inverse_is_inverse() {
        let m = random_sym(17, 4);
        let inv = BunchKaufman::factor(m.clone()).inverse().unwrap();
        for i in 0..17 {
            for j in 0..17 {
                let s: f64 = (0..17).map(|k| m.get(i, k) * inv.get(k, j)).sum();
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((s - e).abs() < 1e-9, "({i},{j}) {s}");
            }
        }
    }

    #[test]
    fn zero_diagonal_forces_two_by_two() {
        let m = DenseSymmetricMatrix::from_fn(2, |i, j| if i == j { 0.0 } else { 1.0 });
        let bk = BunchKaufman::factor(m);
        let inr = bk.inertia(0.0);
        assert_eq!((inr.negative, inr.positive), (1, 1));
    }
}
