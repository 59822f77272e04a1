use super::dense::{DenseSymmetricMatrix, DENSE_MAX_ORDER};
use crate::error::{invalid, Error, Result};

/// Bottom of the spectrum of `-Δ_Γ` on the free group with `d` generators:
/// `2d - 2√(2d-1)`.
pub fn free_group_gamma(d: usize) -> f64 {
    let df = d as f64;
    2.0 * df - 2.0 * (2.0 * df - 1.0).sqrt()
}

/// Radius-`R` ball around the identity in the Cayley graph of the free group
/// on `d` generators (the `2d`-regular tree), vertices in breadth-first order.
#[derive(Clone, Debug)]
pub struct FreeGroupBall {
    pub d: usize,
    pub radius: usize,
    /// `parent[v]` for `v > 0`; the root is vertex 0.
    parent: Vec<usize>,
    depth: Vec<usize>,
}

impl FreeGroupBall {
    /// Number of vertices `1 + Σ_{r=1}^{R} 2d(2d-1)^{r-1}`, `None` on overflow.
    pub fn size(d: usize, radius: usize) -> Option<usize> {
        let mut total = 1usize;
        let mut shell = 2 * d;
        for _ in 0..radius {
            total = total.checked_add(shell)?;
            shell = shell.checked_mul(2 * d - 1)?;
        }
        Some(total)
    }

    pub fn new(d: usize, radius: usize) -> Result<Self> {
        if d == 0 {
            return Err(invalid("free group needs at least one generator"));
        }
        let n = Self::size(d, radius)
            .filter(|&n| n <= DENSE_MAX_ORDER)
            .ok_or_else(|| {
                Error::TooLarge(format!("ball of radius {radius} for d={d} exceeds {DENSE_MAX_ORDER} vertices"))
            })?;
        let mut parent = vec![0; n];
        let mut depth = vec![0; n];
        let mut next = 1;
        let mut frontier_start = 0;
        let mut frontier_end = 1;
        for r in 1..=radius {
            for v in frontier_start..frontier_end {
                let children = if v == 0 { 2 * d } else { 2 * d - 1 };
                for _ in 0..children {
                    parent[next] = v;
                    depth[next] = r;
                    next += 1;
                }
            }
            frontier_start = frontier_end;
            frontier_end = next;
        }
        debug_assert_eq!(next, n);
        Ok(Self { d, radius, parent, depth })
    }

    pub fn n_vertices(&self) -> usize {
        self.parent.len()
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// `-Δ_Γ` restricted to the ball with Dirichlet condition outside: the
    /// diagonal keeps the full degree `2d`, edges leaving the ball are dropped.
    pub fn laplacian(&self) -> DenseSymmetricMatrix {
        let n = self.n_vertices();
        let mut m = DenseSymmetricMatrix::zeros(n);
        for v in 0..n {
            m.set(v, v, 2.0 * self.d as f64);
        }
        for v in 1..n {
            m.set(v, self.parent[v], -1.0);
        }
        m
    }
}

/// `-Δ_Γ - γ·I - W` on the radius-`R` ball of the free group with `d` generators.
pub fn build_tree_ball_hamiltonian(d: usize, radius: usize, w: &[f64]) -> Result<DenseSymmetricMatrix> {
    let ball = FreeGroupBall::new(d, radius)?;
    let n = ball.n_vertices();
    if w.len() != n {
        return Err(invalid(format!("potential has {} values for {n} vertices", w.len())));
    }
    if w.iter().any(|x| !x.is_finite()) {
        return Err(invalid("potential has non-finite values"));
    }
    let gamma = free_group_gamma(d);
    let mut m = ball.laplacian();
    for (v, wv) in w.iter().enumerate() {
        m.add_to_diagonal(v, -gamma - wv);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{count_eigs_below, jacobi_eigenvalues};

    #[test]
    fn sizes() {
        assert_eq!(FreeGroupBall::size(2, 0), Some(1));
        assert_eq!(FreeGroupBall::size(2, 1), Some(5));
        assert_eq!(FreeGroupBall::size(2, 6), Some(1457));
        assert!(FreeGroupBall::new(2, 7).is_err());
        let b = FreeGroupBall::new(2, 3).unwrap();
        assert_eq!((0..b.n_vertices()).filter(|&v| b.depth(v) == 3).count(), 36);
    }

    #[test]
    fn gamma_two_generators() {
        assert!((free_group_gamma(2) - (4.0 - 2.0 * 3f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn free_ball_is_nonnegative_and_deep_well_binds() {
        let n = FreeGroupBall::size(2, 3).unwrap();
        let m = build_tree_ball_hamiltonian(2, 3, &vec![0.0; n]).unwrap();
        assert!(jacobi_eigenvalues(&m)[0] >= 0.0);
        let mut w = vec![0.0; n];
        w[0] = 10.0;
        let m = build_tree_ball_hamiltonian(2, 3, &w).unwrap();
        assert!(count_eigs_below(&m, 0.0).unwrap().count_strict >= 1);
    }
}
