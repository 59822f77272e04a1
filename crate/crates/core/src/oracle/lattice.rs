use super::dense::{count_tolerance, DenseSymmetricMatrix, SpectralCount, DENSE_MAX_ORDER};
use super::ldlt::{BunchKaufman, Inertia};
use crate::error::{invalid, Error, Result};

/// Largest slice order accepted by the block-inertia path.
pub const BLOCK_MAX_SLICE: usize = 2000;

/// The centered box `{-L, …, L}^d ⊂ Z^d`.
///
/// Sites are ordered lexicographically with coordinate 0 varying fastest, so
/// the last coordinate indexes contiguous slices of `side^{d-1}` sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeBox {
    pub d: usize,
    pub l: usize,
}

impl LatticeBox {
    pub fn new(d: usize, l: usize) -> Result<Self> {
        if d == 0 {
            return Err(invalid("lattice dimension must be positive"));
        }
        let b = Self { d, l };
        b.checked_sites().ok_or_else(|| Error::TooLarge("box size overflows".into()))?;
        Ok(b)
    }

    pub fn side(&self) -> usize {
        2 * self.l + 1
    }

    fn checked_sites(&self) -> Option<usize> {
        (0..self.d).try_fold(1usize, |acc, _| acc.checked_mul(self.side()))
    }

    pub fn n_sites(&self) -> usize {
        self.side().pow(self.d as u32)
    }

    pub fn slice_size(&self) -> usize {
        self.side().pow(self.d as u32 - 1)
    }

    /// Index of the origin.
    pub fn center(&self) -> usize {
        (self.n_sites() - 1) / 2
    }

    pub fn coords(&self, mut idx: usize) -> Vec<i64> {
        let s = self.side();
        (0..self.d)
            .map(|_| {
                let c = (idx % s) as i64 - self.l as i64;
                idx /= s;
                c
            })
            .collect()
    }

    pub fn index(&self, coords: &[i64]) -> Option<usize> {
        if coords.len() != self.d {
            return None;
        }
        let s = self.side();
        let mut idx = 0usize;
        for &c in coords.iter().rev() {
            let shifted = c + self.l as i64;
            if shifted < 0 || shifted as usize >= s {
                return None;
            }
            idx = idx * s + shifted as usize;
        }
        Some(idx)
    }

    /// Neighbors of site `idx` inside the box.
    pub fn neighbors(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let s = self.side();
        (0..self.d).flat_map(move |j| {
            let stride = s.pow(j as u32);
            let c = (idx / stride) % s;
            let down = (c > 0).then(|| idx - stride);
            let up = (c + 1 < s).then(|| idx + stride);
            down.into_iter().chain(up)
        })
    }
}

/// `H = -Δ + diag` on a box with Dirichlet truncation: off-box neighbors are
/// dropped and the Laplacian diagonal keeps the full degree `2d`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeOperator {
    pub lattice: LatticeBox,
    /// Site potential `V_extra - W`, added to the diagonal `2d`.
    pub potential: Vec<f64>,
}

impl LatticeOperator {
    pub fn new(lattice: LatticeBox, w: &[f64], v_extra: Option<&[f64]>) -> Result<Self> {
        let n = lattice.n_sites();
        if w.len() != n {
            return Err(invalid(format!("potential has {} values for {n} sites", w.len())));
        }
        if let Some(v) = v_extra {
            if v.len() != n {
                return Err(invalid(format!("extra potential has {} values for {n} sites", v.len())));
            }
        }
        let potential = (0..n)
            .map(|i| v_extra.map_or(0.0, |v| v[i]) - w[i])
            .collect::<Vec<_>>();
        if potential.iter().any(|v| !v.is_finite()) {
            return Err(invalid("potential has non-finite values"));
        }
        Ok(Self { lattice, potential })
    }

    pub fn free(lattice: LatticeBox) -> Self {
        Self { lattice, potential: vec![0.0; lattice.n_sites()] }
    }

    pub fn order(&self) -> usize {
        self.potential.len()
    }

    fn degree(&self) -> f64 {
        2.0 * self.lattice.d as f64
    }

    /// `y = H x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let deg = self.degree();
        for i in 0..self.order() {
            let mut acc = (deg + self.potential[i]) * x[i];
            for j in self.lattice.neighbors(i) {
                acc -= x[j];
            }
            y[i] = acc;
        }
    }

    /// Upper bound on `‖H‖`.
    pub fn norm_bound(&self) -> f64 {
        let deg = self.degree();
        self.potential.iter().map(|v| (deg + v).abs() + deg).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Result<DenseSymmetricMatrix> {
        let n = self.order();
        if n > DENSE_MAX_ORDER {
            return Err(Error::TooLarge(format!(
                "dense lattice operator needs at most {DENSE_MAX_ORDER} sites, got {n}"
            )));
        }
        let mut m = DenseSymmetricMatrix::zeros(n);
        let deg = self.degree();
        for i in 0..n {
            m.set(i, i, deg + self.potential[i]);
            for j in self.lattice.neighbors(i) {
                m.set(i, j, -1.0);
            }
        }
        Ok(m)
    }

    /// Inertia of `H - shift·I` by block Gaussian elimination over slices of
    /// the last coordinate: `S₁ = D₁`, `S_{k+1} = D_{k+1} - S_k⁻¹`, and the
    /// inertia of `H` is the sum of the inertias of the `S_k` (Haynsworth).
    pub fn shifted_inertia(&self, shift: f64) -> Result<Inertia> {
        let lat = self.lattice;
        let m = lat.slice_size();
        if m > BLOCK_MAX_SLICE {
            return Err(Error::TooLarge(format!(
                "slice order {m} exceeds {BLOCK_MAX_SLICE}"
            )));
        }
        let slice_box = (lat.d > 1).then(|| LatticeBox { d: lat.d - 1, l: lat.l });
        let deg = self.degree();
        let mut total = Inertia::default();
        let mut prev_inv: Option<DenseSymmetricMatrix> = None;
        let zero_tol = 0.0;
        for k in 0..lat.side() {
            let mut s = DenseSymmetricMatrix::zeros(m);
            for i in 0..m {
                s.set(i, i, deg + self.potential[k * m + i] - shift);
                if let Some(sb) = &slice_box {
                    for j in sb.neighbors(i) {
                        if j < i {
                            s.set(i, j, -1.0);
                        }
                    }
                }
            }
            if let Some(inv) = prev_inv.take() {
                for i in 0..m {
                    for j in 0..=i {
                        let v = s.get(i, j) - inv.get(i, j);
                        s.set(i, j, v);
                    }
                }
            }
            let last = k + 1 == lat.side();
            let bk = BunchKaufman::factor(s);
            total += bk.inertia(zero_tol);
            if !last {
                prev_inv = Some(bk.inverse().ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "shift {shift} makes a Schur complement singular; perturb the threshold"
                    ))
                })?);
            }
        }
        Ok(total)
    }

    /// Counts at `e` through the block-inertia path, any box size.
    pub fn count_below_blocked(&self, e: f64) -> Result<SpectralCount> {
        let tol = count_tolerance(self.norm_bound());
        let count_strict = self.shifted_inertia(e - tol)?.negative;
        let count_leq = self.shifted_inertia(e + tol)?.negative;
        Ok(SpectralCount { threshold: e, count_strict, count_leq, eigenvalues_below: None })
    }

    /// `#{λ ≤ e}` (within the counting tolerance) through the block path only.
    pub fn count_leq_blocked(&self, e: f64) -> Result<usize> {
        let tol = count_tolerance(self.norm_bound());
        Ok(self.shifted_inertia(e + tol)?.negative)
    }

    /// Counts at `e`: dense Householder/Sturm up to the dense limit, block
    /// inertia beyond it.
    pub fn count_below(&self, e: f64) -> Result<SpectralCount> {
        if self.order() <= DENSE_MAX_ORDER {
            super::dense::count_eigs_below(&self.to_dense()?, e)
        } else {
            self.count_below_blocked(e)
        }
    }
}

/// `H = -Δ + V_extra - W` on the centered box of side `2L+1` in `Z^d` as a dense matrix.
pub fn build_lattice_hamiltonian(
    d: usize,
    l: usize,
    w: &[f64],
    v_extra: Option<&[f64]>,
) -> Result<DenseSymmetricMatrix> {
    let lat = LatticeBox::new(d, l)?;
    if lat.n_sites() > DENSE_MAX_ORDER {
        return Err(Error::TooLarge(format!(
            "(2L+1)^d = {} exceeds {DENSE_MAX_ORDER}",
            lat.n_sites()
        )));
    }
    LatticeOperator::new(lat, w, v_extra)?.to_dense()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::count_eigs_below;

    #[test]
    fn chain_three_sites() {
        let m = build_lattice_hamiltonian(1, 1, &[0.0; 3], None).unwrap();
        for i in 0..3 {
            assert_eq!(m.get(i, i), 2.0);
        }
        assert_eq!(m.get(0, 1), -1.0);
        assert_eq!(m.get(1, 2), -1.0);
        assert_eq!(m.get(0, 2), 0.0);
    }

    #[test]
    fn index_round_trip() {
        let b = LatticeBox::new(3, 2).unwrap();
        for i in 0..b.n_sites() {
            assert_eq!(b.index(&b.coords(i)), Some(i));
        }
        assert_eq!(b.coords(b.center()), vec![0, 0, 0]);
    }

    #[test]
    fn block_matches_dense() {
        let b = LatticeBox::new(2, 3).unwrap();
        let w: Vec<f64> = (0..b.n_sites()).map(|i| ((i * 7919) % 13) as f64 * 0.6).collect();
        let op = LatticeOperator::new(b, &w, None).unwrap();
        for e in [-3.0, -0.5, 0.0, 1.3, 4.0] {
            let dense = count_eigs_below(&op.to_dense().unwrap(), e).unwrap();
            let block = op.count_below_blocked(e).unwrap();
            assert_eq!(dense.count_strict, block.count_strict, "e = {e}");
            assert_eq!(dense.count_leq, block.count_leq, "e = {e}");
        }
    }

    #[test]
    fn too_large_dense_rejected() {
        assert!(matches!(
            build_lattice_hamiltonian(3, 8, &vec![0.0; 4913], None),
            Err(Error::TooLarge(_))
        ));
    }
}
