//! Exact eigenvalue counts and heat-kernel diagonals for finite truncations.
//!
//! Dense matrices up to [`DENSE_MAX_ORDER`] are reduced by Householder and
//! counted with Sturm sequences; larger lattice boxes use block inertia.

mod dense;
mod jacobi;
mod lanczos;
mod lattice;
mod ldlt;
mod quantum;
mod tree;

pub use dense::{
    bisect_eigenvalues_below, count_eigs_below, count_eigs_below_with, count_tolerance,
    heat_kernel_diagonal_dense, householder_tridiagonalize, sturm_count,
    tridiagonal_eigen_first_components, DenseSymmetricMatrix, SpectralCount, Tridiagonal,
    DENSE_MAX_ORDER,
};
pub use jacobi::jacobi_eigenvalues;
pub use lanczos::{gauss_quadrature, heat_kernel_diagonal, lanczos};
pub use lattice::{build_lattice_hamiltonian, LatticeBox, LatticeOperator, BLOCK_MAX_SLICE};
pub use ldlt::{BunchKaufman, Inertia};
pub use quantum::{
    chain_count_neumann, delta_well_count_fd, delta_well_eigenvalue, interval_counts_neumann_dirichlet,
    DeltaWellEigenvalue, IntervalCounts,
};
pub use tree::{build_tree_ball_hamiltonian, free_group_gamma, FreeGroupBall};
