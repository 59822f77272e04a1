use serde::Serialize;

/// Catalog entry: what an experiment checks and which library operations it exercises.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub kind: &'static str,
    pub summary: &'static str,
    /// The result the experiment probes.
    pub anchor: &'static str,
    pub operations: &'static [&'static str],
}

/// Stable order; one entry per experiment kind.
pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        kind: "bound-vs-oracle-lattice",
        summary: "Random sparse potentials on a Z^d box: exact bound-state count against the optimized hinge bound, the general form, the two-regime bound and the moment bound.",
        anchor: "CLR bound for operators with a heat-kernel diagonal; hinge weight (z - sigma)_+ and optimization over sigma",
        operations: &[
            "lattice_pi",
            "clr_hinge",
            "clr_general",
            "lt_moment",
            "two_regime_power",
            "g_weight",
            "hinge_constant",
            "build_lattice_hamiltonian",
            "count_eigs_below",
        ],
    },
    CatalogEntry {
        kind: "subordination-identity",
        summary: "Poisson subordination of the simple walk on Z against the closed-form lattice diagonal, and the Laplace transform of the diagonal against the lattice resolvent.",
        anchor: "continuous-time walks as discrete walks run at Poisson jump times",
        operations: &["subordinated_pi", "lattice_pi", "lattice_resolvent", "poisson_pmf", "quadrature"],
    },
    CatalogEntry {
        kind: "free-group",
        summary: "Free-group heat kernel: tree-ball matrix exponential, the e^{-gamma t} t^{-3/2} plateau, the spectral bottom gamma and the resolvent roots.",
        anchor: "heat kernel and spectrum of the free group",
        operations: &["free_group_pi", "free_group_resolvent", "build_free_group_ball"],
    },
    CatalogEntry {
        kind: "levy-exponents",
        summary: "Local and global dimensions of a power-tail Levy generator from halving ratios, and the stretched-exponential decay of a log-tail generator.",
        anchor: "heat-kernel dimensions of symmetric Levy generators",
        operations: &["levy_symbol", "levy_pi"],
    },
    CatalogEntry {
        kind: "affine-mc",
        summary: "Brownian-bridge Monte Carlo for the affine-group diagonal; pi(t) t^{3/2} compared across times.",
        anchor: "affine group heat kernel as an expectation over a Brownian bridge",
        operations: &["affine_pi_mc", "sample_brownian_bridge"],
    },
    CatalogEntry {
        kind: "heisenberg-mc",
        summary: "Brownian-bridge Monte Carlo for the Heisenberg-group diagonal; pi(t) t^2 compared across times.",
        anchor: "Heisenberg group heat kernel decay of order t^{-2}",
        operations: &["heisenberg_pi_mc", "sample_brownian_bridge"],
    },
    CatalogEntry {
        kind: "group-walks",
        summary: "Exact return probabilities: affine brute force against the local-time formula, the confined-bridge lemma, the (2n)^{1/3} envelope and the Heisenberg dynamic program.",
        anchor: "return probabilities of walks on the affine and Heisenberg groups",
        operations: &[
            "affine_return_bruteforce",
            "affine_return_bridge",
            "confined_bridge_exact_and_bound",
            "envelope_exponent_fit",
            "heisenberg_return_dp",
        ],
    },
    CatalogEntry {
        kind: "anderson",
        summary: "Averaged return probability in a Bernoulli random potential against sqrt(t), and two-regime bounds for log-decaying radial potentials.",
        anchor: "stretched-exponential decay of the averaged heat kernel for random potentials",
        operations: &["anderson_ep0", "envelope_pi", "two_regime_exp"],
    },
    CatalogEntry {
        kind: "quantum-graph-edges",
        summary: "Dirichlet and Neumann decoupling around the exact count on random edge chains, the delta-well eigenvalue and m-well counts.",
        anchor: "bound states of quantum graphs with local dimension 1",
        operations: &[
            "quantum_graph_edge_bounds",
            "interval_counts_neumann_dirichlet",
            "delta_well_eigenvalue",
            "envelope_pi",
        ],
    },
    CatalogEntry {
        kind: "oracle-integrity",
        summary: "Sturm counts against a Jacobi eigensolver on random matrices, and closed-form Dirichlet box spectra.",
        anchor: "exact counting on finite truncations",
        operations: &["count_eigs_below", "build_lattice_hamiltonian"],
    },
    CatalogEntry {
        kind: "discrete-split",
        summary: "A single deep well on Z^3: the split bound counts the high set exactly and beats the hinge bound by orders of magnitude.",
        anchor: "discrete CLR bound with the high-potential set counted separately",
        operations: &["discrete_split", "clr_hinge", "count_eigs_below"],
    },
];

pub fn find(kind: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.kind == kind)
}
