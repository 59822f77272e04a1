//! One module per experiment family; each returns an [`Outcome`].

mod anderson;
mod freegroup;
mod groupwalks;
mod lattice;
mod levy;
mod montecarlo;
mod oracle;
mod quantum;
mod subordination;

use crate::config::Experiment;
use crate::outcome::Outcome;
use crate::RunError;

pub fn run(e: &Experiment, seed: u64) -> Result<Outcome, RunError> {
    match e {
        Experiment::BoundVsOracleLattice(c) => lattice::bound_vs_oracle(c, seed),
        Experiment::SubordinationIdentity(c) => subordination::run(c, seed),
        Experiment::FreeGroup(c) => freegroup::run(c, seed),
        Experiment::LevyExponents(c) => levy::run(c, seed),
        Experiment::AffineMc(c) => montecarlo::affine(c, seed),
        Experiment::HeisenbergMc(c) => montecarlo::heisenberg(c, seed),
        Experiment::GroupWalks(c) => groupwalks::run(c, seed),
        Experiment::Anderson(c) => anderson::run(c, seed),
        Experiment::QuantumGraphEdges(c) => quantum::run(c, seed),
        Experiment::OracleIntegrity(c) => oracle::run(c, seed),
        Experiment::DiscreteSplit(c) => lattice::discrete_split_advantage(c, seed),
    }
}
