//! Naming Game / Noisy Naming Game core: graph and state machinery, the
//! stochastic kernel, the Gibbs-energy construction over clique potentials,
//! brute-force oracles for desk-scale verification, and community detection
//! by energy ranking.
//!
//! The crate is `no_std` + `alloc`; all IO, file formats and the CLI live in
//! the companion `nng-cli` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod clique;
pub mod community;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod gibbs;
pub mod graph;
mod linalg;
pub mod localspec;
pub mod oracle;
pub mod statespace;
pub mod word;

pub use clique::{enumerate_cliques, Clique, CliqueInventory, DEFAULT_CLIQUE_GUARD};
pub use community::{
    consensus_margin, detect_communities, in_consensus_basin, partition_similarity,
    simulate_occupation, OccupationHistogram, PartitionCandidate, Projector,
};
pub use config::Configuration;
pub use dynamics::{chain_rng, Kernel, RecorderSpec, Records, Trajectory};
pub use error::{Error, Result};
pub use gibbs::{EnergyContext, EnergyTable, DEFAULT_STATE_GUARD};
pub use graph::{planted_partition, Graph, PlantedGraph};
pub use localspec::{local_spec, stationarity_residual, EpsilonMode, LocalDistribution, ReceiveProbs};
pub use oracle::{
    absorption_analysis, compare_distributions, AbsorptionReport, DistributionComparison,
    FullKernelMatrix,
};
pub use statespace::StateSpace;
pub use word::{Alphabet, Word, WordList, MAX_WORDS};
