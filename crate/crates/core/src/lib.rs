//! Decomposition of cell-free wireless networks into independent
//! subnetworks under a per-user rate constraint.
//!
//! The network of `K` users and `N` beams (spread over `L` access points)
//! is modeled as a weighted bipartite graph whose edge weights are the
//! per-user normalized beamspace channel gains. Merging each beam with its
//! weight-1 users coarsens the graph to `N` meganodes; spectral clustering
//! on the meganode Laplacian solves the M-way minimum-sumcut problem, and a
//! binary search driven by a Jensen-bound sumcut budget finds the largest
//! feasible number of subnetworks. User-centric and AP-centric clustering
//! baselines plus a Monte Carlo metrics harness round out the crate.
//!
//! # Example
//!
//! ```
//! use netdecomp_core::{
//!     cellfree_gains, edge_weights, generate_topology, rc_netdecomp, Region,
//! };
//!
//! let topology = generate_topology(7, Region::unit_square(), 12, 6, vec![1; 12]).unwrap();
//! let gains = cellfree_gains(&topology, 4.0).unwrap();
//! let weights = edge_weights(&gains).unwrap();
//! let result = rc_netdecomp(&weights, &gains, 1.0, 1.0, 1.0, 42).unwrap();
//! assert!(result.feasible);
//! assert!(result.m_star >= 1);
//! ```

pub mod baselines;
pub mod error;
pub mod evaluate;
pub mod graph;
pub mod matrix;
pub mod meganode;
pub mod netdecomp;
pub mod rng;
pub mod spectral;
pub mod topology;

pub use baselines::{
    angular_beam_distances, ap_centric, beam_angular_distance, euclidean_beam_distances,
    minimax_radius, user_centric, LinkageState, MergeStep,
};
pub use error::{Error, Result};
pub use evaluate::{
    aggregate, monte_carlo, partition_metrics, per_user_rate, rate_lower_bound,
    rate_lower_bound_value, realize_instance, run_algorithm, user_rate, user_sinr, Algorithm,
    MetricsReport, Realization, RealizationMetrics, SimSetup,
};
pub use graph::{adjacency, cut, cut_of_set, edge_weights, sumcut, Partition, WeightMatrix};
pub use matrix::Mat;
pub use meganode::{build_meganodes, lift_partition, MeganodeGraph};
pub use netdecomp::{
    compute_beta, rc_netdecomp, sumcut_budget, DecompositionResult, Probe, RateBudget,
};
pub use rng::{derive_seed, rng_from};
pub use spectral::{
    bruteforce_mincut, kmeans, laplacian, mway_partition, smallest_eigenvectors, symmetric_eigen,
    SpectralEmbedding,
};
pub use topology::{
    cellfree_gains, dft_beam_direction, dft_beam_gain, general_gains, generate_topology,
    singlecell_gains, GainMatrix, Point, Region, Scenario, Topology,
};
