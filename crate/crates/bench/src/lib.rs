//! Shared instance builders for the benchmarks.

use netdecomp_core::{
    cellfree_gains, edge_weights, generate_topology, GainMatrix, Region, WeightMatrix,
};

/// A reproducible cell-free instance of `aps` APs and `users` users.
pub fn cellfree_instance(seed: u64, aps: usize, users: usize) -> (WeightMatrix, GainMatrix) {
    let topology = generate_topology(seed, Region::unit_square(), aps, users, vec![1; aps])
        .expect("valid parameters");
    let gains = cellfree_gains(&topology, 4.0).expect("valid gains");
    let weights = edge_weights(&gains).expect("positive rows");
    (weights, gains)
}
