//! Spectral mincut partitioning of the meganode graph.
//!
//! The M-way minimum-sumcut problem is relaxed the standard way: embed the
//! meganodes with the eigenvectors of the unnormalized graph Laplacian for
//! the M smallest eigenvalues, cluster the embedding rows with k-means, and
//! lift the labels back to a full user+beam partition. Rows are not
//! normalized before clustering; the objective is the plain (not ratio or
//! normalized) cut. An exhaustive oracle for small instances backs the tests.

mod eigen;
mod kmeans;

pub use eigen::symmetric_eigen;
pub use kmeans::kmeans;

use crate::error::{Error, Result};
use crate::graph::Partition;
use crate::matrix::Mat;
use crate::meganode::{lift_partition, MeganodeGraph};
use crate::rng::derive_seed;

/// k-means restarts per partitioning call; the restart whose partition has
/// the smallest sumcut wins, ties by restart index.
pub const KMEANS_RESTARTS: usize = 20;

/// Enumeration guard for the exhaustive oracle.
pub const BRUTEFORCE_LIMIT: usize = 12;

/// Rows of the `M` smallest eigenvectors of the Laplacian, one row per
/// meganode, plus the matching eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct SpectralEmbedding {
    pub y: Mat,
    pub eigenvalues: Vec<f64>,
}

/// Unnormalized graph Laplacian `L = D - W~` of the meganode graph. Rows sum
/// to zero and the matrix is positive semidefinite.
pub fn laplacian(mg: &MeganodeGraph) -> Mat {
    let n = mg.len();
    let degrees: Vec<f64> = (0..n).map(|i| mg.w_tilde.row(i).iter().sum()).collect();
    Mat::from_fn(n, n, |i, j| {
        if i == j {
            degrees[i]
        } else {
            -mg.w_tilde[(i, j)]
        }
    })
}

/// Eigenvectors of `l` for the `m` smallest eigenvalues, as columns of an
/// `N x m` matrix. Deterministic up to the solver's sign convention.
pub fn smallest_eigenvectors(l: &Mat, m: usize) -> Result<SpectralEmbedding> {
    let n = l.rows();
    if m == 0 || m > n {
        return Err(Error::TooManyClusters {
            requested: m,
            available: n,
        });
    }
    let (vals, vecs) = symmetric_eigen(l)?;
    let y = Mat::from_fn(n, m, |r, c| vecs[(r, c)]);
    Ok(SpectralEmbedding {
        y,
        eigenvalues: vals[..m].to_vec(),
    })
}

/// Partition the meganode graph into exactly `m` subnetworks by spectral
/// clustering, returning the lifted user+beam partition with canonical
/// labels (ordered by lowest contained beam index).
pub fn mway_partition(mg: &MeganodeGraph, m: usize, seed: u64) -> Result<Partition> {
    let n = mg.len();
    if m == 0 || m > n {
        return Err(Error::TooManyClusters {
            requested: m,
            available: n,
        });
    }
    let embedding = smallest_eigenvectors(&laplacian(mg), m)?;
    let mut best: Option<(f64, Vec<usize>)> = None;
    for restart in 0..KMEANS_RESTARTS {
        let assignment = kmeans(&embedding.y, m, derive_seed(seed, restart as u64))?;
        let sc = mg.sumcut_of(&assignment);
        if best.as_ref().is_none_or(|(b, _)| sc < *b) {
            best = Some((sc, assignment));
        }
    }
    let (_, assignment) = best.expect("at least one restart");
    Ok(lift_partition(mg, &assignment, m)?.canonicalize())
}

/// Exact minimum-sumcut `m`-way partition by exhaustive enumeration of all
/// surjective meganode assignments. Guarded to `N <= 12`; ties resolve to
/// the first minimizer in restricted-growth-string order.
pub fn bruteforce_mincut(mg: &MeganodeGraph, m: usize) -> Result<Partition> {
    let n = mg.len();
    if n > BRUTEFORCE_LIMIT {
        return Err(Error::EnumerationGuard {
            n,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    if m == 0 || m > n {
        return Err(Error::TooManyClusters {
            requested: m,
            available: n,
        });
    }
    let mut labels = vec![0usize; n];
    let mut best: Option<(f64, Vec<usize>)> = None;
    enumerate_partitions(mg, m, 1, &mut labels, &mut best);
    let (_, assignment) = best.expect("at least one surjective assignment exists");
    Ok(lift_partition(mg, &assignment, m)?.canonicalize())
}

/// Recursive enumeration of set partitions with exactly `m` blocks in
/// restricted-growth order. `labels[..pos]` is fixed, `used` is the number
/// of distinct labels in it.
fn enumerate_partitions(
    mg: &MeganodeGraph,
    m: usize,
    pos: usize,
    labels: &mut Vec<usize>,
    best: &mut Option<(f64, Vec<usize>)>,
) {
    let n = mg.len();
    let used = if pos == 0 { 0 } else { labels[..pos].iter().max().unwrap() + 1 };
    if pos == n {
        if used == m {
            let sc = mg.sumcut_of(labels);
            if best.as_ref().is_none_or(|(b, _)| sc < *b) {
                *best = Some((sc, labels.clone()));
            }
        }
        return;
    }
    // Prune: the remaining positions must be able to reach m blocks.
    let remaining = n - pos;
    if used + remaining < m {
        return;
    }
    let cap = (used + 1).min(m);
    for label in 0..cap {
        labels[pos] = label;
        enumerate_partitions(mg, m, pos + 1, labels, best);
    }
    labels[pos] = 0;
}
