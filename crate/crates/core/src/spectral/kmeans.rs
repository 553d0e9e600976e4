//! Lloyd's k-means with k-means++ seeding, deterministic in the seed.
//!
//! Clusters the rows of the spectral embedding. Ties in nearest-center
//! assignment go to the lowest center index, and an emptied cluster is
//! reseeded at the point farthest from its stale centroid, so the result
//! always uses every label.

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::rng::rng_from;

const MAX_ITER: usize = 200;

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Cluster the rows of `points` into `clusters` groups.
///
/// Returns one label per row; every label in `0..clusters` is used. Errors
/// when there are fewer rows (or fewer distinct rows) than clusters.
pub fn kmeans(points: &Mat, clusters: usize, seed: u64) -> Result<Vec<usize>> {
    let n = points.rows();
    if clusters == 0 || clusters > n {
        return Err(Error::TooManyClusters {
            requested: clusters,
            available: n,
        });
    }
    let mut rng = rng_from(seed);

    // k-means++ seeding: first center uniform, then proportional to the
    // squared distance from the chosen set.
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(clusters);
    let first = rng.random_range(0..n);
    centers.push(points.row(first).to_vec());
    let mut d2: Vec<f64> = (0..n).map(|i| dist2(points.row(i), &centers[0])).collect();
    while centers.len() < clusters {
        let total: f64 = d2.iter().sum();
        if total <= 0.0 {
            return Err(Error::DegenerateClustering);
        }
        let target = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut chosen = None;
        for (i, &w) in d2.iter().enumerate() {
            acc += w;
            if acc >= target && w > 0.0 {
                chosen = Some(i);
                break;
            }
        }
        // Rounding may leave acc slightly below target at the end.
        let chosen = chosen.unwrap_or_else(|| {
            d2.iter().rposition(|&w| w > 0.0).expect("total was positive")
        });
        centers.push(points.row(chosen).to_vec());
        for (i, nearest) in d2.iter_mut().enumerate() {
            *nearest = nearest.min(dist2(points.row(i), centers.last().unwrap()));
        }
    }

    let mut assignment = vec![0usize; n];
    for _ in 0..MAX_ITER {
        // Assignment step; ties keep the lowest center index.
        let mut next = vec![0usize; n];
        for (i, slot) in next.iter_mut().enumerate() {
            let mut best = 0;
            let mut best_d = dist2(points.row(i), &centers[0]);
            for (c, center) in centers.iter().enumerate().skip(1) {
                let d = dist2(points.row(i), center);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            *slot = best;
        }

        // Repair empty clusters: move in the point farthest from the stale
        // centroid, taken from a cluster that can spare one.
        let mut counts = vec![0usize; clusters];
        for &a in &next {
            counts[a] += 1;
        }
        for c in 0..clusters {
            if counts[c] > 0 {
                continue;
            }
            let mut pick = None;
            let mut pick_d = -1.0;
            for i in 0..n {
                if counts[next[i]] < 2 {
                    continue;
                }
                let d = dist2(points.row(i), &centers[c]);
                if d > pick_d {
                    pick_d = d;
                    pick = Some(i);
                }
            }
            let i = pick.expect("a donor cluster always exists when n >= clusters");
            counts[next[i]] -= 1;
            next[i] = c;
            counts[c] = 1;
            centers[c] = points.row(i).to_vec();
        }

        let converged = next == assignment;
        assignment = next;

        // Update step.
        let dim = points.cols();
        let mut sums = vec![vec![0.0; dim]; clusters];
        for i in 0..n {
            for (j, s) in sums[assignment[i]].iter_mut().enumerate() {
                *s += points.row(i)[j];
            }
        }
        for c in 0..clusters {
            for s in sums[c].iter_mut() {
                *s /= counts[c] as f64;
            }
            centers[c] = std::mem::take(&mut sums[c]);
        }

        if converged {
            break;
        }
    }
    Ok(assignment)
}
