//! Comparison algorithms: user-centric virtual-cell merging and AP-centric
//! hierarchical clustering with the minimax linkage criterion.

use crate::error::{Error, Result};
use crate::graph::{Partition, WeightMatrix};
use crate::matrix::Mat;
use crate::topology::{dft_beam_direction, Topology};

/// Union-find over beam indices with path halving and union by size.
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// User-centric clustering: each user forms a virtual cell of its `s`
/// highest-gain beams (ties by lowest beam index), overlapping cells merge
/// transitively, and beams in no cell become singleton subnetworks.
pub fn user_centric(w: &WeightMatrix, s: usize) -> Result<Partition> {
    let n = w.num_beams();
    let k = w.num_users();
    if s == 0 || s > n {
        return Err(Error::InvalidParameter(format!(
            "virtual cell size {s} out of 1..={n}"
        )));
    }
    let mut uf = UnionFind::new(n);
    let mut in_cell = vec![false; n];
    let mut cell_anchor = vec![0usize; k];
    for (user, anchor) in cell_anchor.iter_mut().enumerate() {
        let mut order: Vec<usize> = (0..n).collect();
        // Weight descending, index ascending on ties; normalization keeps
        // the per-user ranking of the raw gains.
        order.sort_by(|&a, &b| {
            w.w[(user, b)]
                .partial_cmp(&w.w[(user, a)])
                .unwrap()
                .then(a.cmp(&b))
        });
        let cell = &order[..s];
        *anchor = cell[0];
        for &beam in cell {
            in_cell[beam] = true;
            uf.union(cell[0], beam);
        }
    }

    // Map union-find roots (plus isolated beams) to dense labels.
    let mut label_of_beam = vec![usize::MAX; n];
    let mut num_subnets = 0;
    for beam in 0..n {
        let rep = if in_cell[beam] { uf.find(beam) } else { beam };
        if label_of_beam[rep] == usize::MAX {
            label_of_beam[rep] = num_subnets;
            num_subnets += 1;
        }
        label_of_beam[beam] = label_of_beam[rep];
    }
    let beam_labels: Vec<usize> = (0..n).map(|b| label_of_beam[b]).collect();
    let user_labels: Vec<usize> = (0..k).map(|u| beam_labels[cell_anchor[u]]).collect();
    Ok(Partition::from_labels(num_subnets, user_labels, beam_labels)?.canonicalize())
}

/// Minimax radius of a cluster: the smallest over candidate centers of the
/// maximum distance from the center to any member. Ties on the radius pick
/// the lowest-index center.
pub fn minimax_radius(cluster: &[usize], dist: &Mat) -> Result<(usize, f64)> {
    if cluster.is_empty() {
        return Err(Error::InvalidParameter("empty cluster has no radius".into()));
    }
    let mut best_center = cluster[0];
    let mut best_radius = f64::INFINITY;
    for &candidate in cluster {
        let radius = cluster
            .iter()
            .map(|&other| dist[(candidate, other)])
            .fold(0.0, f64::max);
        if radius < best_radius {
            best_radius = radius;
            best_center = candidate;
        }
    }
    Ok((best_center, best_radius))
}

/// One merge of the agglomeration, identified by the smallest member index
/// of each side and the minimax radius of their union.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergeStep {
    pub left: usize,
    pub right: usize,
    pub radius: f64,
}

/// Working state of the agglomerative clustering. Merge heights need not be
/// monotone under minimax linkage; the history simply records what happened.
#[derive(Debug, Clone)]
pub struct LinkageState {
    /// Active clusters as sorted member lists; together they always
    /// partition the beam set.
    pub clusters: Vec<Vec<usize>>,
    /// Minimax radius of the pairwise unions of active clusters.
    pub linkage: Mat,
    /// Dendrogram so far.
    pub history: Vec<MergeStep>,
    dist: Mat,
}

impl LinkageState {
    /// Start from singleton clusters over a symmetric distance matrix.
    pub fn new(dist: Mat) -> Self {
        let n = dist.rows();
        let clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        let mut linkage = Mat::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                linkage[(i, j)] = dist[(i, j)];
                linkage[(j, i)] = dist[(i, j)];
            }
        }
        LinkageState {
            clusters,
            linkage,
            history: Vec::new(),
            dist,
        }
    }

    fn union_radius(&self, a: usize, b: usize) -> f64 {
        let union: Vec<usize> = self.clusters[a]
            .iter()
            .chain(&self.clusters[b])
            .copied()
            .collect();
        minimax_radius(&union, &self.dist)
            .expect("active clusters are non-empty")
            .1
    }

    /// Merge the best pair once: smallest union radius, ties by the
    /// lexicographically smallest pair of cluster ids (their lowest member
    /// indices).
    pub fn merge_once(&mut self) {
        let count = self.clusters.len();
        assert!(count >= 2, "nothing left to merge");
        let mut best: Option<(f64, usize, usize, usize, usize)> = None;
        for a in 0..count {
            for b in (a + 1)..count {
                let radius = self.linkage[(a, b)];
                let (lo, hi) = {
                    let ia = self.clusters[a][0];
                    let ib = self.clusters[b][0];
                    (ia.min(ib), ia.max(ib))
                };
                let key = (radius, lo, hi, a, b);
                if best.is_none_or(|(r, l, h, _, _)| (radius, lo, hi) < (r, l, h)) {
                    best = Some(key);
                }
            }
        }
        let (radius, lo, hi, a, b) = best.expect("at least one pair");
        let mut merged: Vec<usize> = self.clusters[a]
            .iter()
            .chain(&self.clusters[b])
            .copied()
            .collect();
        merged.sort_unstable();
        self.history.push(MergeStep {
            left: lo,
            right: hi,
            radius,
        });

        // Replace a by the union, drop b, then refresh the linkage row of
        // the merged cluster.
        self.clusters[a] = merged;
        self.clusters.remove(b);
        let n = self.clusters.len();
        let mut linkage = Mat::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let old_i = if i < b { i } else { i + 1 };
                let old_j = if j < b { j } else { j + 1 };
                let v = if i == a || j == a {
                    self.union_radius(i, j)
                } else {
                    self.linkage[(old_i, old_j)]
                };
                linkage[(i, j)] = v;
                linkage[(j, i)] = v;
            }
        }
        self.linkage = linkage;
    }

    /// Merge until `m` clusters remain.
    pub fn merge_until(&mut self, m: usize) {
        while self.clusters.len() > m {
            self.merge_once();
        }
    }
}

/// AP-centric clustering: agglomerate beams under minimax linkage until `m`
/// clusters remain, then attach every user to the cluster holding its best
/// beam.
pub fn ap_centric(dist: &Mat, m: usize, w: &WeightMatrix) -> Result<Partition> {
    let n = w.num_beams();
    assert_eq!(dist.rows(), n, "distance matrix must cover all beams");
    if m == 0 || m > n {
        return Err(Error::InvalidParameter(format!(
            "cluster count {m} out of 1..={n}"
        )));
    }
    let mut state = LinkageState::new(dist.clone());
    state.merge_until(m);

    let mut beam_labels = vec![0usize; n];
    for (label, cluster) in state.clusters.iter().enumerate() {
        for &beam in cluster {
            beam_labels[beam] = label;
        }
    }
    let user_labels: Vec<usize> = w.best_beam.iter().map(|&b| beam_labels[b]).collect();
    Ok(Partition::from_labels(m, user_labels, beam_labels)?.canonicalize())
}

/// Wrap-around angular separation of two beams in direction-cosine space:
/// `min(|c_i - c_j|, 2 - |c_i - c_j|)`. The first and last beams of a DFT
/// codebook are adjacent under this metric.
pub fn beam_angular_distance(cos_i: f64, cos_j: f64) -> f64 {
    let delta = (cos_i - cos_j).abs();
    delta.min(2.0 - delta)
}

/// Pairwise Euclidean distances between the APs owning each beam; beams of
/// the same AP are at distance zero.
pub fn euclidean_beam_distances(topology: &Topology) -> Mat {
    let owners = topology.beam_owners();
    let n = owners.len();
    Mat::from_fn(n, n, |i, j| {
        let a = topology.ap_positions[owners[i]];
        let b = topology.ap_positions[owners[j]];
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
    })
}

/// Pairwise wrap-around angular distances between the beams of one
/// `n_beams` DFT codebook.
pub fn angular_beam_distances(n_beams: usize) -> Mat {
    Mat::from_fn(n_beams, n_beams, |i, j| {
        beam_angular_distance(
            dft_beam_direction(i + 1, n_beams),
            dft_beam_direction(j + 1, n_beams),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge_weights;
    use crate::meganode::build_meganodes;
    use crate::meganode::lift_partition;
    use crate::rng::rng_from;
    use crate::topology::GainMatrix;
    use rand::Rng;

    fn weights_from_rows(rows: &[Vec<f64>]) -> WeightMatrix {
        let n = rows[0].len();
        edge_weights(&GainMatrix {
            values: Mat::from_rows(rows),
            beam_owner: (0..n).collect(),
        })
        .unwrap()
    }

    fn random_weights(rng: &mut impl Rng, k: usize, n: usize) -> WeightMatrix {
        let rows: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..n).map(|_| rng.random_range(1e-3..1.0)).collect())
            .collect();
        weights_from_rows(&rows)
    }

    fn meganode_identity(w: &WeightMatrix) -> Partition {
        let mg = build_meganodes(w);
        let identity: Vec<usize> = (0..mg.len()).collect();
        lift_partition(&mg, &identity, mg.len())
            .unwrap()
            .canonicalize()
    }

    #[test]
    fn user_centric_s1_is_nearest_beam_association() {
        let mut rng = rng_from(70);
        for _ in 0..20 {
            let w = random_weights(&mut rng, 8, 5);
            let p = user_centric(&w, 1).unwrap();
            assert_eq!(p, meganode_identity(&w));
        }
    }

    #[test]
    fn user_centric_all_beams_is_grand_coalition() {
        let w = weights_from_rows(&[vec![1.0, 0.2, 0.1], vec![0.3, 1.0, 0.4]]);
        let p = user_centric(&w, 3).unwrap();
        assert_eq!(p.num_subnets(), 1);
    }

    #[test]
    fn user_centric_merges_overlapping_cells() {
        // Users 0 and 1 share beam 1 in their top-2; user 2 is elsewhere.
        let w = weights_from_rows(&[
            vec![1.0, 0.9, 0.0, 0.0, 0.0],
            vec![0.0, 0.9, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0, 0.8],
        ]);
        let p = user_centric(&w, 2).unwrap();
        assert_eq!(p.user_label(0), p.user_label(1));
        assert_eq!(p.beam_label(0), p.beam_label(1));
        assert_eq!(p.beam_label(1), p.beam_label(2));
        assert_ne!(p.user_label(2), p.user_label(0));
        assert_eq!(p.num_subnets(), 2);
    }

    #[test]
    fn user_centric_isolated_beams_become_singletons() {
        let w = weights_from_rows(&[vec![1.0, 0.5, 0.1, 0.05]]);
        let p = user_centric(&w, 2).unwrap();
        // Beams 2 and 3 are in nobody's cell.
        assert_eq!(p.num_subnets(), 3);
        assert!(p.all_subnets_serve());
        let sizes = p.subnet_sizes();
        assert_eq!(sizes.iter().filter(|&&(u, b)| u == 0 && b == 1).count(), 2);
    }

    #[test]
    fn user_centric_rejects_bad_s() {
        let w = weights_from_rows(&[vec![1.0, 0.5]]);
        assert!(user_centric(&w, 0).is_err());
        assert!(user_centric(&w, 3).is_err());
    }

    #[test]
    fn minimax_radius_singleton_is_zero() {
        let dist = Mat::zeros(3, 3);
        assert_eq!(minimax_radius(&[1], &dist).unwrap(), (1, 0.0));
    }

    #[test]
    fn minimax_radius_collinear_points() {
        // Beams on a line at 0, 1, 3: center is the middle one, radius 2.
        let coords: [f64; 3] = [0.0, 1.0, 3.0];
        let dist = Mat::from_fn(3, 3, |i, j| (coords[i] - coords[j]).abs());
        assert_eq!(minimax_radius(&[0, 1, 2], &dist).unwrap(), (1, 2.0));
    }

    #[test]
    fn minimax_radius_symmetric_pair_picks_lowest_index() {
        let dist = Mat::from_fn(2, 2, |i, j| if i == j { 0.0 } else { 1.7 });
        assert_eq!(minimax_radius(&[0, 1], &dist).unwrap(), (0, 1.7));
        assert!(minimax_radius(&[], &dist).is_err());
    }

    #[test]
    fn ap_centric_extremes() {
        let mut rng = rng_from(71);
        let w = random_weights(&mut rng, 6, 5);
        let coords: Vec<f64> = (0..5).map(|_| rng.random_range(0.0..1.0)).collect();
        let dist = Mat::from_fn(5, 5, |i, j| (coords[i] - coords[j]).abs());

        let all = ap_centric(&dist, 5, &w).unwrap();
        assert_eq!(all, meganode_identity(&w));

        let one = ap_centric(&dist, 1, &w).unwrap();
        assert_eq!(one.num_subnets(), 1);
    }

    #[test]
    fn ap_centric_splits_two_blobs() {
        let coords: [f64; 6] = [0.0, 0.05, 0.1, 5.0, 5.05, 5.1];
        let n = coords.len();
        let dist = Mat::from_fn(n, n, |i, j| (coords[i] - coords[j]).abs());
        let w = {
            let mut rng = rng_from(72);
            random_weights(&mut rng, 4, n)
        };
        let p = ap_centric(&dist, 2, &w).unwrap();
        assert_eq!(p.beam_label(0), p.beam_label(1));
        assert_eq!(p.beam_label(1), p.beam_label(2));
        assert_eq!(p.beam_label(3), p.beam_label(4));
        assert_eq!(p.beam_label(4), p.beam_label(5));
        assert_ne!(p.beam_label(0), p.beam_label(3));

        // The blob split is also the exhaustive optimum of the max union
        // radius over all 2-partitions.
        let mut best_mask = 0u32;
        let mut best_val = f64::INFINITY;
        for mask in 1..(1u32 << (n - 1)) {
            let left: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let right: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 0).collect();
            if left.is_empty() || right.is_empty() {
                continue;
            }
            let val = minimax_radius(&left, &dist)
                .unwrap()
                .1
                .max(minimax_radius(&right, &dist).unwrap().1);
            if val < best_val {
                best_val = val;
                best_mask = mask;
            }
        }
        let oracle: Vec<usize> = (0..n).map(|i| (best_mask >> i & 1) as usize).collect();
        assert_eq!(&oracle[..3], &[1, 1, 1]);
        assert_eq!(&oracle[3..], &[0, 0, 0]);
    }

    #[test]
    fn ap_centric_users_follow_best_beam() {
        let mut rng = rng_from(73);
        for _ in 0..10 {
            let w = random_weights(&mut rng, 7, 6);
            let coords: Vec<f64> = (0..6).map(|_| rng.random_range(0.0..1.0)).collect();
            let dist = Mat::from_fn(6, 6, |i, j| (coords[i] - coords[j]).abs());
            for m in 1..=6 {
                let p = ap_centric(&dist, m, &w).unwrap();
                assert_eq!(p.num_subnets(), m);
                for (k, &best) in w.best_beam.iter().enumerate() {
                    assert_eq!(p.user_label(k), p.beam_label(best));
                }
            }
        }
    }

    #[test]
    fn angular_distance_basics() {
        assert_eq!(beam_angular_distance(0.3, 0.3), 0.0);
        // First and last beams are adjacent under wrap-around.
        assert_eq!(beam_angular_distance(1.0, -1.0), 0.0);
        assert_eq!(beam_angular_distance(0.5, 0.0), 0.5);
        assert_eq!(beam_angular_distance(0.0, 0.5), 0.5);
    }

    #[test]
    fn angular_matrix_wraps_at_codebook_edges() {
        let d = angular_beam_distances(8);
        // Adjacent beams are 2/N apart in cosine space.
        assert!((d[(0, 1)] - 0.25).abs() < 1e-12);
        // Edge beams nearly wrap onto each other.
        assert!(d[(0, 7)] < d[(0, 4)]);
    }

    #[test]
    fn euclidean_matrix_zeroes_same_ap_beams() {
        let t = Topology::new(
            crate::topology::Region::Square { side: 2.0 },
            vec![[0.0, 0.0], [1.0, 0.0]],
            vec![[0.5, 0.5]],
            vec![2, 1],
            0,
        )
        .unwrap();
        let d = euclidean_beam_distances(&t);
        assert_eq!(d[(0, 1)], 0.0);
        assert_eq!(d[(0, 2)], 1.0);
        assert_eq!(d[(2, 1)], 1.0);
    }
}
