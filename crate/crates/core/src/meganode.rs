//! Coarsening of the bipartite graph to the meganode graph.
//!
//! Each beam absorbs the users whose best beam it is (the weight-1 edges),
//! producing an `N`-vertex graph whose edge weights aggregate the remaining
//! user-beam weights. Partitions of the meganode graph lift back to full
//! user+beam partitions with identical cuts, and every meganode contains a
//! beam, so lifted subnetworks always serve their users.

use crate::error::{Error, Result};
use crate::graph::{Partition, WeightMatrix};
use crate::matrix::Mat;

/// The coarsened graph: `N` meganodes, one per beam.
#[derive(Debug, Clone, PartialEq)]
pub struct MeganodeGraph {
    /// Symmetric `N x N` edge weights with zero diagonal.
    pub w_tilde: Mat,
    /// `users[i]` lists the users merged into meganode `i` (those with best
    /// beam `i`), in ascending order.
    pub users: Vec<Vec<usize>>,
}

impl MeganodeGraph {
    /// Number of meganodes (= beams).
    pub fn len(&self) -> usize {
        self.w_tilde.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Total number of merged vertices, `K + N`.
    pub fn total_vertices(&self) -> usize {
        self.len() + self.users.iter().map(Vec::len).sum::<usize>()
    }

    /// Cut of the meganodes labelled `label` under `assignment`.
    pub fn cut_of(&self, assignment: &[usize], label: usize) -> f64 {
        let mut total = 0.0;
        for (i, &a_i) in assignment.iter().enumerate() {
            if a_i != label {
                continue;
            }
            for (j, &a_j) in assignment.iter().enumerate() {
                if a_j != label {
                    total += self.w_tilde[(i, j)];
                }
            }
        }
        total
    }

    /// Sum of cuts over all labels: twice the weight crossing label
    /// boundaries.
    pub fn sumcut_of(&self, assignment: &[usize]) -> f64 {
        let n = self.len();
        let mut total = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                if assignment[i] != assignment[j] {
                    total += 2.0 * self.w_tilde[(i, j)];
                }
            }
        }
        total
    }
}

/// Merge each beam with its weight-1 users.
///
/// The meganode edge weight is the total bipartite weight between the two
/// member sets: `w~[i][j] = sum_{k in v_i} w[k][j] + sum_{k in v_j} w[k][i]`.
/// A user whose best-gain value ties across several beams joins the
/// lowest-index one (inherited from the edge-weight argmax tie-break), so
/// the meganodes stay disjoint.
pub fn build_meganodes(w: &WeightMatrix) -> MeganodeGraph {
    let n = w.num_beams();
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, &best) in w.best_beam.iter().enumerate() {
        users[best].push(k);
    }
    let mut w_tilde = Mat::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let mut sum = 0.0;
            for &k in &users[i] {
                sum += w.w[(k, j)];
            }
            for &k in &users[j] {
                sum += w.w[(k, i)];
            }
            w_tilde[(i, j)] = sum;
            w_tilde[(j, i)] = sum;
        }
    }
    MeganodeGraph { w_tilde, users }
}

/// Expand a meganode assignment into a full user+beam partition: beam `i`
/// takes its meganode's label and every merged user follows its beam.
///
/// `assignment` must label all meganodes and use every label in
/// `0..num_labels` at least once.
pub fn lift_partition(
    mg: &MeganodeGraph,
    assignment: &[usize],
    num_labels: usize,
) -> Result<Partition> {
    if assignment.len() != mg.len() {
        return Err(Error::InvalidParameter(format!(
            "assignment covers {} of {} meganodes",
            assignment.len(),
            mg.len()
        )));
    }
    let num_users: usize = mg.users.iter().map(Vec::len).sum();
    let mut user_labels = vec![0usize; num_users];
    for (i, members) in mg.users.iter().enumerate() {
        for &k in members {
            user_labels[k] = assignment[i];
        }
    }
    Partition::from_labels(num_labels, user_labels, assignment.to_vec())
}
