//! Weighted bipartite user-beam graph: normalized edge weights, adjacency,
//! and the cut / sumcut functions that drive the decomposition.
//!
//! Edge weights are the per-user normalized gains `w = g / max_n g`, so every
//! user has exactly one weight-1 edge (to its best beam) and comparable
//! connectivity on the graph regardless of its absolute channel quality.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::topology::GainMatrix;

/// Row-normalized edge weights plus each user's best beam.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    /// `K x N` weights in `[0, 1]`; every row has max exactly 1.
    pub w: Mat,
    /// `best_beam[k]` is the argmax of user `k`'s gains, ties broken by the
    /// lowest beam index.
    pub best_beam: Vec<usize>,
}

impl WeightMatrix {
    pub fn num_users(&self) -> usize {
        self.w.rows()
    }

    pub fn num_beams(&self) -> usize {
        self.w.cols()
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> f64 {
        self.w.sum()
    }
}

/// Normalize every gain row by its maximum. Errors if a row is all zero.
pub fn edge_weights(gains: &GainMatrix) -> Result<WeightMatrix> {
    let k = gains.num_users();
    let n = gains.num_beams();
    let mut best_beam = Vec::with_capacity(k);
    let mut w = Mat::zeros(k, n);
    for u in 0..k {
        let (best, max) = gains.row_max(u);
        if max <= 0.0 {
            return Err(Error::ZeroGainRow { user: u });
        }
        best_beam.push(best);
        for b in 0..n {
            w[(u, b)] = gains.values[(u, b)] / max;
        }
    }
    Ok(WeightMatrix { w, best_beam })
}

/// Materialize the `(K+N) x (K+N)` adjacency `[0 W; W^T 0]`. Vertices are
/// ordered users first, then beams. Intended for tests and small instances;
/// cuts never need it because the diagonal blocks are zero.
pub fn adjacency(w: &WeightMatrix) -> Mat {
    let k = w.num_users();
    let n = w.num_beams();
    Mat::from_fn(k + n, k + n, |i, j| {
        if i < k && j >= k {
            w.w[(i, j - k)]
        } else if i >= k && j < k {
            w.w[(j, i - k)]
        } else {
            0.0
        }
    })
}

/// Assignment of every user and beam to one of `M` disjoint subnetworks.
///
/// Labels are `0..M` internally; the serialized form and displays use the
/// 1-based ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    num_subnets: usize,
    user_labels: Vec<usize>,
    beam_labels: Vec<usize>,
}

impl Partition {
    /// Build from per-vertex labels, checking that every label in
    /// `0..num_subnets` is used and none is out of range.
    pub fn from_labels(
        num_subnets: usize,
        user_labels: Vec<usize>,
        beam_labels: Vec<usize>,
    ) -> Result<Self> {
        if num_subnets == 0 {
            return Err(Error::InvalidParameter("need at least one subnetwork".into()));
        }
        let mut used = vec![false; num_subnets];
        for &l in user_labels.iter().chain(&beam_labels) {
            if l >= num_subnets {
                return Err(Error::InvalidParameter(format!(
                    "label {l} out of range 0..{num_subnets}"
                )));
            }
            used[l] = true;
        }
        if let Some(label) = used.iter().position(|&u| !u) {
            return Err(Error::EmptyLabel { label });
        }
        Ok(Partition {
            num_subnets,
            user_labels,
            beam_labels,
        })
    }

    /// Number of subnetworks `M`.
    pub fn num_subnets(&self) -> usize {
        self.num_subnets
    }

    pub fn num_users(&self) -> usize {
        self.user_labels.len()
    }

    pub fn num_beams(&self) -> usize {
        self.beam_labels.len()
    }

    pub fn user_label(&self, k: usize) -> usize {
        self.user_labels[k]
    }

    pub fn beam_label(&self, n: usize) -> usize {
        self.beam_labels[n]
    }

    pub fn user_labels(&self) -> &[usize] {
        &self.user_labels
    }

    pub fn beam_labels(&self) -> &[usize] {
        &self.beam_labels
    }

    /// Users in subnetwork `m`.
    pub fn users_of(&self, m: usize) -> Vec<usize> {
        (0..self.user_labels.len())
            .filter(|&k| self.user_labels[k] == m)
            .collect()
    }

    /// Beams in subnetwork `m`.
    pub fn beams_of(&self, m: usize) -> Vec<usize> {
        (0..self.beam_labels.len())
            .filter(|&n| self.beam_labels[n] == m)
            .collect()
    }

    /// `(user count, beam count)` per subnetwork.
    pub fn subnet_sizes(&self) -> Vec<(usize, usize)> {
        let mut sizes = vec![(0usize, 0usize); self.num_subnets];
        for &l in &self.user_labels {
            sizes[l].0 += 1;
        }
        for &l in &self.beam_labels {
            sizes[l].1 += 1;
        }
        sizes
    }

    /// True when every subnetwork contains at least one beam, i.e. every
    /// user in it can actually be served.
    pub fn all_subnets_serve(&self) -> bool {
        self.subnet_sizes().iter().all(|&(_, beams)| beams > 0)
    }

    /// Relabel subnetworks deterministically: ordered by their lowest beam
    /// index, with beam-less subnetworks (possible only in hand-built test
    /// partitions) ordered after all serving ones by lowest user index.
    pub fn canonicalize(&self) -> Partition {
        let m = self.num_subnets;
        let mut key = vec![(usize::MAX, usize::MAX); m];
        for (n, &l) in self.beam_labels.iter().enumerate() {
            if key[l].0 == usize::MAX {
                key[l].0 = n;
            }
        }
        for (k, &l) in self.user_labels.iter().enumerate() {
            if key[l].1 == usize::MAX {
                key[l].1 = k;
            }
        }
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&l| key[l]);
        let mut relabel = vec![0usize; m];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new;
        }
        Partition {
            num_subnets: m,
            user_labels: self.user_labels.iter().map(|&l| relabel[l]).collect(),
            beam_labels: self.beam_labels.iter().map(|&l| relabel[l]).collect(),
        }
    }

    /// Plain-text serialization: one line per subnetwork with 1-based
    /// `u<k>` / `b<n>` tokens, users first.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for m in 0..self.num_subnets {
            let mut tokens: Vec<String> =
                self.users_of(m).iter().map(|k| format!("u{}", k + 1)).collect();
            tokens.extend(self.beams_of(m).iter().map(|n| format!("b{}", n + 1)));
            let _ = writeln!(out, "{}", tokens.join(" "));
        }
        out
    }

    /// Parse the serialization produced by [`Partition::to_text`] for a
    /// graph with `num_users` users and `num_beams` beams. Every vertex must
    /// appear exactly once.
    pub fn from_text(text: &str, num_users: usize, num_beams: usize) -> Result<Self> {
        let mut user_labels = vec![usize::MAX; num_users];
        let mut beam_labels = vec![usize::MAX; num_beams];
        let mut m = 0;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            for token in line.split_whitespace() {
                let (kind, id) = token.split_at(1);
                let id: usize = id
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad vertex token '{token}'")))?;
                if id == 0 {
                    return Err(Error::Parse(format!("vertex ids are 1-based: '{token}'")));
                }
                let slot = match kind {
                    "u" => user_labels
                        .get_mut(id - 1)
                        .ok_or_else(|| Error::Parse(format!("user id {id} out of range")))?,
                    "b" => beam_labels
                        .get_mut(id - 1)
                        .ok_or_else(|| Error::Parse(format!("beam id {id} out of range")))?,
                    _ => return Err(Error::Parse(format!("bad vertex token '{token}'"))),
                };
                if *slot != usize::MAX {
                    return Err(Error::Parse(format!("vertex '{token}' listed twice")));
                }
                *slot = m;
            }
            m += 1;
        }
        if let Some(k) = user_labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Parse(format!("user {} missing", k + 1)));
        }
        if let Some(n) = beam_labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Parse(format!("beam {} missing", n + 1)));
        }
        Partition::from_labels(m, user_labels, beam_labels)
    }
}

/// Cut of an arbitrary vertex set given by membership masks: total weight of
/// edges with exactly one endpoint inside.
pub fn cut_of_set(users_in: &[bool], beams_in: &[bool], w: &WeightMatrix) -> f64 {
    let mut cut = 0.0;
    for (k, &user_in) in users_in.iter().enumerate() {
        for (n, &beam_in) in beams_in.iter().enumerate() {
            if user_in != beam_in {
                cut += w.w[(k, n)];
            }
        }
    }
    cut
}

/// Cut of subnetwork `m`: sum of edge weights crossing its boundary.
pub fn cut(partition: &Partition, m: usize, w: &WeightMatrix) -> Result<f64> {
    if m >= partition.num_subnets() {
        return Err(Error::InvalidParameter(format!(
            "subnetwork {m} out of range 0..{}",
            partition.num_subnets()
        )));
    }
    let mut total = 0.0;
    for k in 0..w.num_users() {
        for n in 0..w.num_beams() {
            if (partition.user_label(k) == m) != (partition.beam_label(n) == m) {
                total += w.w[(k, n)];
            }
        }
    }
    Ok(total)
}

/// Sum of cuts over all subnetworks. Each inter-subnetwork edge crosses two
/// boundaries, so this equals twice the total inter-subnetwork weight.
pub fn sumcut(partition: &Partition, w: &WeightMatrix) -> f64 {
    let mut total = 0.0;
    for k in 0..w.num_users() {
        for n in 0..w.num_beams() {
            if partition.user_label(k) != partition.beam_label(n) {
                total += 2.0 * w.w[(k, n)];
            }
        }
    }
    total
}
