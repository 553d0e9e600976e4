//! Rate evaluation and Monte Carlo metric aggregation.
//!
//! Rates use the sparse-beamspace SINR approximation: the signal comes from
//! the user's best beam and interference from every beam outside its
//! subnetwork, with intra-subnetwork interference assumed cancelled by the
//! precoder. Zero-forcing needs at least as many beams as users per
//! subnetwork; a subnetwork that violates this serves nobody.

use crate::baselines::{angular_beam_distances, ap_centric, euclidean_beam_distances, user_centric};
use crate::error::{Error, Result};
use crate::graph::{edge_weights, sumcut, Partition, WeightMatrix};
use crate::netdecomp::rc_netdecomp;
use crate::rng::derive_seed;
use crate::topology::{GainMatrix, Region, Scenario, Topology};

/// SINR of user `k` under the given partition.
///
/// Zero when the user's subnetwork has more users than beams; otherwise
/// `P_t g* / (sum of P_t g over out-of-subnetwork beams + sigma2)`. An
/// interference- and noise-free denominator yields the infinite sentinel.
pub fn user_sinr(
    k: usize,
    partition: &Partition,
    gains: &GainMatrix,
    p_t: f64,
    sigma2: f64,
) -> f64 {
    let m = partition.user_label(k);
    let sizes = partition.subnet_sizes();
    let (users_in, beams_in) = sizes[m];
    if users_in > beams_in {
        return 0.0;
    }
    let (_, best_gain) = gains.row_max(k);
    let mut interference = 0.0;
    for n in 0..gains.num_beams() {
        if partition.beam_label(n) != m {
            interference += p_t * gains.values[(k, n)];
        }
    }
    let denom = interference + sigma2;
    if denom == 0.0 {
        return f64::INFINITY;
    }
    p_t * best_gain / denom
}

/// Achievable rate `log2(1 + mu)` in bit/s/Hz.
pub fn user_rate(mu: f64) -> f64 {
    (1.0 + mu).log2()
}

/// Average rate over all users.
pub fn per_user_rate(partition: &Partition, gains: &GainMatrix, p_t: f64, sigma2: f64) -> f64 {
    let k = gains.num_users();
    let total: f64 = (0..k)
        .map(|u| user_rate(user_sinr(u, partition, gains, p_t, sigma2)))
        .sum();
    total / k as f64
}

/// Closed form of the Jensen lower bound given the sumcut value.
pub fn rate_lower_bound_value(num_users: usize, beta: f64, sumcut: f64) -> f64 {
    let denom = beta + sumcut / 2.0;
    if denom == 0.0 {
        return f64::INFINITY;
    }
    (1.0 + num_users as f64 / denom).log2()
}

/// Jensen lower bound on the average per-user rate of a partition:
/// `log2(1 + K / (beta + sumcut/2))`.
pub fn rate_lower_bound(partition: &Partition, w: &WeightMatrix, beta: f64) -> f64 {
    rate_lower_bound_value(w.num_users(), beta, sumcut(partition, w))
}

/// Metrics of a single realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizationMetrics {
    /// Average per-user rate.
    pub r_mean: f64,
    /// Minimum user rate.
    pub r_min: f64,
    /// Population variance of the user rates.
    pub r_var: f64,
    /// Number of subnetworks.
    pub m_star: f64,
    /// Largest subnetwork size in vertices (users + beams).
    pub c_max: f64,
    /// Fraction of beams sitting in user-free subnetworks.
    pub p_off: f64,
}

impl RealizationMetrics {
    pub fn as_array(&self) -> [f64; 6] {
        [
            self.r_mean,
            self.r_min,
            self.r_var,
            self.m_star,
            self.c_max,
            self.p_off,
        ]
    }
}

/// Evaluate all per-realization metrics for a partition.
pub fn partition_metrics(
    partition: &Partition,
    gains: &GainMatrix,
    p_t: f64,
    sigma2: f64,
) -> RealizationMetrics {
    let k = gains.num_users();
    let n = gains.num_beams();
    let rates: Vec<f64> = (0..k)
        .map(|u| user_rate(user_sinr(u, partition, gains, p_t, sigma2)))
        .collect();
    let r_mean = rates.iter().sum::<f64>() / k as f64;
    let r_min = rates.iter().cloned().fold(f64::INFINITY, f64::min);
    let r_var = rates.iter().map(|r| (r - r_mean).powi(2)).sum::<f64>() / k as f64;

    let sizes = partition.subnet_sizes();
    let c_max = sizes.iter().map(|&(u, b)| u + b).max().unwrap_or(0);
    let off_beams: usize = sizes
        .iter()
        .filter(|&&(users, _)| users == 0)
        .map(|&(_, beams)| beams)
        .sum();

    RealizationMetrics {
        r_mean,
        r_min,
        r_var,
        m_star: partition.num_subnets() as f64,
        c_max: c_max as f64,
        p_off: off_beams as f64 / n as f64,
    }
}

/// Scenario-level simulation parameters shared by all realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct SimSetup {
    pub scenario: Scenario,
    pub users: usize,
    pub region: Region,
    /// Path-loss exponent.
    pub alpha: f64,
    /// Transmit power per beam.
    pub p_t: f64,
    /// Noise variance.
    pub sigma2: f64,
}

impl SimSetup {
    /// Setup with the scenario's default unit-scale region.
    pub fn new(scenario: Scenario, users: usize, alpha: f64, p_t: f64, sigma2: f64) -> Self {
        let region = scenario.region(1.0);
        SimSetup {
            scenario,
            users,
            region,
            alpha,
            p_t,
            sigma2,
        }
    }
}

/// Which decomposer to run on each realization.
#[derive(Debug, Clone, PartialEq)]
pub enum Algorithm {
    RcNetDecomp { r_th: f64 },
    UserCentric { s: usize },
    ApCentric { m: usize },
}

/// One realized instance: topology, gains, and normalized weights.
#[derive(Debug, Clone)]
pub struct Realization {
    pub seed: u64,
    pub topology: Topology,
    pub gains: GainMatrix,
    pub weights: WeightMatrix,
}

/// Materialize realization `index` of a Monte Carlo run. The per-realization
/// seed is derived from `(master_seed, index)`, so any realization can be
/// regenerated in isolation.
pub fn realize_instance(setup: &SimSetup, master_seed: u64, index: usize) -> Result<Realization> {
    let seed = derive_seed(master_seed, index as u64);
    let topology = setup.scenario.generate(setup.users, setup.region, seed)?;
    let gains = setup.scenario.gains(&topology, setup.alpha)?;
    let weights = edge_weights(&gains)?;
    Ok(Realization {
        seed,
        topology,
        gains,
        weights,
    })
}

/// Run one algorithm on a realized instance.
pub fn run_algorithm(
    setup: &SimSetup,
    algorithm: &Algorithm,
    real: &Realization,
) -> Result<Partition> {
    match algorithm {
        Algorithm::RcNetDecomp { r_th } => Ok(rc_netdecomp(
            &real.weights,
            &real.gains,
            *r_th,
            setup.p_t,
            setup.sigma2,
            real.seed,
        )?
        .partition),
        Algorithm::UserCentric { s } => user_centric(&real.weights, *s),
        Algorithm::ApCentric { m } => {
            let dist = match setup.scenario {
                Scenario::SingleCell { beams } => angular_beam_distances(beams),
                _ => euclidean_beam_distances(&real.topology),
            };
            ap_centric(&dist, *m, &real.weights)
        }
    }
}

/// Aggregated metrics over a Monte Carlo run, plus the per-realization
/// samples they were computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub r_bar: f64,
    pub r_min_bar: f64,
    pub r_var_bar: f64,
    pub m_star_bar: f64,
    pub c_max_bar: f64,
    pub p_off_bar: f64,
    pub realizations: usize,
    /// Realizations whose metrics contained a non-finite value; those values
    /// are excluded from the means above.
    pub non_finite_excluded: usize,
    pub samples: Vec<RealizationMetrics>,
}

/// Mean of the finite values of one metric column, folding in realization
/// order so re-aggregation reproduces the report bit for bit.
fn column_mean(samples: &[RealizationMetrics], col: usize) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for s in samples {
        let v = s.as_array()[col];
        if v.is_finite() {
            sum += v;
            count += 1;
        }
    }
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

/// Aggregate stored samples into a report.
pub fn aggregate(samples: Vec<RealizationMetrics>) -> MetricsReport {
    let non_finite_excluded = samples
        .iter()
        .filter(|s| s.as_array().iter().any(|v| !v.is_finite()))
        .count();
    MetricsReport {
        r_bar: column_mean(&samples, 0),
        r_min_bar: column_mean(&samples, 1),
        r_var_bar: column_mean(&samples, 2),
        m_star_bar: column_mean(&samples, 3),
        c_max_bar: column_mean(&samples, 4),
        p_off_bar: column_mean(&samples, 5),
        realizations: samples.len(),
        non_finite_excluded,
        samples,
    }
}

/// Monte Carlo estimate of the metrics: independent topologies from
/// `(master_seed, index)`, one decomposition each, arithmetic means across
/// realizations. Deterministic in the master seed.
pub fn monte_carlo(
    setup: &SimSetup,
    algorithm: &Algorithm,
    realizations: usize,
    master_seed: u64,
) -> Result<MetricsReport> {
    if realizations == 0 {
        return Err(Error::InvalidParameter("need at least one realization".into()));
    }
    let mut samples = Vec::with_capacity(realizations);
    for index in 0..realizations {
        let real = realize_instance(setup, master_seed, index)?;
        let partition = run_algorithm(setup, algorithm, &real)?;
        samples.push(partition_metrics(
            &partition,
            &real.gains,
            setup.p_t,
            setup.sigma2,
        ));
    }
    Ok(aggregate(samples))
}
