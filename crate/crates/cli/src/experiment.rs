//! Sweep execution and result files.
//!
//! A sweep runs the configured algorithm once per sweep value, each over the
//! same `realizations` Monte Carlo topologies (common random numbers across
//! sweep values), and writes one CSV row per value plus a JSON sidecar that
//! echoes the config and the derived per-realization seeds.

use std::fs;
use std::path::{Path, PathBuf};

use netdecomp_core::{
    derive_seed, monte_carlo, rc_netdecomp, realize_instance, Algorithm, DecompositionResult,
    MetricsReport, Realization, SimSetup,
};
use serde_json::json;

use crate::config::{AlgorithmKind, ExperimentConfig};
use crate::error::{CliError, Result};

pub const CSV_HEADER: &str =
    "sweep_value,R_bar,R_min_bar,R_var_bar,M_star_bar,C_max_bar,P_off_bar,realizations";

pub const REALIZATIONS_CSV_HEADER: &str =
    "sweep_value,realization,seed,R,R_min,R_var,M_star,C_max,P_off";

/// One CSV row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub report: MetricsReport,
}

/// In-memory result of a sweep run.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub csv_path: PathBuf,
    pub realizations_csv_path: PathBuf,
    pub json_path: PathBuf,
}

pub fn sim_setup(config: &ExperimentConfig) -> SimSetup {
    SimSetup {
        scenario: config.scenario.clone(),
        users: config.users,
        region: config.region(),
        alpha: config.alpha,
        p_t: config.p_t(),
        sigma2: 1.0,
    }
}

fn algorithm_for(config: &ExperimentConfig, sweep_value: f64) -> Algorithm {
    match config.algorithm {
        AlgorithmKind::RcNetDecomp => Algorithm::RcNetDecomp { r_th: sweep_value },
        AlgorithmKind::UserCentric => Algorithm::UserCentric {
            s: sweep_value as usize,
        },
        AlgorithmKind::ApCentric => Algorithm::ApCentric {
            m: sweep_value as usize,
        },
    }
}

/// Serialize the report rows to CSV. Floats use the shortest round-trip
/// representation, so re-parsing reproduces the values bit for bit.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let r = &row.report;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.sweep_value,
            r.r_bar,
            r.r_min_bar,
            r.r_var_bar,
            r.m_star_bar,
            r.c_max_bar,
            r.p_off_bar,
            r.realizations
        ));
    }
    out
}

/// One row per (sweep value, realization) with the raw metric tuple and the
/// realization's topology seed.
pub fn to_realizations_csv(rows: &[SweepRow], master_seed: u64) -> String {
    let mut out = String::from(REALIZATIONS_CSV_HEADER);
    out.push('\n');
    for row in rows {
        for (index, sample) in row.report.samples.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                row.sweep_value,
                index,
                derive_seed(master_seed, index as u64),
                sample.r_mean,
                sample.r_min,
                sample.r_var,
                sample.m_star,
                sample.c_max,
                sample.p_off
            ));
        }
    }
    out
}

/// Parse a CSV produced by [`to_csv`] back into `(sweep_value, metric
/// columns..., realizations)` tuples.
pub fn parse_csv(text: &str) -> Result<Vec<(f64, [f64; 6], usize)>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Runtime("empty CSV".into()))?;
    if header != CSV_HEADER {
        return Err(CliError::Runtime(format!("unexpected CSV header '{header}'")));
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(CliError::Runtime(format!("bad CSV row '{line}'")));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|e| CliError::Runtime(format!("bad CSV number '{s}': {e}")))
        };
        let mut cols = [0.0; 6];
        for (i, c) in cols.iter_mut().enumerate() {
            *c = num(fields[i + 1])?;
        }
        let realizations = fields[7]
            .parse()
            .map_err(|e| CliError::Runtime(format!("bad realization count: {e}")))?;
        rows.push((num(fields[0])?, cols, realizations));
    }
    Ok(rows)
}

fn config_json(config: &ExperimentConfig) -> serde_json::Value {
    let scenario = match &config.scenario {
        netdecomp_core::Scenario::CellFree { aps } => json!({"kind": "cellfree", "l": aps}),
        netdecomp_core::Scenario::SingleCell { beams } => {
            json!({"kind": "singlecell", "n": beams})
        }
        netdecomp_core::Scenario::General { beams_per_ap } => {
            json!({"kind": "general", "beams_per_ap": beams_per_ap})
        }
    };
    json!({
        "scenario": scenario,
        "k": config.users,
        "alpha": config.alpha,
        "p_t_over_sigma2_db": config.p_t_over_sigma2_db,
        "algorithm": config.algorithm.as_str(),
        "sweep_variable": config.sweep_variable.as_str(),
        "sweep_values": config.sweep_values,
        "realizations": config.realizations,
        "master_seed": config.master_seed,
        "region_size": config.region_size,
    })
}

/// Run the full sweep and write `sweep.csv` and `sweep.json` under `out`.
pub fn run_experiment(config: &ExperimentConfig, out: &Path) -> Result<SweepOutput> {
    let setup = sim_setup(config);
    let mut rows = Vec::with_capacity(config.sweep_values.len());
    for &value in &config.sweep_values {
        let algorithm = algorithm_for(config, value);
        let report = monte_carlo(&setup, &algorithm, config.realizations, config.master_seed)
            .map_err(|e| {
                CliError::Runtime(format!("sweep value {value} failed: {e}"))
            })?;
        if report.non_finite_excluded > 0 {
            eprintln!(
                "warning: sweep value {value}: {} realization(s) had non-finite metrics, \
                 excluded from the means",
                report.non_finite_excluded
            );
        }
        rows.push(SweepRow {
            sweep_value: value,
            report,
        });
    }

    fs::create_dir_all(out).map_err(CliError::io(out.display().to_string()))?;
    let csv_path = out.join("sweep.csv");
    let realizations_csv_path = out.join("realizations.csv");
    let json_path = out.join("sweep.json");
    fs::write(&csv_path, to_csv(&rows)).map_err(CliError::io(csv_path.display().to_string()))?;
    fs::write(
        &realizations_csv_path,
        to_realizations_csv(&rows, config.master_seed),
    )
    .map_err(CliError::io(realizations_csv_path.display().to_string()))?;

    let seeds: Vec<u64> = (0..config.realizations)
        .map(|i| derive_seed(config.master_seed, i as u64))
        .collect();
    let sidecar = json!({
        "config": config_json(config),
        "realization_seeds": seeds,
        "outputs": {"csv": "sweep.csv", "realizations_csv": "realizations.csv"},
    });
    fs::write(&json_path, serde_json::to_string_pretty(&sidecar).unwrap())
        .map_err(CliError::io(json_path.display().to_string()))?;

    Ok(SweepOutput {
        rows,
        csv_path,
        realizations_csv_path,
        json_path,
    })
}

/// A single-instance decomposition: realization 0 of the configured setup
/// (or of an overridden master seed).
pub struct DecomposeOutcome {
    pub realization: Realization,
    pub result: Option<DecompositionResult>,
    pub partition: netdecomp_core::Partition,
    pub metrics: netdecomp_core::RealizationMetrics,
}

pub fn decompose_once(config: &ExperimentConfig, master_seed: u64) -> Result<DecomposeOutcome> {
    let setup = sim_setup(config);
    let realization = realize_instance(&setup, master_seed, 0)
        .map_err(|e| CliError::Runtime(format!("realization failed: {e}")))?;
    let value = config.sweep_values[0];
    let (result, partition) = match config.algorithm {
        AlgorithmKind::RcNetDecomp => {
            let r = rc_netdecomp(
                &realization.weights,
                &realization.gains,
                value,
                setup.p_t,
                setup.sigma2,
                realization.seed,
            )?;
            (Some(r.clone()), r.partition)
        }
        _ => {
            let algorithm = algorithm_for(config, value);
            let p = netdecomp_core::run_algorithm(&setup, &algorithm, &realization)?;
            (None, p)
        }
    };
    let metrics =
        netdecomp_core::partition_metrics(&partition, &realization.gains, setup.p_t, setup.sigma2);
    Ok(DecomposeOutcome {
        realization,
        result,
        partition,
        metrics,
    })
}

/// JSON report for a decomposition run.
pub fn decompose_report(config: &ExperimentConfig, outcome: &DecomposeOutcome) -> serde_json::Value {
    let partition_lines: Vec<String> = outcome
        .partition
        .to_text()
        .lines()
        .map(str::to_string)
        .collect();
    let m = &outcome.metrics;
    let mut report = json!({
        "algorithm": config.algorithm.as_str(),
        "parameter": {config.sweep_variable.as_str(): config.sweep_values[0]},
        "seed": outcome.realization.seed,
        "m_star": outcome.partition.num_subnets(),
        "partition": partition_lines,
        "metrics": {
            "R": m.r_mean,
            "R_min": m.r_min,
            "R_var": m.r_var,
            "C_max": m.c_max,
            "P_off": m.p_off,
        },
    });
    if let Some(result) = &outcome.result {
        report["rate_constraint"] = json!({
            "r_th": result.budget.r_th,
            "beta": result.budget.beta,
            "sumcut_budget": json_f64(result.budget.budget),
            "sumcut_achieved": result.sumcut_achieved,
            "feasible": result.feasible,
            "trace": result
                .per_m_trace
                .iter()
                .map(|p| json!({"m": p.m, "sumcut": p.sumcut, "accepted": p.accepted}))
                .collect::<Vec<_>>(),
        });
    }
    report
}

/// JSON has no infinity literal; render it as a string token.
fn json_f64(v: f64) -> serde_json::Value {
    if v.is_finite() {
        json!(v)
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentConfig;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig::parse(
            "\
scenario cellfree
l 8
k 4
alpha 4
p_t_over_sigma2_db 0
algorithm rc-netdecomp
sweep r_th 0 1
realizations 3
master_seed 5
",
        )
        .unwrap()
    }

    #[test]
    fn csv_round_trips_bit_for_bit() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_experiment(&small_config(), dir.path()).unwrap();
        let text = std::fs::read_to_string(&out.csv_path).unwrap();
        let parsed = parse_csv(&text).unwrap();
        assert_eq!(parsed.len(), out.rows.len());
        for (row, (value, cols, realizations)) in out.rows.iter().zip(&parsed) {
            assert_eq!(row.sweep_value.to_bits(), value.to_bits());
            let r = &row.report;
            let expect = [
                r.r_bar,
                r.r_min_bar,
                r.r_var_bar,
                r.m_star_bar,
                r.c_max_bar,
                r.p_off_bar,
            ];
            for (a, b) in expect.iter().zip(cols) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
            assert_eq!(*realizations, r.realizations);
        }
    }

    #[test]
    fn realization_csv_reaggregates_to_the_report() {
        let dir = tempfile::tempdir().unwrap();
        let config = small_config();
        let out = run_experiment(&config, dir.path()).unwrap();
        let text = std::fs::read_to_string(&out.realizations_csv_path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), REALIZATIONS_CSV_HEADER);
        // Re-average the R column of the first sweep value; the fold order
        // matches the report's, so the mean matches bit for bit.
        let rates: Vec<f64> = lines
            .clone()
            .filter(|l| l.starts_with("0,"))
            .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
            .collect();
        assert_eq!(rates.len(), config.realizations);
        let mean = rates.iter().sum::<f64>() / rates.len() as f64;
        assert_eq!(mean.to_bits(), out.rows[0].report.r_bar.to_bits());
    }

    #[test]
    fn sidecar_lists_all_realization_seeds() {
        let dir = tempfile::tempdir().unwrap();
        let config = small_config();
        let out = run_experiment(&config, dir.path()).unwrap();
        let sidecar: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out.json_path).unwrap()).unwrap();
        let seeds = sidecar["realization_seeds"].as_array().unwrap();
        assert_eq!(seeds.len(), config.realizations);
        assert_eq!(
            seeds[0].as_u64().unwrap(),
            derive_seed(config.master_seed, 0)
        );
        assert_eq!(sidecar["config"]["master_seed"].as_u64().unwrap(), 5);
    }

    #[test]
    fn user_centric_s1_sweep_matches_zero_rate_decomposition() {
        // Same master seed, so both sweeps see the same topologies; the
        // nearest-beam structures coincide and so do all metrics.
        let dir_rc = tempfile::tempdir().unwrap();
        let dir_uc = tempfile::tempdir().unwrap();
        let rc = run_experiment(
            &ExperimentConfig::parse(
                "\
scenario cellfree
l 8
k 4
alpha 4
p_t_over_sigma2_db 0
algorithm rc-netdecomp
sweep r_th 0
realizations 4
master_seed 5
",
            )
            .unwrap(),
            dir_rc.path(),
        )
        .unwrap();
        let uc = run_experiment(
            &ExperimentConfig::parse(
                "\
scenario cellfree
l 8
k 4
alpha 4
p_t_over_sigma2_db 0
algorithm user-centric
sweep s 1
realizations 4
master_seed 5
",
            )
            .unwrap(),
            dir_uc.path(),
        )
        .unwrap();
        assert_eq!(rc.rows[0].report, uc.rows[0].report);
    }

    #[test]
    fn reruns_are_byte_identical() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let config = small_config();
        run_experiment(&config, a.path()).unwrap();
        run_experiment(&config, b.path()).unwrap();
        let ca = std::fs::read(a.path().join("sweep.csv")).unwrap();
        let cb = std::fs::read(b.path().join("sweep.csv")).unwrap();
        assert_eq!(ca, cb);
    }

    #[test]
    fn decompose_produces_consistent_report() {
        let config = small_config();
        let outcome = decompose_once(&config, config.master_seed).unwrap();
        let report = decompose_report(&config, &outcome);
        assert_eq!(report["m_star"].as_u64().unwrap(), 8);
        assert_eq!(
            report["rate_constraint"]["sumcut_budget"].as_str().unwrap(),
            "inf"
        );
        let lines = report["partition"].as_array().unwrap();
        assert_eq!(lines.len(), 8);
    }
}
