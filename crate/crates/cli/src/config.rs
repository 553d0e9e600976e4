//! Experiment configuration: a flat key/value text file, one `key value...`
//! pair per line, `#` comments allowed. See the README for the schema.

use netdecomp_core::{Region, Scenario};

use crate::error::{CliError, Result};

/// Which decomposer a sweep drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmKind {
    RcNetDecomp,
    UserCentric,
    ApCentric,
}

impl AlgorithmKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AlgorithmKind::RcNetDecomp => "rc-netdecomp",
            AlgorithmKind::UserCentric => "user-centric",
            AlgorithmKind::ApCentric => "ap-centric",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "rc-netdecomp" => Ok(AlgorithmKind::RcNetDecomp),
            "user-centric" => Ok(AlgorithmKind::UserCentric),
            "ap-centric" => Ok(AlgorithmKind::ApCentric),
            other => Err(CliError::Config(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// The swept variable; must agree with the algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    RateThreshold,
    CellSize,
    SubnetCount,
}

impl SweepVariable {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVariable::RateThreshold => "r_th",
            SweepVariable::CellSize => "s",
            SweepVariable::SubnetCount => "m",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "r_th" => Ok(SweepVariable::RateThreshold),
            "s" => Ok(SweepVariable::CellSize),
            "m" => Ok(SweepVariable::SubnetCount),
            other => Err(CliError::Config(format!("unknown sweep variable '{other}'"))),
        }
    }
}

/// Parsed and validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub users: usize,
    pub alpha: f64,
    /// `P_t / sigma^2` in dB; internally `P_t = 10^(dB/10)`, `sigma^2 = 1`.
    pub p_t_over_sigma2_db: f64,
    pub algorithm: AlgorithmKind,
    pub sweep_variable: SweepVariable,
    pub sweep_values: Vec<f64>,
    pub realizations: usize,
    pub master_seed: u64,
    /// Region side (square scenarios) or radius (single-cell).
    pub region_size: f64,
}

impl ExperimentConfig {
    pub fn num_beams(&self) -> usize {
        self.scenario.num_beams()
    }

    pub fn region(&self) -> Region {
        self.scenario.region(self.region_size)
    }

    /// Linear `P_t` with the noise variance normalized to 1.
    pub fn p_t(&self) -> f64 {
        10f64.powf(self.p_t_over_sigma2_db / 10.0)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut scenario_name = None;
        let mut l = None;
        let mut n = None;
        let mut beams_per_ap: Option<Vec<usize>> = None;
        let mut k = None;
        let mut alpha = None;
        let mut db = None;
        let mut algorithm = None;
        let mut sweep: Option<(SweepVariable, Vec<f64>)> = None;
        let mut realizations = None;
        let mut master_seed = None;
        let mut region_size = None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap();
            let bad = |what: &str| {
                CliError::Config(format!("line {}: {what}", lineno + 1))
            };
            let mut one = || -> Result<&str> {
                parts.next().ok_or_else(|| bad("missing value"))
            };
            match key {
                "scenario" => scenario_name = Some(one()?.to_string()),
                "l" => l = Some(parse_num::<usize>(one()?, lineno)?),
                "n" => n = Some(parse_num::<usize>(one()?, lineno)?),
                "k" => k = Some(parse_num::<usize>(one()?, lineno)?),
                "alpha" => alpha = Some(parse_num::<f64>(one()?, lineno)?),
                "p_t_over_sigma2_db" => db = Some(parse_num::<f64>(one()?, lineno)?),
                "algorithm" => algorithm = Some(AlgorithmKind::parse(one()?)?),
                "realizations" => realizations = Some(parse_num::<usize>(one()?, lineno)?),
                "master_seed" => master_seed = Some(parse_num::<u64>(one()?, lineno)?),
                "region_size" => region_size = Some(parse_num::<f64>(one()?, lineno)?),
                "beams_per_ap" => {
                    let values: Result<Vec<usize>> =
                        parts.by_ref().map(|v| parse_num::<usize>(v, lineno)).collect();
                    beams_per_ap = Some(values?);
                }
                "sweep" => {
                    let variable = SweepVariable::parse(one()?)?;
                    let values: Result<Vec<f64>> =
                        parts.by_ref().map(|v| parse_num::<f64>(v, lineno)).collect();
                    sweep = Some((variable, values?));
                }
                other => return Err(bad(&format!("unknown key '{other}'"))),
            }
        }

        let missing = |what: &str| CliError::Config(format!("missing key '{what}'"));
        let scenario_name = scenario_name.ok_or_else(|| missing("scenario"))?;
        let scenario = match scenario_name.as_str() {
            "cellfree" => Scenario::CellFree {
                aps: l.ok_or_else(|| missing("l"))?,
            },
            "singlecell" => Scenario::SingleCell {
                beams: n.ok_or_else(|| missing("n"))?,
            },
            "general" => Scenario::General {
                beams_per_ap: beams_per_ap.ok_or_else(|| missing("beams_per_ap"))?,
            },
            other => {
                return Err(CliError::Config(format!("unknown scenario '{other}'")));
            }
        };
        let (sweep_variable, sweep_values) = sweep.ok_or_else(|| missing("sweep"))?;
        let config = ExperimentConfig {
            scenario,
            users: k.ok_or_else(|| missing("k"))?,
            alpha: alpha.ok_or_else(|| missing("alpha"))?,
            p_t_over_sigma2_db: db.ok_or_else(|| missing("p_t_over_sigma2_db"))?,
            algorithm: algorithm.ok_or_else(|| missing("algorithm"))?,
            sweep_variable,
            sweep_values,
            realizations: realizations.ok_or_else(|| missing("realizations"))?,
            master_seed: master_seed.ok_or_else(|| missing("master_seed"))?,
            region_size: region_size.unwrap_or(1.0),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_beams();
        if self.users == 0 {
            return Err(CliError::Config("k must be positive".into()));
        }
        if n == 0 {
            return Err(CliError::Config("beam count must be positive".into()));
        }
        if self.alpha.is_nan() || self.alpha <= 0.0 {
            return Err(CliError::Config("alpha must be positive".into()));
        }
        if self.region_size.is_nan() || self.region_size <= 0.0 {
            return Err(CliError::Config("region_size must be positive".into()));
        }
        if self.realizations == 0 {
            return Err(CliError::Config("realizations must be positive".into()));
        }
        if self.sweep_values.is_empty() {
            return Err(CliError::Config("sweep value list is empty".into()));
        }
        let expected = match self.algorithm {
            AlgorithmKind::RcNetDecomp => SweepVariable::RateThreshold,
            AlgorithmKind::UserCentric => SweepVariable::CellSize,
            AlgorithmKind::ApCentric => SweepVariable::SubnetCount,
        };
        if self.sweep_variable != expected {
            return Err(CliError::Config(format!(
                "algorithm {} sweeps {}, not {}",
                self.algorithm.as_str(),
                expected.as_str(),
                self.sweep_variable.as_str()
            )));
        }
        for &v in &self.sweep_values {
            match self.sweep_variable {
                SweepVariable::RateThreshold => {
                    if v < 0.0 {
                        return Err(CliError::Config(format!("r_th {v} is negative")));
                    }
                }
                SweepVariable::CellSize | SweepVariable::SubnetCount => {
                    if v < 1.0 || v.fract() != 0.0 || v > n as f64 {
                        return Err(CliError::Config(format!(
                            "{} value {v} must be an integer in 1..={n}",
                            self.sweep_variable.as_str()
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, lineno: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e| {
        CliError::Config(format!("line {}: bad value '{s}': {e}", lineno + 1))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config() -> String {
        "\
# desk-scale sweep
scenario cellfree
l 20
k 10
alpha 4
p_t_over_sigma2_db 0
algorithm rc-netdecomp
sweep r_th 0 1 2
realizations 5
master_seed 42
"
        .to_string()
    }

    #[test]
    fn parses_a_full_config() {
        let c = ExperimentConfig::parse(&base_config()).unwrap();
        assert_eq!(c.scenario, Scenario::CellFree { aps: 20 });
        assert_eq!(c.users, 10);
        assert_eq!(c.sweep_values, vec![0.0, 1.0, 2.0]);
        assert_eq!(c.region_size, 1.0);
        assert_eq!(c.p_t(), 1.0);
    }

    #[test]
    fn singlecell_and_general_scenarios() {
        let sc = base_config()
            .replace("scenario cellfree\nl 20", "scenario singlecell\nn 32");
        let c = ExperimentConfig::parse(&sc).unwrap();
        assert_eq!(c.scenario, Scenario::SingleCell { beams: 32 });

        let general = base_config()
            .replace("scenario cellfree\nl 20", "scenario general\nbeams_per_ap 2 3 1");
        let c = ExperimentConfig::parse(&general).unwrap();
        assert_eq!(c.num_beams(), 6);
    }

    #[test]
    fn rejects_mismatched_sweep_variable() {
        let bad = base_config().replace("sweep r_th 0 1 2", "sweep s 1 2");
        let err = ExperimentConfig::parse(&bad).unwrap_err();
        assert!(err.to_string().contains("sweeps"));
    }

    #[test]
    fn rejects_empty_sweep() {
        let bad = base_config().replace("sweep r_th 0 1 2", "sweep r_th");
        assert!(ExperimentConfig::parse(&bad).is_err());
    }

    #[test]
    fn rejects_out_of_range_subnet_counts() {
        let bad = base_config()
            .replace("algorithm rc-netdecomp", "algorithm ap-centric")
            .replace("sweep r_th 0 1 2", "sweep m 25");
        assert!(ExperimentConfig::parse(&bad).is_err());
        let good = base_config()
            .replace("algorithm rc-netdecomp", "algorithm ap-centric")
            .replace("sweep r_th 0 1 2", "sweep m 2 20");
        assert!(ExperimentConfig::parse(&good).is_ok());
    }

    #[test]
    fn rejects_unknown_keys_and_missing_keys() {
        assert!(ExperimentConfig::parse("bogus 1\n").is_err());
        let missing = base_config().replace("master_seed 42\n", "");
        assert!(ExperimentConfig::parse(&missing).is_err());
    }

    #[test]
    fn db_conversion_is_linear_power() {
        let c = ExperimentConfig::parse(&base_config().replace(
            "p_t_over_sigma2_db 0",
            "p_t_over_sigma2_db 10",
        ))
        .unwrap();
        assert!((c.p_t() - 10.0).abs() < 1e-12);
    }
}
