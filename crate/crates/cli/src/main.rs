//! `netdecomp`: decompose cell-free wireless networks into independent
//! subnetworks under a per-user rate constraint.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use netdecomp_cli::{
    decompose_once, decompose_report, render_snapshot, run_experiment, selftest, CliError,
    ExperimentConfig, Result, SnapshotStyle,
};
use netdecomp_core::{Partition, Topology};

#[derive(Parser)]
#[command(
    name = "netdecomp",
    about = "Rate-constrained decomposition of cell-free wireless networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a single random instance and write its report.
    Decompose {
        /// Experiment config file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Also write an SVG snapshot of the decomposition.
        #[arg(long)]
        svg: bool,
    },
    /// Run the configured metric sweep and write CSV/JSON results.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Render an SVG snapshot from saved topology and partition files.
    Snapshot {
        /// Topology file (plain-text format).
        #[arg(long)]
        topology: PathBuf,
        /// Partition file (plain-text format).
        #[arg(long)]
        partition: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the built-in invariant checks.
    Selftest,
}

fn load_config(path: &PathBuf, seed_override: Option<u64>) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut config = ExperimentConfig::parse(&text)?;
    if let Some(seed) = seed_override {
        config.master_seed = seed;
    }
    Ok(config)
}

fn write_file(path: &PathBuf, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(CliError::io(path.display().to_string()))
}

fn cmd_decompose(config: PathBuf, out: PathBuf, seed: Option<u64>, svg: bool) -> Result<()> {
    let config = load_config(&config, seed)?;
    let outcome = decompose_once(&config, config.master_seed)?;
    fs::create_dir_all(&out).map_err(CliError::io(out.display().to_string()))?;

    let report = decompose_report(&config, &outcome);
    write_file(
        &out.join("decomposition.json"),
        &serde_json::to_string_pretty(&report).unwrap(),
    )?;
    write_file(&out.join("topology.txt"), &outcome.realization.topology.to_text())?;
    write_file(&out.join("partition.txt"), &outcome.partition.to_text())?;
    if svg {
        let style = SnapshotStyle::for_topology(&outcome.realization.topology);
        let doc = render_snapshot(&outcome.realization.topology, &outcome.partition, style)?;
        write_file(&out.join("snapshot.svg"), &doc)?;
    }
    println!(
        "decomposed into {} subnetworks (seed {}); results in {}",
        outcome.partition.num_subnets(),
        outcome.realization.seed,
        out.display()
    );
    Ok(())
}

fn cmd_sweep(config: PathBuf, out: PathBuf, seed: Option<u64>) -> Result<()> {
    let config = load_config(&config, seed)?;
    let output = run_experiment(&config, &out)?;
    println!(
        "swept {} value(s) x {} realization(s); wrote {} and {}",
        output.rows.len(),
        config.realizations,
        output.csv_path.display(),
        output.json_path.display()
    );
    Ok(())
}

fn cmd_snapshot(topology: PathBuf, partition: PathBuf, out: PathBuf) -> Result<()> {
    let topo_text = fs::read_to_string(&topology)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", topology.display())))?;
    let topo = Topology::from_text(&topo_text)
        .map_err(|e| CliError::Config(format!("{}: {e}", topology.display())))?;
    let part_text = fs::read_to_string(&partition)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", partition.display())))?;
    let part = Partition::from_text(&part_text, topo.num_users(), topo.num_beams())
        .map_err(|e| CliError::Config(format!("{}: {e}", partition.display())))?;

    fs::create_dir_all(&out).map_err(CliError::io(out.display().to_string()))?;
    let style = SnapshotStyle::for_topology(&topo);
    let doc = render_snapshot(&topo, &part, style)?;
    let path = out.join("snapshot.svg");
    write_file(&path, &doc)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Decompose {
            config,
            out,
            seed,
            svg,
        } => cmd_decompose(config, out, seed, svg),
        Command::Sweep { config, out, seed } => cmd_sweep(config, out, seed),
        Command::Snapshot {
            topology,
            partition,
            out,
        } => cmd_snapshot(topology, partition, out),
        Command::Selftest => {
            if selftest::run() {
                Ok(())
            } else {
                Err(CliError::Runtime("selftest failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
