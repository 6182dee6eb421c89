//! `molcirc`: optimize graph-derived circuits for small molecules.
//!
//! Exit codes: 0 on success, 1 for configuration or usage problems, 2 for
//! numerical or resource failures during an otherwise valid run.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand};

use molcirc_cli::config::ExperimentConfig;
use molcirc_cli::{pipeline, report};
use molcirc_core::fci::fci_ground_state;
use molcirc_core::integrals::write_fcidump;
use molcirc_core::{Error, ErrorKind};

#[derive(Parser)]
#[command(
    name = "molcirc",
    version,
    about = "Optimize graph-derived molecular circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize the configured ansatz ladder and report every stage.
    Run(RunArgs),
    /// Sweep a diatomic bond length with the configured ansatz.
    Scan(ScanArgs),
    /// Build the molecular integrals and summarize or export them.
    Integrals(IntegralsArgs),
    /// Exact ground-state energy in the configured particle sector.
    Fci(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Refuse to simulate systems needing more qubits than this.
    #[arg(long, default_value_t = 16)]
    max_qubits: usize,
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report rendering.
    #[arg(long, default_value = "table", value_parser = ["json", "csv", "table"])]
    format: String,
    /// Reserved for stochastic optimizers; the current pipeline is
    /// deterministic and ignores it.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    out: OutputArgs,
    /// First bond length (Ångström).
    #[arg(long, default_value_t = 0.5)]
    from: f64,
    /// Last bond length (inclusive).
    #[arg(long, default_value_t = 3.5)]
    to: f64,
    #[arg(long, default_value_t = 0.1)]
    step: f64,
}

#[derive(Args)]
struct IntegralsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Write an FCIDUMP file here instead of printing a summary.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e.kind() {
                ErrorKind::Config => ExitCode::from(1),
                ErrorKind::Numerical => ExitCode::from(2),
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run(args) => {
            let config = load(&args.common)?;
            let report = pipeline::run_experiment(&config)?;
            let text = match args.out.format.as_str() {
                "json" => report.to_json(),
                "csv" => report::to_csv(std::slice::from_ref(&report)),
                _ => report::to_table(std::slice::from_ref(&report)),
            };
            emit(args.out.output.as_deref(), &text)
        }
        Command::Scan(args) => {
            let config = load(&args.common)?;
            let points = pipeline::run_scan(&config, args.from, args.to, args.step)?;
            let text = match args.out.format.as_str() {
                "json" => serde_json::to_string_pretty(&points).expect("points serialize"),
                format => {
                    let reports: Vec<_> = points.into_iter().map(|p| p.report).collect();
                    if format == "csv" {
                        report::to_csv(&reports)
                    } else {
                        report::to_table(&reports)
                    }
                }
            };
            emit(args.out.output.as_deref(), &text)
        }
        Command::Integrals(args) => {
            let config = load(&args.common)?;
            let ints = pipeline::load_integrals(&config)?;
            match args.output {
                Some(path) => {
                    let ms2 = config.two_s_z.unwrap_or((ints.n_electrons % 2) as i32);
                    write_fcidump(path, &ints, ms2)
                }
                None => {
                    println!(
                        "{}: {} orbitals, {} electrons, offset {:.9} Ha",
                        config.system, ints.n_orbitals, ints.n_electrons, ints.e_offset
                    );
                    for k in 0..ints.n_orbitals {
                        println!("  h[{k}][{k}] = {:+.9}", ints.h[(k, k)]);
                    }
                    Ok(())
                }
            }
        }
        Command::Fci(args) => {
            let config = load(&args)?;
            let ints = pipeline::load_integrals(&config)?;
            let two_s_z = config.two_s_z.unwrap_or((ints.n_electrons % 2) as i32);
            let ground = fci_ground_state(&ints, ints.n_electrons, two_s_z)?;
            println!(
                "{}: E_FCI = {:.9} Ha ({} electrons, 2Sz = {two_s_z})",
                config.system, ground.energy, ints.n_electrons
            );
            Ok(())
        }
    }
}

fn load(common: &CommonArgs) -> Result<ExperimentConfig, Error> {
    let config = ExperimentConfig::from_path(&common.config)?;
    let ints = pipeline::load_integrals(&config)?;
    let requested = 2 * ints.n_orbitals;
    if requested > common.max_qubits {
        return Err(Error::QubitCapExceeded {
            requested,
            cap: common.max_qubits,
        });
    }
    Ok(config)
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}
