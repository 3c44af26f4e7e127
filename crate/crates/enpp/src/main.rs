use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use enpp::config::{parse_config, Mode, RunConfig};
use enpp::error::{AppError, AppResult, ConfigError};
use enpp::invlimit::inviscid_experiment;
use enpp::report::{fmt_f64, invariant_name};
use enpp::run::{check_trajectory, run_iterate, run_simulation};
use enpp::snapshot::Snapshot;
use enpp_core::littlewood_paley::besov_norm;
use enpp_core::{BesovSpec, DyadicPartition, VectorField};

#[derive(Parser)]
#[command(name = "enpp", version, about = "Spectral ENPP/NSNPP solver and Besov diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate to the final time, writing snapshots and report.csv.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Exit with status 1 when an invariant is violated.
        #[arg(long)]
        strict: bool,
        /// Shift p to the mean of n instead of rejecting non-neutral data.
        #[arg(long)]
        renormalize_charge: bool,
        /// Override run.output_dir.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Picard iteration and lifespan bound.
    Iterate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        strict: bool,
        /// Shift p to the mean of n instead of rejecting non-neutral data.
        #[arg(long)]
        renormalize_charge: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Viscosity sweep against the inviscid run; writes rates.csv.
    Invlimit {
        #[arg(long)]
        config: PathBuf,
        /// Shift p to the mean of n instead of rejecting non-neutral data.
        #[arg(long)]
        renormalize_charge: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the Besov norm of one snapshot.
    BesovNorm {
        /// Snapshot file.
        #[arg(long)]
        field: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, value_parser = parse_exponent)]
        p: f64,
        #[arg(long, value_parser = parse_exponent)]
        r: f64,
        /// Field index inside the snapshot; without it a state snapshot is
        /// measured through its velocity and a single-field file through
        /// that field.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Re-check invariants on a snapshot directory.
    Check {
        #[arg(long)]
        trajectory: PathBuf,
    },
}

fn parse_exponent(s: &str) -> Result<f64, String> {
    match s {
        "inf" | "infinity" | "Inf" => Ok(f64::INFINITY),
        _ => s
            .parse::<f64>()
            .ok()
            .filter(|x| *x >= 1.0)
            .ok_or_else(|| format!("expected a number ≥ 1 or \"inf\", got {s:?}")),
    }
}

fn load(config: &PathBuf, mode: Mode, output: Option<PathBuf>, renormalize_charge: bool) -> AppResult<RunConfig> {
    let mut c = parse_config(config)?;
    if c.run.mode != mode {
        return Err(ConfigError::new(None, format!(
            "run.mode is \"{}\" but the {} subcommand was used",
            c.run.mode.name(),
            mode.name()
        ))
        .into());
    }
    c.initial.renormalize_charge |= renormalize_charge;
    if let Some(dir) = output {
        c.run.output_dir = dir.to_string_lossy().into_owned();
    }
    Ok(c)
}

fn execute(command: Command) -> AppResult<i32> {
    match command {
        Command::Simulate { config, strict, renormalize_charge, output } => {
            let c = load(&config, Mode::Simulate, output, renormalize_charge)?;
            let outcome = run_simulation(&c)?;
            for v in &outcome.report.violations {
                eprintln!(
                    "violation: {} at t = {} (value {}, bound {})",
                    invariant_name(v.invariant),
                    fmt_f64(v.t),
                    fmt_f64(v.value),
                    fmt_f64(v.bound)
                );
            }
            eprintln!(
                "{} steps of {}, {} samples, blow-up integral {}",
                outcome.plan.steps,
                fmt_f64(outcome.plan.dt),
                outcome.report.samples.len(),
                fmt_f64(outcome.blowup.total())
            );
            Ok(outcome.exit_code(strict || c.run.strict))
        }
        Command::Iterate { config, strict, renormalize_charge, output } => {
            let c = load(&config, Mode::Iterate, output, renormalize_charge)?;
            let outcome = run_iterate(&c)?;
            let r = &outcome.report;
            eprintln!(
                "{} iterations, converged = {}, final difference {}",
                r.iterations,
                r.converged,
                r.differences.last().copied().map(fmt_f64).unwrap_or_default()
            );
            let ok = r.converged && !r.non_contracting;
            Ok(if (strict || c.run.strict) && !ok { 1 } else { 0 })
        }
        Command::Invlimit { config, renormalize_charge, output } => {
            let c = load(&config, Mode::Invlimit, output, renormalize_charge)?;
            let outcome = inviscid_experiment(&c)?;
            print!("{}", outcome.fit.summary());
            Ok(0)
        }
        Command::BesovNorm { field, s, p, r, index } => {
            let spec = BesovSpec::new(s, p, r)?;
            let snap = Snapshot::load(&field)?;
            let partition = DyadicPartition::new(&snap.grid);
            let d = snap.grid.dim();
            let norm = match index {
                Some(k) => {
                    let f = snap
                        .fields
                        .get(k)
                        .ok_or_else(|| AppError::input(&field, format!("no field with index {k}")))?;
                    besov_norm(&partition, f, spec)?
                }
                None if snap.fields.len() == d + 2 => {
                    let u = VectorField::new(snap.fields[..d].to_vec())?;
                    besov_norm(&partition, &u, spec)?
                }
                None if snap.fields.len() == 1 => besov_norm(&partition, &snap.fields[0], spec)?,
                None => return Err(AppError::input(&field, "several fields; pick one with --index")),
            };
            println!("{norm}");
            Ok(0)
        }
        Command::Check { trajectory } => {
            let (report, blowup) = check_trajectory(&trajectory)?;
            for v in &report.violations {
                println!(
                    "violation: {} at t = {} (value {}, bound {})",
                    invariant_name(v.invariant),
                    fmt_f64(v.t),
                    fmt_f64(v.value),
                    fmt_f64(v.bound)
                );
            }
            println!(
                "{} samples, {} violations, blow-up integral {}",
                report.samples.len(),
                report.violations.len(),
                fmt_f64(blowup.total())
            );
            Ok(if report.is_clean() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
