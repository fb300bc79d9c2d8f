//! `shed` — command-line front end for the ice-shedding solver.
//!
//! Exit codes: 0 when the analysis completed (whether or not anything
//! shed), 1 for input errors (bad flags, unreadable or invalid case
//! files), 2 for internal failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use shed_core::driver::{build_step_mesh, run_and_emit, CaseConfig, DriverError, RotorConfig};
use shed_core::mesh::write_native;
use shed_core::quasi3d::{extrude, load_manifest, ExtrudeError};
use shed_core::shedding::{Criterion, SheddingConfig, SheddingError};
use shed_core::strength::StrengthModel;

#[derive(Parser)]
#[command(
    name = "shed",
    version,
    about = "Predicts when and where accreted ice sheds from a rotating blade"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a multi-step icing case described by a config file.
    Run(RunArgs),
    /// Analyze a single ice mesh with built-in strength curves.
    Analyze(AnalyzeArgs),
    /// Extrude a 2D section manifest into a tetrahedral mesh file.
    Extrude(ExtrudeArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Case configuration file.
    #[arg(long)]
    case: PathBuf,
    /// Directory for the report and per-step force CSVs.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    search: SearchOverrides,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Ice mesh: an extrusion manifest, a Gmsh `.msh` file, or the native
    /// mesh format.
    #[arg(long)]
    mesh: PathBuf,
    /// Rotor speed in revolutions per minute.
    #[arg(long)]
    rpm: f64,
    /// Ambient temperature in °C.
    #[arg(long, allow_negative_numbers = true)]
    temp: f64,
    /// Directory for the report and force CSV.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    search: SearchOverrides,
}

#[derive(Args)]
struct ExtrudeArgs {
    /// Extrusion manifest listing the section files.
    #[arg(long)]
    manifest: PathBuf,
    /// Output mesh file (native format).
    #[arg(long)]
    out: PathBuf,
}

/// Search settings that override the case configuration.
#[derive(Args)]
struct SearchOverrides {
    /// Force comparison rule: `sum` (cohesion plus adhesion) or `either`.
    #[arg(long)]
    criterion: Option<Criterion>,
    /// Bracket width at which the location search stops, metres.
    #[arg(long, allow_negative_numbers = true)]
    tolerance: Option<f64>,
}

impl SearchOverrides {
    fn apply(&self, cfg: &mut SheddingConfig) -> Result<(), CliError> {
        if let Some(c) = self.criterion {
            cfg.criterion = c;
        }
        if let Some(t) = self.tolerance {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::input(format!(
                    "--tolerance must be a positive length in metres, got {t}"
                )));
            }
            cfg.z_tolerance = t;
        }
        Ok(())
    }
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn input(message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
            code: 1,
        }
    }

    fn internal(message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
            code: 2,
        }
    }
}

/// Sorts a driver failure into "the inputs were bad" versus "the solver
/// or the filesystem let us down".
fn classify(err: DriverError) -> CliError {
    match &err {
        DriverError::Config { .. }
        | DriverError::Invalid(_)
        | DriverError::Step { .. }
        | DriverError::Strength(_) => CliError::input(err.to_string()),
        DriverError::Shedding(s) => match s {
            SheddingError::InvalidConfig(_) | SheddingError::Strength(_) => {
                CliError::input(err.to_string())
            }
            SheddingError::TooFewSamples { .. } | SheddingError::InvalidSamples => {
                CliError::internal(err.to_string())
            }
        },
        DriverError::Io(_) => CliError::internal(err.to_string()),
    }
}

fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    // An unreadable case file is an input error even though I/O failures
    // during emission are internal ones.
    let mut case = CaseConfig::from_file(&args.case).map_err(|e| match e {
        DriverError::Io(io) => CliError::input(format!("case file {}: {io}", args.case.display())),
        other => classify(other),
    })?;
    args.search.apply(&mut case.shedding)?;
    let (report, _) = run_and_emit(&case, &args.out).map_err(classify)?;
    print_summary(&report.shed_time, &report.shed_location, report.steps.len());
    println!("report written to {}", args.out.join("report.json").display());
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    // A one-step case around the mesh: built-in strength curves, and the
    // accretion interval fixed at one second so the reported shedding time
    // equals the step index.
    let mut case = CaseConfig {
        rotor: RotorConfig {
            radius: 1.0,
            rpm: args.rpm,
            collective_pitch: 0.0,
            twist: 0.0,
            chord: 0.0,
        },
        temperature: args.temp,
        accretion_dt: 1.0,
        density: 900.0,
        steps: vec![args.mesh.clone()],
        strength: StrengthModel::with_defaults(),
        shedding: SheddingConfig::default(),
        msh_adhesion_tags: vec![1],
        msh_flow_tags: vec![2],
        annotations: vec![],
    };
    let mesh = build_step_mesh(&case, &args.mesh)
        .map_err(|m| CliError::input(format!("mesh {}: {m}", args.mesh.display())))?;
    let tip = mesh.span_extent().map(|(_, hi)| hi).unwrap_or(0.0);
    if !(tip > 0.0) {
        return Err(CliError::input(format!(
            "mesh {} has no spanwise extent to analyze",
            args.mesh.display()
        )));
    }
    case.rotor.radius = tip;
    case.shedding = SheddingConfig::for_radius(tip);
    args.search.apply(&mut case.shedding)?;

    let (report, _) = run_and_emit(&case, &args.out).map_err(classify)?;
    print_summary(&report.shed_time, &report.shed_location, report.steps.len());
    println!("report written to {}", args.out.join("report.json").display());
    Ok(())
}

fn cmd_extrude(args: &ExtrudeArgs) -> Result<(), CliError> {
    let spec = load_manifest(&args.manifest).map_err(|e| match e {
        ExtrudeError::Io(io) => CliError::input(format!(
            "manifest {}: {io}",
            args.manifest.display()
        )),
        other => CliError::input(other.to_string()),
    })?;
    // The native format stores geometry only; density is supplied again
    // when the mesh is loaded into a case.
    let mesh = extrude(&spec, 900.0).map_err(|e| CliError::input(e.to_string()))?;
    std::fs::write(&args.out, write_native(&mesh))
        .map_err(|e| CliError::internal(format!("writing {}: {e}", args.out.display())))?;
    println!(
        "extruded {} tetrahedra ({} nodes) to {}",
        mesh.tets.len(),
        mesh.nodes.len(),
        args.out.display()
    );
    Ok(())
}

fn print_summary(shed_time: &Option<f64>, shed_location: &Option<f64>, steps: usize) {
    match (shed_time, shed_location) {
        (Some(t), Some(loc)) => {
            println!("shed at t = {t:.16e} s, z_s/R = {loc:.16e}");
        }
        _ => println!("no shedding within {steps} step(s)"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors; everything else is
            // bad input.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Extrude(args) => cmd_extrude(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
