//! Multi-step case orchestration.
//!
//! A *case* is one icing scenario: rotor geometry and speed, the ambient
//! temperature, the material strength curves, and an ordered list of ice
//! shapes — one per accretion time step, each either a ready-made mesh file
//! or an extrusion manifest. [`run_multistep`] walks the steps in order,
//! builds each mesh, evaluates the spanwise force profile and the shedding
//! search, and stops at the first step that sheds: the shedding time is that
//! step's index times the accretion interval, which is the finest time
//! resolution a multi-step analysis has.
//!
//! [`emit_report`] writes the results as one force-curve CSV per evaluated
//! step plus a JSON report, all with full-precision numbers so re-running a
//! case reproduces the files byte for byte.

mod config;
mod report;

pub use config::{CaseConfig, RotorConfig};
pub use report::emit_report;

use std::path::{Path, PathBuf};

use crate::forces::{force_profile, ForceCurve};
use crate::mesh::{load_mesh, IceMesh, MeshFormat};
use crate::quasi3d::{extrude, load_manifest};
use crate::shedding::{find_shedding, SheddingError, SheddingResult};

#[derive(Debug, thiserror::Error)]
pub enum DriverError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("invalid case: {0}")]
    Invalid(String),
    #[error("step {index} ({path}): {message}")]
    Step {
        index: usize,
        path: String,
        message: String,
    },
    #[error(transparent)]
    Strength(#[from] crate::strength::StrengthError),
    #[error(transparent)]
    Shedding(#[from] SheddingError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Everything computed for one accretion step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    /// 1-based step number.
    pub index: usize,
    /// The mesh source the step was built from, as given in the case.
    pub source: String,
    /// Spanwise force profile at the subdivision planes of the first pass.
    pub forces: ForceCurve,
    pub shedding: SheddingResult,
}

/// Outcome of a multi-step run. Steps after the first shedding event are
/// never evaluated (their ice would have departed already).
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub case: CaseConfig,
    pub steps: Vec<StepReport>,
    /// 1-based index of the first step that shed, if any.
    pub shed_step: Option<usize>,
    /// Shedding time in seconds: shed step index × accretion interval.
    pub shed_time: Option<f64>,
    /// Shedding location as a fraction of the rotor radius.
    pub shed_location: Option<f64>,
}

/// Builds the ice mesh for one step source, dispatching on the file
/// extension: `.manifest` extrudes 2D sections, `.msh` reads Gmsh, anything
/// else reads the native mesh format.
pub fn build_step_mesh(case: &CaseConfig, path: &Path) -> Result<IceMesh, String> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("manifest") => {
            let spec = load_manifest(path).map_err(|e| e.to_string())?;
            extrude(&spec, case.density).map_err(|e| e.to_string())
        }
        Some("msh") => load_mesh(
            path,
            &MeshFormat::Msh {
                adhesion_tags: case.msh_adhesion_tags.clone(),
                flow_tags: case.msh_flow_tags.clone(),
            },
            case.density,
        )
        .map_err(|e| e.to_string()),
        _ => load_mesh(path, &MeshFormat::Native, case.density).map_err(|e| e.to_string()),
    }
}

/// Runs the shedding analysis over every accretion step of a case, in
/// order, stopping at the first step that sheds.
pub fn run_multistep(case: &CaseConfig) -> Result<RunReport, DriverError> {
    case.validate().map_err(DriverError::Invalid)?;
    let omega = case.rotor.rpm * 2.0 * std::f64::consts::PI / 60.0;
    let sigma_c = case.strength.cohesion_strength(case.temperature)?;
    let tau_a = case.strength.adhesion_strength(case.temperature)?;

    let mut steps = Vec::new();
    let mut shed_step = None;
    let mut shed_time = None;
    let mut shed_location = None;

    for (i, path) in case.steps.iter().enumerate() {
        let index = i + 1;
        let source = path.display().to_string();
        let step_err = |message: String| DriverError::Step {
            index,
            path: source.clone(),
            message,
        };

        let mesh = build_step_mesh(case, path).map_err(&step_err)?;
        let forces = force_profile(&mesh, omega, sigma_c, tau_a, case.shedding.n_subdivisions);
        let shedding = find_shedding(&mesh, omega, &case.strength, case.temperature, &case.shedding)
            .map_err(|e| step_err(e.to_string()))?;

        let shed_here = shedding.shed;
        let z_s = shedding.z_s;
        steps.push(StepReport {
            index,
            source,
            forces,
            shedding,
        });
        if shed_here {
            shed_step = Some(index);
            shed_time = Some(index as f64 * case.accretion_dt);
            shed_location = z_s.map(|z| z / case.rotor.radius);
            break;
        }
    }

    Ok(RunReport {
        case: case.clone(),
        steps,
        shed_step,
        shed_time,
        shed_location,
    })
}

/// File name of the force-curve CSV for a 1-based step index.
pub fn forces_csv_name(index: usize) -> String {
    format!("step_{index}_forces.csv")
}

/// Convenience: run a case and write all artifacts to `out_dir`. Returns
/// the report and the list of files written.
pub fn run_and_emit(
    case: &CaseConfig,
    out_dir: &Path,
) -> Result<(RunReport, Vec<PathBuf>), DriverError> {
    let report = run_multistep(case)?;
    let files = emit_report(&report, out_dir)?;
    Ok((report, files))
}
