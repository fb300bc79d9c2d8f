//! Prediction of ice shedding from rotating blades.
//!
//! Ice accreted on a rotor blade is held in place by adhesion to the blade
//! surface and by its own internal cohesion, while rotation loads it
//! centrifugally. This crate models the accreted ice as a tetrahedral mesh,
//! cuts it with planes normal to the blade span, and compares the centrifugal
//! pull on the material outboard of each cut against the resisting cohesive
//! and adhesive forces. The outcome is whether a piece of ice departs, and if
//! so where along the span and with what mass.
//!
//! The crate is organised around that pipeline:
//!
//! * [`mesh`] — tetrahedral ice meshes, file loading, validation
//! * [`quasi3d`] — building 3D ice meshes by extruding 2D ice sections
//! * [`clipping`] — exact tetrahedron/plane clipping and mesh partitioning
//! * [`forces`] — centrifugal, cohesion and adhesion force evaluation
//! * [`strength`] — temperature-dependent material strength curves
//! * [`shedding`] — the iterative cutting search and its force-fitting fallback
//! * [`driver`] — multi-step case orchestration, reports, configuration
//!
//! All geometry is expressed in a blade-fixed frame in SI units, with the
//! span axis pointing from the rotation axis towards the blade tip.

pub mod clipping;
pub mod driver;
pub mod forces;
pub mod mesh;
pub mod quasi3d;
pub mod shedding;
pub mod strength;

/// 3D vector/point type used throughout the crate (metres for positions).
pub type Vec3 = nalgebra::Vector3<f64>;

/// 2D point type for ice cross-sections in the airfoil-local frame (metres).
pub type Vec2 = nalgebra::Vector2<f64>;

pub use clipping::{partition, ClipResult, ClippedElement, ClippedFace, CuttingPlane, PieceDecomposition};
pub use driver::{run_multistep, CaseConfig, DriverError, RotorConfig, RunReport, StepReport};
pub use forces::{
    adhesion_force, centrifugal_force, cohesion_force, force_profile, ForceCurve, ForceSample,
};
pub use mesh::{load_mesh, BoundaryFace, FaceLabel, IceMesh, MeshError, MeshFormat, Node, Tetrahedron};
pub use quasi3d::{
    extrude, interpolate_section, load_manifest, load_section, resample_section, ExtrudeError,
    ExtrusionSpec, IceSection,
};
pub use shedding::{
    check_shedding, find_shedding, force_fit, iterative_cut, Criterion, IterationRecord,
    PlaneRecord, SheddingConfig, SheddingError, SheddingResult,
};
pub use strength::{CurveSpec, StrengthError, StrengthModel};
