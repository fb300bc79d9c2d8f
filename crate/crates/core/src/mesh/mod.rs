//! Tetrahedral ice meshes.
//!
//! An [`IceMesh`] is the volume of accreted ice discretised into tetrahedra,
//! together with a labelled boundary: faces glued to the blade surface carry
//! the [`FaceLabel::Adhesion`] label, faces exposed to the air stream carry
//! [`FaceLabel::Flow`]. Only adhesion faces resist shedding; flow faces exist
//! so the boundary is closed and auditable.
//!
//! Meshes come from the native text format or a Gmsh 2.2 ASCII subset (see
//! [`io`]), or are produced by [`crate::quasi3d::extrude`]. Construction via
//! [`IceMesh::new`] canonicalises tetrahedron orientation and rejects meshes
//! that are not watertight; [`IceMesh::validate`] re-checks an arbitrary mesh
//! and reports every violation instead of failing on the first.

mod io;

pub use io::{load_mesh, parse_msh, parse_native, write_native, MeshFormat};

use std::collections::HashMap;
use std::fmt;

use crate::Vec3;

/// Tetrahedra with |volume| below this are rejected as degenerate (m³).
pub const MIN_TET_VOLUME: f64 = 1e-18;

/// A mesh vertex. `id` always equals the node's index in [`IceMesh::nodes`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub id: usize,
    /// Position in the blade frame, metres.
    pub position: Vec3,
}

/// Four node indices. Canonical orientation has positive signed volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tetrahedron {
    pub nodes: [usize; 4],
}

/// Role of a boundary face in the force balance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceLabel {
    /// Ice–blade interface; resists shedding with the adhesion strength.
    Adhesion,
    /// Ice–air interface; carries no load.
    Flow,
}

/// A labelled triangle on the mesh boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryFace {
    pub nodes: [usize; 3],
    pub label: FaceLabel,
}

/// Tetrahedral mesh of one accreted ice volume.
///
/// A mesh with no tetrahedra is permitted and represents "no ice yet"
/// (e.g. the first accretion step of a run); `validate` still flags the
/// zero total volume so the state is visible.
#[derive(Debug, Clone, PartialEq)]
pub struct IceMesh {
    pub nodes: Vec<Node>,
    pub tets: Vec<Tetrahedron>,
    pub boundary: Vec<BoundaryFace>,
    /// Unit vector along the blade span. Mesh files and extrusions use +z.
    pub span_axis: Vec3,
    /// Ice density, kg/m³.
    pub density: f64,
}

/// Errors raised while building or loading a mesh.
#[derive(Debug, thiserror::Error)]
pub enum MeshError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("mesh topology error: {0}")]
    Topology(String),
    #[error("degenerate tetrahedron {tet}: volume {volume:.3e} m³")]
    DegenerateElement { tet: usize, volume: f64 },
    #[error("ice density must be positive and finite, got {0}")]
    InvalidDensity(f64),
    #[error("span axis must have nonzero length")]
    InvalidAxis,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One invariant breach found by [`IceMesh::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NodeIdMismatch { index: usize, id: usize },
    NonFiniteCoordinate { node: usize },
    InvalidNodeRef { tet: usize, node: usize },
    InvalidFaceRef { face: usize, node: usize },
    RepeatedNodeInTet { tet: usize },
    RepeatedNodeInFace { face: usize },
    DegenerateTet { tet: usize, volume: f64 },
    InvertedTet { tet: usize, volume: f64 },
    NonManifoldFace { nodes: [usize; 3], owners: usize },
    UnlabelledBoundaryFace { nodes: [usize; 3] },
    OrphanBoundaryFace { face: usize },
    DuplicateBoundaryFace { face: usize },
    DanglingNode { node: usize },
    InvalidDensity { density: f64 },
    InvalidSpanAxis,
    ZeroTotalVolume,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NodeIdMismatch { index, id } => {
                write!(f, "node at index {index} has id {id}")
            }
            Violation::NonFiniteCoordinate { node } => {
                write!(f, "node {node} has a non-finite coordinate")
            }
            Violation::InvalidNodeRef { tet, node } => {
                write!(f, "tet {tet} references missing node {node}")
            }
            Violation::InvalidFaceRef { face, node } => {
                write!(f, "boundary face {face} references missing node {node}")
            }
            Violation::RepeatedNodeInTet { tet } => write!(f, "tet {tet} repeats a node"),
            Violation::RepeatedNodeInFace { face } => {
                write!(f, "boundary face {face} repeats a node")
            }
            Violation::DegenerateTet { tet, volume } => {
                write!(f, "tet {tet} is degenerate (volume {volume:.3e} m³)")
            }
            Violation::InvertedTet { tet, volume } => {
                write!(f, "tet {tet} is inverted (volume {volume:.3e} m³)")
            }
            Violation::NonManifoldFace { nodes, owners } => write!(
                f,
                "face ({}, {}, {}) is shared by {owners} tets",
                nodes[0], nodes[1], nodes[2]
            ),
            Violation::UnlabelledBoundaryFace { nodes } => write!(
                f,
                "boundary face ({}, {}, {}) has no label entry",
                nodes[0], nodes[1], nodes[2]
            ),
            Violation::OrphanBoundaryFace { face } => {
                write!(f, "labelled face {face} is not on the mesh boundary")
            }
            Violation::DuplicateBoundaryFace { face } => {
                write!(f, "labelled face {face} duplicates another boundary entry")
            }
            Violation::DanglingNode { node } => {
                write!(f, "node {node} is not referenced by any tet")
            }
            Violation::InvalidDensity { density } => {
                write!(f, "density {density} is not positive and finite")
            }
            Violation::InvalidSpanAxis => write!(f, "span axis is not a unit-length vector"),
            Violation::ZeroTotalVolume => write!(f, "mesh has zero total volume"),
        }
    }
}

/// Outcome of [`IceMesh::validate`]: empty means every invariant holds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "mesh is valid")
        } else {
            writeln!(f, "{} violation(s):", self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  - {v}")?;
            }
            Ok(())
        }
    }
}

/// Signed volume of the tetrahedron (p0, p1, p2, p3) in m³.
pub fn signed_tet_volume(p0: Vec3, p1: Vec3, p2: Vec3, p3: Vec3) -> f64 {
    (p1 - p0).cross(&(p2 - p0)).dot(&(p3 - p0)) / 6.0
}

/// Area of the triangle (p0, p1, p2) in m².
pub fn triangle_area(p0: Vec3, p1: Vec3, p2: Vec3) -> f64 {
    (p1 - p0).cross(&(p2 - p0)).norm() / 2.0
}

fn sorted3(nodes: [usize; 3]) -> [usize; 3] {
    let mut s = nodes;
    s.sort_unstable();
    s
}

impl IceMesh {
    /// Builds a mesh, canonicalising tetrahedron orientation (negative-volume
    /// tets have two nodes swapped) and checking every structural invariant.
    ///
    /// An empty mesh (no nodes, tets or faces) is accepted. `span_axis` is
    /// normalised to unit length.
    pub fn new(
        nodes: Vec<Node>,
        tets: Vec<Tetrahedron>,
        boundary: Vec<BoundaryFace>,
        span_axis: Vec3,
        density: f64,
    ) -> Result<IceMesh, MeshError> {
        if !(density.is_finite() && density > 0.0) {
            return Err(MeshError::InvalidDensity(density));
        }
        let norm = span_axis.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(MeshError::InvalidAxis);
        }
        let mut mesh = IceMesh {
            nodes,
            tets,
            boundary,
            span_axis: span_axis / norm,
            density,
        };
        mesh.reorient_tets()?;
        let report = mesh.validate();
        for v in report.violations {
            match v {
                // An empty mesh is a legitimate "no ice" state.
                Violation::ZeroTotalVolume if mesh.tets.is_empty() => continue,
                Violation::DegenerateTet { tet, volume } => {
                    return Err(MeshError::DegenerateElement { tet, volume })
                }
                other => return Err(MeshError::Topology(other.to_string())),
            }
        }
        Ok(mesh)
    }

    fn reorient_tets(&mut self) -> Result<(), MeshError> {
        let positions: Vec<Vec3> = self.nodes.iter().map(|n| n.position).collect();
        for (i, tet) in self.tets.iter_mut().enumerate() {
            if tet.nodes.iter().any(|&n| n >= positions.len()) {
                // Left for validate() to report with full context.
                continue;
            }
            let [a, b, c, d] = tet.nodes;
            let vol = signed_tet_volume(positions[a], positions[b], positions[c], positions[d]);
            if vol.abs() < MIN_TET_VOLUME {
                return Err(MeshError::DegenerateElement { tet: i, volume: vol });
            }
            if vol < 0.0 {
                tet.nodes.swap(2, 3);
            }
        }
        Ok(())
    }

    /// Position of node `id`.
    pub fn position(&self, id: usize) -> Vec3 {
        self.nodes[id].position
    }

    /// Signed volume of tet `i` (positive on a canonical mesh).
    pub fn tet_volume(&self, i: usize) -> f64 {
        let [a, b, c, d] = self.tets[i].nodes;
        signed_tet_volume(
            self.position(a),
            self.position(b),
            self.position(c),
            self.position(d),
        )
    }

    /// Centroid of tet `i` (mean of its four vertices).
    pub fn tet_centroid(&self, i: usize) -> Vec3 {
        let [a, b, c, d] = self.tets[i].nodes;
        (self.position(a) + self.position(b) + self.position(c) + self.position(d)) / 4.0
    }

    /// Sum of signed tet volumes, m³.
    pub fn total_volume(&self) -> f64 {
        (0..self.tets.len()).map(|i| self.tet_volume(i)).sum()
    }

    /// Total ice mass, kg. Empty meshes weigh nothing.
    pub fn total_mass(&self) -> f64 {
        self.density * self.total_volume()
    }

    /// Extent of the mesh along `span_axis`, as `(min, max)` projections.
    /// `None` when the mesh has no nodes.
    pub fn span_extent(&self) -> Option<(f64, f64)> {
        let mut it = self.nodes.iter().map(|n| n.position.dot(&self.span_axis));
        let first = it.next()?;
        let (mut lo, mut hi) = (first, first);
        for z in it {
            lo = lo.min(z);
            hi = hi.max(z);
        }
        Some((lo, hi))
    }

    /// Diagonal of the axis-aligned bounding box (m); 0 for empty meshes.
    /// Used to scale snapping tolerances in the clipping kernel.
    pub fn bbox_diagonal(&self) -> f64 {
        if self.nodes.is_empty() {
            return 0.0;
        }
        let mut lo = self.nodes[0].position;
        let mut hi = lo;
        for n in &self.nodes {
            lo = lo.inf(&n.position);
            hi = hi.sup(&n.position);
        }
        (hi - lo).norm()
    }

    /// Interior faces: triangles shared by exactly two tets, in first-seen
    /// order. The cohesion cut area at a plane needs these when the plane
    /// lies exactly on a mesh layer.
    pub fn interior_faces(&self) -> Vec<[usize; 3]> {
        let mut seen: HashMap<[usize; 3], u32> = HashMap::new();
        let mut order: Vec<[usize; 3]> = Vec::new();
        for tet in &self.tets {
            let [a, b, c, d] = tet.nodes;
            for tri in [[a, b, c], [a, b, d], [a, c, d], [b, c, d]] {
                let key = sorted3(tri);
                let count = seen.entry(key).or_insert(0);
                *count += 1;
                if *count == 2 {
                    order.push(key);
                }
            }
        }
        order
    }

    /// Checks every mesh invariant and reports all violations found.
    ///
    /// Unlike [`IceMesh::new`] this never mutates the mesh; an inverted tet
    /// is reported, not repaired.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.nodes.len();

        for (index, node) in self.nodes.iter().enumerate() {
            if node.id != index {
                violations.push(Violation::NodeIdMismatch { index, id: node.id });
            }
            if !node.position.iter().all(|c| c.is_finite()) {
                violations.push(Violation::NonFiniteCoordinate { node: index });
            }
        }

        if !(self.density.is_finite() && self.density > 0.0) {
            violations.push(Violation::InvalidDensity {
                density: self.density,
            });
        }
        if !((self.span_axis.norm() - 1.0).abs() < 1e-9) {
            violations.push(Violation::InvalidSpanAxis);
        }

        let mut refs_ok = true;
        for (i, tet) in self.tets.iter().enumerate() {
            for &node in &tet.nodes {
                if node >= n {
                    violations.push(Violation::InvalidNodeRef { tet: i, node });
                    refs_ok = false;
                }
            }
            let mut s = tet.nodes;
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                violations.push(Violation::RepeatedNodeInTet { tet: i });
                refs_ok = false;
            }
        }
        for (i, face) in self.boundary.iter().enumerate() {
            for &node in &face.nodes {
                if node >= n {
                    violations.push(Violation::InvalidFaceRef { face: i, node });
                    refs_ok = false;
                }
            }
            let s = sorted3(face.nodes);
            if s[0] == s[1] || s[1] == s[2] {
                violations.push(Violation::RepeatedNodeInFace { face: i });
                refs_ok = false;
            }
        }
        if !refs_ok {
            // Geometry and topology checks would index out of bounds.
            return ValidationReport { violations };
        }

        let mut referenced = vec![false; n];
        let mut total_volume = 0.0;
        for (i, tet) in self.tets.iter().enumerate() {
            for &node in &tet.nodes {
                referenced[node] = true;
            }
            let vol = self.tet_volume(i);
            total_volume += vol;
            if vol.abs() < MIN_TET_VOLUME {
                violations.push(Violation::DegenerateTet { tet: i, volume: vol });
            } else if vol < 0.0 {
                violations.push(Violation::InvertedTet { tet: i, volume: vol });
            }
        }
        for (node, seen) in referenced.iter().enumerate() {
            if !seen {
                violations.push(Violation::DanglingNode { node });
            }
        }

        // Face ownership: every tet face must be shared by exactly two tets
        // (interior) or owned by one tet and labelled (boundary).
        let mut owners: HashMap<[usize; 3], u32> = HashMap::new();
        let mut face_order: Vec<[usize; 3]> = Vec::new();
        for tet in &self.tets {
            let [a, b, c, d] = tet.nodes;
            for tri in [[a, b, c], [a, b, d], [a, c, d], [b, c, d]] {
                let key = sorted3(tri);
                let count = owners.entry(key).or_insert(0);
                if *count == 0 {
                    face_order.push(key);
                }
                *count += 1;
            }
        }
        let mut labelled: HashMap<[usize; 3], u32> = HashMap::new();
        for (i, face) in self.boundary.iter().enumerate() {
            let count = labelled.entry(sorted3(face.nodes)).or_insert(0);
            *count += 1;
            if *count > 1 {
                violations.push(Violation::DuplicateBoundaryFace { face: i });
            }
        }
        for key in &face_order {
            let count = owners[key];
            match count {
                1 => {
                    if !labelled.contains_key(key) {
                        violations.push(Violation::UnlabelledBoundaryFace { nodes: *key });
                    }
                }
                2 => {}
                _ => violations.push(Violation::NonManifoldFace {
                    nodes: *key,
                    owners: count as usize,
                }),
            }
        }
        for (i, face) in self.boundary.iter().enumerate() {
            if owners.get(&sorted3(face.nodes)).copied().unwrap_or(0) != 1 {
                violations.push(Violation::OrphanBoundaryFace { face: i });
            }
        }

        if total_volume <= 0.0 {
            violations.push(Violation::ZeroTotalVolume);
        }

        ValidationReport { violations }
    }
}
