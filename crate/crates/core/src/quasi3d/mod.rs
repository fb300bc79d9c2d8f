//! Quasi-3D ice mesh generation from 2D cross-sections.
//!
//! Ice accretion codes produce 2D ice shapes at a handful of spanwise
//! stations. This module turns those into the tetrahedral mesh the shedding
//! solver needs: each cross-section polygon is triangulated once by ear
//! clipping, swept spanwise into prism layers, and every prism is split into
//! three tetrahedra. Between stations the section shape is blended
//! vertex-wise, which requires all sections to share a vertex layout — hence
//! [`resample_section`], which re-parameterizes the boundary chains by arc
//! length to a common count.
//!
//! Prism diagonals are chosen by the lowest-global-node-id rule, so the
//! triangulated quad between two neighbouring prisms (or between a prism and
//! the exterior) is split the same way from both sides and the resulting
//! mesh is watertight by construction rather than by repair.
//!
//! A section's boundary is two open chains sharing their endpoints: the
//! `outer_loop` wetted by air and the `contact_loop` glued to the blade.
//! Swept contact edges become `Adhesion` faces; everything else — swept
//! outer edges and the two end caps — faces air and is labeled `Flow`.

mod io;

pub use io::{load_manifest, load_section, write_section};

use crate::mesh::{BoundaryFace, FaceLabel, IceMesh, MeshError, Node, Tetrahedron};
use crate::{Vec2, Vec3};

/// Relative tolerance (times the section bounding-box diagonal) for deciding
/// that a contact-chain endpoint coincides with an outer-chain endpoint.
const ENDPOINT_SNAP_RELATIVE: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum ExtrudeError {
    #[error("invalid ice section: {0}")]
    InvalidSection(String),
    #[error("invalid extrusion specification: {0}")]
    InvalidSpec(String),
    #[error("cross-section triangulation failed: {0}")]
    Triangulation(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One 2D ice cross-section at a spanwise station.
///
/// The boundary is stored as two open polylines that share their endpoints:
/// `outer_loop` runs along the ice–air surface from one end of the contact
/// arc to the other, and `contact_loop` runs along the ice–blade interface
/// between the same two points. Construction canonicalizes the pair so that
/// `outer_loop ++ reverse(contact_loop interior)` is a counterclockwise
/// polygon and the shared endpoints are bitwise identical.
#[derive(Debug, Clone, PartialEq)]
pub struct IceSection {
    outer_loop: Vec<Vec2>,
    contact_loop: Vec<Vec2>,
    station_radius: f64,
}

impl IceSection {
    /// Builds and canonicalizes a section. The chains may be supplied in
    /// either orientation; endpoints must coincide within a small relative
    /// tolerance and are snapped exactly.
    pub fn new(
        outer_loop: Vec<Vec2>,
        contact_loop: Vec<Vec2>,
        station_radius: f64,
    ) -> Result<IceSection, ExtrudeError> {
        if !(station_radius.is_finite() && station_radius > 0.0) {
            return Err(ExtrudeError::InvalidSection(format!(
                "station radius must be positive, got {station_radius}"
            )));
        }
        if outer_loop.len() < 2 || contact_loop.len() < 2 {
            return Err(ExtrudeError::InvalidSection(
                "each boundary chain needs at least two points".into(),
            ));
        }
        for p in outer_loop.iter().chain(contact_loop.iter()) {
            if !(p.x.is_finite() && p.y.is_finite()) {
                return Err(ExtrudeError::InvalidSection(
                    "non-finite section coordinate".into(),
                ));
            }
        }

        let outer = outer_loop;
        let mut contact = contact_loop;
        let tol = ENDPOINT_SNAP_RELATIVE * bbox_diagonal(outer.iter().chain(contact.iter()));
        let (oa, ob) = (outer[0], outer[outer.len() - 1]);
        let (ca, cb) = (contact[0], contact[contact.len() - 1]);
        if (ca - oa).norm() <= tol && (cb - ob).norm() <= tol {
            // already aligned
        } else if (ca - ob).norm() <= tol && (cb - oa).norm() <= tol {
            contact.reverse();
        } else {
            return Err(ExtrudeError::InvalidSection(
                "contact chain endpoints do not coincide with outer chain endpoints".into(),
            ));
        }
        let last = contact.len() - 1;
        contact[0] = outer[0];
        contact[last] = outer[outer.len() - 1];

        let mut section = IceSection {
            outer_loop: outer,
            contact_loop: contact,
            station_radius,
        };
        let area = signed_area(&section.ring());
        if area == 0.0 || !area.is_finite() {
            return Err(ExtrudeError::InvalidSection(
                "section polygon has zero area".into(),
            ));
        }
        if area < 0.0 {
            // Reversing both chains reverses the traversal of the combined
            // polygon while keeping the endpoint-sharing structure.
            section.outer_loop.reverse();
            section.contact_loop.reverse();
        }
        section.check_distinct(tol)?;
        Ok(section)
    }

    /// Internal constructor for chains already in canonical form
    /// (resampling and interpolation preserve it).
    fn from_canonical(
        outer_loop: Vec<Vec2>,
        contact_loop: Vec<Vec2>,
        station_radius: f64,
    ) -> Result<IceSection, ExtrudeError> {
        let section = IceSection {
            outer_loop,
            contact_loop,
            station_radius,
        };
        if signed_area(&section.ring()) <= 0.0 {
            return Err(ExtrudeError::InvalidSection(
                "derived section polygon has non-positive area".into(),
            ));
        }
        Ok(section)
    }

    fn check_distinct(&self, tol: f64) -> Result<(), ExtrudeError> {
        let ring = self.ring();
        for i in 0..ring.len() {
            let j = (i + 1) % ring.len();
            if (ring[j] - ring[i]).norm() <= tol {
                return Err(ExtrudeError::InvalidSection(format!(
                    "section polygon has a zero-length edge at vertex {i}"
                )));
            }
        }
        Ok(())
    }

    /// Ice–air boundary chain.
    pub fn outer_loop(&self) -> &[Vec2] {
        &self.outer_loop
    }

    /// Ice–blade interface chain.
    pub fn contact_loop(&self) -> &[Vec2] {
        &self.contact_loop
    }

    /// Spanwise station of this section, metres from the rotation axis.
    pub fn station_radius(&self) -> f64 {
        self.station_radius
    }

    /// The closed cross-section polygon, counterclockwise, without a
    /// repeated closing vertex: the outer chain followed by the interior of
    /// the contact chain in reverse.
    pub fn ring(&self) -> Vec<Vec2> {
        let mut ring = self.outer_loop.clone();
        ring.extend(self.contact_loop[1..self.contact_loop.len() - 1].iter().rev());
        ring
    }

    /// Enclosed cross-section area, m² (positive).
    pub fn area(&self) -> f64 {
        signed_area(&self.ring())
    }
}

fn bbox_diagonal<'a>(points: impl Iterator<Item = &'a Vec2>) -> f64 {
    let (mut lo, mut hi) = (
        Vec2::new(f64::INFINITY, f64::INFINITY),
        Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let d = (hi - lo).norm();
    if d.is_finite() && d > 0.0 {
        d
    } else {
        1.0
    }
}

/// Shoelace area of a polygon given without a repeated closing vertex;
/// positive for counterclockwise orientation.
fn signed_area(ring: &[Vec2]) -> f64 {
    let mut twice = 0.0;
    for i in 0..ring.len() {
        let a = ring[i];
        let b = ring[(i + 1) % ring.len()];
        twice += a.x * b.y - a.y * b.x;
    }
    0.5 * twice
}

/// Re-parameterizes one open chain by arc length to exactly `count` points,
/// keeping the original endpoints bitwise.
fn resample_chain(chain: &[Vec2], count: usize) -> Result<Vec<Vec2>, ExtrudeError> {
    let mut cumulative = Vec::with_capacity(chain.len());
    cumulative.push(0.0);
    for w in chain.windows(2) {
        let step = (w[1] - w[0]).norm();
        cumulative.push(cumulative.last().unwrap() + step);
    }
    let total = *cumulative.last().unwrap();
    if total <= 0.0 {
        return Err(ExtrudeError::InvalidSection(
            "cannot resample a zero-length chain".into(),
        ));
    }
    let mut out = Vec::with_capacity(count);
    out.push(chain[0]);
    let mut seg = 0;
    for j in 1..count - 1 {
        let target = total * j as f64 / (count - 1) as f64;
        while seg + 2 < cumulative.len() && cumulative[seg + 1] < target {
            seg += 1;
        }
        let len = cumulative[seg + 1] - cumulative[seg];
        let t = if len > 0.0 {
            (target - cumulative[seg]) / len
        } else {
            0.0
        };
        out.push(chain[seg] + (chain[seg + 1] - chain[seg]) * t);
    }
    out.push(chain[chain.len() - 1]);
    Ok(out)
}

/// Re-parameterizes both boundary chains of a section by arc length to
/// exactly `count` vertices each, endpoints pinned. Corners not hit by the
/// uniform spacing are rounded off, so the enclosed area is only preserved
/// approximately; with `count ≥ 64` the error stays below 0.5% for convex
/// sections.
pub fn resample_section(section: &IceSection, count: usize) -> Result<IceSection, ExtrudeError> {
    if count < 8 {
        return Err(ExtrudeError::InvalidSpec(format!(
            "resample count must be at least 8, got {count}"
        )));
    }
    let outer = resample_chain(&section.outer_loop, count)?;
    let contact = resample_chain(&section.contact_loop, count)?;
    IceSection::from_canonical(outer, contact, section.station_radius)
}

/// Blends two sections vertex-wise: point `i` of each chain moves linearly
/// from its position in `a` (at `t = 0`) to its position in `b` (at `t = 1`),
/// and the station radius blends the same way. At the endpoints the inputs
/// are returned bit-for-bit. Both sections must have matching chain vertex
/// counts — resample them first if they do not.
pub fn interpolate_section(
    a: &IceSection,
    b: &IceSection,
    t: f64,
) -> Result<IceSection, ExtrudeError> {
    if a.outer_loop.len() != b.outer_loop.len() || a.contact_loop.len() != b.contact_loop.len() {
        return Err(ExtrudeError::InvalidSpec(format!(
            "mismatched vertex counts: outer {} vs {}, contact {} vs {}",
            a.outer_loop.len(),
            b.outer_loop.len(),
            a.contact_loop.len(),
            b.contact_loop.len()
        )));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(ExtrudeError::InvalidSpec(format!(
            "blend fraction must lie in [0, 1], got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(a.clone());
    }
    if t == 1.0 {
        return Ok(b.clone());
    }
    let lerp = |p: &Vec2, q: &Vec2| p + (q - p) * t;
    let outer = a
        .outer_loop
        .iter()
        .zip(&b.outer_loop)
        .map(|(p, q)| lerp(p, q))
        .collect();
    let contact = a
        .contact_loop
        .iter()
        .zip(&b.contact_loop)
        .map(|(p, q)| lerp(p, q))
        .collect();
    let radius = a.station_radius + (b.station_radius - a.station_radius) * t;
    IceSection::from_canonical(outer, contact, radius)
}

/// Recipe for building a 3D ice mesh from cross-sections.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtrusionSpec {
    /// Sections ordered by strictly increasing station radius.
    pub sections: Vec<IceSection>,
    /// Number of element layers between consecutive stations (or across the
    /// whole span for a single-section spec).
    pub spanwise_cells: usize,
    /// Common per-chain vertex count used when the sections' chains do not
    /// already agree; ignored otherwise.
    pub resample_count: usize,
    /// Spanwise extent for single-section specs, which would otherwise have
    /// no length. Must be `None` when two or more sections fix the extent.
    pub span: Option<(f64, f64)>,
}

impl ExtrusionSpec {
    fn validate(&self) -> Result<(), ExtrudeError> {
        if self.sections.is_empty() {
            return Err(ExtrudeError::InvalidSpec(
                "an extrusion needs at least one section".into(),
            ));
        }
        if self.spanwise_cells == 0 {
            return Err(ExtrudeError::InvalidSpec(
                "spanwise cell count must be at least 1".into(),
            ));
        }
        if self.resample_count < 8 {
            return Err(ExtrudeError::InvalidSpec(format!(
                "resample count must be at least 8, got {}",
                self.resample_count
            )));
        }
        for w in self.sections.windows(2) {
            if w[0].station_radius >= w[1].station_radius {
                return Err(ExtrudeError::InvalidSpec(
                    "section station radii must be strictly increasing".into(),
                ));
            }
        }
        match (self.sections.len(), self.span) {
            (1, None) => Err(ExtrudeError::InvalidSpec(
                "a single-section spec needs an explicit span extent".into(),
            )),
            (1, Some((lo, hi))) if !(lo.is_finite() && hi.is_finite() && lo < hi) => {
                Err(ExtrudeError::InvalidSpec(format!(
                    "span extent [{lo}, {hi}] is not an increasing interval"
                )))
            }
            (n, Some(_)) if n > 1 => Err(ExtrudeError::InvalidSpec(
                "span extent is derived from the stations when several sections are given".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Builds the tetrahedral ice mesh described by `spec`.
///
/// The first section's polygon is ear-clipped once and the triangulation is
/// reused for every layer; between stations the section shape is blended
/// linearly. Sections whose chains already share vertex counts are used
/// as-is (so a constant extrusion preserves the cross-section area exactly);
/// otherwise every section is resampled to `spec.resample_count`.
pub fn extrude(spec: &ExtrusionSpec, density: f64) -> Result<IceMesh, ExtrudeError> {
    spec.validate()?;

    let needs_resample = spec
        .sections
        .windows(2)
        .any(|w| {
            w[0].outer_loop.len() != w[1].outer_loop.len()
                || w[0].contact_loop.len() != w[1].contact_loop.len()
        });
    let sections: Vec<IceSection> = if needs_resample {
        spec.sections
            .iter()
            .map(|s| resample_section(s, spec.resample_count))
            .collect::<Result<_, _>>()?
    } else {
        spec.sections.clone()
    };

    // One section per ring interface, with its spanwise position. Interfaces
    // at the stations reuse the input sections bit-for-bit.
    let cells = spec.spanwise_cells;
    let mut rings: Vec<(f64, IceSection)> = Vec::new();
    if sections.len() == 1 {
        let (lo, hi) = spec.span.expect("validated above");
        for k in 0..=cells {
            let z = if k == cells {
                hi
            } else {
                lo + (hi - lo) * k as f64 / cells as f64
            };
            rings.push((z, sections[0].clone()));
        }
    } else {
        rings.push((sections[0].station_radius, sections[0].clone()));
        for pair in sections.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            for k in 1..=cells {
                let t = k as f64 / cells as f64;
                let s = interpolate_section(a, b, if k == cells { 1.0 } else { t })?;
                let z = if k == cells {
                    b.station_radius
                } else {
                    a.station_radius + (b.station_radius - a.station_radius) * t
                };
                rings.push((z, s));
            }
        }
    }

    let base_ring = rings[0].1.ring();
    let verts_per_ring = base_ring.len();
    let triangles = triangulate(&base_ring)?;

    let mut nodes = Vec::with_capacity(rings.len() * verts_per_ring);
    for (ring_idx, (z, section)) in rings.iter().enumerate() {
        let ring = section.ring();
        debug_assert_eq!(ring.len(), verts_per_ring);
        if signed_area(&ring) <= 0.0 {
            return Err(ExtrudeError::InvalidSection(format!(
                "blended cross-section at z = {z} m has non-positive area"
            )));
        }
        for (col, p) in ring.iter().enumerate() {
            nodes.push(Node {
                id: ring_idx * verts_per_ring + col,
                position: Vec3::new(p.x, p.y, *z),
            });
        }
    }

    let layers = rings.len() - 1;
    let mut tets = Vec::with_capacity(layers * triangles.len() * 3);
    for layer in 0..layers {
        let base = layer * verts_per_ring;
        for &[a, b, c] in &triangles {
            let prism = [base + a, base + b, base + c];
            for t in split_prism(prism, verts_per_ring) {
                tets.push(Tetrahedron { nodes: t });
            }
        }
    }

    let mut boundary = Vec::new();
    // End caps: the ice terminates in air at both ends of the extent.
    let top_base = layers * verts_per_ring;
    for &[a, b, c] in &triangles {
        boundary.push(BoundaryFace {
            nodes: [a, b, c],
            label: FaceLabel::Flow,
        });
        boundary.push(BoundaryFace {
            nodes: [top_base + a, top_base + b, top_base + c],
            label: FaceLabel::Flow,
        });
    }
    // Swept walls. Ring vertices 0..n_outer-1 come from the outer chain, the
    // rest from the contact chain interior, so a polygon edge starting at
    // index < n_outer-1 was an outer edge and everything else is contact.
    let n_outer = rings[0].1.outer_loop.len();
    for i in 0..verts_per_ring {
        let j = (i + 1) % verts_per_ring;
        let label = if i < n_outer - 1 {
            FaceLabel::Flow
        } else {
            FaceLabel::Adhesion
        };
        for layer in 0..layers {
            let p = layer * verts_per_ring + i;
            let q = layer * verts_per_ring + j;
            let (pt, qt) = (p + verts_per_ring, q + verts_per_ring);
            // Quad diagonal through its lowest node id, matching the prism
            // split on the other side of the wall.
            let (t1, t2) = if p < q {
                ([p, q, qt], [p, qt, pt])
            } else {
                ([p, q, pt], [q, qt, pt])
            };
            boundary.push(BoundaryFace {
                nodes: t1,
                label,
            });
            boundary.push(BoundaryFace {
                nodes: t2,
                label,
            });
        }
    }

    Ok(IceMesh::new(nodes, tets, boundary, Vec3::z(), density)?)
}

/// Splits the prism whose bottom triangle has global node ids `bottom` (top
/// ids offset by `stride`) into three tetrahedra. Every quad face is cut by
/// the diagonal through its lowest node id, so adjacent prisms agree on the
/// shared triangles.
fn split_prism(bottom: [usize; 3], stride: usize) -> [[usize; 4]; 3] {
    // Rotate the lowest bottom id (also the lowest of the prism) to slot 0.
    let rot = (0..3)
        .min_by_key(|&k| bottom[k])
        .expect("three candidates");
    let b = [bottom[rot], bottom[(rot + 1) % 3], bottom[(rot + 2) % 3]];
    let t = [b[0] + stride, b[1] + stride, b[2] + stride];
    // Both quads touching b[0] are cut through it; the third quad is cut
    // through min(b[1], b[2]).
    if b[1] < b[2] {
        [
            [b[0], b[1], b[2], t[2]],
            [b[0], b[1], t[2], t[1]],
            [b[0], t[1], t[2], t[0]],
        ]
    } else {
        [
            [b[0], b[1], b[2], t[1]],
            [b[0], t[1], b[2], t[2]],
            [b[0], t[1], t[2], t[0]],
        ]
    }
}

/// Ear-clipping triangulation of a simple counterclockwise polygon, returned
/// as index triples into `ring`. Deterministic: always clips the first valid
/// ear in index order.
fn triangulate(ring: &[Vec2]) -> Result<Vec<[usize; 3]>, ExtrudeError> {
    let n = ring.len();
    if n < 3 {
        return Err(ExtrudeError::Triangulation(format!(
            "polygon has only {n} vertices"
        )));
    }
    let scale = bbox_diagonal(ring.iter());
    let area_tol = 1e-12 * scale * scale;

    let cross = |o: Vec2, a: Vec2, b: Vec2| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);

    let mut remaining: Vec<usize> = (0..n).collect();
    let mut triangles = Vec::with_capacity(n - 2);
    while remaining.len() > 3 {
        let m = remaining.len();
        let mut clipped = false;
        for k in 0..m {
            let (ip, ic, inx) = (
                remaining[(k + m - 1) % m],
                remaining[k],
                remaining[(k + 1) % m],
            );
            let (a, b, c) = (ring[ip], ring[ic], ring[inx]);
            // A usable ear is strictly convex; collinear corners would give
            // zero-volume tetrahedra.
            if cross(a, b, c) <= area_tol {
                continue;
            }
            // No other remaining vertex may lie inside the ear or on its
            // boundary; a vertex exactly on an ear edge (a reflex corner
            // collinear with the candidate diagonal) would otherwise be cut
            // across, leaving overlapping triangles.
            let blocked = remaining.iter().any(|&other| {
                if other == ip || other == ic || other == inx {
                    return false;
                }
                let p = ring[other];
                cross(a, b, p) >= -area_tol
                    && cross(b, c, p) >= -area_tol
                    && cross(c, a, p) >= -area_tol
            });
            if blocked {
                continue;
            }
            triangles.push([ip, ic, inx]);
            remaining.remove(k);
            clipped = true;
            break;
        }
        if !clipped {
            return Err(ExtrudeError::Triangulation(
                "no ear found; the cross-section polygon may be self-intersecting".into(),
            ));
        }
    }
    let (a, b, c) = (remaining[0], remaining[1], remaining[2]);
    // The leftover of a simple counterclockwise polygon is itself
    // counterclockwise; anything else means the input was degenerate or
    // self-intersecting.
    if cross(ring[a], ring[b], ring[c]) <= area_tol {
        return Err(ExtrudeError::Triangulation(
            "final triangle is degenerate or inverted".into(),
        ));
    }
    triangles.push([a, b, c]);
    Ok(triangles)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Axis-aligned rectangle with the bottom edge on the blade: outer chain
    /// climbs over the top, contact chain is the base.
    fn rect_section(w: f64, h: f64, radius: f64) -> IceSection {
        IceSection::new(
            vec![
                Vec2::new(0.0, 0.0),
                Vec2::new(0.0, h),
                Vec2::new(w, h),
                Vec2::new(w, 0.0),
            ],
            vec![Vec2::new(0.0, 0.0), Vec2::new(w, 0.0)],
            radius,
        )
        .unwrap()
    }

    #[test]
    fn section_is_canonicalized_to_counterclockwise() {
        let s = rect_section(2.0, 1.0, 0.59);
        assert!(s.area() > 0.0);
        assert!((s.area() - 2.0).abs() < 1e-14);
        // Shared endpoints are bitwise equal after canonicalization.
        assert_eq!(s.contact_loop()[0], s.outer_loop()[0]);
        assert_eq!(
            s.contact_loop()[s.contact_loop().len() - 1],
            s.outer_loop()[s.outer_loop().len() - 1]
        );
    }

    #[test]
    fn mismatched_chain_endpoints_are_rejected() {
        let err = IceSection::new(
            vec![Vec2::new(0.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(1.0, 1.0)],
            vec![Vec2::new(5.0, 5.0), Vec2::new(6.0, 5.0)],
            1.0,
        )
        .unwrap_err();
        assert!(matches!(err, ExtrudeError::InvalidSection(_)));
    }

    #[test]
    fn resample_preserves_endpoints_and_counts() {
        let s = rect_section(1.0, 1.0, 0.59);
        let r = resample_section(&s, 9).unwrap();
        assert_eq!(r.outer_loop().len(), 9);
        assert_eq!(r.contact_loop().len(), 9);
        assert_eq!(r.outer_loop()[0], s.outer_loop()[0]);
        assert_eq!(r.outer_loop()[8], s.outer_loop()[3]);
    }

    #[test]
    fn resampling_a_uniform_chain_is_a_fixed_point() {
        // The outer chain of a unit square is three equal sides; ten points
        // at uniform arc length land back on the original corners.
        let s = rect_section(1.0, 1.0, 0.59);
        let r = resample_section(&s, 10).unwrap();
        for (p, q) in [(0, 0), (3, 1), (6, 2), (9, 3)] {
            assert!((r.outer_loop()[p] - s.outer_loop()[q]).norm() < 1e-12);
        }
    }

    #[test]
    fn resample_area_error_is_small_for_dense_counts() {
        let s = rect_section(1.0, 1.0, 0.59);
        let r = resample_section(&s, 64).unwrap();
        assert!(
            (r.area() - s.area()).abs() / s.area() < 0.005,
            "area after resampling: {}",
            r.area()
        );
    }

    #[test]
    fn zero_length_chain_is_rejected() {
        let s = IceSection {
            outer_loop: vec![Vec2::new(0.0, 0.0); 3],
            contact_loop: vec![Vec2::new(0.0, 0.0); 2],
            station_radius: 1.0,
        };
        assert!(matches!(
            resample_section(&s, 16),
            Err(ExtrudeError::InvalidSection(_))
        ));
    }

    #[test]
    fn interpolation_endpoints_are_bit_exact() {
        let a = rect_section(1.0, 1.0, 0.5);
        let b = rect_section(3.0, 3.0, 1.5);
        assert_eq!(interpolate_section(&a, &b, 0.0).unwrap(), a);
        assert_eq!(interpolate_section(&a, &b, 1.0).unwrap(), b);
    }

    #[test]
    fn interpolation_blends_vertices_and_radius() {
        let a = rect_section(1.0, 1.0, 0.5);
        let b = rect_section(3.0, 3.0, 1.5);
        let mid = interpolate_section(&a, &b, 0.5).unwrap();
        assert!((mid.area() - 4.0).abs() < 1e-12);
        assert!((mid.station_radius() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn interpolation_rejects_mismatched_counts() {
        let a = rect_section(1.0, 1.0, 0.5);
        let b = resample_section(&rect_section(3.0, 3.0, 1.5), 16).unwrap();
        assert!(matches!(
            interpolate_section(&a, &b, 0.5),
            Err(ExtrudeError::InvalidSpec(_))
        ));
    }

    #[test]
    fn triangulation_covers_convex_and_reflex_polygons() {
        // L-shaped (reflex) hexagon of area 3.
        let ring = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(2.0, 1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, 2.0),
            Vec2::new(0.0, 2.0),
        ];
        let tris = triangulate(&ring).unwrap();
        assert_eq!(tris.len(), 4);
        let total: f64 = tris
            .iter()
            .map(|&[a, b, c]| signed_area(&[ring[a], ring[b], ring[c]]))
            .sum();
        assert!((total - 3.0).abs() < 1e-12);
        // Every triangle is counterclockwise (positive area).
        for &[a, b, c] in &tris {
            assert!(signed_area(&[ring[a], ring[b], ring[c]]) > 0.0);
        }
    }

    #[test]
    fn constant_extrusion_volume_is_exact() {
        let side = 1.0e-3_f64.sqrt();
        let spec = ExtrusionSpec {
            sections: vec![rect_section(side, side, 0.59)],
            spanwise_cells: 4,
            resample_count: 64,
            span: Some((0.59, 1.18)),
        };
        let mesh = extrude(&spec, 900.0).unwrap();
        let expected = side * side * 0.59;
        assert!(
            (mesh.total_volume() - expected).abs() <= 1e-9 * expected,
            "volume {} vs {}",
            mesh.total_volume(),
            expected
        );
        assert!(mesh.validate().is_valid());
    }

    #[test]
    fn two_identical_sections_match_constant_extrusion() {
        let constant = ExtrusionSpec {
            sections: vec![rect_section(0.05, 0.02, 0.59)],
            spanwise_cells: 6,
            resample_count: 64,
            span: Some((0.59, 1.18)),
        };
        let pair = ExtrusionSpec {
            sections: vec![rect_section(0.05, 0.02, 0.59), rect_section(0.05, 0.02, 1.18)],
            spanwise_cells: 6,
            resample_count: 64,
            span: None,
        };
        let va = extrude(&constant, 900.0).unwrap().total_volume();
        let vb = extrude(&pair, 900.0).unwrap().total_volume();
        assert!((va - vb).abs() <= 1e-12 * va);
    }

    #[test]
    fn blended_extrusion_volume_integrates_the_area() {
        // Fixed width, height growing linearly: area varies linearly from
        // 1e-3 to 3e-3 m², so the volume is the mean area times the span.
        let a = rect_section(0.05, 0.02, 0.59);
        let b = rect_section(0.05, 0.06, 1.18);
        let spec = ExtrusionSpec {
            sections: vec![a, b],
            spanwise_cells: 16,
            resample_count: 64,
            span: None,
        };
        let mesh = extrude(&spec, 900.0).unwrap();
        let expected = 2.0e-3 * 0.59;
        assert!(
            (mesh.total_volume() - expected).abs() <= 0.01 * expected,
            "volume {} vs {}",
            mesh.total_volume(),
            expected
        );
    }

    #[test]
    fn extrusion_is_watertight_and_fully_labeled() {
        let spec = ExtrusionSpec {
            sections: vec![rect_section(0.05, 0.02, 0.59), rect_section(0.05, 0.06, 1.18)],
            spanwise_cells: 5,
            resample_count: 64,
            span: None,
        };
        let mesh = extrude(&spec, 900.0).unwrap();
        let report = mesh.validate();
        assert!(report.is_valid(), "{report:?}");
    }

    #[test]
    fn adhesion_faces_cover_exactly_the_contact_sweep() {
        let (w, h) = (0.05, 0.02);
        let spec = ExtrusionSpec {
            sections: vec![rect_section(w, h, 0.59)],
            spanwise_cells: 7,
            resample_count: 64,
            span: Some((0.59, 1.18)),
        };
        let mesh = extrude(&spec, 900.0).unwrap();
        let adhesion_area: f64 = mesh
            .boundary
            .iter()
            .filter(|f| f.label == FaceLabel::Adhesion)
            .map(|f| {
                crate::mesh::triangle_area(
                    mesh.position(f.nodes[0]),
                    mesh.position(f.nodes[1]),
                    mesh.position(f.nodes[2]),
                )
            })
            .sum();
        let expected = w * 0.59; // contact edge length × span
        assert!((adhesion_area - expected).abs() < 1e-12);
        // All adhesion faces lie on the swept contact plane y = 0.
        for f in mesh.boundary.iter().filter(|f| f.label == FaceLabel::Adhesion) {
            for &n in &f.nodes {
                assert!(mesh.position(n).y.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn mixed_vertex_counts_trigger_resampling() {
        let a = rect_section(0.05, 0.02, 0.59);
        let b = resample_section(&rect_section(0.05, 0.06, 1.18), 16).unwrap();
        let spec = ExtrusionSpec {
            sections: vec![a, b],
            spanwise_cells: 3,
            resample_count: 16,
            span: None,
        };
        let mesh = extrude(&spec, 900.0).unwrap();
        assert!(mesh.validate().is_valid());
        // Mean area within a few percent despite corner rounding.
        let expected = 2.0e-3 * 0.59;
        assert!((mesh.total_volume() - expected).abs() < 0.05 * expected);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let s = rect_section(1.0, 1.0, 0.59);
        let no_span = ExtrusionSpec {
            sections: vec![s.clone()],
            spanwise_cells: 2,
            resample_count: 64,
            span: None,
        };
        assert!(matches!(
            extrude(&no_span, 900.0),
            Err(ExtrudeError::InvalidSpec(_))
        ));
        let bad_order = ExtrusionSpec {
            sections: vec![rect_section(1.0, 1.0, 1.18), rect_section(1.0, 1.0, 0.59)],
            spanwise_cells: 2,
            resample_count: 64,
            span: None,
        };
        assert!(matches!(
            extrude(&bad_order, 900.0),
            Err(ExtrudeError::InvalidSpec(_))
        ));
        let zero_cells = ExtrusionSpec {
            sections: vec![s],
            spanwise_cells: 0,
            resample_count: 64,
            span: Some((0.0, 1.0)),
        };
        assert!(matches!(
            extrude(&zero_cells, 900.0),
            Err(ExtrudeError::InvalidSpec(_))
        ));
    }

    #[test]
    fn self_intersecting_polygon_fails_triangulation() {
        // Bowtie: edges cross, no valid ear decomposition of area ≠ 0.
        let ring = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
        ];
        assert!(triangulate(&ring).is_err());
    }
}
