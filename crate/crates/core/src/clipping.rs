//! Exact tetrahedron/plane clipping and mesh partitioning.
//!
//! Cutting planes are normal to the blade span axis, so a plane is fully
//! described by its coordinate along that axis. [`clip_tet`] splits one
//! tetrahedron into the material below and above a plane; [`partition`]
//! applies a whole ascending stack of planes to a mesh and returns, per
//! resulting piece, the clipped element volumes and centroids, the clipped
//! adhesion face areas, and the cohesion cut area on the piece's root-side
//! plane.
//!
//! Mass is split *by construction*: for every straddling tetrahedron one side
//! is assembled geometrically from sub-tetrahedra and the other side is the
//! exact remainder, so `volume_below + volume_above` always reproduces the
//! tet volume to rounding, independent of how thin the sliver is.

use crate::mesh::{signed_tet_volume, triangle_area, FaceLabel, IceMesh};
use crate::Vec3;

/// Vertices within `SNAP_RELATIVE_TOLERANCE × bbox_diagonal` of a cutting
/// plane are treated as lying exactly on it. This keeps planes that graze a
/// vertex, edge or whole face from producing micro-slivers, and makes a
/// plane through a mesh layer classify the layer's tets wholly to one side.
pub const SNAP_RELATIVE_TOLERANCE: f64 = 1e-9;

/// A cutting plane normal to the span axis at coordinate `z` (metres).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuttingPlane {
    pub z: f64,
}

/// Outcome of clipping one tetrahedron with one plane.
///
/// When a side is empty its volume is zero and its centroid is reported as
/// the tet centroid; the volume-weighted centroid average is unaffected.
#[derive(Debug, Clone, Copy)]
pub struct ClipResult {
    pub volume_below: f64,
    pub volume_above: f64,
    /// Area of the polygon where the plane crosses the tet interior;
    /// zero whenever the plane only touches the boundary.
    pub cut_area: f64,
    pub centroid_below: Vec3,
    pub centroid_above: Vec3,
}

/// Signed distance from `point` to the plane at `plane_z` (positive on the
/// tip side).
pub fn signed_distance(point: Vec3, axis: &Vec3, plane_z: f64) -> f64 {
    point.dot(axis) - plane_z
}

/// Splits the tetrahedron `verts` at the plane `plane_z` normal to `axis`.
///
/// `eps` is the absolute snapping distance (see [`SNAP_RELATIVE_TOLERANCE`]);
/// pass 0.0 to snap only exact hits.
pub fn clip_tet(verts: &[Vec3; 4], axis: &Vec3, plane_z: f64, eps: f64) -> ClipResult {
    let mut d = [0.0f64; 4];
    for i in 0..4 {
        let di = signed_distance(verts[i], axis, plane_z);
        d[i] = if di.abs() <= eps { 0.0 } else { di };
    }

    let total = signed_tet_volume(verts[0], verts[1], verts[2], verts[3]).abs();
    let centroid = (verts[0] + verts[1] + verts[2] + verts[3]) / 4.0;

    let pos: Vec<usize> = (0..4).filter(|&i| d[i] > 0.0).collect();
    let neg: Vec<usize> = (0..4).filter(|&i| d[i] < 0.0).collect();

    if neg.is_empty() {
        return ClipResult {
            volume_below: 0.0,
            volume_above: total,
            cut_area: 0.0,
            centroid_below: centroid,
            centroid_above: centroid,
        };
    }
    if pos.is_empty() {
        return ClipResult {
            volume_below: total,
            volume_above: 0.0,
            cut_area: 0.0,
            centroid_below: centroid,
            centroid_above: centroid,
        };
    }

    let zero: Vec<usize> = (0..4).filter(|&i| d[i] == 0.0).collect();
    let intersect = |a: usize, b: usize| -> Vec3 {
        let t = d[a] / (d[a] - d[b]);
        verts[a] + (verts[b] - verts[a]) * t
    };

    // Sub-tetrahedra of the side with a single strictly-signed vertex (well
    // conditioned: it is a small tet or a two-tet pyramid), plus the cut
    // polygon in cyclic order. The other side is the exact remainder.
    let mut apex_side: Vec<[Vec3; 4]> = Vec::with_capacity(3);
    let cut_polygon: Vec<Vec3>;
    let apex_is_above: bool;

    match (pos.len(), neg.len()) {
        (1, 3) | (1, 2) | (1, 1) => {
            apex_is_above = true;
            let a = pos[0];
            match neg.len() {
                3 => {
                    let i0 = intersect(a, neg[0]);
                    let i1 = intersect(a, neg[1]);
                    let i2 = intersect(a, neg[2]);
                    apex_side.push([verts[a], i0, i1, i2]);
                    cut_polygon = vec![i0, i1, i2];
                }
                2 => {
                    let i0 = intersect(a, neg[0]);
                    let i1 = intersect(a, neg[1]);
                    let z0 = verts[zero[0]];
                    apex_side.push([verts[a], i0, i1, z0]);
                    cut_polygon = vec![i0, i1, z0];
                }
                _ => {
                    let i0 = intersect(a, neg[0]);
                    let (z0, z1) = (verts[zero[0]], verts[zero[1]]);
                    apex_side.push([verts[a], i0, z0, z1]);
                    cut_polygon = vec![i0, z0, z1];
                }
            }
        }
        (3, 1) | (2, 1) => {
            apex_is_above = false;
            let b = neg[0];
            if pos.len() == 3 {
                let i0 = intersect(pos[0], b);
                let i1 = intersect(pos[1], b);
                let i2 = intersect(pos[2], b);
                apex_side.push([verts[b], i0, i1, i2]);
                cut_polygon = vec![i0, i1, i2];
            } else {
                let i0 = intersect(pos[0], b);
                let i1 = intersect(pos[1], b);
                let z0 = verts[zero[0]];
                apex_side.push([verts[b], i0, i1, z0]);
                cut_polygon = vec![i0, i1, z0];
            }
        }
        (2, 2) => {
            // Both sides are wedges; assemble the above side from three tets.
            apex_is_above = true;
            let (a1, a2) = (pos[0], pos[1]);
            let (b1, b2) = (neg[0], neg[1]);
            let i11 = intersect(a1, b1);
            let i12 = intersect(a1, b2);
            let i21 = intersect(a2, b1);
            let i22 = intersect(a2, b2);
            apex_side.push([verts[a1], i11, i12, i22]);
            apex_side.push([verts[a1], i11, i22, i21]);
            apex_side.push([verts[a1], i21, i22, verts[a2]]);
            // Neighbouring intersections share a tet face, giving the cyclic
            // order i11 → i12 → i22 → i21.
            cut_polygon = vec![i11, i12, i22, i21];
        }
        _ => unreachable!("vertex sign partition exhausted"),
    }

    let mut apex_volume = 0.0;
    let mut apex_moment = Vec3::zeros();
    for t in &apex_side {
        let v = signed_tet_volume(t[0], t[1], t[2], t[3]).abs();
        apex_volume += v;
        apex_moment += (t[0] + t[1] + t[2] + t[3]) / 4.0 * v;
    }
    let apex_volume = apex_volume.min(total);
    let apex_centroid = if apex_volume > 0.0 {
        apex_moment / apex_volume
    } else {
        centroid
    };

    let rest_volume = total - apex_volume;
    let rest_centroid = if rest_volume > 0.0 {
        (centroid * total - apex_centroid * apex_volume) / rest_volume
    } else {
        centroid
    };

    let mut cut_area = 0.0;
    for k in 1..cut_polygon.len() - 1 {
        cut_area += triangle_area(cut_polygon[0], cut_polygon[k], cut_polygon[k + 1]);
    }

    if apex_is_above {
        ClipResult {
            volume_below: rest_volume,
            volume_above: apex_volume,
            cut_area,
            centroid_below: rest_centroid,
            centroid_above: apex_centroid,
        }
    } else {
        ClipResult {
            volume_below: apex_volume,
            volume_above: rest_volume,
            cut_area,
            centroid_below: apex_centroid,
            centroid_above: rest_centroid,
        }
    }
}

/// Splits a triangle's area at the plane; returns `(area_below, area_above)`.
/// A triangle lying in the plane counts as above.
pub fn clip_triangle_area(verts: &[Vec3; 3], axis: &Vec3, plane_z: f64, eps: f64) -> (f64, f64) {
    let mut d = [0.0f64; 3];
    for i in 0..3 {
        let di = signed_distance(verts[i], axis, plane_z);
        d[i] = if di.abs() <= eps { 0.0 } else { di };
    }
    let area = triangle_area(verts[0], verts[1], verts[2]);
    let pos: Vec<usize> = (0..3).filter(|&i| d[i] > 0.0).collect();
    let neg: Vec<usize> = (0..3).filter(|&i| d[i] < 0.0).collect();

    if neg.is_empty() {
        return (0.0, area);
    }
    if pos.is_empty() {
        return (area, 0.0);
    }
    match (pos.len(), neg.len()) {
        (1, 2) => {
            let a = d[pos[0]];
            let above = area * (a / (a - d[neg[0]])) * (a / (a - d[neg[1]]));
            (area - above, above)
        }
        (2, 1) => {
            let b = d[neg[0]];
            let below = area * (b / (b - d[pos[0]])) * (b / (b - d[pos[1]]));
            (below, area - below)
        }
        (1, 1) => {
            // Third vertex on the plane: the cut is the cevian through it.
            let a = d[pos[0]];
            let above = area * a / (a - d[neg[0]]);
            (area - above, above)
        }
        _ => unreachable!(),
    }
}

/// Volume, centroid contribution of one tet to one piece.
#[derive(Debug, Clone, Copy)]
pub struct ClippedElement {
    pub tet: usize,
    pub volume: f64,
    pub centroid: Vec3,
}

/// Clipped area contribution of one adhesion face to one piece.
#[derive(Debug, Clone, Copy)]
pub struct ClippedFace {
    pub face: usize,
    pub area: f64,
}

/// Everything the force balance needs to know about one piece of the
/// partitioned mesh.
#[derive(Debug, Clone)]
pub struct PieceDecomposition {
    /// 0 is the rootmost piece; indices increase towards the tip.
    pub piece_index: usize,
    /// Span interval covered by the piece (informational).
    pub bounds: (f64, f64),
    pub elements: Vec<ClippedElement>,
    pub adhesion_areas: Vec<ClippedFace>,
    /// Cohesion cut area on the piece's root-side plane; zero for the
    /// rootmost piece, which has a free end instead of a cut.
    pub cut_area_root_side: f64,
}

impl PieceDecomposition {
    pub fn volume(&self) -> f64 {
        self.elements.iter().map(|e| e.volume).sum()
    }

    pub fn adhesion_area(&self) -> f64 {
        self.adhesion_areas.iter().map(|f| f.area).sum()
    }
}

/// Partitions `mesh` with an ascending stack of planes into
/// `planes.len() + 1` pieces, ordered root to tip.
///
/// The cohesion cut area at each plane combines the polygons cut through
/// straddling tets with any interior mesh faces that lie exactly in the
/// plane (each counted once). Boundary faces in the plane are free surface
/// and contribute nothing, so a plane at the mesh root end has zero cut
/// area.
///
/// # Panics
/// If `planes` is not strictly increasing.
pub fn partition(mesh: &IceMesh, planes: &[CuttingPlane]) -> Vec<PieceDecomposition> {
    assert!(
        planes.windows(2).all(|w| w[0].z < w[1].z),
        "cutting planes must be strictly increasing"
    );

    let axis = mesh.span_axis;
    let eps = SNAP_RELATIVE_TOLERANCE * mesh.bbox_diagonal();
    let k = planes.len();
    let extent = mesh.span_extent().unwrap_or_else(|| {
        let lo = planes.first().map(|p| p.z).unwrap_or(0.0);
        let hi = planes.last().map(|p| p.z).unwrap_or(0.0);
        (lo, hi)
    });

    let mut pieces: Vec<PieceDecomposition> = (0..=k)
        .map(|i| {
            let lo = if i == 0 {
                extent.0.min(planes.first().map(|p| p.z).unwrap_or(extent.0))
            } else {
                planes[i - 1].z
            };
            let hi = if i == k {
                extent.1.max(planes.last().map(|p| p.z).unwrap_or(extent.1))
            } else {
                planes[i].z
            };
            PieceDecomposition {
                piece_index: i,
                bounds: (lo, hi),
                elements: Vec::new(),
                adhesion_areas: Vec::new(),
                cut_area_root_side: 0.0,
            }
        })
        .collect();

    let node_z: Vec<f64> = mesh
        .nodes
        .iter()
        .map(|n| n.position.dot(&axis))
        .collect();

    let mut cut_areas = vec![0.0f64; k];

    for (t, tet) in mesh.tets.iter().enumerate() {
        let verts = [
            mesh.position(tet.nodes[0]),
            mesh.position(tet.nodes[1]),
            mesh.position(tet.nodes[2]),
            mesh.position(tet.nodes[3]),
        ];
        let (z_lo, z_hi) = tet
            .nodes
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &n| {
                (lo.min(node_z[n]), hi.max(node_z[n]))
            });
        let total = signed_tet_volume(verts[0], verts[1], verts[2], verts[3]).abs();
        let full_centroid = (verts[0] + verts[1] + verts[2] + verts[3]) / 4.0;

        let mut prev_volume = 0.0;
        let mut prev_moment = Vec3::zeros();
        for (i, plane) in planes.iter().enumerate() {
            let (below_volume, below_moment) = if plane.z <= z_lo - eps {
                (0.0, Vec3::zeros())
            } else if plane.z >= z_hi + eps {
                (total, full_centroid * total)
            } else {
                let clip = clip_tet(&verts, &axis, plane.z, eps);
                cut_areas[i] += clip.cut_area;
                (clip.volume_below, clip.centroid_below * clip.volume_below)
            };
            let dv = (below_volume - prev_volume).max(0.0);
            if dv > 0.0 {
                let centroid = (below_moment - prev_moment) / dv;
                pieces[i].elements.push(ClippedElement {
                    tet: t,
                    volume: dv,
                    centroid,
                });
            }
            prev_volume = below_volume;
            prev_moment = below_moment;
        }
        let dv = (total - prev_volume).max(0.0);
        if dv > 0.0 {
            let centroid = (full_centroid * total - prev_moment) / dv;
            pieces[k].elements.push(ClippedElement {
                tet: t,
                volume: dv,
                centroid,
            });
        }
    }

    // Interior faces lying exactly in a plane are part of that plane's
    // cross-section; straddling tets cannot double-count them because a tet
    // with a whole face on the plane has no strictly-signed vertices on both
    // sides.
    if k > 0 {
        for face in mesh.interior_faces() {
            let zs = [node_z[face[0]], node_z[face[1]], node_z[face[2]]];
            for (i, plane) in planes.iter().enumerate() {
                if zs.iter().all(|&z| (z - plane.z).abs() <= eps) {
                    cut_areas[i] += triangle_area(
                        mesh.position(face[0]),
                        mesh.position(face[1]),
                        mesh.position(face[2]),
                    );
                }
            }
        }
    }

    for (f, face) in mesh.boundary.iter().enumerate() {
        if face.label != FaceLabel::Adhesion {
            continue;
        }
        let verts = [
            mesh.position(face.nodes[0]),
            mesh.position(face.nodes[1]),
            mesh.position(face.nodes[2]),
        ];
        let total = triangle_area(verts[0], verts[1], verts[2]);
        let mut prev = 0.0;
        for (i, plane) in planes.iter().enumerate() {
            let (below, _) = clip_triangle_area(&verts, &axis, plane.z, eps);
            let da = (below - prev).max(0.0);
            if da > 0.0 {
                pieces[i].adhesion_areas.push(ClippedFace { face: f, area: da });
            }
            prev = below;
        }
        let da = (total - prev).max(0.0);
        if da > 0.0 {
            pieces[k].adhesion_areas.push(ClippedFace { face: f, area: da });
        }
    }

    for i in 0..k {
        pieces[i + 1].cut_area_root_side = cut_areas[i];
    }

    pieces
}
