//! Force evaluation on partitioned ice.
//!
//! Everything here is a straight application of the balance the shedding
//! criterion needs at a candidate failure plane:
//!
//! * centrifugal load `F_C = Σ ρ V_i Ω² r_i` summed over the volume pieces
//!   tipward of the plane, with `r_i` the spanwise centroid coordinate;
//! * cohesion resistance `F_coh = σ_c · A_cut`, the ice cross-section the
//!   failure would have to fracture through;
//! * adhesion resistance `F_adh = τ_a · A_adh`, the ice–surface contact area
//!   tipward of the plane that would have to debond.
//!
//! Faces wetted by air carry no resistance and never enter these sums.
//!
//! [`force_profile`] evaluates all three along the span in one mesh
//! partition, which is what the CLI writes out as CSV for plotting.

use crate::clipping::{partition, ClippedElement, CuttingPlane};
use crate::mesh::IceMesh;
use crate::Vec3;

/// Centrifugal force, in N, carried by a set of volume elements rotating at
/// `omega` rad/s about an axis through the origin perpendicular to `axis`.
///
/// Each element contributes `ρ V Ω² r` with `r` its centroid projected on
/// the (unit) span axis. Elements rootward of the origin contribute with a
/// negative lever arm, so callers should pass elements from one side of the
/// rotation centre only — which a blade ice mesh always is.
pub fn centrifugal_force(
    elements: &[ClippedElement],
    density: f64,
    omega: f64,
    axis: &Vec3,
) -> f64 {
    let moment: f64 = elements
        .iter()
        .map(|e| e.volume * e.centroid.dot(axis))
        .sum();
    density * omega * omega * moment
}

/// Cohesion resistance, in N, of an internal fracture of area `cut_area` m²
/// in ice of cohesion strength `sigma_c` Pa.
pub fn cohesion_force(cut_area: f64, sigma_c: f64) -> f64 {
    debug_assert!(cut_area >= 0.0 && sigma_c >= 0.0);
    sigma_c * cut_area
}

/// Adhesion resistance, in N, of debonding `contact_area` m² of ice–surface
/// interface of adhesion strength `tau_a` Pa.
pub fn adhesion_force(contact_area: f64, tau_a: f64) -> f64 {
    debug_assert!(contact_area >= 0.0 && tau_a >= 0.0);
    tau_a * contact_area
}

/// Forces evaluated at one spanwise station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceSample {
    /// Spanwise coordinate of the candidate failure plane, m.
    pub z: f64,
    /// Centrifugal load on the ice tipward of the plane, N.
    pub centrifugal: f64,
    /// Cohesion resistance of the cut at the plane, N.
    pub cohesion: f64,
    /// Adhesion resistance of the contact tipward of the plane, N.
    pub adhesion: f64,
}

/// Spanwise force profile, ordered root to tip.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ForceCurve {
    pub samples: Vec<ForceSample>,
}

impl ForceCurve {
    /// Writes the profile as CSV with a fixed header. Floats are printed
    /// with 17 significant digits so a round trip through the file is exact.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "z_m,F_centrifugal_N,F_cohesion_N,F_adhesion_N")?;
        for s in &self.samples {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                s.z, s.centrifugal, s.cohesion, s.adhesion
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

/// Evaluates centrifugal, cohesion, and adhesion forces at `n_planes`
/// stations spaced uniformly over the spanwise extent of the ice, the first
/// at the root end of the ice and the last one station short of the tip.
///
/// Station `j` sits at `z_lo + j·(z_hi − z_lo)/n_planes`. The tip plane
/// itself is omitted: no ice lies tipward of it, so every force there is
/// zero. An empty mesh or `n_planes == 0` yields an empty curve.
pub fn force_profile(
    mesh: &IceMesh,
    omega: f64,
    sigma_c: f64,
    tau_a: f64,
    n_planes: usize,
) -> ForceCurve {
    let Some((z_lo, z_hi)) = mesh.span_extent() else {
        return ForceCurve::default();
    };
    if n_planes == 0 || !(z_hi > z_lo) {
        return ForceCurve::default();
    }
    let width = z_hi - z_lo;
    let planes: Vec<CuttingPlane> = (0..n_planes)
        .map(|j| CuttingPlane {
            z: z_lo + width * j as f64 / n_planes as f64,
        })
        .collect();
    let pieces = partition(mesh, &planes);

    // Suffix sums from the tip so each sample is O(1).
    let n_pieces = pieces.len();
    let mut suffix_centrifugal = vec![0.0; n_pieces + 1];
    let mut suffix_adhesion = vec![0.0; n_pieces + 1];
    for i in (0..n_pieces).rev() {
        suffix_centrifugal[i] = suffix_centrifugal[i + 1]
            + centrifugal_force(&pieces[i].elements, mesh.density, omega, &mesh.span_axis);
        suffix_adhesion[i] = suffix_adhesion[i + 1] + tau_a * pieces[i].adhesion_area();
    }

    let samples = (0..n_planes)
        .map(|j| ForceSample {
            z: planes[j].z,
            centrifugal: suffix_centrifugal[j + 1],
            cohesion: cohesion_force(pieces[j + 1].cut_area_root_side, sigma_c),
            adhesion: suffix_adhesion[j + 1],
        })
        .collect();
    ForceCurve { samples }
}
