//! Shedding search: iterative cutting with a force-fitting fallback.
//!
//! The ice sheds at a spanwise plane when the centrifugal pull on everything
//! tipward of the plane exceeds what holds it there — the cohesive strength
//! of the ice across the cut plus the adhesive strength of the remaining
//! ice–blade contact. The solver subdivides the active spanwise domain into
//! `n_subdivisions` slices, evaluates the balance at every slice boundary,
//! and walks the planes from tip to root:
//!
//! * some plane satisfies the criterion → the failure location is bracketed
//!   between that plane (satisfied) and its tipward neighbour (not
//!   satisfied); the bracket becomes the new, `n_subdivisions`-times
//!   smaller domain and the search repeats;
//! * no plane satisfies it → either shedding genuinely cannot happen, or
//!   the balance dips positive only *between* planes. To tell the two
//!   apart, smooth monotone curves are fitted through the per-plane force
//!   samples ([`force_fit`]) and the fitted balance is searched densely for
//!   a sign change. A hit narrows the domain to the containing slice and
//!   its neighbours; a miss ends the search with no shedding.
//!
//! Refinement stops when the domain is narrower than `z_tolerance` (the
//! reported location is the bracket midpoint) or after `max_refinements`
//! passes. Every pass is recorded, with the force triple at every plane, so
//! a run can be audited afterwards.

use crate::clipping::{partition, CuttingPlane};
use crate::forces::{centrifugal_force, ForceCurve, ForceSample};
use crate::mesh::IceMesh;
use crate::strength::{StrengthError, StrengthModel};

/// Dense evaluation points per sample interval when searching the fitted
/// balance for a sign change.
const FIT_SCAN_PER_INTERVAL: usize = 128;

/// Relative width (times the spanwise scale) at which the root bisection on
/// the fitted balance stops.
const FIT_BISECT_RELATIVE: f64 = 1e-12;

/// How the three forces are compared at a candidate plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Criterion {
    /// Shed when the centrifugal force exceeds the *sum* of cohesion and
    /// adhesion resistance (the default).
    #[default]
    SumResistance,
    /// Shed when the centrifugal force exceeds each resistance separately.
    EitherResistance,
}

impl std::str::FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Criterion, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sum" => Ok(Criterion::SumResistance),
            "either" => Ok(Criterion::EitherResistance),
            other => Err(format!("unknown criterion `{other}` (expected `sum` or `either`)")),
        }
    }
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Criterion::SumResistance => write!(f, "sum"),
            Criterion::EitherResistance => write!(f, "either"),
        }
    }
}

/// Knobs of the shedding search.
#[derive(Debug, Clone, PartialEq)]
pub struct SheddingConfig {
    /// Slices per refinement pass; at least 10.
    pub n_subdivisions: usize,
    /// Stop refining once the bracket is this narrow, metres.
    pub z_tolerance: f64,
    /// Upper bound on refinement passes.
    pub max_refinements: usize,
    /// Force comparison rule.
    pub criterion: Criterion,
    /// Whether the fitted-curve fallback may run when no plane satisfies
    /// the criterion. Disabling it reproduces the plain plane-walk search.
    pub enable_force_fit: bool,
}

impl Default for SheddingConfig {
    fn default() -> SheddingConfig {
        SheddingConfig {
            n_subdivisions: 10,
            z_tolerance: 1e-3,
            max_refinements: 12,
            criterion: Criterion::SumResistance,
            enable_force_fit: true,
        }
    }
}

impl SheddingConfig {
    /// Default configuration with the location tolerance scaled to a rotor
    /// of tip radius `radius` (one part in a thousand of the span).
    pub fn for_radius(radius: f64) -> SheddingConfig {
        SheddingConfig {
            z_tolerance: 1e-3 * radius,
            ..SheddingConfig::default()
        }
    }

    fn validate(&self) -> Result<(), SheddingError> {
        if self.n_subdivisions < 10 {
            return Err(SheddingError::InvalidConfig(format!(
                "n_subdivisions must be at least 10, got {}",
                self.n_subdivisions
            )));
        }
        if !(self.z_tolerance.is_finite() && self.z_tolerance > 0.0) {
            return Err(SheddingError::InvalidConfig(format!(
                "z_tolerance must be positive, got {}",
                self.z_tolerance
            )));
        }
        if self.max_refinements == 0 {
            return Err(SheddingError::InvalidConfig(
                "max_refinements must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SheddingError {
    #[error(transparent)]
    Strength(#[from] StrengthError),
    #[error("force fitting needs at least 4 samples, got {got}")]
    TooFewSamples { got: usize },
    #[error("force samples must be finite and strictly increasing in z")]
    InvalidSamples,
    #[error("invalid shedding configuration: {0}")]
    InvalidConfig(String),
}

/// Forces and verdict at one cutting plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneRecord {
    pub z: f64,
    pub centrifugal: f64,
    pub cohesion: f64,
    pub adhesion: f64,
    pub satisfied: bool,
}

/// One refinement pass: the domain it worked on and the per-plane balance.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub domain: (f64, f64),
    pub planes: Vec<PlaneRecord>,
}

/// Outcome of a shedding search.
#[derive(Debug, Clone, PartialEq)]
pub struct SheddingResult {
    pub shed: bool,
    /// Spanwise shedding location, present iff `shed`.
    pub z_s: Option<f64>,
    /// Mass of the departing piece (everything tipward of `z_s`), kg.
    pub shed_mass: Option<f64>,
    /// Refinement trace, one record per pass.
    pub iterations: Vec<IterationRecord>,
    /// Whether the fitted-curve fallback decided any pass.
    pub fallback_used: bool,
}

impl SheddingResult {
    fn no_shed(iterations: Vec<IterationRecord>, fallback_used: bool) -> SheddingResult {
        SheddingResult {
            shed: false,
            z_s: None,
            shed_mass: None,
            iterations,
            fallback_used,
        }
    }
}

/// Applies the shedding criterion to one force triple. Equality does not
/// shed: the load must strictly exceed the resistance.
pub fn check_shedding(f_c: f64, f_coh: f64, f_adh: f64, criterion: Criterion) -> bool {
    match criterion {
        Criterion::SumResistance => f_c > f_coh + f_adh,
        Criterion::EitherResistance => f_c > f_coh && f_c > f_adh,
    }
}

/// Plane-walk search without the fitted-curve fallback: refinement recurses
/// only on planes that satisfy the criterion outright.
pub fn iterative_cut(
    mesh: &IceMesh,
    omega: f64,
    model: &StrengthModel,
    temperature: f64,
    cfg: &SheddingConfig,
) -> Result<SheddingResult, SheddingError> {
    run_search(mesh, omega, model, temperature, cfg, false)
}

/// Full search: plane walk plus the fitted-curve fallback (unless disabled
/// in the configuration), reproducing shedding events that fall strictly
/// between subdivision planes.
pub fn find_shedding(
    mesh: &IceMesh,
    omega: f64,
    model: &StrengthModel,
    temperature: f64,
    cfg: &SheddingConfig,
) -> Result<SheddingResult, SheddingError> {
    run_search(mesh, omega, model, temperature, cfg, cfg.enable_force_fit)
}

fn run_search(
    mesh: &IceMesh,
    omega: f64,
    model: &StrengthModel,
    temperature: f64,
    cfg: &SheddingConfig,
    allow_fallback: bool,
) -> Result<SheddingResult, SheddingError> {
    cfg.validate()?;
    let sigma_c = model.cohesion_strength(temperature)?;
    let tau_a = model.adhesion_strength(temperature)?;

    let Some((z_lo, z_hi)) = mesh.span_extent() else {
        return Ok(SheddingResult::no_shed(Vec::new(), false));
    };
    if !(z_hi > z_lo) {
        return Ok(SheddingResult::no_shed(Vec::new(), false));
    }

    let mut domain = (z_lo, z_hi);
    let mut iterations: Vec<IterationRecord> = Vec::new();
    // Shedding is only ever reported once some subdivision plane has
    // satisfied the criterion. The fitted-curve fallback may steer the
    // refinement window, but it cannot declare a shed on its own: the fit is
    // an interpolation guess, and near free ends it can manufacture
    // crossings that no actual cut reproduces.
    let mut confirmed = false;
    let mut fallback_used = false;

    for _ in 0..cfg.max_refinements {
        let Some(pass) = run_pass(mesh, omega, sigma_c, tau_a, cfg, domain) else {
            // The domain is too narrow to subdivide in floating point;
            // whatever bracket we have is final.
            break;
        };
        let selection = pass
            .record
            .planes
            .iter()
            .rev()
            .find(|p| p.satisfied)
            .map(|p| p.z);
        let planes_z: Vec<f64> = pass.record.planes.iter().map(|p| p.z).collect();
        iterations.push(pass.record);

        match selection {
            Some(z_sel) => {
                // Bracket: the tipmost satisfied plane and its tipward
                // neighbour (the domain top for the last interior plane).
                let j = planes_z.partition_point(|&z| z <= z_sel) - 1;
                let upper = if j + 1 < planes_z.len() {
                    planes_z[j + 1]
                } else {
                    domain.1
                };
                domain = (planes_z[j], upper);
                confirmed = true;
            }
            None if allow_fallback && !confirmed => {
                match force_fit(&pass.curve, cfg)? {
                    Some(candidate) => {
                        domain = fallback_window(&planes_z, domain.1, candidate);
                        fallback_used = true;
                    }
                    None => return Ok(SheddingResult::no_shed(iterations, fallback_used)),
                }
            }
            None => return Ok(SheddingResult::no_shed(iterations, fallback_used)),
        }
        if confirmed && domain.1 - domain.0 <= cfg.z_tolerance {
            break;
        }
    }

    if !confirmed {
        return Ok(SheddingResult::no_shed(iterations, fallback_used));
    }
    let z_s = 0.5 * (domain.0 + domain.1);
    let pieces = partition(mesh, &[CuttingPlane { z: z_s }]);
    let shed_mass = mesh.density * pieces[1].volume();
    Ok(SheddingResult {
        shed: true,
        z_s: Some(z_s),
        shed_mass: Some(shed_mass),
        iterations,
        fallback_used,
    })
}

struct PassOutcome {
    record: IterationRecord,
    curve: ForceCurve,
}

/// Evaluates one refinement pass over `domain`: partitions the mesh at the
/// subdivision planes and assembles the force triple at each plane from
/// tipward suffix sums. Returns `None` when the planes are no longer
/// strictly increasing in floating point.
fn run_pass(
    mesh: &IceMesh,
    omega: f64,
    sigma_c: f64,
    tau_a: f64,
    cfg: &SheddingConfig,
    domain: (f64, f64),
) -> Option<PassOutcome> {
    let (lo, hi) = domain;
    let n = cfg.n_subdivisions;
    let width = hi - lo;
    let planes_z: Vec<f64> = (0..=n)
        .map(|j| if j == n { hi } else { lo + width * j as f64 / n as f64 })
        .collect();
    if planes_z.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    let planes: Vec<CuttingPlane> = planes_z.iter().map(|&z| CuttingPlane { z }).collect();
    let pieces = partition(mesh, &planes);

    // Tipward suffix sums; the piece beyond the domain top carries the ice
    // kept from earlier passes, so every plane sees the full tipward load.
    let m = pieces.len();
    let mut suffix_c = vec![0.0; m + 1];
    let mut suffix_a = vec![0.0; m + 1];
    for i in (0..m).rev() {
        suffix_c[i] = suffix_c[i + 1]
            + centrifugal_force(&pieces[i].elements, mesh.density, omega, &mesh.span_axis);
        suffix_a[i] = suffix_a[i + 1] + tau_a * pieces[i].adhesion_area();
    }

    let mut records = Vec::with_capacity(n);
    let mut samples = Vec::with_capacity(n);
    for j in 0..n {
        let f_c = suffix_c[j + 1];
        let f_coh = sigma_c * pieces[j + 1].cut_area_root_side;
        let f_adh = suffix_a[j + 1];
        records.push(PlaneRecord {
            z: planes_z[j],
            centrifugal: f_c,
            cohesion: f_coh,
            adhesion: f_adh,
            satisfied: check_shedding(f_c, f_coh, f_adh, cfg.criterion),
        });
        samples.push(ForceSample {
            z: planes_z[j],
            centrifugal: f_c,
            cohesion: f_coh,
            adhesion: f_adh,
        });
    }
    Some(PassOutcome {
        record: IterationRecord {
            domain,
            planes: records,
        },
        curve: ForceCurve { samples },
    })
}

/// New domain around a fallback candidate: the subdivision slice containing
/// it plus the neighbouring slice on each side. `planes_z` holds the slice
/// bottoms `p_0 … p_{n−1}`; the top of the last slice is `domain_hi`.
fn fallback_window(planes_z: &[f64], domain_hi: f64, candidate: f64) -> (f64, f64) {
    let n = planes_z.len();
    let k = planes_z
        .partition_point(|&z| z <= candidate)
        .saturating_sub(1)
        .min(n - 1);
    let lo = planes_z[k.saturating_sub(1)];
    let hi = if k + 2 < n { planes_z[k + 2] } else { domain_hi };
    (lo, hi)
}

/// Fits smooth monotone curves through per-plane force samples and searches
/// the fitted balance for its tipmost sign change.
///
/// The curves are monotone piecewise cubics (no overshoot between samples).
/// The balance searched first matches the configured criterion: centrifugal
/// minus summed resistance, or — under `EitherResistance` — the smaller of
/// the two separate margins. If that balance never changes sign, the
/// centrifugal/cohesion intersection alone is tried. Returns the tipmost
/// location where the balance turns positive on the rootward side, or
/// `None` when no such crossing exists.
pub fn force_fit(curve: &ForceCurve, cfg: &SheddingConfig) -> Result<Option<f64>, SheddingError> {
    let s = &curve.samples;
    if s.len() < 4 {
        return Err(SheddingError::TooFewSamples { got: s.len() });
    }
    let x: Vec<f64> = s.iter().map(|p| p.z).collect();
    let finite = s
        .iter()
        .all(|p| p.z.is_finite() && p.centrifugal.is_finite() && p.cohesion.is_finite() && p.adhesion.is_finite());
    if !finite || x.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SheddingError::InvalidSamples);
    }

    let fc = pchip::MonotoneCubic::fit(&x, &s.iter().map(|p| p.centrifugal).collect::<Vec<_>>());
    let fcoh = pchip::MonotoneCubic::fit(&x, &s.iter().map(|p| p.cohesion).collect::<Vec<_>>());
    let fadh = pchip::MonotoneCubic::fit(&x, &s.iter().map(|p| p.adhesion).collect::<Vec<_>>());
    let fsum = pchip::MonotoneCubic::fit(
        &x,
        &s.iter().map(|p| p.cohesion + p.adhesion).collect::<Vec<_>>(),
    );

    let primary = |z: f64| match cfg.criterion {
        Criterion::SumResistance => fc.eval(z) - fsum.eval(z),
        Criterion::EitherResistance => {
            (fc.eval(z) - fcoh.eval(z)).min(fc.eval(z) - fadh.eval(z))
        }
    };
    if let Some(root) = tipmost_onset(&x, primary) {
        return Ok(Some(root));
    }
    // Secondary intersection: centrifugal against cohesion alone.
    Ok(tipmost_onset(&x, |z| fc.eval(z) - fcoh.eval(z)))
}

/// Scans `balance` densely from the tipmost sample towards the root and
/// returns the tipmost point where it transitions from non-positive
/// (tipward) to positive (rootward), bisected to floating-point precision.
fn tipmost_onset(x: &[f64], balance: impl Fn(f64) -> f64) -> Option<f64> {
    let n = x.len();
    let scale = x[n - 1].abs().max(x[n - 1] - x[0]).max(1e-30);
    let tol = FIT_BISECT_RELATIVE * scale;

    for i in (0..n - 1).rev() {
        let (xl, xr) = (x[i], x[i + 1]);
        let h = (xr - xl) / FIT_SCAN_PER_INTERVAL as f64;
        let mut upper = xr;
        let mut d_upper = balance(upper);
        for q in 1..=FIT_SCAN_PER_INTERVAL {
            let lower = if q == FIT_SCAN_PER_INTERVAL {
                xl
            } else {
                xr - h * q as f64
            };
            let d_lower = balance(lower);
            if d_upper <= 0.0 && d_lower > 0.0 {
                // Bisect the transition: `a` stays positive, `b` stays
                // non-positive.
                let (mut a, mut b) = (lower, upper);
                for _ in 0..200 {
                    if b - a <= tol {
                        break;
                    }
                    let mid = 0.5 * (a + b);
                    if balance(mid) > 0.0 {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                return Some(0.5 * (a + b));
            }
            upper = lower;
            d_upper = d_lower;
        }
    }
    None
}

/// Monotone piecewise-cubic interpolation (shape-preserving Hermite).
mod pchip {
    /// Cubic Hermite interpolant whose derivatives are limited so the curve
    /// never overshoots the data: monotone runs of samples stay monotone.
    pub struct MonotoneCubic {
        x: Vec<f64>,
        y: Vec<f64>,
        d: Vec<f64>,
    }

    impl MonotoneCubic {
        pub fn fit(x: &[f64], y: &[f64]) -> MonotoneCubic {
            assert_eq!(x.len(), y.len());
            assert!(x.len() >= 2, "need at least two samples");
            let n = x.len();
            let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
            let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();

            let mut d = vec![0.0; n];
            if n == 2 {
                d[0] = delta[0];
                d[1] = delta[0];
            } else {
                for i in 1..n - 1 {
                    if delta[i - 1] * delta[i] <= 0.0 {
                        d[i] = 0.0;
                    } else {
                        // Weighted harmonic mean of the neighbouring slopes;
                        // weights favour the narrower interval.
                        let w1 = 2.0 * h[i] + h[i - 1];
                        let w2 = h[i] + 2.0 * h[i - 1];
                        d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                    }
                }
                d[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
                d[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
            }
            MonotoneCubic {
                x: x.to_vec(),
                y: y.to_vec(),
                d,
            }
        }

        pub fn eval(&self, t: f64) -> f64 {
            let n = self.x.len();
            // Clamp to the end intervals; callers stay inside the sample
            // range anyway.
            let i = self
                .x
                .partition_point(|&xi| xi <= t)
                .clamp(1, n - 1)
                - 1;
            let h = self.x[i + 1] - self.x[i];
            let s = (t - self.x[i]) / h;
            let (s2, s3) = (s * s, s * s * s);
            let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
            let h10 = s3 - 2.0 * s2 + s;
            let h01 = -2.0 * s3 + 3.0 * s2;
            let h11 = s3 - s2;
            h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
        }
    }

    /// Non-centred three-point estimate of the boundary slope, limited so
    /// the first interval stays monotone (Fritsch–Carlson end conditions).
    fn endpoint_slope(h0: f64, h1: f64, delta0: f64, delta1: f64) -> f64 {
        let mut d = ((2.0 * h0 + h1) * delta0 - h0 * delta1) / (h0 + h1);
        if d * delta0 <= 0.0 {
            d = 0.0;
        } else if delta0 * delta1 <= 0.0 && d.abs() > 3.0 * delta0.abs() {
            d = 3.0 * delta0;
        }
        d
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn reproduces_samples_exactly() {
            let x = [0.0, 1.0, 2.5, 4.0];
            let y = [3.0, 2.0, 0.5, 0.4];
            let f = MonotoneCubic::fit(&x, &y);
            for (xi, yi) in x.iter().zip(y.iter()) {
                assert!((f.eval(*xi) - yi).abs() < 1e-14);
            }
        }

        #[test]
        fn linear_data_stays_linear() {
            let x = [0.0, 0.7, 1.9, 3.0];
            let y: Vec<f64> = x.iter().map(|t| 5.0 - 2.0 * t).collect();
            let f = MonotoneCubic::fit(&x, &y);
            for k in 0..=30 {
                let t = 3.0 * k as f64 / 30.0;
                assert!((f.eval(t) - (5.0 - 2.0 * t)).abs() < 1e-12);
            }
        }

        #[test]
        fn no_overshoot_on_monotone_data() {
            // Steep step: a plain cubic spline would overshoot below 0.
            let x = [0.0, 1.0, 2.0, 3.0, 4.0];
            let y = [10.0, 9.5, 0.2, 0.1, 0.05];
            let f = MonotoneCubic::fit(&x, &y);
            let mut prev = f.eval(0.0);
            for k in 1..=400 {
                let t = 4.0 * k as f64 / 400.0;
                let v = f.eval(t);
                assert!(v <= prev + 1e-12, "not monotone at t={t}");
                assert!(v >= 0.05 - 1e-12 && v <= 10.0 + 1e-12);
                prev = v;
            }
        }
    }
}
