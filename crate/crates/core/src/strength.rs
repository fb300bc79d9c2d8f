//! Temperature-dependent ice strength curves.
//!
//! The force balance needs two material properties: the cohesion strength
//! σ_c (ice failing internally, Pa) and the adhesion strength τ_a (the
//! ice–substrate bond, Pa), both functions of temperature in °C. Measured
//! data comes in different shapes, so a curve is one of a constant, a low
//! order polynomial, or a lookup table with linear interpolation.
//!
//! Both strengths drop as ice warms towards the melting point. A
//! [`StrengthModel`] therefore refuses curves that are negative or
//! increasing anywhere on the declared validity range (checked on a dense
//! scan at construction), and refuses to extrapolate outside that range at
//! evaluation time — silently extrapolating strength data is how a solver
//! ends up predicting nonsense far from the measurements.

/// Number of scan points used to vet a curve over its validity range.
const VALIDATION_SCAN_POINTS: usize = 1000;

/// Relative slack allowed in the non-increasing check, to tolerate rounding
/// in polynomial evaluation near flat spots.
const MONOTONE_SLACK: f64 = 1e-12;

/// Highest polynomial degree accepted for a strength curve.
pub const MAX_POLYNOMIAL_DEGREE: usize = 4;

/// One strength curve over temperature.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveSpec {
    /// Strength independent of temperature, Pa.
    Constant(f64),
    /// Coefficients in ascending powers of temperature:
    /// `c[0] + c[1]·T + c[2]·T² + …`, degree at most 4.
    Polynomial(Vec<f64>),
    /// `(temperature °C, strength Pa)` knots with strictly increasing
    /// temperatures; evaluated by linear interpolation, exact at knots.
    Table(Vec<(f64, f64)>),
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum StrengthError {
    #[error("temperature {temperature} °C outside validity range [{lo}, {hi}] °C")]
    OutOfRange { temperature: f64, lo: f64, hi: f64 },
    #[error("{curve} strength is not positive at {temperature} °C (value {value:.3e} Pa)")]
    NonPositive {
        curve: &'static str,
        temperature: f64,
        value: f64,
    },
    #[error("{curve} strength increases with temperature near {temperature} °C")]
    Increasing {
        curve: &'static str,
        temperature: f64,
    },
    #[error("invalid strength specification: {0}")]
    InvalidSpec(String),
}

/// Validated pair of cohesion and adhesion strength curves.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthModel {
    cohesion: CurveSpec,
    adhesion: CurveSpec,
    valid_range: (f64, f64),
}

impl CurveSpec {
    /// Evaluates the curve without range checking.
    fn eval(&self, t: f64) -> f64 {
        match self {
            CurveSpec::Constant(c) => *c,
            CurveSpec::Polynomial(coeffs) => {
                let mut acc = 0.0;
                for &c in coeffs.iter().rev() {
                    acc = acc * t + c;
                }
                acc
            }
            CurveSpec::Table(knots) => {
                if knots.len() == 1 {
                    return knots[0].1;
                }
                let last = knots.len() - 1;
                if t >= knots[last].0 {
                    return knots[last].1;
                }
                let mut i = 0;
                while i + 1 < last && t >= knots[i + 1].0 {
                    i += 1;
                }
                let (t0, v0) = knots[i];
                let (t1, v1) = knots[i + 1];
                let u = (t - t0) / (t1 - t0);
                v0 + (v1 - v0) * u
            }
        }
    }

    fn check_shape(&self, name: &'static str) -> Result<(), StrengthError> {
        match self {
            CurveSpec::Constant(_) => Ok(()),
            CurveSpec::Polynomial(coeffs) => {
                if coeffs.is_empty() {
                    return Err(StrengthError::InvalidSpec(format!(
                        "{name} polynomial has no coefficients"
                    )));
                }
                if coeffs.len() > MAX_POLYNOMIAL_DEGREE + 1 {
                    return Err(StrengthError::InvalidSpec(format!(
                        "{name} polynomial degree {} exceeds {MAX_POLYNOMIAL_DEGREE}",
                        coeffs.len() - 1
                    )));
                }
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(StrengthError::InvalidSpec(format!(
                        "{name} polynomial has a non-finite coefficient"
                    )));
                }
                Ok(())
            }
            CurveSpec::Table(knots) => {
                if knots.is_empty() {
                    return Err(StrengthError::InvalidSpec(format!("{name} table is empty")));
                }
                if knots.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
                    return Err(StrengthError::InvalidSpec(format!(
                        "{name} table has a non-finite entry"
                    )));
                }
                if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return Err(StrengthError::InvalidSpec(format!(
                        "{name} table temperatures must be strictly increasing"
                    )));
                }
                Ok(())
            }
        }
    }
}

impl StrengthModel {
    /// Builds a model, vetting both curves for positivity and monotone
    /// non-increase over `valid_range` (°C, `lo < hi`).
    pub fn new(
        cohesion: CurveSpec,
        adhesion: CurveSpec,
        valid_range: (f64, f64),
    ) -> Result<StrengthModel, StrengthError> {
        let (lo, hi) = valid_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(StrengthError::InvalidSpec(format!(
                "validity range [{lo}, {hi}] is not a finite increasing interval"
            )));
        }
        cohesion.check_shape("cohesion")?;
        adhesion.check_shape("adhesion")?;
        for (name, curve) in [("cohesion", &cohesion), ("adhesion", &adhesion)] {
            let mut prev: Option<f64> = None;
            for k in 0..VALIDATION_SCAN_POINTS {
                let t = lo + (hi - lo) * k as f64 / (VALIDATION_SCAN_POINTS - 1) as f64;
                let v = curve.eval(t);
                if !(v.is_finite() && v > 0.0) {
                    return Err(StrengthError::NonPositive {
                        curve: name,
                        temperature: t,
                        value: v,
                    });
                }
                if let Some(p) = prev {
                    if v > p * (1.0 + MONOTONE_SLACK) {
                        return Err(StrengthError::Increasing {
                            curve: name,
                            temperature: t,
                        });
                    }
                }
                prev = Some(v);
            }
        }
        Ok(StrengthModel {
            cohesion,
            adhesion,
            valid_range,
        })
    }

    /// Placeholder curves for rotor glaze ice over [-16, -4] °C. The
    /// magnitudes are in the right ballpark for design studies; quantitative
    /// work should supply measured curves through the case configuration.
    pub fn with_defaults() -> StrengthModel {
        StrengthModel::new(
            CurveSpec::Table(vec![(-16.0, 1.4e6), (-8.0, 1.1e6), (-4.0, 8.0e5)]),
            CurveSpec::Table(vec![(-16.0, 4.5e5), (-8.0, 3.4e5), (-4.0, 2.0e5)]),
            (-16.0, -4.0),
        )
        .expect("built-in strength curves are valid")
    }

    pub fn valid_range(&self) -> (f64, f64) {
        self.valid_range
    }

    pub fn cohesion_curve(&self) -> &CurveSpec {
        &self.cohesion
    }

    pub fn adhesion_curve(&self) -> &CurveSpec {
        &self.adhesion
    }

    fn check_range(&self, t: f64) -> Result<(), StrengthError> {
        let (lo, hi) = self.valid_range;
        if t.is_finite() && t >= lo && t <= hi {
            Ok(())
        } else {
            Err(StrengthError::OutOfRange {
                temperature: t,
                lo,
                hi,
            })
        }
    }

    /// Cohesion strength σ_c at `temperature` °C, in Pa.
    pub fn cohesion_strength(&self, temperature: f64) -> Result<f64, StrengthError> {
        self.check_range(temperature)?;
        Ok(self.cohesion.eval(temperature))
    }

    /// Adhesion strength τ_a at `temperature` °C, in Pa.
    pub fn adhesion_strength(&self, temperature: f64) -> Result<f64, StrengthError> {
        self.check_range(temperature)?;
        Ok(self.adhesion.eval(temperature))
    }
}
