//! Case configuration: parsing and serialization.
//!
//! The format is line-oriented `key = value` with `#` comments. Dotted keys
//! group related knobs; lists are comma-separated. Paths are resolved
//! relative to the directory of the config file. A minimal case:
//!
//! ```text
//! rotor.radius = 1.18
//! rotor.rpm = 600
//! temperature = -8
//! accretion_dt = 40
//! steps = steps/step01.manifest, steps/step02.manifest
//! ```
//!
//! Strength curves accept three shapes:
//!
//! ```text
//! strength.cohesion = constant 2e5
//! strength.cohesion = polynomial 5e5, -5e4      # ascending powers of T
//! strength.cohesion = table -16:1.4e6, -8:1.1e6, -4:8e5
//! strength.range = -16, -4                      # validity range, °C
//! ```
//!
//! Unset keys fall back to documented defaults: density 900 kg/m³, the
//! built-in strength tables, and a shedding search with ten subdivisions, a
//! location tolerance of radius/1000, and the summed-resistance criterion.
//! `annotation.<name>` keys are free-form metadata copied into reports.

use std::path::{Path, PathBuf};

use super::DriverError;
use crate::shedding::{Criterion, SheddingConfig};
use crate::strength::{CurveSpec, StrengthModel};

/// Rotor geometry and operating point. Only the radius and rotation rate
/// enter the force balance; pitch, twist, and chord are carried as metadata
/// for reports.
#[derive(Debug, Clone, PartialEq)]
pub struct RotorConfig {
    /// Tip radius, m.
    pub radius: f64,
    /// Rotation rate, rev/min.
    pub rpm: f64,
    /// Collective pitch, degrees (metadata).
    pub collective_pitch: f64,
    /// Linear twist, degrees (metadata).
    pub twist: f64,
    /// Chord, m (metadata).
    pub chord: f64,
}

/// One complete icing case.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseConfig {
    pub rotor: RotorConfig,
    /// Ambient temperature, °C; must lie inside the strength validity range.
    pub temperature: f64,
    /// Accretion interval between steps, s.
    pub accretion_dt: f64,
    /// Ice density, kg/m³.
    pub density: f64,
    /// One mesh source per accretion step, in time order.
    pub steps: Vec<PathBuf>,
    pub strength: StrengthModel,
    pub shedding: SheddingConfig,
    /// Gmsh physical tags labelling adhesion faces.
    pub msh_adhesion_tags: Vec<i32>,
    /// Gmsh physical tags labelling flow faces.
    pub msh_flow_tags: Vec<i32>,
    /// Free-form metadata copied into reports.
    pub annotations: Vec<(String, String)>,
}

fn config_err(line: usize, message: impl Into<String>) -> DriverError {
    DriverError::Config {
        line,
        message: message.into(),
    }
}

fn parse_f64(line: usize, token: &str) -> Result<f64, DriverError> {
    token
        .trim()
        .parse()
        .map_err(|_| config_err(line, format!("bad number `{}`", token.trim())))
}

fn parse_list<T: std::str::FromStr>(line: usize, value: &str, what: &str) -> Result<Vec<T>, DriverError> {
    value
        .split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| config_err(line, format!("bad {what} `{}`", t.trim())))
        })
        .collect()
}

fn parse_curve(line: usize, value: &str) -> Result<CurveSpec, DriverError> {
    let value = value.trim();
    let (kind, rest) = value
        .split_once(|c: char| c.is_whitespace())
        .unwrap_or((value, ""));
    match kind {
        "constant" => Ok(CurveSpec::Constant(parse_f64(line, rest)?)),
        "polynomial" => Ok(CurveSpec::Polynomial(parse_list(line, rest, "coefficient")?)),
        "table" => {
            let knots = rest
                .split(',')
                .map(|pair| {
                    let (t, v) = pair
                        .trim()
                        .split_once(':')
                        .ok_or_else(|| config_err(line, format!("bad table entry `{pair}`, expected T:value")))?;
                    Ok((parse_f64(line, t)?, parse_f64(line, v)?))
                })
                .collect::<Result<Vec<_>, DriverError>>()?;
            Ok(CurveSpec::Table(knots))
        }
        other => Err(config_err(
            line,
            format!("unknown curve kind `{other}` (expected constant, polynomial, or table)"),
        )),
    }
}

fn curve_to_string(curve: &CurveSpec) -> String {
    match curve {
        CurveSpec::Constant(c) => format!("constant {c:.16e}"),
        CurveSpec::Polynomial(coeffs) => {
            let list: Vec<String> = coeffs.iter().map(|c| format!("{c:.16e}")).collect();
            format!("polynomial {}", list.join(", "))
        }
        CurveSpec::Table(knots) => {
            let list: Vec<String> = knots
                .iter()
                .map(|(t, v)| format!("{t:.16e}:{v:.16e}"))
                .collect();
            format!("table {}", list.join(", "))
        }
    }
}

impl CaseConfig {
    /// Reads and parses a case file; relative paths inside it are resolved
    /// against the file's directory.
    pub fn from_file(path: &Path) -> Result<CaseConfig, DriverError> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        CaseConfig::parse(&text, base)
    }

    /// Parses config text; `base` anchors relative step paths.
    pub fn parse(text: &str, base: &Path) -> Result<CaseConfig, DriverError> {
        let mut radius = None;
        let mut rpm = None;
        let mut collective_pitch = 0.0;
        let mut twist = 0.0;
        let mut chord = 0.0;
        let mut temperature = None;
        let mut accretion_dt = None;
        let mut density = 900.0;
        let mut steps: Vec<PathBuf> = Vec::new();
        let mut cohesion = None;
        let mut adhesion = None;
        let mut range = None;
        let mut n_subdivisions = None;
        let mut z_tolerance = None;
        let mut max_refinements = None;
        let mut criterion = None;
        let mut force_fit = None;
        let mut msh_adhesion_tags = vec![1];
        let mut msh_flow_tags = vec![2];
        let mut annotations = Vec::new();

        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(config_err(ln, format!("expected `key = value`, got `{line}`")));
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "rotor.radius" => radius = Some(parse_f64(ln, value)?),
                "rotor.rpm" => rpm = Some(parse_f64(ln, value)?),
                "rotor.collective_pitch" => collective_pitch = parse_f64(ln, value)?,
                "rotor.twist" => twist = parse_f64(ln, value)?,
                "rotor.chord" => chord = parse_f64(ln, value)?,
                "temperature" => temperature = Some(parse_f64(ln, value)?),
                "accretion_dt" => accretion_dt = Some(parse_f64(ln, value)?),
                "density" => density = parse_f64(ln, value)?,
                "steps" => {
                    steps = value
                        .split(',')
                        .map(|p| base.join(p.trim()))
                        .collect();
                }
                "strength.cohesion" => cohesion = Some(parse_curve(ln, value)?),
                "strength.adhesion" => adhesion = Some(parse_curve(ln, value)?),
                "strength.range" => {
                    let parts: Vec<&str> = value.split(',').collect();
                    if parts.len() != 2 {
                        return Err(config_err(ln, "expected `strength.range = <lo>, <hi>`"));
                    }
                    range = Some((parse_f64(ln, parts[0])?, parse_f64(ln, parts[1])?));
                }
                "shedding.n_subdivisions" => {
                    n_subdivisions = Some(value.parse().map_err(|_| {
                        config_err(ln, format!("bad subdivision count `{value}`"))
                    })?)
                }
                "shedding.z_tolerance" => z_tolerance = Some(parse_f64(ln, value)?),
                "shedding.max_refinements" => {
                    max_refinements = Some(value.parse().map_err(|_| {
                        config_err(ln, format!("bad refinement count `{value}`"))
                    })?)
                }
                "shedding.criterion" => {
                    criterion = Some(
                        value
                            .parse::<Criterion>()
                            .map_err(|e| config_err(ln, e))?,
                    )
                }
                "shedding.force_fit" => {
                    force_fit = Some(match value {
                        "true" => true,
                        "false" => false,
                        other => {
                            return Err(config_err(ln, format!("bad boolean `{other}`")))
                        }
                    })
                }
                "msh.adhesion_tags" => msh_adhesion_tags = parse_list(ln, value, "tag")?,
                "msh.flow_tags" => msh_flow_tags = parse_list(ln, value, "tag")?,
                _ if key.starts_with("annotation.") => {
                    annotations.push((key["annotation.".len()..].to_string(), value.to_string()));
                }
                other => return Err(config_err(ln, format!("unknown key `{other}`"))),
            }
        }

        let radius = radius.ok_or_else(|| config_err(0, "missing `rotor.radius`"))?;
        let rpm = rpm.ok_or_else(|| config_err(0, "missing `rotor.rpm`"))?;
        let temperature = temperature.ok_or_else(|| config_err(0, "missing `temperature`"))?;
        let accretion_dt =
            accretion_dt.ok_or_else(|| config_err(0, "missing `accretion_dt`"))?;

        let defaults = StrengthModel::with_defaults();
        let strength = StrengthModel::new(
            cohesion.unwrap_or_else(|| defaults.cohesion_curve().clone()),
            adhesion.unwrap_or_else(|| defaults.adhesion_curve().clone()),
            range.unwrap_or_else(|| defaults.valid_range()),
        )
        .map_err(|e| config_err(0, format!("strength curves: {e}")))?;

        let mut shedding = SheddingConfig::for_radius(radius);
        if let Some(n) = n_subdivisions {
            shedding.n_subdivisions = n;
        }
        if let Some(z) = z_tolerance {
            shedding.z_tolerance = z;
        }
        if let Some(m) = max_refinements {
            shedding.max_refinements = m;
        }
        if let Some(c) = criterion {
            shedding.criterion = c;
        }
        if let Some(f) = force_fit {
            shedding.enable_force_fit = f;
        }

        let case = CaseConfig {
            rotor: RotorConfig {
                radius,
                rpm,
                collective_pitch,
                twist,
                chord,
            },
            temperature,
            accretion_dt,
            density,
            steps,
            strength,
            shedding,
            msh_adhesion_tags,
            msh_flow_tags,
            annotations,
        };
        case.validate().map_err(|m| config_err(0, m))?;
        Ok(case)
    }

    /// Checks the cross-field invariants that individual key parsers cannot.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.rotor.radius.is_finite() && self.rotor.radius > 0.0) {
            return Err(format!("rotor radius must be positive, got {}", self.rotor.radius));
        }
        if !(self.rotor.rpm.is_finite() && self.rotor.rpm >= 0.0) {
            return Err(format!("rotor rpm must be non-negative, got {}", self.rotor.rpm));
        }
        if !(self.accretion_dt.is_finite() && self.accretion_dt > 0.0) {
            return Err(format!(
                "accretion interval must be positive, got {}",
                self.accretion_dt
            ));
        }
        if !(self.density.is_finite() && self.density > 0.0) {
            return Err(format!("ice density must be positive, got {}", self.density));
        }
        if self.steps.is_empty() {
            return Err("a case needs at least one accretion step".into());
        }
        let (lo, hi) = self.strength.valid_range();
        if !(self.temperature >= lo && self.temperature <= hi) {
            return Err(format!(
                "temperature {} °C outside the strength validity range [{lo}, {hi}] °C",
                self.temperature
            ));
        }
        Ok(())
    }

    /// Serializes the case in the same format `parse` reads, with every key
    /// written explicitly and numbers at full precision, so that parsing
    /// the output reproduces the case exactly.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        kv("rotor.radius", format!("{:.16e}", self.rotor.radius));
        kv("rotor.rpm", format!("{:.16e}", self.rotor.rpm));
        kv(
            "rotor.collective_pitch",
            format!("{:.16e}", self.rotor.collective_pitch),
        );
        kv("rotor.twist", format!("{:.16e}", self.rotor.twist));
        kv("rotor.chord", format!("{:.16e}", self.rotor.chord));
        kv("temperature", format!("{:.16e}", self.temperature));
        kv("accretion_dt", format!("{:.16e}", self.accretion_dt));
        kv("density", format!("{:.16e}", self.density));
        let steps: Vec<String> = self
            .steps
            .iter()
            .map(|p| p.display().to_string())
            .collect();
        kv("steps", steps.join(", "));
        kv(
            "strength.cohesion",
            curve_to_string(self.strength.cohesion_curve()),
        );
        kv(
            "strength.adhesion",
            curve_to_string(self.strength.adhesion_curve()),
        );
        let (lo, hi) = self.strength.valid_range();
        kv("strength.range", format!("{lo:.16e}, {hi:.16e}"));
        kv(
            "shedding.n_subdivisions",
            self.shedding.n_subdivisions.to_string(),
        );
        kv(
            "shedding.z_tolerance",
            format!("{:.16e}", self.shedding.z_tolerance),
        );
        kv(
            "shedding.max_refinements",
            self.shedding.max_refinements.to_string(),
        );
        kv("shedding.criterion", self.shedding.criterion.to_string());
        kv(
            "shedding.force_fit",
            self.shedding.enable_force_fit.to_string(),
        );
        let tags: Vec<String> = self.msh_adhesion_tags.iter().map(|t| t.to_string()).collect();
        kv("msh.adhesion_tags", tags.join(", "));
        let tags: Vec<String> = self.msh_flow_tags.iter().map(|t| t.to_string()).collect();
        kv("msh.flow_tags", tags.join(", "));
        for (name, value) in &self.annotations {
            kv(&format!("annotation.{name}"), value.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
# Run-35-like case
rotor.radius = 1.18
rotor.rpm = 600
temperature = -8
accretion_dt = 40
steps = a.mesh, b.manifest
annotation.mvd_um = 20
";

    #[test]
    fn minimal_config_fills_documented_defaults() {
        let case = CaseConfig::parse(MINIMAL, Path::new("/base")).unwrap();
        assert_eq!(case.rotor.radius, 1.18);
        assert_eq!(case.density, 900.0);
        assert_eq!(case.steps[0], PathBuf::from("/base/a.mesh"));
        assert_eq!(case.steps[1], PathBuf::from("/base/b.manifest"));
        assert_eq!(case.shedding.n_subdivisions, 10);
        assert!((case.shedding.z_tolerance - 1.18e-3).abs() < 1e-15);
        assert_eq!(case.shedding.criterion, Criterion::SumResistance);
        assert!(case.shedding.enable_force_fit);
        assert_eq!(case.annotations, vec![("mvd_um".into(), "20".into())]);
        // Default strength tables evaluated at the case temperature.
        assert_eq!(case.strength.cohesion_strength(-8.0).unwrap(), 1.1e6);
        assert_eq!(case.strength.adhesion_strength(-8.0).unwrap(), 3.4e5);
    }

    #[test]
    fn parse_serialize_round_trip_is_idempotent() {
        let text = "\
rotor.radius = 1.18
rotor.rpm = 540.5
rotor.chord = 0.172
temperature = -12.5
accretion_dt = 40
density = 880
steps = s1.mesh
strength.cohesion = polynomial 5e5, -5e4
strength.adhesion = table -16:4.5e5, -8:3.4e5, -4:2.0e5
strength.range = -16, -4
shedding.n_subdivisions = 12
shedding.criterion = either
shedding.force_fit = false
msh.adhesion_tags = 7, 9
annotation.run = 35
";
        let base = Path::new("/case");
        let once = CaseConfig::parse(text, base).unwrap();
        let serialized = once.serialize();
        let twice = CaseConfig::parse(&serialized, base).unwrap();
        assert_eq!(once, twice);
        assert_eq!(serialized, twice.serialize());
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected_with_line_numbers() {
        let bad_key = "rotor.radius = 1\nrotor.rpm = 1\ntemperature = -8\naccretion_dt = 1\nsteps = a\nwhatever = 3\n";
        match CaseConfig::parse(bad_key, Path::new(".")) {
            Err(DriverError::Config { line, .. }) => assert_eq!(line, 6),
            other => panic!("unexpected {other:?}"),
        }
        let bad_value = "rotor.radius = huge\n";
        assert!(matches!(
            CaseConfig::parse(bad_value, Path::new(".")),
            Err(DriverError::Config { line: 1, .. })
        ));
    }

    #[test]
    fn cross_field_validation_catches_physical_nonsense() {
        let cold = "\
rotor.radius = 1.18
rotor.rpm = 600
temperature = -40
accretion_dt = 40
steps = a.mesh
";
        assert!(CaseConfig::parse(cold, Path::new(".")).is_err());
        let no_steps = "\
rotor.radius = 1.18
rotor.rpm = 600
temperature = -8
accretion_dt = 40
";
        assert!(CaseConfig::parse(no_steps, Path::new(".")).is_err());
        let bad_dt = "\
rotor.radius = 1.18
rotor.rpm = 600
temperature = -8
accretion_dt = 0
steps = a.mesh
";
        assert!(CaseConfig::parse(bad_dt, Path::new(".")).is_err());
    }

    #[test]
    fn curve_specs_parse_each_shape() {
        let line = 1;
        assert_eq!(
            parse_curve(line, "constant 2e5").unwrap(),
            CurveSpec::Constant(2e5)
        );
        assert_eq!(
            parse_curve(line, "polynomial 5e5, -5e4").unwrap(),
            CurveSpec::Polynomial(vec![5e5, -5e4])
        );
        assert_eq!(
            parse_curve(line, "table -16:1.4e6, -4:8e5").unwrap(),
            CurveSpec::Table(vec![(-16.0, 1.4e6), (-4.0, 8e5)])
        );
        assert!(parse_curve(line, "spline 1, 2").is_err());
        assert!(parse_curve(line, "table -16=1.4e6").is_err());
    }
}
