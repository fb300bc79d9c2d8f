//! Report emission: per-step force CSVs and a JSON summary.
//!
//! The JSON is written by hand rather than through a serializer so that
//! every float comes out as `{:.16e}` — 17 significant digits, enough to
//! reproduce the binary value exactly — and so the byte layout is fixed.
//! Running the same case twice must produce identical files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{forces_csv_name, DriverError, RunReport, StepReport};

/// Writes one `step_<k>_forces.csv` per evaluated step and a `report.json`
/// into `out_dir` (created if missing). Returns the paths written, CSVs
/// first in step order, the JSON report last.
pub fn emit_report(report: &RunReport, out_dir: &Path) -> Result<Vec<PathBuf>, DriverError> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for step in &report.steps {
        let path = out_dir.join(forces_csv_name(step.index));
        std::fs::write(&path, step.forces.to_csv_string())?;
        written.push(path);
    }
    let path = out_dir.join("report.json");
    std::fs::write(&path, render_json(report))?;
    written.push(path);
    Ok(written)
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_num(v: Option<f64>) -> String {
    v.map_or_else(|| "null".into(), num)
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn render_step(out: &mut String, step: &StepReport, radius: f64, indent: &str) {
    let i2 = format!("{indent}  ");
    let i3 = format!("{indent}    ");
    let i4 = format!("{indent}      ");
    let _ = writeln!(out, "{indent}{{");
    let _ = writeln!(out, "{i2}\"step\": {},", step.index);
    let _ = writeln!(out, "{i2}\"source\": {},", json_string(&step.source));
    let _ = writeln!(
        out,
        "{i2}\"forces_csv\": {},",
        json_string(&forces_csv_name(step.index))
    );
    let s = &step.shedding;
    let _ = writeln!(out, "{i2}\"shed\": {},", s.shed);
    let _ = writeln!(out, "{i2}\"z_s_m\": {},", opt_num(s.z_s));
    let _ = writeln!(
        out,
        "{i2}\"z_s_over_r\": {},",
        opt_num(s.z_s.map(|z| z / radius))
    );
    let _ = writeln!(out, "{i2}\"shed_mass_kg\": {},", opt_num(s.shed_mass));
    let _ = writeln!(out, "{i2}\"fallback_used\": {},", s.fallback_used);
    let _ = writeln!(out, "{i2}\"iterations\": [");
    for (n, it) in s.iterations.iter().enumerate() {
        let _ = writeln!(out, "{i3}{{");
        let _ = writeln!(
            out,
            "{i4}\"domain_m\": [{}, {}],",
            num(it.domain.0),
            num(it.domain.1)
        );
        let _ = writeln!(out, "{i4}\"planes\": [");
        for (m, p) in it.planes.iter().enumerate() {
            let comma = if m + 1 < it.planes.len() { "," } else { "" };
            let _ = writeln!(
                out,
                "{i4}  {{\"z_m\": {}, \"f_centrifugal_n\": {}, \"f_cohesion_n\": {}, \"f_adhesion_n\": {}, \"satisfied\": {}}}{comma}",
                num(p.z),
                num(p.centrifugal),
                num(p.cohesion),
                num(p.adhesion),
                p.satisfied
            );
        }
        let _ = writeln!(out, "{i4}]");
        let comma = if n + 1 < s.iterations.len() { "," } else { "" };
        let _ = writeln!(out, "{i3}}}{comma}");
    }
    let _ = writeln!(out, "{i2}]");
    let _ = write!(out, "{indent}}}");
}

fn render_json(report: &RunReport) -> String {
    let case = &report.case;
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str("  \"case\": {\n");
    out.push_str("    \"rotor\": {\n");
    let _ = writeln!(out, "      \"radius_m\": {},", num(case.rotor.radius));
    let _ = writeln!(out, "      \"rpm\": {},", num(case.rotor.rpm));
    let _ = writeln!(
        out,
        "      \"collective_pitch_deg\": {},",
        num(case.rotor.collective_pitch)
    );
    let _ = writeln!(out, "      \"twist_deg\": {},", num(case.rotor.twist));
    let _ = writeln!(out, "      \"chord_m\": {}", num(case.rotor.chord));
    out.push_str("    },\n");
    let _ = writeln!(out, "    \"temperature_c\": {},", num(case.temperature));
    let _ = writeln!(out, "    \"accretion_dt_s\": {},", num(case.accretion_dt));
    let _ = writeln!(out, "    \"density_kg_m3\": {},", num(case.density));
    let _ = writeln!(
        out,
        "    \"criterion\": {},",
        json_string(&case.shedding.criterion.to_string())
    );
    out.push_str("    \"annotations\": {");
    for (n, (name, value)) in case.annotations.iter().enumerate() {
        let comma = if n + 1 < case.annotations.len() { "," } else { "" };
        let _ = write!(out, "\n      {}: {}{comma}", json_string(name), json_string(value));
    }
    if !case.annotations.is_empty() {
        out.push_str("\n    ");
    }
    out.push_str("}\n");
    out.push_str("  },\n");
    let _ = writeln!(out, "  \"shed\": {},", report.shed_step.is_some());
    let _ = writeln!(
        out,
        "  \"shed_step\": {},",
        report
            .shed_step
            .map_or_else(|| "null".into(), |s| s.to_string())
    );
    let _ = writeln!(out, "  \"shed_time_s\": {},", opt_num(report.shed_time));
    let _ = writeln!(
        out,
        "  \"shed_location_over_r\": {},",
        opt_num(report.shed_location)
    );
    out.push_str("  \"steps\": [\n");
    for (n, step) in report.steps.iter().enumerate() {
        render_step(&mut out, step, case.rotor.radius, "    ");
        let comma = if n + 1 < report.steps.len() { "," } else { "" };
        let _ = writeln!(out, "{comma}");
    }
    out.push_str("  ]\n");
    out.push_str("}\n");
    out
}
