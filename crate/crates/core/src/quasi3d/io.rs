//! Section and manifest file input.
//!
//! A **section file** describes one 2D ice cross-section. It is
//! line-oriented, `#` starts a comment, and coordinates are metres:
//!
//! ```text
//! station_radius = 0.59
//! outer
//! 0.0, 0.0
//! 0.0, 0.02
//! 0.05, 0.02
//! 0.05, 0.0
//! contact
//! 0.0, 0.0
//! 0.05, 0.0
//! ```
//!
//! The comma between coordinates is optional. The two chains may appear in
//! either order; both are required.
//!
//! A **manifest file** lists the section files for one accretion step plus
//! the meshing knobs:
//!
//! ```text
//! spanwise_cells = 8          # element layers per station interval
//! resample_count = 64         # common vertex count when sections differ
//! span = 0.59, 1.18           # required when only one section is listed
//! section = sections/r059.sec
//! section = sections/r118.sec
//! ```
//!
//! Section paths are resolved relative to the manifest's directory.

use std::path::Path;

use super::{ExtrudeError, ExtrusionSpec, IceSection};
use crate::Vec2;

fn parse_err(line: usize, message: impl Into<String>) -> ExtrudeError {
    ExtrudeError::Parse {
        line,
        message: message.into(),
    }
}

/// Lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

fn parse_f64(line: usize, token: &str) -> Result<f64, ExtrudeError> {
    token
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("bad number `{}`", token.trim())))
}

/// Reads one ice section from a file.
pub fn load_section(path: &Path) -> Result<IceSection, ExtrudeError> {
    let text = std::fs::read_to_string(path)?;
    parse_section(&text)
}

/// Parses the section file format.
pub fn parse_section(text: &str) -> Result<IceSection, ExtrudeError> {
    #[derive(PartialEq, Clone, Copy)]
    enum Target {
        None,
        Outer,
        Contact,
    }
    let mut station_radius: Option<f64> = None;
    let mut outer: Vec<Vec2> = Vec::new();
    let mut contact: Vec<Vec2> = Vec::new();
    let mut target = Target::None;
    let mut seen_outer = false;
    let mut seen_contact = false;

    for (ln, line) in content_lines(text) {
        if let Some((key, value)) = line.split_once('=') {
            match key.trim() {
                "station_radius" => station_radius = Some(parse_f64(ln, value)?),
                other => return Err(parse_err(ln, format!("unknown key `{other}`"))),
            }
            continue;
        }
        let header = line.trim_end_matches(':');
        if header.eq_ignore_ascii_case("outer") {
            if seen_outer {
                return Err(parse_err(ln, "duplicate `outer` chain"));
            }
            seen_outer = true;
            target = Target::Outer;
            continue;
        }
        if header.eq_ignore_ascii_case("contact") {
            if seen_contact {
                return Err(parse_err(ln, "duplicate `contact` chain"));
            }
            seen_contact = true;
            target = Target::Contact;
            continue;
        }
        let chain = match target {
            Target::Outer => &mut outer,
            Target::Contact => &mut contact,
            Target::None => {
                return Err(parse_err(
                    ln,
                    "point before any `outer` or `contact` header",
                ))
            }
        };
        let parts: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if parts.len() != 2 {
            return Err(parse_err(ln, format!("expected `x, y`, got `{line}`")));
        }
        chain.push(Vec2::new(parse_f64(ln, parts[0])?, parse_f64(ln, parts[1])?));
    }

    let Some(radius) = station_radius else {
        return Err(parse_err(0, "missing `station_radius = <metres>`"));
    };
    if !seen_outer || !seen_contact {
        return Err(parse_err(0, "section needs both `outer` and `contact` chains"));
    }
    IceSection::new(outer, contact, radius)
}

/// Writes a section in the same format `load_section` reads, at full
/// precision, so a round trip reproduces the section exactly.
pub fn write_section(section: &IceSection, path: &Path) -> Result<(), ExtrudeError> {
    let mut text = String::new();
    text.push_str(&format!(
        "station_radius = {:.16e}\n",
        section.station_radius()
    ));
    text.push_str("outer\n");
    for p in section.outer_loop() {
        text.push_str(&format!("{:.16e}, {:.16e}\n", p.x, p.y));
    }
    text.push_str("contact\n");
    for p in section.contact_loop() {
        text.push_str(&format!("{:.16e}, {:.16e}\n", p.x, p.y));
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Reads an extrusion manifest and all the section files it lists.
pub fn load_manifest(path: &Path) -> Result<ExtrusionSpec, ExtrudeError> {
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_manifest(&text, base)
}

/// Parses a manifest; `base` anchors relative section paths.
pub fn parse_manifest(text: &str, base: &Path) -> Result<ExtrusionSpec, ExtrudeError> {
    let mut spanwise_cells = 10usize;
    let mut resample_count = 64usize;
    let mut span: Option<(f64, f64)> = None;
    let mut sections: Vec<IceSection> = Vec::new();

    for (ln, line) in content_lines(text) {
        let Some((key, value)) = line.split_once('=') else {
            return Err(parse_err(ln, format!("expected `key = value`, got `{line}`")));
        };
        let value = value.trim();
        match key.trim() {
            "spanwise_cells" => {
                spanwise_cells = value
                    .parse()
                    .map_err(|_| parse_err(ln, format!("bad cell count `{value}`")))?;
            }
            "resample_count" => {
                resample_count = value
                    .parse()
                    .map_err(|_| parse_err(ln, format!("bad resample count `{value}`")))?;
            }
            "span" => {
                let parts: Vec<&str> = value.split(',').collect();
                if parts.len() != 2 {
                    return Err(parse_err(ln, "expected `span = <lo>, <hi>`"));
                }
                span = Some((parse_f64(ln, parts[0])?, parse_f64(ln, parts[1])?));
            }
            "section" => {
                let section_path = base.join(value);
                let section = load_section(&section_path).map_err(|e| {
                    parse_err(
                        ln,
                        format!("section `{}`: {e}", section_path.display()),
                    )
                })?;
                sections.push(section);
            }
            other => return Err(parse_err(ln, format!("unknown key `{other}`"))),
        }
    }

    if sections.is_empty() {
        return Err(parse_err(0, "manifest lists no sections"));
    }
    Ok(ExtrusionSpec {
        sections,
        spanwise_cells,
        resample_count,
        span,
    })
}
