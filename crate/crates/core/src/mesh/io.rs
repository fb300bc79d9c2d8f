//! Mesh file input and output.
//!
//! Two formats are understood:
//!
//! **Native** — a line-oriented text format. `#` starts a comment, ids are
//! zero-based and must appear in order:
//!
//! ```text
//! NODES 4
//! 0  0.0 0.0 0.0
//! 1  1.0 0.0 0.0
//! 2  0.0 1.0 0.0
//! 3  0.0 0.0 1.0
//! TETS 1
//! 0  0 1 2 3
//! FACES 4
//! 0  0 1 2  flow
//! 1  0 1 3  flow
//! 2  0 2 3  adhesion
//! 3  1 2 3  flow
//! ```
//!
//! **Gmsh 2.2 ASCII subset** — `$Nodes` and `$Elements` sections with
//! element type 4 (tetrahedron) and type 2 (triangle). Triangles become
//! boundary faces; their first physical tag selects the label through the
//! tag tables carried by [`MeshFormat::Msh`]. Other element types and
//! unknown sections are skipped.

use std::path::Path;

use super::{BoundaryFace, FaceLabel, IceMesh, MeshError, Node, Tetrahedron};
use crate::Vec3;

/// Input format selector for [`load_mesh`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeshFormat {
    Native,
    /// Gmsh 2.2 ASCII; physical tags listed in `adhesion_tags` map to
    /// [`FaceLabel::Adhesion`], those in `flow_tags` to [`FaceLabel::Flow`].
    Msh {
        adhesion_tags: Vec<i32>,
        flow_tags: Vec<i32>,
    },
}

impl MeshFormat {
    /// Picks a format from a file extension: `.msh` means Gmsh (with the
    /// given tag tables), anything else the native format.
    pub fn from_extension(path: &Path, adhesion_tags: Vec<i32>, flow_tags: Vec<i32>) -> MeshFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("msh") => MeshFormat::Msh {
                adhesion_tags,
                flow_tags,
            },
            _ => MeshFormat::Native,
        }
    }
}

/// Reads a mesh file, canonicalises and validates it. The span axis of file
/// meshes is +z by convention; `density` is in kg/m³.
pub fn load_mesh(path: &Path, format: &MeshFormat, density: f64) -> Result<IceMesh, MeshError> {
    let text = std::fs::read_to_string(path)?;
    match format {
        MeshFormat::Native => parse_native(&text, density),
        MeshFormat::Msh {
            adhesion_tags,
            flow_tags,
        } => parse_msh(&text, adhesion_tags, flow_tags, density),
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> MeshError {
    MeshError::Parse {
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

fn parse_count(line: usize, tokens: &[&str], keyword: &str) -> Result<usize, MeshError> {
    if tokens.len() != 2 || !tokens[0].eq_ignore_ascii_case(keyword) {
        return Err(parse_err(line, format!("expected `{keyword} <count>`")));
    }
    tokens[1]
        .parse()
        .map_err(|_| parse_err(line, format!("bad {keyword} count `{}`", tokens[1])))
}

fn parse_f64(line: usize, token: &str) -> Result<f64, MeshError> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("bad number `{token}`")))
}

fn parse_usize(line: usize, token: &str) -> Result<usize, MeshError> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("bad index `{token}`")))
}

/// Parses the native text format.
pub fn parse_native(text: &str, density: f64) -> Result<IceMesh, MeshError> {
    let mut lines = content_lines(text);
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| parse_err(0, format!("unexpected end of file, expected {what}")))
    };

    let (ln, header) = next("NODES header")?;
    let n_nodes = parse_count(ln, &header.split_whitespace().collect::<Vec<_>>(), "NODES")?;
    let mut nodes = Vec::with_capacity(n_nodes);
    for i in 0..n_nodes {
        let (ln, line) = next("a node line")?;
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 4 {
            return Err(parse_err(ln, "expected `<id> <x> <y> <z>`"));
        }
        let id = parse_usize(ln, t[0])?;
        if id != i {
            return Err(parse_err(ln, format!("node id {id} out of order, expected {i}")));
        }
        let position = Vec3::new(
            parse_f64(ln, t[1])?,
            parse_f64(ln, t[2])?,
            parse_f64(ln, t[3])?,
        );
        nodes.push(Node { id, position });
    }

    let (ln, header) = next("TETS header")?;
    let n_tets = parse_count(ln, &header.split_whitespace().collect::<Vec<_>>(), "TETS")?;
    let mut tets = Vec::with_capacity(n_tets);
    for i in 0..n_tets {
        let (ln, line) = next("a tet line")?;
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 5 {
            return Err(parse_err(ln, "expected `<id> <n1> <n2> <n3> <n4>`"));
        }
        let id = parse_usize(ln, t[0])?;
        if id != i {
            return Err(parse_err(ln, format!("tet id {id} out of order, expected {i}")));
        }
        let mut nodes_idx = [0usize; 4];
        for (k, tok) in t[1..].iter().enumerate() {
            nodes_idx[k] = parse_usize(ln, tok)?;
        }
        tets.push(Tetrahedron { nodes: nodes_idx });
    }

    let (ln, header) = next("FACES header")?;
    let n_faces = parse_count(ln, &header.split_whitespace().collect::<Vec<_>>(), "FACES")?;
    let mut boundary = Vec::with_capacity(n_faces);
    for i in 0..n_faces {
        let (ln, line) = next("a face line")?;
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 5 {
            return Err(parse_err(ln, "expected `<id> <n1> <n2> <n3> <label>`"));
        }
        let id = parse_usize(ln, t[0])?;
        if id != i {
            return Err(parse_err(ln, format!("face id {id} out of order, expected {i}")));
        }
        let mut nodes_idx = [0usize; 3];
        for (k, tok) in t[1..4].iter().enumerate() {
            nodes_idx[k] = parse_usize(ln, tok)?;
        }
        let label = match t[4].to_ascii_lowercase().as_str() {
            "adhesion" => FaceLabel::Adhesion,
            "flow" => FaceLabel::Flow,
            other => return Err(parse_err(ln, format!("unknown face label `{other}`"))),
        };
        boundary.push(BoundaryFace {
            nodes: nodes_idx,
            label,
        });
    }

    if let Some((ln, line)) = lines.next() {
        return Err(parse_err(ln, format!("unexpected trailing content `{line}`")));
    }

    IceMesh::new(nodes, tets, boundary, Vec3::z(), density)
}

/// Parses the Gmsh 2.2 ASCII subset.
pub fn parse_msh(
    text: &str,
    adhesion_tags: &[i32],
    flow_tags: &[i32],
    density: f64,
) -> Result<IceMesh, MeshError> {
    let mut lines = content_lines(text).peekable();
    let mut nodes: Vec<Node> = Vec::new();
    let mut id_map: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut tets: Vec<Tetrahedron> = Vec::new();
    let mut boundary: Vec<BoundaryFace> = Vec::new();
    let mut saw_nodes = false;
    let mut saw_elements = false;

    while let Some((ln, line)) = lines.next() {
        match line {
            "$MeshFormat" => {
                let (ln, fmt) = lines
                    .next()
                    .ok_or_else(|| parse_err(ln, "missing $MeshFormat body"))?;
                let version = fmt.split_whitespace().next().unwrap_or("");
                if !version.starts_with("2.2") {
                    return Err(parse_err(ln, format!("unsupported msh version `{version}`")));
                }
                expect_end(&mut lines, "$EndMeshFormat")?;
            }
            "$Nodes" => {
                saw_nodes = true;
                let (ln, count_line) = lines
                    .next()
                    .ok_or_else(|| parse_err(ln, "missing node count"))?;
                let count: usize = count_line
                    .parse()
                    .map_err(|_| parse_err(ln, "bad node count"))?;
                for _ in 0..count {
                    let (ln, line) = lines
                        .next()
                        .ok_or_else(|| parse_err(0, "unexpected end of $Nodes"))?;
                    let t: Vec<&str> = line.split_whitespace().collect();
                    if t.len() != 4 {
                        return Err(parse_err(ln, "expected `<id> <x> <y> <z>`"));
                    }
                    let file_id = parse_usize(ln, t[0])?;
                    let dense = nodes.len();
                    if id_map.insert(file_id, dense).is_some() {
                        return Err(parse_err(ln, format!("duplicate node id {file_id}")));
                    }
                    nodes.push(Node {
                        id: dense,
                        position: Vec3::new(
                            parse_f64(ln, t[1])?,
                            parse_f64(ln, t[2])?,
                            parse_f64(ln, t[3])?,
                        ),
                    });
                }
                expect_end(&mut lines, "$EndNodes")?;
            }
            "$Elements" => {
                saw_elements = true;
                let (ln, count_line) = lines
                    .next()
                    .ok_or_else(|| parse_err(ln, "missing element count"))?;
                let count: usize = count_line
                    .parse()
                    .map_err(|_| parse_err(ln, "bad element count"))?;
                for _ in 0..count {
                    let (ln, line) = lines
                        .next()
                        .ok_or_else(|| parse_err(0, "unexpected end of $Elements"))?;
                    let t: Vec<&str> = line.split_whitespace().collect();
                    if t.len() < 3 {
                        return Err(parse_err(ln, "short element line"));
                    }
                    let etype: i32 = t[1]
                        .parse()
                        .map_err(|_| parse_err(ln, "bad element type"))?;
                    let ntags: usize = t[2].parse().map_err(|_| parse_err(ln, "bad tag count"))?;
                    if t.len() < 3 + ntags {
                        return Err(parse_err(ln, "element line shorter than its tag count"));
                    }
                    let tags = &t[3..3 + ntags];
                    let node_tokens = &t[3 + ntags..];
                    let resolve = |tok: &str| -> Result<usize, MeshError> {
                        let file_id = parse_usize(ln, tok)?;
                        id_map
                            .get(&file_id)
                            .copied()
                            .ok_or_else(|| parse_err(ln, format!("unknown node id {file_id}")))
                    };
                    match etype {
                        4 => {
                            if node_tokens.len() != 4 {
                                return Err(parse_err(ln, "tetrahedron needs 4 nodes"));
                            }
                            let mut ns = [0usize; 4];
                            for (k, tok) in node_tokens.iter().enumerate() {
                                ns[k] = resolve(tok)?;
                            }
                            tets.push(Tetrahedron { nodes: ns });
                        }
                        2 => {
                            if node_tokens.len() != 3 {
                                return Err(parse_err(ln, "triangle needs 3 nodes"));
                            }
                            let physical: i32 = tags
                                .first()
                                .ok_or_else(|| parse_err(ln, "triangle has no physical tag"))?
                                .parse()
                                .map_err(|_| parse_err(ln, "bad physical tag"))?;
                            let label = if adhesion_tags.contains(&physical) {
                                FaceLabel::Adhesion
                            } else if flow_tags.contains(&physical) {
                                FaceLabel::Flow
                            } else {
                                return Err(parse_err(
                                    ln,
                                    format!("physical tag {physical} is neither adhesion nor flow"),
                                ));
                            };
                            let mut ns = [0usize; 3];
                            for (k, tok) in node_tokens.iter().enumerate() {
                                ns[k] = resolve(tok)?;
                            }
                            boundary.push(BoundaryFace { nodes: ns, label });
                        }
                        _ => {} // points, lines, ... are irrelevant here
                    }
                }
                expect_end(&mut lines, "$EndElements")?;
            }
            section if section.starts_with('$') && !section.starts_with("$End") => {
                // Unknown section: skip to its terminator.
                let end = format!("$End{}", &section[1..]);
                loop {
                    match lines.next() {
                        Some((_, l)) if l == end => break,
                        Some(_) => continue,
                        None => return Err(parse_err(ln, format!("unterminated section {section}"))),
                    }
                }
            }
            other => return Err(parse_err(ln, format!("unexpected line `{other}`"))),
        }
    }

    if !saw_nodes || !saw_elements {
        return Err(parse_err(0, "msh file must contain $Nodes and $Elements"));
    }

    IceMesh::new(nodes, tets, boundary, Vec3::z(), density)
}

fn expect_end<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    end: &str,
) -> Result<(), MeshError> {
    match lines.next() {
        Some((_, l)) if l == end => Ok(()),
        Some((ln, l)) => Err(parse_err(ln, format!("expected {end}, found `{l}`"))),
        None => Err(parse_err(0, format!("missing {end}"))),
    }
}

/// Serialises a mesh to the native format with full float round-tripping.
pub fn write_native(mesh: &IceMesh) -> String {
    let mut out = String::new();
    out.push_str(&format!("NODES {}\n", mesh.nodes.len()));
    for node in &mesh.nodes {
        out.push_str(&format!(
            "{} {:.16e} {:.16e} {:.16e}\n",
            node.id, node.position.x, node.position.y, node.position.z
        ));
    }
    out.push_str(&format!("TETS {}\n", mesh.tets.len()));
    for (i, tet) in mesh.tets.iter().enumerate() {
        let [a, b, c, d] = tet.nodes;
        out.push_str(&format!("{i} {a} {b} {c} {d}\n"));
    }
    out.push_str(&format!("FACES {}\n", mesh.boundary.len()));
    for (i, face) in mesh.boundary.iter().enumerate() {
        let [a, b, c] = face.nodes;
        let label = match face.label {
            FaceLabel::Adhesion => "adhesion",
            FaceLabel::Flow => "flow",
        };
        out.push_str(&format!("{i} {a} {b} {c} {label}\n"));
    }
    out
}
