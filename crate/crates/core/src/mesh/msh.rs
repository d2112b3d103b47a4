//! Gmsh MSH 2.2 ASCII reader and writer.
//!
//! Only the `$MeshFormat`, `$Nodes` and `$Elements` sections are interpreted;
//! other sections are skipped. Triangles (type 2) become boundary triangles,
//! tetrahedra (type 4) become mesh cells, everything else is counted and
//! ignored. The first element tag is used as the physical tag.

use super::{BoundaryTri, MeshError, Tag, TetMesh, VertexId};
use crate::geom::Point3;
use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

pub const MSH_TRIANGLE: u32 = 2;
pub const MSH_TETRAHEDRON: u32 = 4;
pub const MSH_HEXAHEDRON: u32 = 5;
pub const MSH_PRISM: u32 = 6;
pub const MSH_PYRAMID: u32 = 7;

/// Result of reading an MSH file.
#[derive(Debug, Clone)]
pub struct LoadedMsh {
    pub mesh: TetMesh,
    /// Elements whose type is neither triangle nor tetrahedron.
    pub ignored_elements: usize,
}

pub fn load_msh(path: impl AsRef<Path>) -> Result<TetMesh, MeshError> {
    read_msh_file(path).map(|l| l.mesh)
}

pub fn read_msh_file(path: impl AsRef<Path>) -> Result<LoadedMsh, MeshError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| MeshError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_msh(BufReader::new(file))
}

struct Lines<R> {
    inner: io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    /// Next non-empty line, trimmed.
    fn next(&mut self) -> Result<Option<String>, MeshError> {
        loop {
            match self.inner.next() {
                None => return Ok(None),
                Some(Err(e)) => {
                    return Err(MeshError::Parse {
                        line: self.line + 1,
                        msg: e.to_string(),
                    })
                }
                Some(Ok(l)) => {
                    self.line += 1;
                    let t = l.trim();
                    if !t.is_empty() {
                        return Ok(Some(t.to_string()));
                    }
                }
            }
        }
    }

    fn expect(&mut self, what: &str) -> Result<String, MeshError> {
        self.next()?.ok_or_else(|| MeshError::Parse {
            line: self.line,
            msg: format!("unexpected end of file, expected {what}"),
        })
    }

    fn err(&self, msg: impl Into<String>) -> MeshError {
        MeshError::Parse {
            line: self.line,
            msg: msg.into(),
        }
    }
}

fn parse<T: std::str::FromStr>(
    lines: &Lines<impl BufRead>,
    tok: Option<&str>,
    what: &str,
) -> Result<T, MeshError> {
    let tok = tok.ok_or_else(|| lines.err(format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| lines.err(format!("invalid {what} '{tok}'")))
}

pub fn read_msh(reader: impl BufRead) -> Result<LoadedMsh, MeshError> {
    let mut lines = Lines {
        inner: reader.lines(),
        line: 0,
    };
    let mut seen_format = false;
    let mut node_index: HashMap<u64, VertexId> = HashMap::new();
    let mut vertices = Vec::new();
    let mut node_ids = Vec::new();
    let mut tets = Vec::new();
    let mut regions = Vec::new();
    let mut tris = Vec::new();
    let mut ignored = 0usize;

    while let Some(header) = lines.next()? {
        match header.as_str() {
            "$MeshFormat" => {
                let l = lines.expect("format line")?;
                let mut it = l.split_whitespace();
                let version = it.next().unwrap_or("");
                let file_type: i64 = parse(&lines, it.next(), "file type")?;
                let major = version.split('.').next().unwrap_or("");
                if major != "2" {
                    return Err(MeshError::UnsupportedFormat {
                        line: lines.line,
                        msg: format!("version {version} (only 2.2 ASCII is supported)"),
                    });
                }
                if file_type != 0 {
                    return Err(MeshError::UnsupportedFormat {
                        line: lines.line,
                        msg: "binary MSH files are not supported".into(),
                    });
                }
                end_section(&mut lines, "$EndMeshFormat")?;
                seen_format = true;
            }
            "$Nodes" => {
                require_format(&lines, seen_format)?;
                let l = lines.expect("node count")?;
                let n: usize = parse(&lines, Some(l.as_str()), "node count")?;
                vertices.reserve(n);
                for _ in 0..n {
                    let l = lines.expect("node")?;
                    let mut it = l.split_whitespace();
                    let id: u64 = parse(&lines, it.next(), "node id")?;
                    let x: f64 = parse(&lines, it.next(), "x coordinate")?;
                    let y: f64 = parse(&lines, it.next(), "y coordinate")?;
                    let z: f64 = parse(&lines, it.next(), "z coordinate")?;
                    let p = Point3::new(x, y, z);
                    if !p.is_finite() {
                        return Err(lines.err(format!("node {id} has a non-finite coordinate")));
                    }
                    if node_index.insert(id, vertices.len() as VertexId).is_some() {
                        return Err(lines.err(format!("duplicate node id {id}")));
                    }
                    vertices.push(p);
                    node_ids.push(id);
                }
                end_section(&mut lines, "$EndNodes")?;
            }
            "$Elements" => {
                require_format(&lines, seen_format)?;
                let l = lines.expect("element count")?;
                let n: usize = parse(&lines, Some(l.as_str()), "element count")?;
                for _ in 0..n {
                    let l = lines.expect("element")?;
                    let toks: Vec<&str> = l.split_whitespace().collect();
                    let _id: u64 = parse(&lines, toks.first().copied(), "element id")?;
                    let ty: u32 = parse(&lines, toks.get(1).copied(), "element type")?;
                    let ntags: usize = parse(&lines, toks.get(2).copied(), "tag count")?;
                    let nn = match ty {
                        MSH_TRIANGLE => 3,
                        MSH_TETRAHEDRON => 4,
                        _ => {
                            ignored += 1;
                            continue;
                        }
                    };
                    if toks.len() != 3 + ntags + nn {
                        return Err(lines.err(format!(
                            "element of type {ty} has {} fields, expected {}",
                            toks.len(),
                            3 + ntags + nn
                        )));
                    }
                    let tag: Tag = if ntags > 0 {
                        parse(&lines, Some(toks[3]), "element tag")?
                    } else {
                        0
                    };
                    let mut vs = [0 as VertexId; 4];
                    for k in 0..nn {
                        let node: u64 = parse(&lines, Some(toks[3 + ntags + k]), "node reference")?;
                        vs[k] = *node_index.get(&node).ok_or(MeshError::DanglingNode {
                            line: lines.line,
                            node,
                        })?;
                    }
                    if ty == MSH_TRIANGLE {
                        tris.push(BoundaryTri {
                            verts: [vs[0], vs[1], vs[2]],
                            tag,
                        });
                    } else {
                        tets.push(vs);
                        regions.push(tag);
                    }
                }
                end_section(&mut lines, "$EndElements")?;
            }
            other if other.starts_with('$') && !other.starts_with("$End") => {
                let end = format!("$End{}", &other[1..]);
                loop {
                    let l = lines.expect(&end)?;
                    if l == end {
                        break;
                    }
                }
            }
            other => return Err(lines.err(format!("unexpected line '{other}'"))),
        }
    }
    if !seen_format {
        return Err(MeshError::Parse {
            line: lines.line,
            msg: "missing $MeshFormat section".into(),
        });
    }
    let mesh = TetMesh::with_node_ids(vertices, node_ids, tets, regions, tris)?;
    Ok(LoadedMsh {
        mesh,
        ignored_elements: ignored,
    })
}

fn require_format(lines: &Lines<impl BufRead>, seen: bool) -> Result<(), MeshError> {
    if seen {
        Ok(())
    } else {
        Err(lines.err("section before $MeshFormat"))
    }
}

fn end_section(lines: &mut Lines<impl BufRead>, end: &str) -> Result<(), MeshError> {
    let l = lines.expect(end)?;
    if l == end {
        Ok(())
    } else {
        Err(lines.err(format!("expected {end}, found '{l}'")))
    }
}

/// One element to be written: MSH type code, physical tag, and node list
/// given as internal vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MshElement {
    pub kind: u32,
    pub tag: Tag,
    pub verts: Vec<VertexId>,
}

/// Writes the nodes of `mesh` followed by `elements`, numbered from 1.
/// Coordinates use the shortest decimal form that parses back exactly.
pub fn write_msh_elements(
    mut w: impl Write,
    mesh: &TetMesh,
    elements: &[MshElement],
) -> io::Result<()> {
    writeln!(w, "$MeshFormat\n2.2 0 8\n$EndMeshFormat")?;
    writeln!(w, "$Nodes\n{}", mesh.num_vertices())?;
    for (p, id) in mesh.vertices().iter().zip(mesh.node_ids()) {
        writeln!(w, "{id} {} {} {}", p.x, p.y, p.z)?;
    }
    writeln!(w, "$EndNodes")?;
    writeln!(w, "$Elements\n{}", elements.len())?;
    for (i, e) in elements.iter().enumerate() {
        write!(w, "{} {} 2 {} {}", i + 1, e.kind, e.tag, e.tag)?;
        for &v in &e.verts {
            write!(w, " {}", mesh.node_id(v))?;
        }
        writeln!(w)?;
    }
    writeln!(w, "$EndElements")?;
    w.flush()
}

/// Writes a tetrahedral mesh (boundary triangles first, then tetrahedra).
pub fn write_msh(w: impl Write, mesh: &TetMesh) -> io::Result<()> {
    let mut elems: Vec<MshElement> = mesh
        .boundary_tris()
        .iter()
        .map(|b| MshElement {
            kind: MSH_TRIANGLE,
            tag: b.tag,
            verts: b.verts.to_vec(),
        })
        .collect();
    elems.extend(
        mesh.tets()
            .iter()
            .zip(mesh.tet_regions())
            .map(|(t, &r)| MshElement {
                kind: MSH_TETRAHEDRON,
                tag: r,
                verts: t.to_vec(),
            }),
    );
    write_msh_elements(w, mesh, &elems)
}

pub fn save_msh(path: impl AsRef<Path>, mesh: &TetMesh) -> Result<(), MeshError> {
    let path = path.as_ref();
    let io_err = |source| MeshError::Io {
        path: path.display().to_string(),
        source,
    };
    let f = File::create(path).map_err(io_err)?;
    write_msh(BufWriter::new(f), mesh).map_err(io_err)
}
