//! Exhaustive reference enumerations over the whole vertex set, for checking
//! the searches on small meshes. Vertex tuples are generated without using
//! adjacency and filtered by [`examine`], the same predicate the searches use.

use super::examine::examine;
use super::{finish, SearchConfig};
use crate::cell::{enumerate_oriented_hexes, CanonicalKey, CellKind, PotentialCell};
use crate::mesh::{AdjacencyIndex, TetMesh, VertexId};

/// Largest vertex count accepted by [`literal_hexes`].
pub const LITERAL_MAX_VERTICES: usize = 12;

struct Brute<'a> {
    mesh: &'a TetMesh,
    index: &'a AdjacencyIndex,
    config: &'a SearchConfig,
    out: Vec<PotentialCell>,
}

impl Brute<'_> {
    fn edge(&self, u: VertexId, v: VertexId) -> bool {
        self.index.has_edge(u, v)
    }

    fn emit(&mut self, kind: CellKind, t: &[VertexId]) {
        if let Ok(c) = examine(self.mesh, self.index, self.config, kind, t) {
            self.out.push(c);
        }
    }

    fn hexes(&mut self) {
        let n = self.mesh.num_vertices() as VertexId;
        for a in 0..n {
            for b in a + 1..n {
                if !self.edge(a, b) {
                    continue;
                }
                for d in b + 1..n {
                    if !self.edge(a, d) {
                        continue;
                    }
                    for e in b + 1..n {
                        if e == d || !self.edge(a, e) {
                            continue;
                        }
                        for c in a + 1..n {
                            if [b, d, e].contains(&c) || !self.edge(b, c) || !self.edge(c, d) {
                                continue;
                            }
                            for f in a + 1..n {
                                if [b, d, e, c].contains(&f) || !self.edge(b, f) || !self.edge(e, f)
                                {
                                    continue;
                                }
                                for h in a + 1..n {
                                    if [b, d, e, c, f].contains(&h)
                                        || !self.edge(d, h)
                                        || !self.edge(e, h)
                                    {
                                        continue;
                                    }
                                    for g in a + 1..n {
                                        if [b, d, e, c, f, h].contains(&g)
                                            || !self.edge(c, g)
                                            || !self.edge(f, g)
                                            || !self.edge(h, g)
                                        {
                                            continue;
                                        }
                                        self.emit(CellKind::Hexahedron, &[a, b, c, d, e, f, g, h]);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    fn prisms(&mut self) {
        let n = self.mesh.num_vertices() as VertexId;
        for a in 0..n {
            for b in a + 1..n {
                if !self.edge(a, b) {
                    continue;
                }
                for c in a + 1..n {
                    if c == b || !self.edge(b, c) || !self.edge(c, a) {
                        continue;
                    }
                    for d in a + 1..n {
                        if [b, c].contains(&d) || !self.edge(a, d) {
                            continue;
                        }
                        for e in a + 1..n {
                            if [b, c, d].contains(&e) || !self.edge(b, e) || !self.edge(d, e) {
                                continue;
                            }
                            for f in a + 1..n {
                                if [b, c, d, e].contains(&f)
                                    || !self.edge(c, f)
                                    || !self.edge(e, f)
                                    || !self.edge(f, d)
                                {
                                    continue;
                                }
                                self.emit(CellKind::Prism, &[a, b, c, d, e, f]);
                            }
                        }
                    }
                }
            }
        }
    }

    fn pyramids(&mut self) {
        let n = self.mesh.num_vertices() as VertexId;
        for e in 0..n {
            for a in 0..n {
                if a == e || !self.edge(a, e) {
                    continue;
                }
                for b in a + 1..n {
                    if b == e || !self.edge(a, b) || !self.edge(b, e) {
                        continue;
                    }
                    for c in a + 1..n {
                        if [b, e].contains(&c) || !self.edge(b, c) || !self.edge(c, e) {
                            continue;
                        }
                        for d in a + 1..n {
                            if [b, c, e].contains(&d)
                                || !self.edge(c, d)
                                || !self.edge(d, a)
                                || !self.edge(d, e)
                            {
                                continue;
                            }
                            self.emit(CellKind::Pyramid, &[a, b, c, d, e]);
                        }
                    }
                }
            }
        }
    }
}

/// All cells of `kind` found by enumerating every vertex tuple (restricted to
/// tuples whose template edges exist).
pub fn brute_force_cells(
    mesh: &TetMesh,
    index: &AdjacencyIndex,
    config: &SearchConfig,
    kind: CellKind,
) -> Vec<PotentialCell> {
    let mut b = Brute {
        mesh,
        index,
        config,
        out: Vec::new(),
    };
    match kind {
        CellKind::Hexahedron => b.hexes(),
        CellKind::Prism => b.prisms(),
        CellKind::Pyramid => b.pyramids(),
        CellKind::Tetrahedron => {}
    }
    finish(b.out)
}

/// Hexahedra obtained by filtering every oriented hexahedron on the vertex
/// set. Only for meshes of at most [`LITERAL_MAX_VERTICES`] vertices.
pub fn literal_hexes(
    mesh: &TetMesh,
    index: &AdjacencyIndex,
    config: &SearchConfig,
) -> Option<Vec<PotentialCell>> {
    let n = mesh.num_vertices();
    if n > LITERAL_MAX_VERTICES {
        return None;
    }
    let labels: Vec<VertexId> = (0..n as VertexId).collect();
    let cells = enumerate_oriented_hexes(&labels)
        .into_iter()
        .filter_map(|h| examine(mesh, index, config, CellKind::Hexahedron, &h).ok())
        .collect();
    Some(finish(cells))
}

/// Keys present in only one of two cell lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeyDiff {
    pub only_left: Vec<CanonicalKey>,
    pub only_right: Vec<CanonicalKey>,
}

impl KeyDiff {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }
}

pub fn diff_keys(left: &[PotentialCell], right: &[PotentialCell]) -> KeyDiff {
    use std::collections::BTreeSet;
    let l: BTreeSet<CanonicalKey> = left.iter().map(|c| c.key()).collect();
    let r: BTreeSet<CanonicalKey> = right.iter().map(|c| c.key()).collect();
    KeyDiff {
        only_left: l.difference(&r).copied().collect(),
        only_right: r.difference(&l).copied().collect(),
    }
}
