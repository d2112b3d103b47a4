//! Checks shared by the searches and the brute-force oracle: quad-face
//! existence, interior tetrahedra, and the full acceptance of a vertex tuple.

use super::inversion::contains_point;
use super::SearchConfig;
use crate::cell::{template, CanonicalKey, CellKind, Diagonal, PotentialCell};
use crate::geom::{orient3d, Point3};
use crate::mesh::{sorted3, tet_facet, AdjacencyIndex, Tag, TetId, TetMesh, VertexId};
use crate::quality::{cell_validity_and_quality, min_corner_quality};
use smallvec::SmallVec;
use std::collections::VecDeque;

/// Diagonals of a quad face whose two triangles are mesh facets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalChoice {
    First,
    Second,
    Both,
}

impl DiagonalChoice {
    pub fn allows(self, d: Diagonal) -> bool {
        matches!(
            (self, d),
            (DiagonalChoice::Both, _)
                | (DiagonalChoice::First, Diagonal::First)
                | (DiagonalChoice::Second, Diagonal::Second)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadFaceWitness {
    pub verts: [VertexId; 4],
    pub diagonals: DiagonalChoice,
    /// Model-face tag shared by the triangles (`None` inside the volume).
    pub tag: Option<Tag>,
}

fn pair_tag(index: &AdjacencyIndex, tris: [[VertexId; 3]; 2]) -> Option<Option<Tag>> {
    let f0 = index.triangle(tris[0][0], tris[0][1], tris[0][2])?;
    let f1 = index.triangle(tris[1][0], tris[1][1], tris[1][2])?;
    (f0.tag == f1.tag).then_some(f0.tag)
}

/// Whether `abcd` can be a quad face: the two triangles of at least one
/// diagonal are mesh facets carrying the same model-face tag.
pub fn is_quad_face(
    index: &AdjacencyIndex,
    a: VertexId,
    b: VertexId,
    c: VertexId,
    d: VertexId,
) -> Option<QuadFaceWitness> {
    let f = [a, b, c, d];
    let first = pair_tag(index, Diagonal::First.triangles(f));
    let second = pair_tag(index, Diagonal::Second.triangles(f));
    let (diagonals, tag) = match (first, second) {
        (Some(t), None) => (DiagonalChoice::First, t),
        (None, Some(t)) => (DiagonalChoice::Second, t),
        (Some(t), Some(_)) => (DiagonalChoice::Both, t),
        (None, None) => return None,
    };
    Some(QuadFaceWitness {
        verts: f,
        diagonals,
        tag,
    })
}

/// Why a vertex tuple was not accepted as a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reject {
    RepeatedVertex,
    MissingEdge,
    MissingTriangle,
    NotQuadFace,
    /// The corner qualities already rule the cell out.
    CornerQuality,
    NoSeed,
    RegionMismatch,
    Escaped,
    /// No single diagonal of some quad face bounds the interior tetrahedra.
    FaceNotRealized,
    /// A pyramid not made of exactly two tetrahedra.
    TetCount,
    Invalid,
    LowQuality,
}

/// Tetrahedra must not exceed this count; larger fills are treated as
/// leaking out of the cell.
pub const MAX_FILL: usize = 64;

/// Result of the interior flood fill.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorTets {
    pub tets: Vec<TetId>,
    /// Boundary tetrahedra (all four vertices on one quad face) met and excluded.
    pub excluded: Vec<TetId>,
}

struct Boundary {
    /// Oriented triangle and the outward sign of its face.
    tris: SmallVec<[([VertexId; 3], f64); 26]>,
    keys: SmallVec<[[VertexId; 3]; 26]>,
    quads: SmallVec<[[VertexId; 4]; 6]>,
}

impl Boundary {
    fn new(kind: CellKind, v: &[VertexId]) -> Self {
        let t = template(kind);
        let mut tris = SmallVec::new();
        for (f, &s) in t.tri_faces.iter().zip(&t.tri_face_sign) {
            tris.push((f.map(|l| v[l as usize]), s));
        }
        let mut quads = SmallVec::new();
        for (f, &s) in t.quad_faces.iter().zip(&t.quad_face_sign) {
            let q = f.map(|l| v[l as usize]);
            quads.push(q);
            for d in [Diagonal::First, Diagonal::Second] {
                for tri in d.triangles(q) {
                    tris.push((tri, s));
                }
            }
        }
        let keys = tris.iter().map(|(t, _)| sorted3(*t)).collect();
        Boundary { tris, keys, quads }
    }

    fn contains(&self, tri: [VertexId; 3]) -> bool {
        let k = sorted3(tri);
        self.keys.contains(&k)
    }

    fn is_boundary_tet(&self, t: [VertexId; 4]) -> bool {
        let mut s = t;
        s.sort_unstable();
        self.quads.iter().any(|q| {
            let mut q = *q;
            q.sort_unstable();
            q == s
        })
    }
}

fn opposite(t: [VertexId; 4], tri: [VertexId; 3]) -> VertexId {
    *t.iter()
        .find(|v| !tri.contains(v))
        .expect("tet contains the triangle")
}

/// Flood fill of the tetrahedra inside a cell whose vertices are given in
/// template order.
pub fn compute_interior_tets(
    mesh: &TetMesh,
    index: &AdjacencyIndex,
    kind: CellKind,
    verts: &[VertexId],
) -> Result<InteriorTets, Reject> {
    let pts: SmallVec<[Point3; 8]> = verts.iter().map(|&v| mesh.point(v)).collect();
    let cell_sign = crate::cell::orientation_sign(kind, &pts).signum();
    let bnd = Boundary::new(kind, verts);
    let mut excluded: Vec<TetId> = Vec::new();
    let mut seeds: SmallVec<[TetId; 16]> = SmallVec::new();
    for &(tri, s) in &bnd.tris {
        let Some(f) = index.triangle(tri[0], tri[1], tri[2]) else {
            continue;
        };
        for &t in f.tets() {
            let tv = mesh.tet(t);
            let x = opposite(tv, tri);
            let side = orient3d(
                mesh.point(tri[0]),
                mesh.point(tri[1]),
                mesh.point(tri[2]),
                mesh.point(x),
            );
            if side * s * cell_sign >= 0.0 {
                continue;
            }
            if bnd.is_boundary_tet(tv) {
                if !excluded.contains(&t) {
                    excluded.push(t);
                }
            } else if !seeds.contains(&t) {
                seeds.push(t);
            }
        }
    }
    if seeds.is_empty() {
        // any tetrahedron spanned by cell vertices only
        for &t in index.vertex_tets(verts[0]) {
            let tv = mesh.tet(t);
            if tv.iter().all(|v| verts.contains(v)) && !bnd.is_boundary_tet(tv) {
                seeds.push(t);
                break;
            }
        }
    }
    if seeds.is_empty() {
        return Err(Reject::NoSeed);
    }
    let region = mesh.tet_region(seeds[0]);
    let mut inside: Vec<TetId> = seeds.to_vec();
    let mut queue: VecDeque<TetId> = seeds.iter().copied().collect();
    while let Some(t) = queue.pop_front() {
        if mesh.tet_region(t) != region {
            return Err(Reject::RegionMismatch);
        }
        let tv = mesh.tet(t);
        for i in 0..4 {
            if bnd.contains(tet_facet(tv, i)) {
                continue;
            }
            let Some(n) = index.tet_neighbor(t, i) else {
                return Err(Reject::Escaped);
            };
            if !inside.contains(&n) {
                if inside.len() == MAX_FILL {
                    return Err(Reject::Escaped);
                }
                inside.push(n);
                queue.push_back(n);
            }
        }
    }
    for &t in &inside {
        let tv = mesh.tet(t);
        if !tv.iter().any(|v| verts.contains(v))
            && !contains_point(kind, &pts, mesh.tet_centroid(t), 0.0)
        {
            return Err(Reject::Escaped);
        }
    }
    inside.sort_unstable();
    excluded.sort_unstable();
    Ok(InteriorTets {
        tets: inside,
        excluded,
    })
}

/// Diagonal of quad face `q` whose two triangles are facets of interior tets.
fn realized_diagonal(
    index: &AdjacencyIndex,
    q: [VertexId; 4],
    interior: &[TetId],
) -> Option<Diagonal> {
    let touches = |tri: [VertexId; 3]| {
        index
            .triangle(tri[0], tri[1], tri[2])
            .is_some_and(|f| f.tets().iter().any(|t| interior.binary_search(t).is_ok()))
    };
    let ok = |d: Diagonal| d.triangles(q).into_iter().all(touches);
    match (ok(Diagonal::First), ok(Diagonal::Second)) {
        (true, false) => Some(Diagonal::First),
        (false, true) => Some(Diagonal::Second),
        _ => None,
    }
}

/// Full acceptance test of a vertex tuple in template order (any rotation).
pub fn examine(
    mesh: &TetMesh,
    index: &AdjacencyIndex,
    config: &SearchConfig,
    kind: CellKind,
    tuple: &[VertexId],
) -> Result<PotentialCell, Reject> {
    let key = CanonicalKey::new(kind, tuple);
    let v = key.verts();
    let t = template(kind);
    for i in 0..v.len() {
        if v[i + 1..].contains(&v[i]) {
            return Err(Reject::RepeatedVertex);
        }
    }
    if !t
        .edges
        .iter()
        .all(|e| index.has_edge(v[e[0] as usize], v[e[1] as usize]))
    {
        return Err(Reject::MissingEdge);
    }
    if !t
        .tri_faces
        .iter()
        .all(|f| index.has_triangle(v[f[0] as usize], v[f[1] as usize], v[f[2] as usize]))
    {
        return Err(Reject::MissingTriangle);
    }
    let mut witnesses: SmallVec<[QuadFaceWitness; 6]> = SmallVec::new();
    for f in t.quad_faces {
        let q = f.map(|l| v[l as usize]);
        witnesses.push(is_quad_face(index, q[0], q[1], q[2], q[3]).ok_or(Reject::NotQuadFace)?);
    }
    let pts: SmallVec<[Point3; 8]> = v.iter().map(|&x| mesh.point(x)).collect();
    let corner = min_corner_quality(kind, &pts);
    if !config.min_quality.accepts(corner) {
        return Err(Reject::CornerQuality);
    }
    let fill = compute_interior_tets(mesh, index, kind, v)?;
    let mut quad_diagonals: SmallVec<[Diagonal; 6]> = SmallVec::new();
    for w in &witnesses {
        let d = realized_diagonal(index, w.verts, &fill.tets).ok_or(Reject::FaceNotRealized)?;
        if !w.diagonals.allows(d) {
            return Err(Reject::FaceNotRealized);
        }
        quad_diagonals.push(d);
    }
    if kind == CellKind::Pyramid && fill.tets.len() != 2 {
        return Err(Reject::TetCount);
    }
    let quality = if config.enforce_validity {
        let q = cell_validity_and_quality(kind, &pts);
        if !q.valid {
            return Err(Reject::Invalid);
        }
        q.quality
    } else {
        corner
    };
    if !config.min_quality.accepts(quality) {
        return Err(Reject::LowQuality);
    }
    let mut encompassed: SmallVec<[VertexId; 2]> = SmallVec::new();
    for &tet in &fill.tets {
        for x in mesh.tet(tet) {
            if !v.contains(&x) && !encompassed.contains(&x) {
                encompassed.push(x);
            }
        }
    }
    encompassed.sort_unstable();
    if kind == CellKind::Hexahedron && encompassed.is_empty() {
        let n = fill.tets.len();
        assert!(
            (5..=15).contains(&n),
            "hexahedron {v:?} without interior vertices has {n} tetrahedra"
        );
    }
    Ok(PotentialCell {
        kind,
        verts: v.iter().copied().collect(),
        interior_tets: fill.tets,
        quad_diagonals,
        quality,
        encompassed,
    })
}
