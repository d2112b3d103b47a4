//! Cell templates (hexahedron, prism, pyramid), their symmetry groups and the
//! canonical identity of a cell found in a mesh.
//!
//! Local vertex order follows the usual `a..h` lettering, which is also the
//! MSH node order for hexahedra (type 5), prisms (6) and pyramids (7):
//!
//! ```text
//!  hexahedron            prism              pyramid
//!    h-------g             f                   e
//!   /|      /|            /|\                 /|\
//!  e-------f |           d---e               / | \
//!  | d-----|-c           | c |              d--|--c
//!  |/      |/            |/ \|             /   |  /
//!  a-------b             a---b            a-------b
//! ```

mod cube;
mod enumerate;

pub use cube::{
    enumerate_cube_triangulations, symmetry_classes, tet_count_bounds, triangulations_of, CubeTet,
    CubeTriangulation, TetCountBound, TriangulationClass,
};
pub use enumerate::{
    enumerate_4_permutations, enumerate_oriented_hexes, enumerate_unique_quads,
    enumerate_unoriented_hexes,
};

use crate::geom::{det3, Point3};
use crate::mesh::{sorted3, TetId, VertexId};
use smallvec::SmallVec;
use std::fmt;
use std::sync::LazyLock;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CellError {
    #[error("{0:?} has no tetrahedra count bound")]
    NoBound(CellKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellKind {
    Hexahedron,
    Prism,
    Pyramid,
    Tetrahedron,
}

impl CellKind {
    pub const COMBINED: [CellKind; 3] = [CellKind::Hexahedron, CellKind::Prism, CellKind::Pyramid];

    pub fn num_vertices(self) -> usize {
        match self {
            CellKind::Hexahedron => 8,
            CellKind::Prism => 6,
            CellKind::Pyramid => 5,
            CellKind::Tetrahedron => 4,
        }
    }

    /// Element type code in MSH files.
    pub fn msh_type(self) -> u32 {
        match self {
            CellKind::Hexahedron => 5,
            CellKind::Prism => 6,
            CellKind::Pyramid => 7,
            CellKind::Tetrahedron => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CellKind::Hexahedron => "hex",
            CellKind::Prism => "prism",
            CellKind::Pyramid => "pyramid",
            CellKind::Tetrahedron => "tet",
        }
    }
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Static description of a cell type in local vertex indices.
#[derive(Debug, Clone)]
pub struct CellTemplate {
    pub kind: CellKind,
    pub edges: &'static [[u8; 2]],
    pub quad_faces: &'static [[u8; 4]],
    pub tri_faces: &'static [[u8; 3]],
    /// Corners usable as quality upper bounds: the corner vertex followed by
    /// its three incident edge ends in right-handed order. Pyramids list the
    /// base corners only.
    pub corners: &'static [[u8; 4]],
    /// Vertices of the ideal element (unit edges).
    pub ideal: Vec<Point3>,
    /// `+1` when the listed cyclic order of a quad face has an outward normal
    /// on a positively oriented cell, `-1` otherwise.
    pub quad_face_sign: Vec<f64>,
    pub tri_face_sign: Vec<f64>,
}

const HEX_EDGES: [[u8; 2]; 12] = [
    [0, 1],
    [1, 2],
    [2, 3],
    [0, 3],
    [0, 4],
    [1, 5],
    [2, 6],
    [3, 7],
    [4, 5],
    [5, 6],
    [6, 7],
    [4, 7],
];
const HEX_QUADS: [[u8; 4]; 6] = [
    [0, 1, 2, 3],
    [4, 5, 6, 7],
    [0, 1, 5, 4],
    [3, 2, 6, 7],
    [1, 2, 6, 5],
    [0, 3, 7, 4],
];
const HEX_CORNERS: [[u8; 4]; 8] = [
    [0, 1, 3, 4],
    [1, 2, 0, 5],
    [2, 3, 1, 6],
    [3, 0, 2, 7],
    [4, 7, 5, 0],
    [5, 4, 6, 1],
    [6, 5, 7, 2],
    [7, 6, 4, 3],
];

const PRISM_EDGES: [[u8; 2]; 9] = [
    [0, 1],
    [1, 2],
    [2, 0],
    [0, 3],
    [1, 4],
    [2, 5],
    [3, 4],
    [4, 5],
    [5, 3],
];
const PRISM_TRIS: [[u8; 3]; 2] = [[0, 1, 2], [3, 4, 5]];
const PRISM_QUADS: [[u8; 4]; 3] = [[0, 1, 4, 3], [4, 5, 2, 1], [0, 2, 5, 3]];
const PRISM_CORNERS: [[u8; 4]; 6] = [
    [0, 1, 2, 3],
    [1, 2, 0, 4],
    [2, 0, 1, 5],
    [3, 5, 4, 0],
    [4, 3, 5, 1],
    [5, 4, 3, 2],
];

const PYRAMID_EDGES: [[u8; 2]; 8] = [
    [0, 1],
    [1, 2],
    [2, 3],
    [0, 3],
    [0, 4],
    [1, 4],
    [2, 4],
    [3, 4],
];
const PYRAMID_TRIS: [[u8; 3]; 4] = [[0, 1, 4], [1, 2, 4], [2, 3, 4], [0, 3, 4]];
const PYRAMID_QUADS: [[u8; 4]; 1] = [[0, 1, 2, 3]];
const PYRAMID_CORNERS: [[u8; 4]; 4] = [[0, 1, 3, 4], [1, 2, 0, 4], [2, 3, 1, 4], [3, 0, 2, 4]];

const TET_EDGES: [[u8; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
const TET_TRIS: [[u8; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
const TET_CORNERS: [[u8; 4]; 1] = [[0, 1, 2, 3]];

pub const PYRAMID_HEIGHT: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn ideal_vertices(kind: CellKind) -> Vec<Point3> {
    let s3 = 3f64.sqrt() / 2.0;
    let p = Point3::new;
    match kind {
        CellKind::Hexahedron => vec![
            p(0., 0., 0.),
            p(1., 0., 0.),
            p(1., 1., 0.),
            p(0., 1., 0.),
            p(0., 0., 1.),
            p(1., 0., 1.),
            p(1., 1., 1.),
            p(0., 1., 1.),
        ],
        CellKind::Prism => vec![
            p(0., 0., 0.),
            p(1., 0., 0.),
            p(0.5, s3, 0.),
            p(0., 0., 1.),
            p(1., 0., 1.),
            p(0.5, s3, 1.),
        ],
        CellKind::Pyramid => vec![
            p(0., 0., 0.),
            p(1., 0., 0.),
            p(1., 1., 0.),
            p(0., 1., 0.),
            p(0.5, 0.5, PYRAMID_HEIGHT),
        ],
        CellKind::Tetrahedron => vec![
            p(0., 0., 0.),
            p(1., 0., 0.),
            p(0.5, s3, 0.),
            p(0.5, s3 / 3.0, (2.0f64 / 3.0).sqrt()),
        ],
    }
}

fn face_sign(ideal: &[Point3], face: &[u8]) -> f64 {
    let c = Point3::centroid(ideal);
    let fp: Vec<Point3> = face.iter().map(|&i| ideal[i as usize]).collect();
    let n = (fp[1] - fp[0]).cross(fp[2] - fp[0]);
    if n.dot(Point3::centroid(&fp) - c) > 0.0 {
        1.0
    } else {
        -1.0
    }
}

type Topology = (
    &'static [[u8; 2]],
    &'static [[u8; 4]],
    &'static [[u8; 3]],
    &'static [[u8; 4]],
);

fn build_template(kind: CellKind) -> CellTemplate {
    let (edges, quad_faces, tri_faces, corners): Topology = match kind {
        CellKind::Hexahedron => (&HEX_EDGES, &HEX_QUADS, &[], &HEX_CORNERS),
        CellKind::Prism => (&PRISM_EDGES, &PRISM_QUADS, &PRISM_TRIS, &PRISM_CORNERS),
        CellKind::Pyramid => (
            &PYRAMID_EDGES,
            &PYRAMID_QUADS,
            &PYRAMID_TRIS,
            &PYRAMID_CORNERS,
        ),
        CellKind::Tetrahedron => (&TET_EDGES, &[], &TET_TRIS, &TET_CORNERS),
    };
    let ideal = ideal_vertices(kind);
    let quad_face_sign = quad_faces.iter().map(|f| face_sign(&ideal, f)).collect();
    let tri_face_sign = tri_faces.iter().map(|f| face_sign(&ideal, f)).collect();
    CellTemplate {
        kind,
        edges,
        quad_faces,
        tri_faces,
        corners,
        ideal,
        quad_face_sign,
        tri_face_sign,
    }
}

static TEMPLATES: LazyLock<[CellTemplate; 4]> = LazyLock::new(|| {
    [
        build_template(CellKind::Hexahedron),
        build_template(CellKind::Prism),
        build_template(CellKind::Pyramid),
        build_template(CellKind::Tetrahedron),
    ]
});

pub fn template(kind: CellKind) -> &'static CellTemplate {
    &TEMPLATES[kind as usize]
}

/// Signed triple product at local vertex 0 of the cell; positive for the
/// template orientation.
pub fn orientation_sign(kind: CellKind, pts: &[Point3]) -> f64 {
    let c = template(kind).corners[0];
    let o = pts[c[0] as usize];
    det3(
        pts[c[1] as usize] - o,
        pts[c[2] as usize] - o,
        pts[c[3] as usize] - o,
    )
}

fn is_edge_set_preserved(t: &CellTemplate, perm: &[u8]) -> bool {
    let norm2 = |a: u8, b: u8| if a < b { [a, b] } else { [b, a] };
    let mut edges: Vec<[u8; 2]> = t.edges.iter().map(|e| norm2(e[0], e[1])).collect();
    edges.sort_unstable();
    let mut mapped: Vec<[u8; 2]> = t
        .edges
        .iter()
        .map(|e| norm2(perm[e[0] as usize], perm[e[1] as usize]))
        .collect();
    mapped.sort_unstable();
    if edges != mapped {
        return false;
    }
    let set4 = |f: &[u8]| {
        let mut v: Vec<u8> = f.to_vec();
        v.sort_unstable();
        v
    };
    let mut quads: Vec<Vec<u8>> = t.quad_faces.iter().map(|f| set4(f)).collect();
    quads.sort();
    let mut mq: Vec<Vec<u8>> = t
        .quad_faces
        .iter()
        .map(|f| set4(&f.iter().map(|&i| perm[i as usize]).collect::<Vec<_>>()))
        .collect();
    mq.sort();
    quads == mq
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..n as u8).collect();
    fn rec(k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out.sort();
    out
}

fn compute_symmetries(kind: CellKind, orientation_preserving: bool) -> Vec<Vec<u8>> {
    let t = template(kind);
    permutations(kind.num_vertices())
        .into_iter()
        .filter(|p| is_edge_set_preserved(t, p))
        .filter(|p| {
            if !orientation_preserving {
                return true;
            }
            let relabeled: Vec<Point3> = p.iter().map(|&i| t.ideal[i as usize]).collect();
            orientation_sign(kind, &relabeled) > 0.0
        })
        .collect()
}

static ROTATIONS: LazyLock<[Vec<Vec<u8>>; 4]> = LazyLock::new(|| {
    [
        compute_symmetries(CellKind::Hexahedron, true),
        compute_symmetries(CellKind::Prism, true),
        compute_symmetries(CellKind::Pyramid, true),
        compute_symmetries(CellKind::Tetrahedron, true),
    ]
});

static AUTOMORPHISMS: LazyLock<[Vec<Vec<u8>>; 4]> = LazyLock::new(|| {
    [
        compute_symmetries(CellKind::Hexahedron, false),
        compute_symmetries(CellKind::Prism, false),
        compute_symmetries(CellKind::Pyramid, false),
        compute_symmetries(CellKind::Tetrahedron, false),
    ]
});

/// Orientation-preserving relabelings of the template (hex 24, prism 6,
/// pyramid 4, tetrahedron 12). Entry `p` maps position `i` to `p[i]`.
pub fn rotations(kind: CellKind) -> &'static [Vec<u8>] {
    &ROTATIONS[kind as usize]
}

/// All relabelings preserving edges and faces, mirrors included.
pub fn automorphisms(kind: CellKind) -> &'static [Vec<u8>] {
    &AUTOMORPHISMS[kind as usize]
}

/// Which diagonal splits a quadrilateral face `pqrs` into mesh triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Diagonal {
    /// `p-r`: triangles `pqr` and `prs`.
    First,
    /// `q-s`: triangles `pqs` and `qrs`.
    Second,
}

impl Diagonal {
    pub fn triangles<T: Copy>(self, f: [T; 4]) -> [[T; 3]; 2] {
        let [p, q, r, s] = f;
        match self {
            Diagonal::First => [[p, q, r], [p, r, s]],
            Diagonal::Second => [[p, q, s], [q, r, s]],
        }
    }

    pub fn endpoints<T: Copy>(self, f: [T; 4]) -> [T; 2] {
        match self {
            Diagonal::First => [f[0], f[2]],
            Diagonal::Second => [f[1], f[3]],
        }
    }
}

/// Vertex tuple normalized under the orientation-preserving symmetries of
/// its kind; equal keys mean the same cell. Ordered by kind first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    kind: CellKind,
    verts: [VertexId; 8],
}

impl CanonicalKey {
    /// Canonical form of `verts` given in template order: the
    /// lexicographically smallest relabeling over [`rotations`].
    pub fn new(kind: CellKind, verts: &[VertexId]) -> Self {
        let n = kind.num_vertices();
        assert_eq!(verts.len(), n, "{kind} needs {n} vertices");
        let mut best = [VertexId::MAX; 8];
        let mut cand = [VertexId::MAX; 8];
        for p in rotations(kind) {
            for i in 0..n {
                cand[i] = verts[p[i] as usize];
            }
            if cand[..n] < best[..n] {
                best = cand;
            }
        }
        CanonicalKey { kind, verts: best }
    }

    pub fn kind(&self) -> CellKind {
        self.kind
    }

    pub fn verts(&self) -> &[VertexId] {
        &self.verts[..self.kind.num_vertices()]
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.kind, self.verts())
    }
}

/// A hexahedron, prism or pyramid made of tetrahedra of a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialCell {
    pub kind: CellKind,
    /// Vertices in canonical template order.
    pub verts: SmallVec<[VertexId; 8]>,
    /// Tetrahedra filling the cell, ascending.
    pub interior_tets: Vec<TetId>,
    /// Realized diagonal of each quad face, in template face order.
    pub quad_diagonals: SmallVec<[Diagonal; 6]>,
    pub quality: f64,
    /// Mesh vertices that are not cell vertices but belong to interior tets.
    pub encompassed: SmallVec<[VertexId; 2]>,
}

impl PotentialCell {
    pub fn key(&self) -> CanonicalKey {
        CanonicalKey::new(self.kind, &self.verts)
    }

    pub fn template(&self) -> &'static CellTemplate {
        template(self.kind)
    }

    pub fn quad_face(&self, i: usize) -> [VertexId; 4] {
        self.template().quad_faces[i].map(|l| self.verts[l as usize])
    }

    /// Boundary triangles of the realized cell: triangle faces plus the two
    /// halves of each quad face, each sorted.
    pub fn boundary_triangles(&self) -> SmallVec<[[VertexId; 3]; 12]> {
        let t = self.template();
        let mut out = SmallVec::new();
        for f in t.tri_faces {
            out.push(sorted3(f.map(|l| self.verts[l as usize])));
        }
        for (i, d) in self.quad_diagonals.iter().enumerate() {
            for tri in d.triangles(self.quad_face(i)) {
                out.push(sorted3(tri));
            }
        }
        out
    }

    /// Boundary edges of the realized cell (template edges plus the chosen
    /// quad diagonals), each as an ascending pair.
    pub fn boundary_edges(&self) -> SmallVec<[[VertexId; 2]; 18]> {
        let norm = |a: VertexId, b: VertexId| if a < b { [a, b] } else { [b, a] };
        let mut out: SmallVec<[[VertexId; 2]; 18]> = self
            .template()
            .edges
            .iter()
            .map(|e| norm(self.verts[e[0] as usize], self.verts[e[1] as usize]))
            .collect();
        for (i, d) in self.quad_diagonals.iter().enumerate() {
            let [p, r] = d.endpoints(self.quad_face(i));
            out.push(norm(p, r));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_tables_match_the_lettered_lists() {
        let letters = |s: &str| -> Vec<u8> { s.bytes().map(|b| b - b'a').collect() };
        let hex = template(CellKind::Hexahedron);
        let e: Vec<Vec<u8>> = hex.edges.iter().map(|e| e.to_vec()).collect();
        let want: Vec<Vec<u8>> = "ab bc cd ad ae bf cg dh ef fg gh eh"
            .split(' ')
            .map(letters)
            .collect();
        assert_eq!(e, want);
        let q: Vec<Vec<u8>> = hex.quad_faces.iter().map(|f| f.to_vec()).collect();
        let want: Vec<Vec<u8>> = "abcd efgh abfe dcgh bcgf adhe"
            .split(' ')
            .map(letters)
            .collect();
        assert_eq!(q, want);
        assert!(hex.tri_faces.is_empty());

        let prism = template(CellKind::Prism);
        let e: Vec<Vec<u8>> = prism.edges.iter().map(|e| e.to_vec()).collect();
        let want: Vec<Vec<u8>> = "ab bc ca ad be cf de ef fd"
            .split(' ')
            .map(letters)
            .collect();
        assert_eq!(e, want);
        let q: Vec<Vec<u8>> = prism.quad_faces.iter().map(|f| f.to_vec()).collect();
        assert_eq!(q, vec![letters("abed"), letters("efcb"), letters("acfd")]);
        let t: Vec<Vec<u8>> = prism.tri_faces.iter().map(|f| f.to_vec()).collect();
        assert_eq!(t, vec![letters("abc"), letters("def")]);

        let pyr = template(CellKind::Pyramid);
        let e: Vec<Vec<u8>> = pyr.edges.iter().map(|e| e.to_vec()).collect();
        let want: Vec<Vec<u8>> = "ab bc cd ad ae be ce de".split(' ').map(letters).collect();
        assert_eq!(e, want);
        assert_eq!(pyr.quad_faces[0].to_vec(), letters("abcd"));
        let t: Vec<Vec<u8>> = pyr.tri_faces.iter().map(|f| f.to_vec()).collect();
        let want: Vec<Vec<u8>> = "abe bce cde ade".split(' ').map(letters).collect();
        assert_eq!(t, want);
    }

    #[test]
    fn group_orders() {
        assert_eq!(rotations(CellKind::Hexahedron).len(), 24);
        assert_eq!(automorphisms(CellKind::Hexahedron).len(), 48);
        assert_eq!(rotations(CellKind::Prism).len(), 6);
        assert_eq!(automorphisms(CellKind::Prism).len(), 12);
        assert_eq!(rotations(CellKind::Pyramid).len(), 4);
        assert_eq!(automorphisms(CellKind::Pyramid).len(), 8);
    }

    #[test]
    fn corners_are_right_handed_on_ideal_elements() {
        for kind in CellKind::COMBINED {
            let t = template(kind);
            for c in t.corners {
                let o = t.ideal[c[0] as usize];
                let d = det3(
                    t.ideal[c[1] as usize] - o,
                    t.ideal[c[2] as usize] - o,
                    t.ideal[c[3] as usize] - o,
                );
                assert!(d > 0.0, "{kind} corner {c:?}");
            }
        }
    }

    #[test]
    fn hex_face_orientations() {
        // abcd, efgh, abfe, dcgh, bcgf, adhe
        assert_eq!(
            template(CellKind::Hexahedron).quad_face_sign,
            vec![-1.0, 1.0, 1.0, -1.0, 1.0, -1.0]
        );
    }

    #[test]
    fn canonical_key_is_rotation_invariant_and_chiral() {
        let verts: [VertexId; 8] = [17, 3, 9, 40, 22, 8, 31, 5];
        let k = CanonicalKey::new(CellKind::Hexahedron, &verts);
        for p in rotations(CellKind::Hexahedron) {
            let r: Vec<VertexId> = p.iter().map(|&i| verts[i as usize]).collect();
            assert_eq!(CanonicalKey::new(CellKind::Hexahedron, &r), k);
        }
        // a mirror image: swap the two halves of the hexahedron
        let m: Vec<VertexId> = [4, 5, 6, 7, 0, 1, 2, 3].iter().map(|&i| verts[i]).collect();
        assert_ne!(CanonicalKey::new(CellKind::Hexahedron, &m), k);
        assert_eq!(k.verts()[0], 3);
    }
}
