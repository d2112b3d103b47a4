//! Tetrahedral meshes: storage, validation, MSH 2.2 interchange and the
//! adjacency index consumed by the cell searches.

mod adjacency;
pub mod msh;

pub use adjacency::{intersect_sorted, AdjacencyIndex, Facet};
pub use msh::{load_msh, read_msh, save_msh, write_msh, LoadedMsh};

use crate::geom::{orient3d, tet_volume, Point3};
use thiserror::Error;

pub type VertexId = u32;
pub type TetId = u32;

/// Physical / entity tag carried by an element in the input file.
pub type Tag = i32;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: unsupported mesh format: {msg}")]
    UnsupportedFormat { line: usize, msg: String },
    #[error("line {line}: element references unknown node {node}")]
    DanglingNode { line: usize, node: u64 },
    #[error("tetrahedron {tet} references vertex {vertex} which is out of range")]
    VertexOutOfRange { tet: usize, vertex: u32 },
    #[error("boundary triangle {tri} references vertex {vertex} which is out of range")]
    TriangleOutOfRange { tri: usize, vertex: u32 },
    #[error("tetrahedron {tet} has repeated vertices")]
    RepeatedVertex { tet: usize },
    #[error("tetrahedron {tet} has zero volume")]
    DegenerateTet { tet: usize },
    #[error("vertex {vertex} has a non-finite coordinate")]
    NonFiniteCoordinate { vertex: usize },
    #[error("facet {facet:?} is shared by {count} tetrahedra")]
    NonManifold { facet: [VertexId; 3], count: usize },
    #[error("{0}")]
    Invalid(String),
}

/// A triangle of the model boundary (or of an internal model surface).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryTri {
    pub verts: [VertexId; 3],
    pub tag: Tag,
}

/// Immutable tetrahedral mesh.
///
/// Vertex ids are dense and 0-based; `node_ids` keeps the identifiers used by
/// the file the mesh was read from. Every tetrahedron is stored with strictly
/// positive signed volume.
#[derive(Debug, Clone, PartialEq)]
pub struct TetMesh {
    vertices: Vec<Point3>,
    node_ids: Vec<u64>,
    tets: Vec<[VertexId; 4]>,
    tet_region: Vec<Tag>,
    boundary_tris: Vec<BoundaryTri>,
}

impl TetMesh {
    /// Builds a mesh, checking every invariant and flipping negatively
    /// oriented tetrahedra. Node ids default to `1..=n`.
    pub fn new(
        vertices: Vec<Point3>,
        tets: Vec<[VertexId; 4]>,
        tet_region: Vec<Tag>,
        boundary_tris: Vec<BoundaryTri>,
    ) -> Result<Self, MeshError> {
        let node_ids = (1..=vertices.len() as u64).collect();
        Self::with_node_ids(vertices, node_ids, tets, tet_region, boundary_tris)
    }

    pub fn with_node_ids(
        vertices: Vec<Point3>,
        node_ids: Vec<u64>,
        mut tets: Vec<[VertexId; 4]>,
        tet_region: Vec<Tag>,
        boundary_tris: Vec<BoundaryTri>,
    ) -> Result<Self, MeshError> {
        if node_ids.len() != vertices.len() {
            return Err(MeshError::Invalid(format!(
                "{} node ids for {} vertices",
                node_ids.len(),
                vertices.len()
            )));
        }
        if tet_region.len() != tets.len() {
            return Err(MeshError::Invalid(format!(
                "{} region tags for {} tetrahedra",
                tet_region.len(),
                tets.len()
            )));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(MeshError::NonFiniteCoordinate { vertex: i });
        }
        let n = vertices.len() as u32;
        for (ti, t) in tets.iter_mut().enumerate() {
            if let Some(&v) = t.iter().find(|&&v| v >= n) {
                return Err(MeshError::VertexOutOfRange { tet: ti, vertex: v });
            }
            for i in 0..4 {
                for j in i + 1..4 {
                    if t[i] == t[j] {
                        return Err(MeshError::RepeatedVertex { tet: ti });
                    }
                }
            }
            let p = |k: usize| vertices[t[k] as usize];
            let vol = orient3d(p(0), p(1), p(2), p(3));
            if vol == 0.0 {
                return Err(MeshError::DegenerateTet { tet: ti });
            }
            if vol < 0.0 {
                t.swap(2, 3);
            }
        }
        for (i, bt) in boundary_tris.iter().enumerate() {
            if let Some(&v) = bt.verts.iter().find(|&&v| v >= n) {
                return Err(MeshError::TriangleOutOfRange { tri: i, vertex: v });
            }
        }
        Ok(TetMesh {
            vertices,
            node_ids,
            tets,
            tet_region,
            boundary_tris,
        })
    }

    /// Builds a single-region mesh whose boundary triangles are derived from
    /// the facets that belong to exactly one tetrahedron, all tagged `1`.
    pub fn from_tets(vertices: Vec<Point3>, tets: Vec<[VertexId; 4]>) -> Result<Self, MeshError> {
        let regions = vec![1; tets.len()];
        let bnd = hull_facets(&tets)
            .into_iter()
            .map(|verts| BoundaryTri { verts, tag: 1 })
            .collect();
        Self::new(vertices, tets, regions, bnd)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_tets(&self) -> usize {
        self.tets.len()
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    #[inline]
    pub fn point(&self, v: VertexId) -> Point3 {
        self.vertices[v as usize]
    }

    pub fn node_ids(&self) -> &[u64] {
        &self.node_ids
    }

    pub fn node_id(&self, v: VertexId) -> u64 {
        self.node_ids[v as usize]
    }

    pub fn tets(&self) -> &[[VertexId; 4]] {
        &self.tets
    }

    #[inline]
    pub fn tet(&self, t: TetId) -> [VertexId; 4] {
        self.tets[t as usize]
    }

    pub fn tet_regions(&self) -> &[Tag] {
        &self.tet_region
    }

    #[inline]
    pub fn tet_region(&self, t: TetId) -> Tag {
        self.tet_region[t as usize]
    }

    pub fn boundary_tris(&self) -> &[BoundaryTri] {
        &self.boundary_tris
    }

    pub fn tet_volume(&self, t: TetId) -> f64 {
        let [a, b, c, d] = self.tet(t);
        tet_volume(self.point(a), self.point(b), self.point(c), self.point(d))
    }

    pub fn tet_centroid(&self, t: TetId) -> Point3 {
        let pts = self.tet(t).map(|v| self.point(v));
        Point3::centroid(&pts)
    }

    pub fn total_volume(&self) -> f64 {
        (0..self.tets.len() as u32)
            .map(|t| self.tet_volume(t))
            .sum()
    }

    /// Returns a copy with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[VertexId]) -> TetMesh {
        let n = self.vertices.len();
        assert_eq!(perm.len(), n);
        let mut vertices = vec![Point3::ZERO; n];
        let mut node_ids = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            vertices[new as usize] = self.vertices[old];
            node_ids[new as usize] = self.node_ids[old];
        }
        let map4 = |t: &[VertexId; 4]| t.map(|v| perm[v as usize]);
        let tets = self.tets.iter().map(map4).collect();
        let boundary_tris = self
            .boundary_tris
            .iter()
            .map(|b| BoundaryTri {
                verts: b.verts.map(|v| perm[v as usize]),
                tag: b.tag,
            })
            .collect();
        TetMesh::with_node_ids(
            vertices,
            node_ids,
            tets,
            self.tet_region.clone(),
            boundary_tris,
        )
        .expect("permutation preserves validity")
    }
}

#[inline]
pub fn sorted3(mut t: [VertexId; 3]) -> [VertexId; 3] {
    if t[0] > t[1] {
        t.swap(0, 1);
    }
    if t[1] > t[2] {
        t.swap(1, 2);
    }
    if t[0] > t[1] {
        t.swap(0, 1);
    }
    t
}

/// The three vertices of facet `i` of a tetrahedron (the one opposite vertex `i`).
#[inline]
pub fn tet_facet(t: [VertexId; 4], i: usize) -> [VertexId; 3] {
    match i {
        0 => [t[1], t[2], t[3]],
        1 => [t[0], t[2], t[3]],
        2 => [t[0], t[1], t[3]],
        _ => [t[0], t[1], t[2]],
    }
}

/// Sorted facets incident to exactly one tetrahedron.
pub fn hull_facets(tets: &[[VertexId; 4]]) -> Vec<[VertexId; 3]> {
    let mut all: Vec<[VertexId; 3]> = tets
        .iter()
        .flat_map(|&t| (0..4).map(move |i| sorted3(tet_facet(t, i))))
        .collect();
    all.sort_unstable();
    let mut out = Vec::new();
    let mut i = 0;
    while i < all.len() {
        let mut j = i + 1;
        while j < all.len() && all[j] == all[i] {
            j += 1;
        }
        if j - i == 1 {
            out.push(all[i]);
        }
        i = j;
    }
    out
}
