use super::{sorted3, tet_facet, MeshError, Tag, TetId, TetMesh, VertexId};

const NO_TET: TetId = TetId::MAX;

/// A triangular facet of the tetrahedral mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Facet {
    tets: [TetId; 2],
    /// Model-face tag when the facet is one of the mesh's boundary triangles.
    pub tag: Option<Tag>,
}

impl Facet {
    pub fn tets(&self) -> &[TetId] {
        if self.tets[1] == NO_TET {
            &self.tets[..1]
        } else {
            &self.tets[..]
        }
    }

    pub fn is_interior(&self) -> bool {
        self.tets[1] != NO_TET
    }
}

/// Connectivity queries over an immutable [`TetMesh`].
///
/// All tables are compressed rows indexed by vertex; facets are grouped by
/// their smallest vertex and sorted, so lookups are binary searches and the
/// content does not depend on the order tetrahedra were listed in.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyIndex {
    nbr_offsets: Vec<u32>,
    nbrs: Vec<VertexId>,
    facet_offsets: Vec<u32>,
    facet_keys: Vec<[VertexId; 2]>,
    facets: Vec<Facet>,
    vt_offsets: Vec<u32>,
    vertex_tets: Vec<TetId>,
    tet_adj: Vec<[TetId; 4]>,
    unmatched_boundary_tris: usize,
}

fn csr(n: usize, mut pairs: Vec<(u32, u32)>, dedup: bool) -> (Vec<u32>, Vec<u32>) {
    pairs.sort_unstable();
    if dedup {
        pairs.dedup();
    }
    let mut offsets = vec![0u32; n + 1];
    for &(k, _) in &pairs {
        offsets[k as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    (offsets, pairs.into_iter().map(|(_, v)| v).collect())
}

impl AdjacencyIndex {
    pub fn build(mesh: &TetMesh) -> Result<Self, MeshError> {
        let n = mesh.num_vertices();
        let tets = mesh.tets();

        let mut edges = Vec::with_capacity(tets.len() * 12);
        let mut vt = Vec::with_capacity(tets.len() * 4);
        for (ti, t) in tets.iter().enumerate() {
            for i in 0..4 {
                vt.push((t[i], ti as TetId));
                for j in 0..4 {
                    if i != j {
                        edges.push((t[i], t[j]));
                    }
                }
            }
        }
        let (nbr_offsets, nbrs) = csr(n, edges, true);
        let (vt_offsets, vertex_tets) = csr(n, vt, false);

        let mut raw: Vec<([VertexId; 3], TetId, u8)> = Vec::with_capacity(tets.len() * 4);
        for (ti, &t) in tets.iter().enumerate() {
            for i in 0..4 {
                raw.push((sorted3(tet_facet(t, i)), ti as TetId, i as u8));
            }
        }
        raw.sort_unstable();

        let mut facet_offsets = vec![0u32; n + 1];
        let mut facet_keys = Vec::new();
        let mut facets = Vec::new();
        let mut tet_adj = vec![[NO_TET; 4]; tets.len()];
        let mut i = 0;
        while i < raw.len() {
            let key = raw[i].0;
            let mut j = i + 1;
            while j < raw.len() && raw[j].0 == key {
                j += 1;
            }
            if j - i > 2 {
                return Err(MeshError::NonManifold {
                    facet: key,
                    count: j - i,
                });
            }
            let mut f = Facet {
                tets: [raw[i].1, NO_TET],
                tag: None,
            };
            if j - i == 2 {
                let (t0, i0) = (raw[i].1, raw[i].2);
                let (t1, i1) = (raw[i + 1].1, raw[i + 1].2);
                if t0 == t1 {
                    return Err(MeshError::Invalid(format!(
                        "tetrahedron {t0} is glued to itself"
                    )));
                }
                f.tets[1] = t1;
                tet_adj[t0 as usize][i0 as usize] = t1;
                tet_adj[t1 as usize][i1 as usize] = t0;
            }
            facet_offsets[key[0] as usize + 1] += 1;
            facet_keys.push([key[1], key[2]]);
            facets.push(f);
            i = j;
        }
        for v in 0..n {
            facet_offsets[v + 1] += facet_offsets[v];
        }

        let mut index = AdjacencyIndex {
            nbr_offsets,
            nbrs,
            facet_offsets,
            facet_keys,
            facets,
            vt_offsets,
            vertex_tets,
            tet_adj,
            unmatched_boundary_tris: 0,
        };
        for bt in mesh.boundary_tris() {
            match index.facet_slot(bt.verts[0], bt.verts[1], bt.verts[2]) {
                Some(k) => {
                    let f = &mut index.facets[k];
                    if f.tag.is_none() {
                        f.tag = Some(bt.tag);
                    }
                }
                None => index.unmatched_boundary_tris += 1,
            }
        }
        Ok(index)
    }

    pub fn num_vertices(&self) -> usize {
        self.nbr_offsets.len() - 1
    }

    /// Edge-connected vertices of `v`, sorted ascending.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.nbrs[self.nbr_offsets[v] as usize..self.nbr_offsets[v + 1] as usize]
    }

    #[inline]
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    #[inline]
    fn facet_slot(&self, a: VertexId, b: VertexId, c: VertexId) -> Option<usize> {
        let [a, b, c] = sorted3([a, b, c]);
        let lo = self.facet_offsets[a as usize] as usize;
        let hi = self.facet_offsets[a as usize + 1] as usize;
        self.facet_keys[lo..hi]
            .binary_search(&[b, c])
            .ok()
            .map(|k| lo + k)
    }

    /// The facet with vertices `{a, b, c}` in any order.
    #[inline]
    pub fn triangle(&self, a: VertexId, b: VertexId, c: VertexId) -> Option<&Facet> {
        self.facet_slot(a, b, c).map(|k| &self.facets[k])
    }

    #[inline]
    pub fn has_triangle(&self, a: VertexId, b: VertexId, c: VertexId) -> bool {
        self.facet_slot(a, b, c).is_some()
    }

    /// Tetrahedra incident to `v`, ascending.
    pub fn vertex_tets(&self, v: VertexId) -> &[TetId] {
        let v = v as usize;
        &self.vertex_tets[self.vt_offsets[v] as usize..self.vt_offsets[v + 1] as usize]
    }

    /// The tetrahedron across the facet of `t` opposite its `i`-th vertex.
    #[inline]
    pub fn tet_neighbor(&self, t: TetId, i: usize) -> Option<TetId> {
        let n = self.tet_adj[t as usize][i];
        (n != NO_TET).then_some(n)
    }

    /// All facets with their sorted vertex triple, in ascending key order.
    pub fn facets(&self) -> impl Iterator<Item = ([VertexId; 3], &Facet)> + '_ {
        (0..self.num_vertices()).flat_map(move |a| {
            let lo = self.facet_offsets[a] as usize;
            let hi = self.facet_offsets[a + 1] as usize;
            (lo..hi).map(move |k| {
                let [b, c] = self.facet_keys[k];
                ([a as VertexId, b, c], &self.facets[k])
            })
        })
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    /// Boundary triangles of the input that are not facets of any tetrahedron.
    pub fn unmatched_boundary_tris(&self) -> usize {
        self.unmatched_boundary_tris
    }
}

/// Appends to `out` the ascending intersection of sorted slices `a` and `b`.
#[inline]
pub fn intersect_sorted(a: &[VertexId], b: &[VertexId], out: &mut Vec<VertexId>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point3;
    use crate::mesh::BoundaryTri;

    fn pts(v: &[[f64; 3]]) -> Vec<Point3> {
        v.iter().map(|&p| Point3::from_array(p)).collect()
    }

    #[test]
    fn single_tet() {
        let m = TetMesh::from_tets(
            pts(&[[0., 0., 0.], [1., 0., 0.], [0., 1., 0.], [0., 0., 1.]]),
            vec![[0, 1, 2, 3]],
        )
        .unwrap();
        let idx = AdjacencyIndex::build(&m).unwrap();
        for v in 0..4 {
            assert_eq!(idx.neighbors(v).len(), 3);
        }
        assert_eq!(idx.num_facets(), 4);
        for (_, f) in idx.facets() {
            assert_eq!(f.tets().len(), 1);
            assert_eq!(f.tag, Some(1));
        }
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    assert!(idx.has_edge(u, v));
                }
            }
        }
        assert!(idx.has_triangle(3, 1, 0));
    }

    #[test]
    fn two_tets_share_a_facet() {
        let m = TetMesh::from_tets(
            pts(&[
                [0., 0., 0.],
                [1., 0., 0.],
                [0., 1., 0.],
                [0., 0., 1.],
                [0., 0., -1.],
            ]),
            vec![[0, 1, 2, 3], [0, 2, 1, 4]],
        )
        .unwrap();
        let idx = AdjacencyIndex::build(&m).unwrap();
        let f = idx.triangle(2, 0, 1).unwrap();
        assert_eq!(f.tets(), &[0, 1]);
        assert_eq!(f.tag, None);
        assert!(!idx.has_edge(3, 4));
        assert_eq!(idx.tet_neighbor(0, 3), Some(1));
    }

    #[test]
    fn disjoint_tets_have_no_cross_edges() {
        let m = TetMesh::from_tets(
            pts(&[
                [0., 0., 0.],
                [1., 0., 0.],
                [0., 1., 0.],
                [0., 0., 1.],
                [5., 0., 0.],
                [6., 0., 0.],
                [5., 1., 0.],
                [5., 0., 1.],
            ]),
            vec![[0, 1, 2, 3], [4, 5, 6, 7]],
        )
        .unwrap();
        let idx = AdjacencyIndex::build(&m).unwrap();
        assert!(!idx.has_edge(0, 4));
        assert!(!idx.has_edge(7, 3));
    }

    #[test]
    fn non_manifold_facet_is_rejected() {
        let m = TetMesh::new(
            pts(&[
                [0., 0., 0.],
                [1., 0., 0.],
                [0., 1., 0.],
                [0., 0., 1.],
                [0., 0., -1.],
                [0.2, 0.2, 2.],
            ]),
            vec![[0, 1, 2, 3], [0, 2, 1, 4], [0, 1, 2, 5]],
            vec![0; 3],
            vec![],
        )
        .unwrap();
        match AdjacencyIndex::build(&m).unwrap_err() {
            MeshError::NonManifold { facet, count } => {
                assert_eq!(facet, [0, 1, 2]);
                assert_eq!(count, 3);
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn boundary_tags_are_attached() {
        let m = TetMesh::new(
            pts(&[[0., 0., 0.], [1., 0., 0.], [0., 1., 0.], [0., 0., 1.]]),
            vec![[0, 1, 2, 3]],
            vec![3],
            vec![
                BoundaryTri {
                    verts: [2, 1, 0],
                    tag: 11,
                },
                BoundaryTri {
                    verts: [0, 1, 3],
                    tag: 12,
                },
            ],
        )
        .unwrap();
        let idx = AdjacencyIndex::build(&m).unwrap();
        assert_eq!(idx.triangle(0, 1, 2).unwrap().tag, Some(11));
        assert_eq!(idx.triangle(3, 1, 0).unwrap().tag, Some(12));
        assert_eq!(idx.triangle(1, 2, 3).unwrap().tag, None);
    }
}
