//! Choice of a set of mutually compatible cells and assembly of the
//! resulting mixed mesh.

mod assemble;

pub use assemble::{assemble, mixed_elements, write_mixed_msh, HexDominantMesh, KindStats};

use crate::cell::{CellKind, PotentialCell};
use crate::mesh::{sorted3, TetId, VertexId};
use rayon::prelude::*;
use std::cmp::Ordering;

fn shared_sorted<T: Ord + Copy>(a: &[T], b: &[T]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => return true,
        }
    }
    false
}

fn sorted_verts(c: &PotentialCell) -> Vec<VertexId> {
    let mut v = c.verts.to_vec();
    v.sort_unstable();
    v
}

/// Sorted quad face and its realized diagonal as an ascending pair.
fn quad_faces(c: &PotentialCell) -> Vec<([VertexId; 4], [VertexId; 2])> {
    c.quad_diagonals
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let f = c.quad_face(i);
            let mut s = f;
            s.sort_unstable();
            let mut e = d.endpoints(f);
            e.sort_unstable();
            (s, e)
        })
        .collect()
}

/// Whether two cells of one mesh can both be part of a conforming mixed
/// mesh.
pub fn compatible(a: &PotentialCell, b: &PotentialCell) -> bool {
    if shared_sorted(&a.interior_tets, &b.interior_tets) {
        return false;
    }
    let (va, vb) = (sorted_verts(a), sorted_verts(b));
    let shared: Vec<VertexId> = va
        .iter()
        .copied()
        .filter(|v| vb.binary_search(v).is_ok())
        .collect();
    match shared.len() {
        0 | 1 => true,
        2 => {
            let e = [shared[0], shared[1]];
            a.boundary_edges().contains(&e) && b.boundary_edges().contains(&e)
        }
        3 => {
            let t = sorted3([shared[0], shared[1], shared[2]]);
            a.boundary_triangles().contains(&t) && b.boundary_triangles().contains(&t)
        }
        4 => {
            let f = [shared[0], shared[1], shared[2], shared[3]];
            let qa = quad_faces(a).into_iter().find(|q| q.0 == f);
            let qb = quad_faces(b).into_iter().find(|q| q.0 == f);
            matches!((qa, qb), (Some(x), Some(y)) if x.1 == y.1)
        }
        _ => false,
    }
}

/// One node per cell, weighted by quality; edges join incompatible cells.
#[derive(Debug, Clone, PartialEq)]
pub struct IncompatibilityGraph {
    weights: Vec<f64>,
    adjacency: Vec<Vec<u32>>,
    /// Nodes in the order the greedy selection considers them.
    order: Vec<u32>,
}

fn kind_rank(k: CellKind) -> u8 {
    match k {
        CellKind::Hexahedron => 0,
        CellKind::Prism => 1,
        CellKind::Pyramid => 2,
        CellKind::Tetrahedron => 3,
    }
}

impl IncompatibilityGraph {
    /// Graph of `cells`, which must be free of duplicates. Only cells sharing
    /// a vertex or a tetrahedron can be incompatible, so only those pairs are
    /// tested.
    pub fn build(cells: &[PotentialCell]) -> Self {
        let n = cells.len();
        let max_v = cells
            .iter()
            .flat_map(|c| c.verts.iter())
            .max()
            .map_or(0, |&v| v as usize + 1);
        let max_t = cells
            .iter()
            .flat_map(|c| c.interior_tets.iter())
            .max()
            .map_or(0, |&t| t as usize + 1);
        let mut by_vertex: Vec<Vec<u32>> = vec![Vec::new(); max_v];
        let mut by_tet: Vec<Vec<u32>> = vec![Vec::new(); max_t];
        for (i, c) in cells.iter().enumerate() {
            for &v in &c.verts {
                by_vertex[v as usize].push(i as u32);
            }
            for &t in &c.interior_tets {
                by_tet[t as usize].push(i as u32);
            }
        }
        let upper: Vec<Vec<u32>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let c = &cells[i];
                let mut cand: Vec<u32> = c
                    .verts
                    .iter()
                    .flat_map(|&v| &by_vertex[v as usize])
                    .chain(
                        c.interior_tets
                            .iter()
                            .flat_map(|&t: &TetId| &by_tet[t as usize]),
                    )
                    .copied()
                    .filter(|&j| j as usize > i)
                    .collect();
                cand.sort_unstable();
                cand.dedup();
                cand.retain(|&j| !compatible(c, &cells[j as usize]));
                cand
            })
            .collect();
        let mut adjacency = vec![Vec::new(); n];
        for (i, js) in upper.iter().enumerate() {
            for &j in js {
                adjacency[i].push(j);
                adjacency[j as usize].push(i as u32);
            }
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        let keys: Vec<_> = cells.iter().map(|c| c.key()).collect();
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by(|&i, &j| {
            let (a, b) = (&cells[i as usize], &cells[j as usize]);
            b.quality
                .total_cmp(&a.quality)
                .then(kind_rank(a.kind).cmp(&kind_rank(b.kind)))
                .then(keys[i as usize].cmp(&keys[j as usize]))
        });
        IncompatibilityGraph {
            weights: cells.iter().map(|c| c.quality).collect(),
            adjacency,
            order,
        }
    }

    /// Graph from explicit weights and incompatible pairs; equal weights are
    /// ordered by node index.
    pub fn from_edges(weights: Vec<f64>, edges: &[(u32, u32)]) -> Self {
        let n = weights.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in edges {
            assert!(i != j, "self-loop on {i}");
            adjacency[i as usize].push(j);
            adjacency[j as usize].push(i);
        }
        for a in &mut adjacency {
            a.sort_unstable();
            a.dedup();
        }
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by(|&i, &j| {
            weights[j as usize]
                .total_cmp(&weights[i as usize])
                .then(i.cmp(&j))
        });
        IncompatibilityGraph {
            weights,
            adjacency,
            order,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adjacency[i]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }
}

/// Greedy independent set: nodes by decreasing weight, each kept unless it
/// conflicts with one already kept. Returns ascending node indices.
pub fn greedy_select(graph: &IncompatibilityGraph) -> Vec<usize> {
    let mut blocked = vec![false; graph.num_nodes()];
    let mut chosen = Vec::new();
    for &i in graph.order() {
        let i = i as usize;
        if blocked[i] {
            continue;
        }
        chosen.push(i);
        for &j in graph.neighbors(i) {
            blocked[j as usize] = true;
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Cells chosen from `cells` by [`greedy_select`] on their incompatibility
/// graph, in input order.
pub fn select_cells(cells: &[PotentialCell]) -> Vec<PotentialCell> {
    let g = IncompatibilityGraph::build(cells);
    greedy_select(&g)
        .into_iter()
        .map(|i| cells[i].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::{detect, SearchConfig};
    use crate::fixtures;
    use crate::mesh::{AdjacencyIndex, TetMesh};

    fn cells(mesh: &TetMesh) -> Vec<PotentialCell> {
        let idx = AdjacencyIndex::build(mesh).unwrap();
        let d = detect(mesh, &idx, &SearchConfig::default(), &CellKind::COMBINED);
        d.all().cloned().collect()
    }

    #[test]
    fn greedy_examples() {
        let g = IncompatibilityGraph::from_edges(vec![0.9, 0.5], &[(0, 1)]);
        assert_eq!(greedy_select(&g), vec![0]);
        let g = IncompatibilityGraph::from_edges(vec![0.3, 0.5, 0.7], &[]);
        assert_eq!(greedy_select(&g), vec![0, 1, 2]);
        // chain a - b - c with b best: greedy keeps b alone
        let g = IncompatibilityGraph::from_edges(vec![0.8, 0.9, 0.8], &[(0, 1), (1, 2)]);
        assert_eq!(greedy_select(&g), vec![1]);
    }

    #[test]
    fn two_cubes_are_compatible() {
        let m = fixtures::two_cubes();
        let hexes: Vec<_> = cells(&m)
            .into_iter()
            .filter(|c| c.kind == CellKind::Hexahedron)
            .collect();
        assert_eq!(hexes.len(), 2);
        assert!(compatible(&hexes[0], &hexes[1]));
        let sel = select_cells(&cells(&m));
        assert_eq!(
            sel.iter()
                .filter(|c| c.kind == CellKind::Hexahedron)
                .count(),
            2
        );
    }

    #[test]
    fn sharing_a_tet_is_incompatible() {
        let m = fixtures::glued_tets();
        let pyr = cells(&m);
        for (i, a) in pyr.iter().enumerate() {
            for b in &pyr[i + 1..] {
                assert!(!compatible(a, b));
            }
        }
        let g = IncompatibilityGraph::build(&pyr);
        assert_eq!(g.num_edges(), pyr.len() * pyr.len().saturating_sub(1) / 2);
    }

    #[test]
    fn disjoint_cells_have_no_edge() {
        let m = fixtures::five_tet_grid([3, 1, 1], 0.0, 0);
        let hexes: Vec<_> = cells(&m)
            .into_iter()
            .filter(|c| c.kind == CellKind::Hexahedron)
            .collect();
        assert_eq!(hexes.len(), 3);
        let ends = [hexes[0].clone(), hexes[2].clone()];
        assert!(!shared_sorted(
            &sorted_verts(&ends[0]),
            &sorted_verts(&ends[1])
        ));
        assert_eq!(IncompatibilityGraph::build(&ends).num_edges(), 0);
    }

    #[test]
    fn two_shared_vertices_need_a_common_edge() {
        let m = fixtures::two_cubes();
        let mut hexes: Vec<_> = cells(&m)
            .into_iter()
            .filter(|c| c.kind == CellKind::Hexahedron)
            .collect();
        let b = hexes.pop().unwrap();
        let mut a = hexes.pop().unwrap();
        // keep the shapes, forget the tetrahedra, and move `a` so that it
        // meets `b` only along a diagonal of the shared face
        a.interior_tets.clear();
        let shared: Vec<VertexId> = a
            .verts
            .iter()
            .copied()
            .filter(|v| b.verts.contains(v))
            .collect();
        assert_eq!(shared.len(), 4);
        let diag = quad_faces(&b)
            .into_iter()
            .find(|q| shared.iter().all(|v| q.0.contains(v)))
            .unwrap()
            .1;
        let off = 1000;
        for v in a.verts.iter_mut() {
            if !diag.contains(v) {
                *v += off;
            }
        }
        assert!(compatible(&a, &b));
        let other: Vec<VertexId> = shared
            .iter()
            .copied()
            .filter(|v| !diag.contains(v))
            .collect();
        let mut c = a.clone();
        for v in c.verts.iter_mut() {
            if diag.contains(v) {
                *v += off;
            } else if other.contains(&(*v - off)) {
                *v -= off;
            }
        }
        assert!(!compatible(&c, &b));
    }
}
