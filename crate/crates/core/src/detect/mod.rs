//! Detection of the hexahedra, prisms and pyramids formed by tetrahedra of a
//! mesh.

mod examine;
pub mod inversion;
pub mod oracle;
mod quads2d;
mod search;

pub use examine::{
    compute_interior_tets, examine, is_quad_face, DiagonalChoice, InteriorTets, QuadFaceWitness,
    Reject, MAX_FILL,
};
pub use quads2d::{find_quads_2d, Quad2d};

use crate::cell::{CellKind, PotentialCell};
use crate::mesh::{AdjacencyIndex, TetMesh, VertexId};
use crate::quality::MinQuality;
use rayon::prelude::*;
use search::Search;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub min_quality: MinQuality,
    /// Certify a positive Jacobian; when off, quality is the minimum corner
    /// quality.
    pub enforce_validity: bool,
    /// Abandon branches on the running corner-quality bound.
    pub pruning: bool,
    /// Worker threads; 0 uses the global pool.
    pub threads: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            min_quality: MinQuality::VALID_ONLY,
            enforce_validity: true,
            pruning: true,
            threads: 0,
        }
    }
}

impl SearchConfig {
    pub fn with_min_quality(mut self, q: MinQuality) -> Self {
        self.min_quality = q;
        self
    }

    pub fn with_threads(mut self, n: usize) -> Self {
        self.threads = n;
        self
    }

    pub fn with_pruning(mut self, on: bool) -> Self {
        self.pruning = on;
        self
    }
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Sorts by canonical key; two cells with one key would mean the search
/// produced a cell twice.
fn finish(mut cells: Vec<PotentialCell>) -> Vec<PotentialCell> {
    let mut keyed: Vec<_> = cells.drain(..).map(|c| (c.key(), c)).collect();
    keyed.sort_unstable_by_key(|a| a.0);
    for w in keyed.windows(2) {
        assert!(w[0].0 != w[1].0, "cell {:?} generated twice", w[0].0);
    }
    keyed.into_iter().map(|(_, c)| c).collect()
}

fn per_vertex(
    mesh: &TetMesh,
    index: &AdjacencyIndex,
    config: &SearchConfig,
    f: impl Fn(&Search, VertexId, &mut Vec<PotentialCell>) + Sync,
) -> Vec<PotentialCell> {
    let s = Search {
        mesh,
        index,
        config,
    };
    let cells = in_pool(config.threads, || {
        (0..mesh.num_vertices() as VertexId)
            .into_par_iter()
            .fold(Vec::new, |mut out, a| {
                f(&s, a, &mut out);
                out
            })
            .reduce(Vec::new, |mut a, mut b| {
                a.append(&mut b);
                a
            })
    });
    finish(cells)
}

pub fn find_hexes(
    mesh: &TetMesh,
    index: &AdjacencyIndex,
    config: &SearchConfig,
) -> Vec<PotentialCell> {
    per_vertex(mesh, index, config, |s, a, out| s.hexes_from(a, out))
}

pub fn find_prisms(
    mesh: &TetMesh,
    index: &AdjacencyIndex,
    config: &SearchConfig,
) -> Vec<PotentialCell> {
    per_vertex(mesh, index, config, |s, a, out| s.prisms_from(a, out))
}

pub fn find_pyramids(
    mesh: &TetMesh,
    index: &AdjacencyIndex,
    config: &SearchConfig,
) -> Vec<PotentialCell> {
    let s = Search {
        mesh,
        index,
        config,
    };
    let facets: Vec<([VertexId; 3], [VertexId; 2])> = index
        .facets()
        .filter(|(_, f)| f.is_interior())
        .map(|(tri, f)| {
            let opp = |t: u32| {
                *mesh
                    .tet(t)
                    .iter()
                    .find(|v| !tri.contains(v))
                    .expect("facet of its tetrahedron")
            };
            (tri, [opp(f.tets()[0]), opp(f.tets()[1])])
        })
        .collect();
    let cells = in_pool(config.threads, || {
        facets
            .par_iter()
            .fold(Vec::new, |mut out, &(tri, [p, q])| {
                s.pyramids_at(tri, p, q, &mut out);
                out
            })
            .reduce(Vec::new, |mut a, mut b| {
                a.append(&mut b);
                a
            })
    });
    finish(cells)
}

/// Cells of every requested kind with per-kind search times.
#[derive(Debug, Clone, Default)]
pub struct Detection {
    pub hexes: Vec<PotentialCell>,
    pub prisms: Vec<PotentialCell>,
    pub pyramids: Vec<PotentialCell>,
    pub hex_time: Duration,
    pub prism_time: Duration,
    pub pyramid_time: Duration,
}

impl Detection {
    pub fn cells(&self, kind: CellKind) -> &[PotentialCell] {
        match kind {
            CellKind::Hexahedron => &self.hexes,
            CellKind::Prism => &self.prisms,
            CellKind::Pyramid => &self.pyramids,
            CellKind::Tetrahedron => &[],
        }
    }

    pub fn all(&self) -> impl Iterator<Item = &PotentialCell> {
        self.hexes.iter().chain(&self.prisms).chain(&self.pyramids)
    }
}

pub fn detect(
    mesh: &TetMesh,
    index: &AdjacencyIndex,
    config: &SearchConfig,
    kinds: &[CellKind],
) -> Detection {
    let mut d = Detection::default();
    let timed = |f: &dyn Fn() -> Vec<PotentialCell>| {
        let t = Instant::now();
        let cells = f();
        (cells, t.elapsed())
    };
    if kinds.contains(&CellKind::Hexahedron) {
        (d.hexes, d.hex_time) = timed(&|| find_hexes(mesh, index, config));
    }
    if kinds.contains(&CellKind::Prism) {
        (d.prisms, d.prism_time) = timed(&|| find_prisms(mesh, index, config));
    }
    if kinds.contains(&CellKind::Pyramid) {
        (d.pyramids, d.pyramid_time) = timed(&|| find_pyramids(mesh, index, config));
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mesh::{BoundaryTri, TetMesh};

    fn run(mesh: &TetMesh) -> Detection {
        let idx = AdjacencyIndex::build(mesh).unwrap();
        detect(mesh, &idx, &SearchConfig::default(), &CellKind::COMBINED)
    }

    #[test]
    fn five_tet_cube_is_one_hex() {
        let d = run(&fixtures::cube_5tet());
        assert_eq!(d.hexes.len(), 1);
        let h = &d.hexes[0];
        assert!((h.quality - 1.0).abs() < 1e-9);
        assert_eq!(h.interior_tets, vec![0, 1, 2, 3, 4]);
        assert!(h.encompassed.is_empty());
        assert_eq!(h.verts.as_slice(), &[0, 1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn cube_with_centroid_is_one_hex_of_twelve_tets() {
        let d = run(&fixtures::cube_with_centroid());
        assert_eq!(d.hexes.len(), 1);
        assert_eq!(d.hexes[0].interior_tets.len(), 12);
        assert_eq!(d.hexes[0].encompassed.as_slice(), &[8]);
    }

    #[test]
    fn sliver_on_a_face_is_excluded() {
        let m = fixtures::cube_with_sliver();
        let idx = AdjacencyIndex::build(&m).unwrap();
        let fill = compute_interior_tets(&m, &idx, CellKind::Hexahedron, &[0, 1, 2, 3, 4, 5, 6, 7])
            .unwrap();
        assert_eq!(fill.tets, vec![0, 1, 2, 3, 4]);
        assert_eq!(fill.excluded, vec![5]);
        let d = run(&m);
        assert_eq!(d.hexes.len(), 1);
        assert_eq!(d.hexes[0].interior_tets.len(), 5);
        assert_eq!(d.hexes[0].quad_diagonals[0], crate::cell::Diagonal::First);
    }

    #[test]
    fn prism_fixture() {
        let d = run(&fixtures::prism_3tet());
        assert_eq!(d.prisms.len(), 1);
        assert!((d.prisms[0].quality - 1.0).abs() < 1e-6);
        assert_eq!(d.prisms[0].interior_tets.len(), 3);
        let d = run(&fixtures::single_tet());
        assert!(d.prisms.is_empty() && d.hexes.is_empty() && d.pyramids.is_empty());
    }

    #[test]
    fn glued_tets_give_three_candidates() {
        let m = fixtures::glued_tets();
        let idx = AdjacencyIndex::build(&m).unwrap();
        let s = Search {
            mesh: &m,
            index: &idx,
            config: &SearchConfig::default(),
        };
        let mut out = Vec::new();
        s.pyramids_at([0, 1, 2], 3, 4, &mut out);
        let d = run(&m);
        assert_eq!(out.len(), d.pyramids.len());
        for p in &d.pyramids {
            assert_eq!(p.interior_tets, vec![0, 1]);
            assert_eq!(p.verts.len(), 5);
        }
        // the three base diagonals are the three edges of the shared facet
        let no_q = SearchConfig {
            enforce_validity: false,
            min_quality: crate::quality::MinQuality::VALID_ONLY,
            ..SearchConfig::default()
        };
        let mut apexes: Vec<u32> = Vec::new();
        for (u, w, apex) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            for base in [[3, u, 4, w], [3, w, 4, u]] {
                let t = [base[0], base[1], base[2], base[3], apex];
                match examine(&m, &idx, &no_q, CellKind::Pyramid, &t) {
                    Ok(_) => apexes.push(apex),
                    Err(r) => assert!(matches!(r, Reject::CornerQuality | Reject::LowQuality)),
                }
            }
        }
        assert!(apexes.len() <= 3);
    }

    #[test]
    fn octahedron_equator_is_not_a_quad_face() {
        let m = fixtures::octahedron();
        let idx = AdjacencyIndex::build(&m).unwrap();
        for i in 0..4u32 {
            assert!(idx.has_edge(i, (i + 1) % 4));
        }
        assert!(is_quad_face(&idx, 0, 1, 2, 3).is_none());
    }

    #[test]
    fn cube_face_witness() {
        let m = fixtures::cube_5tet();
        let idx = AdjacencyIndex::build(&m).unwrap();
        // face abcd is split by ac in this triangulation
        let w = is_quad_face(&idx, 0, 1, 2, 3).unwrap();
        assert_eq!(w.diagonals, DiagonalChoice::First);
        assert_eq!(w.tag, Some(1));
        let w = is_quad_face(&idx, 1, 2, 3, 0).unwrap();
        assert_eq!(w.diagonals, DiagonalChoice::Second);
    }

    #[test]
    fn mismatched_face_tags_block_the_face() {
        let m = fixtures::cube_5tet();
        let mut tris: Vec<BoundaryTri> = m.boundary_tris().to_vec();
        let k = tris.iter().position(|b| {
            let mut v = b.verts;
            v.sort_unstable();
            v == [0, 1, 2]
        });
        tris[k.unwrap()].tag = 9;
        let m2 = TetMesh::new(m.vertices().to_vec(), m.tets().to_vec(), vec![1; 5], tris).unwrap();
        let idx = AdjacencyIndex::build(&m2).unwrap();
        assert!(is_quad_face(&idx, 0, 1, 2, 3).is_none());
        assert!(run(&m2).hexes.is_empty());
    }

    #[test]
    fn mixed_regions_reject_the_cell() {
        let m = fixtures::cube_5tet();
        let m2 = TetMesh::new(
            m.vertices().to_vec(),
            m.tets().to_vec(),
            vec![1, 1, 2, 1, 1],
            m.boundary_tris().to_vec(),
        )
        .unwrap();
        let idx = AdjacencyIndex::build(&m2).unwrap();
        let r = examine(
            &m2,
            &idx,
            &SearchConfig::default(),
            CellKind::Hexahedron,
            &[0, 1, 2, 3, 4, 5, 6, 7],
        );
        assert_eq!(r.unwrap_err(), Reject::RegionMismatch);
    }

    #[test]
    fn mirrored_tuple_is_rejected() {
        let m = fixtures::cube_5tet();
        let idx = AdjacencyIndex::build(&m).unwrap();
        let r = examine(
            &m,
            &idx,
            &SearchConfig::default(),
            CellKind::Hexahedron,
            &[0, 3, 2, 1, 4, 7, 6, 5],
        );
        assert_eq!(r.unwrap_err(), Reject::CornerQuality);
    }

    #[test]
    fn planar_quads() {
        let (pts, tris) = fixtures::planar_five();
        let quads = find_quads_2d(&pts, &tris);
        // 1-based labels as drawn
        let mut got: Vec<[u32; 4]> = quads.iter().map(|q| q.verts.map(|v| v + 1)).collect();
        got.sort_unstable();
        assert_eq!(
            got,
            vec![
                [1, 2, 3, 5],
                [1, 2, 4, 3],
                [1, 2, 4, 5],
                [1, 3, 4, 5],
                [2, 3, 5, 4]
            ]
        );
        let enclosing = quads.iter().find(|q| q.verts == [0, 1, 3, 4]).unwrap();
        assert_eq!(enclosing.triangles.len(), 4);
    }

    #[test]
    fn threads_do_not_change_the_output() {
        let m = fixtures::kuhn_grid([3, 3, 2], 0.12, 11);
        let idx = AdjacencyIndex::build(&m).unwrap();
        let one = detect(
            &m,
            &idx,
            &SearchConfig::default().with_threads(1),
            &CellKind::COMBINED,
        );
        let four = detect(
            &m,
            &idx,
            &SearchConfig::default().with_threads(4),
            &CellKind::COMBINED,
        );
        assert_eq!(one.hexes, four.hexes);
        assert_eq!(one.prisms, four.prisms);
        assert_eq!(one.pyramids, four.pyramids);
        assert!(one.hexes.len() >= 18);
    }
}
