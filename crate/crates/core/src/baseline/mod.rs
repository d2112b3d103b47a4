//! Classification of detected hexahedra by the patterns that earlier
//! tetrahedra-combination methods search for.

mod dual;
mod patterns;

pub use dual::{DualComplex, MAX_ISO_NODES};
pub use patterns::seven_tet_triangulations;

use crate::cell::{CellKind, PotentialCell};
use crate::mesh::{tet_facet, TetMesh, VertexId};
use patterns::REFERENCES;
use rayon::prelude::*;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternClass {
    FiveTetRegular,
    SixTetA,
    SixTetB,
    SixTetC,
    SixTetD,
    SixTetE,
    SevenTetA,
    SevenTetB,
    SevenTetC,
    SevenTetD,
    None,
}

impl PatternClass {
    pub fn name(self) -> &'static str {
        use PatternClass::*;
        match self {
            FiveTetRegular => "five-tet-regular",
            SixTetA => "six-tet-a",
            SixTetB => "six-tet-b",
            SixTetC => "six-tet-c",
            SixTetD => "six-tet-d",
            SixTetE => "six-tet-e",
            SevenTetA => "seven-tet-a",
            SevenTetB => "seven-tet-b",
            SevenTetC => "seven-tet-c",
            SevenTetD => "seven-tet-d",
            None => "none",
        }
    }

    /// One of the triangulations of the exact cube.
    pub fn is_cube_pattern(self) -> bool {
        use PatternClass::*;
        matches!(
            self,
            FiveTetRegular | SixTetA | SixTetB | SixTetC | SixTetD | SixTetE
        )
    }

    pub fn is_seven_tet_pattern(self) -> bool {
        use PatternClass::*;
        matches!(self, SevenTetA | SevenTetB | SevenTetC | SevenTetD)
    }
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Every named pattern with the number of cube triangulations it covers.
pub fn pattern_class_sizes() -> Vec<(PatternClass, usize)> {
    REFERENCES.iter().map(|r| (r.class, r.members)).collect()
}

fn cell_tets(cell: &PotentialCell, mesh: &TetMesh) -> Vec<[VertexId; 4]> {
    cell.interior_tets.iter().map(|&t| mesh.tet(t)).collect()
}

fn cell_quads(cell: &PotentialCell) -> Vec<[VertexId; 4]> {
    (0..cell.template().quad_faces.len())
        .map(|i| cell.quad_face(i))
        .collect()
}

pub fn build_dual_complex(cell: &PotentialCell, mesh: &TetMesh) -> DualComplex {
    DualComplex::new(&cell_tets(cell, mesh), &cell_quads(cell))
}

/// The reference pattern whose dual complex matches the hexahedron's.
pub fn classify_pattern(cell: &PotentialCell, mesh: &TetMesh) -> PatternClass {
    if cell.kind != CellKind::Hexahedron || !(5..=7).contains(&cell.interior_tets.len()) {
        return PatternClass::None;
    }
    let d = build_dual_complex(cell, mesh);
    REFERENCES
        .iter()
        .find(|r| r.dual.isomorphic(&d) == Some(true))
        .map_or(PatternClass::None, |r| r.class)
}

/// Whether some interior tetrahedron has at least three facets on the cell's
/// faces, either diagonal of a quad face counting.
pub fn yamakawa_detectable(cell: &PotentialCell, mesh: &TetMesh) -> bool {
    let t = cell.template();
    let faces: Vec<Vec<VertexId>> = t
        .quad_faces
        .iter()
        .map(|f| f.iter().map(|&l| cell.verts[l as usize]).collect())
        .chain(
            t.tri_faces
                .iter()
                .map(|f| f.iter().map(|&l| cell.verts[l as usize]).collect()),
        )
        .collect();
    cell_tets(cell, mesh).iter().any(|tet| {
        (0..4)
            .filter(|&i| {
                let facet = tet_facet(*tet, i);
                faces.iter().any(|f| facet.iter().all(|v| f.contains(v)))
            })
            .count()
            >= 3
    })
}

/// Hexahedron counts under each detection criterion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Comparison {
    pub ours: usize,
    /// Cells matching a triangulation of the exact cube.
    pub meshkat: usize,
    /// Cells matching a cube or seven-tetrahedra pattern.
    pub botella_sokolov: usize,
    pub yamakawa: usize,
}

impl Comparison {
    pub const HEADER: &'static str = "ours,meshkat,botella_sokolov,yamakawa";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.ours, self.meshkat, self.botella_sokolov, self.yamakawa
        )
    }
}

/// Classification of one hexahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HexClassification {
    pub pattern: PatternClass,
    pub yamakawa: bool,
}

pub fn classify_all(cells: &[PotentialCell], mesh: &TetMesh) -> Vec<HexClassification> {
    cells
        .par_iter()
        .map(|c| HexClassification {
            pattern: classify_pattern(c, mesh),
            yamakawa: c.kind == CellKind::Hexahedron && yamakawa_detectable(c, mesh),
        })
        .collect()
}

/// Counts over the hexahedra of `cells`; other kinds are ignored.
pub fn compare_counts(cells: &[PotentialCell], mesh: &TetMesh) -> Comparison {
    let hexes: Vec<PotentialCell> = cells
        .iter()
        .filter(|c| c.kind == CellKind::Hexahedron)
        .cloned()
        .collect();
    let classes = classify_all(&hexes, mesh);
    Comparison {
        ours: hexes.len(),
        meshkat: classes
            .iter()
            .filter(|c| c.pattern.is_cube_pattern())
            .count(),
        botella_sokolov: classes
            .iter()
            .filter(|c| c.pattern != PatternClass::None)
            .count(),
        yamakawa: classes.iter().filter(|c| c.yamakawa).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::{automorphisms, enumerate_cube_triangulations};
    use crate::detect::{detect, SearchConfig};
    use crate::fixtures;
    use crate::mesh::AdjacencyIndex;

    fn hexes(mesh: &TetMesh) -> Vec<PotentialCell> {
        let idx = AdjacencyIndex::build(mesh).unwrap();
        detect(
            mesh,
            &idx,
            &SearchConfig::default(),
            &[CellKind::Hexahedron],
        )
        .hexes
    }

    fn cube_mesh(tets: &[[u8; 4]]) -> TetMesh {
        let tets = tets.iter().map(|t| t.map(u32::from)).collect();
        fixtures::tag_box_faces(&TetMesh::from_tets(fixtures::cube_points(), tets).unwrap())
    }

    #[test]
    fn five_tet_cube() {
        let m = fixtures::cube_5tet();
        let h = hexes(&m);
        let d = build_dual_complex(&h[0], &m);
        assert_eq!((d.num_nodes(), d.num_solid_edges()), (5, 4));
        assert_eq!(classify_pattern(&h[0], &m), PatternClass::FiveTetRegular);
        assert!(yamakawa_detectable(&h[0], &m));
        let c = compare_counts(&h, &m);
        assert_eq!(
            c,
            Comparison {
                ours: 1,
                meshkat: 1,
                botella_sokolov: 1,
                yamakawa: 1
            }
        );
    }

    #[test]
    fn centroid_cube_is_missed_by_every_pattern() {
        let m = fixtures::cube_with_centroid();
        let h = hexes(&m);
        assert_eq!(classify_pattern(&h[0], &m), PatternClass::None);
        assert!(!yamakawa_detectable(&h[0], &m));
        let c = compare_counts(&h, &m);
        assert_eq!(c.csv_row(), "1,0,0,0");
    }

    #[test]
    fn empty_set() {
        assert_eq!(
            compare_counts(&[], &fixtures::single_tet()),
            Comparison::default()
        );
    }

    #[test]
    fn every_cube_triangulation_is_recognised() {
        let (tris, classes) = enumerate_cube_triangulations();
        let mut by_class = std::collections::BTreeMap::new();
        for t in &tris {
            let m = cube_mesh(&t.tets);
            let h = hexes(&m);
            assert_eq!(h.len(), 1, "{t:?}");
            let p = classify_pattern(&h[0], &m);
            assert!(p.is_cube_pattern());
            *by_class.entry(p).or_insert(0) += 1;
        }
        let counts: Vec<usize> = by_class.values().copied().collect();
        assert_eq!(counts, vec![2, 8, 24, 12, 24, 4]);
        assert_eq!(classes.len(), 6);
    }

    #[test]
    fn seven_tet_patterns_classify_combinatorially() {
        use crate::cell::template;
        // on the exact cube the flat tetrahedron has no volume, so the dual
        // complex is built straight from the tetrahedra
        let quads: Vec<[u32; 4]> = template(CellKind::Hexahedron)
            .quad_faces
            .iter()
            .map(|q| q.map(u32::from))
            .collect();
        let seven = seven_tet_triangulations();
        for t in &seven {
            let tets: Vec<[u32; 4]> = t.tets.iter().map(|x| x.map(u32::from)).collect();
            let d = DualComplex::new(&tets, &quads);
            for p in automorphisms(CellKind::Hexahedron).iter().take(5) {
                let r: Vec<[u32; 4]> = tets
                    .iter()
                    .map(|x| x.map(|v| u32::from(p[v as usize])))
                    .collect();
                assert_eq!(DualComplex::new(&r, &quads).isomorphic(&d), Some(true));
            }
            let hits: Vec<_> = REFERENCES
                .iter()
                .filter(|r| r.dual.isomorphic(&d) == Some(true))
                .collect();
            assert_eq!(hits.len(), 1);
            assert!(hits[0].class.is_seven_tet_pattern());
        }
    }
}
