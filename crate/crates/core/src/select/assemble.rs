//! Mixed mesh made of selected cells and the tetrahedra left over.

use crate::cell::{CellKind, PotentialCell};
use crate::mesh::msh::{write_msh_elements, MshElement, MSH_TETRAHEDRON};
use crate::mesh::{AdjacencyIndex, TetId, TetMesh};
use std::collections::HashSet;
use std::io::{self, Write};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KindStats {
    pub count: usize,
    pub volume: f64,
    /// Share of the input volume.
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HexDominantMesh {
    /// Selected cells, hexahedra first, then prisms and pyramids, each kind
    /// sorted by canonical key.
    pub cells: Vec<PotentialCell>,
    /// Input tetrahedra interior to no selected cell, ascending.
    pub leftover: Vec<TetId>,
    pub hexes: KindStats,
    pub prisms: KindStats,
    pub pyramids: KindStats,
    pub tets: KindStats,
    /// Quad faces of selected cells with a leftover tetrahedron on the other
    /// side.
    pub nonconforming_quads: usize,
}

impl HexDominantMesh {
    pub fn stats(&self, kind: CellKind) -> KindStats {
        match kind {
            CellKind::Hexahedron => self.hexes,
            CellKind::Prism => self.prisms,
            CellKind::Pyramid => self.pyramids,
            CellKind::Tetrahedron => self.tets,
        }
    }

    pub fn cells_of(&self, kind: CellKind) -> impl Iterator<Item = &PotentialCell> {
        self.cells.iter().filter(move |c| c.kind == kind)
    }
}

fn cell_volume(mesh: &TetMesh, c: &PotentialCell) -> f64 {
    c.interior_tets.iter().map(|&t| mesh.tet_volume(t)).sum()
}

/// Mixed mesh from a pairwise compatible selection. Panics if two selected
/// cells claim the same tetrahedron.
pub fn assemble(
    mesh: &TetMesh,
    index: &AdjacencyIndex,
    selected: &[PotentialCell],
) -> HexDominantMesh {
    let mut owner: Vec<Option<usize>> = vec![None; mesh.num_tets()];
    let mut cells = selected.to_vec();
    // canonical keys order by kind first
    cells.sort_by_key(|c| c.key());
    for (i, c) in cells.iter().enumerate() {
        for &t in &c.interior_tets {
            if let Some(j) = owner[t as usize] {
                panic!(
                    "tetrahedron {t} claimed by {:?} and {:?}",
                    cells[j].key(),
                    c.key()
                );
            }
            owner[t as usize] = Some(i);
        }
    }
    let leftover: Vec<TetId> = (0..mesh.num_tets() as TetId)
        .filter(|&t| owner[t as usize].is_none())
        .collect();
    let total = mesh.total_volume();
    let stats = |kind: CellKind| {
        let (count, volume) = cells
            .iter()
            .filter(|c| c.kind == kind)
            .fold((0, 0.0), |(n, v), c| (n + 1, v + cell_volume(mesh, c)));
        KindStats {
            count,
            volume,
            fraction: volume / total,
        }
    };
    let tet_volume: f64 = leftover.iter().map(|&t| mesh.tet_volume(t)).sum();
    let leftover_set: HashSet<TetId> = leftover.iter().copied().collect();
    let mut nonconforming_quads = 0;
    for c in &cells {
        let own: HashSet<TetId> = c.interior_tets.iter().copied().collect();
        for (i, d) in c.quad_diagonals.iter().enumerate() {
            let touches = d.triangles(c.quad_face(i)).iter().any(|tri| {
                index.triangle(tri[0], tri[1], tri[2]).is_some_and(|f| {
                    f.tets()
                        .iter()
                        .any(|t| !own.contains(t) && leftover_set.contains(t))
                })
            });
            if touches {
                nonconforming_quads += 1;
            }
        }
    }
    HexDominantMesh {
        hexes: stats(CellKind::Hexahedron),
        prisms: stats(CellKind::Prism),
        pyramids: stats(CellKind::Pyramid),
        tets: KindStats {
            count: leftover.len(),
            volume: tet_volume,
            fraction: tet_volume / total,
        },
        cells,
        leftover,
        nonconforming_quads,
    }
}

/// MSH elements of the mixed mesh: cells in template node order, then the
/// leftover tetrahedra. Each element carries the region of its tetrahedra.
pub fn mixed_elements(mesh: &TetMesh, hd: &HexDominantMesh) -> Vec<MshElement> {
    let mut out = Vec::with_capacity(hd.cells.len() + hd.leftover.len());
    for kind in CellKind::COMBINED {
        for c in hd.cells_of(kind) {
            out.push(MshElement {
                kind: kind.msh_type(),
                tag: mesh.tet_region(c.interior_tets[0]),
                verts: c.verts.to_vec(),
            });
        }
    }
    for &t in &hd.leftover {
        out.push(MshElement {
            kind: MSH_TETRAHEDRON,
            tag: mesh.tet_region(t),
            verts: mesh.tet(t).to_vec(),
        });
    }
    out
}

pub fn write_mixed_msh(w: impl Write, mesh: &TetMesh, hd: &HexDominantMesh) -> io::Result<()> {
    write_msh_elements(w, mesh, &mixed_elements(mesh, hd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::{detect, SearchConfig};
    use crate::fixtures;
    use crate::mesh::read_msh;
    use crate::select::select_cells;

    fn pipeline(mesh: &TetMesh) -> HexDominantMesh {
        let idx = AdjacencyIndex::build(mesh).unwrap();
        let d = detect(mesh, &idx, &SearchConfig::default(), &CellKind::COMBINED);
        let cells: Vec<_> = d.all().cloned().collect();
        assemble(mesh, &idx, &select_cells(&cells))
    }

    #[test]
    fn five_tet_cube_leaves_nothing() {
        let hd = pipeline(&fixtures::cube_5tet());
        assert_eq!(hd.hexes.count, 1);
        assert!(hd.leftover.is_empty());
        assert!((hd.hexes.fraction - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_selection_keeps_every_tet() {
        let m = fixtures::cube_5tet();
        let idx = AdjacencyIndex::build(&m).unwrap();
        let hd = assemble(&m, &idx, &[]);
        assert_eq!(hd.leftover, vec![0, 1, 2, 3, 4]);
        assert_eq!(hd.tets.count, 5);
        assert_eq!(hd.nonconforming_quads, 0);
    }

    #[test]
    fn two_cubes_give_two_hexes() {
        let m = fixtures::two_cubes();
        let hd = pipeline(&m);
        assert_eq!((hd.hexes.count, hd.tets.count), (2, 0));
        let mut buf = Vec::new();
        write_mixed_msh(&mut buf, &m, &hd).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(
            text.lines()
                .filter(|l| l.split(' ').nth(1) == Some("5"))
                .count(),
            2
        );
        let back = read_msh(&buf[..]).unwrap();
        assert_eq!((back.ignored_elements, back.mesh.num_tets()), (2, 0));
    }

    #[test]
    #[should_panic(expected = "claimed by")]
    fn overlap_is_reported() {
        let m = fixtures::glued_tets();
        let idx = AdjacencyIndex::build(&m).unwrap();
        let d = detect(&m, &idx, &SearchConfig::default(), &[CellKind::Pyramid]);
        assert!(d.pyramids.len() >= 2);
        assemble(&m, &idx, &d.pyramids);
    }

    #[test]
    fn leftover_next_to_a_hex_is_counted() {
        // kuhn cube pair where one cube is not selected
        let m = fixtures::five_tet_grid([2, 1, 1], 0.0, 0);
        let idx = AdjacencyIndex::build(&m).unwrap();
        let d = detect(&m, &idx, &SearchConfig::default(), &[CellKind::Hexahedron]);
        let hd = assemble(&m, &idx, &d.hexes[..1]);
        assert_eq!(hd.nonconforming_quads, 1);
        assert_eq!(hd.tets.count, 5);
        let v = hd.hexes.volume + hd.tets.volume;
        assert!((v - m.total_volume()).abs() < 1e-12 * m.total_volume());
    }
}
