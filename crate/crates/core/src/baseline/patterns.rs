//! Reference triangulations of the cube used by the pattern-based methods.

use super::dual::DualComplex;
use crate::cell::{automorphisms, template, triangulations_of, CellKind, CubeTriangulation};
use crate::cell::{enumerate_cube_triangulations, symmetry_classes, TriangulationClass};
use std::collections::BTreeSet;
use std::sync::LazyLock;

/// Local cube vertices of the diagonal plane through edges `ae` and `cg`.
const SPLIT_PLANE: [u8; 4] = [0, 2, 6, 4];
/// Local cube vertices of the two prisms cut by that plane, in prism order.
const SPLIT_PRISMS: [[u8; 6]; 2] = [[0, 1, 2, 4, 5, 6], [0, 2, 3, 4, 6, 7]];

fn uses_edge(tets: &[[u8; 4]], u: u8, v: u8) -> bool {
    tets.iter().any(|t| t.contains(&u) && t.contains(&v))
}

/// The triangulations of the cube into seven tetrahedra that split it into two
/// prisms along a diagonal plane, with a flat tetrahedron on that plane whose
/// two interior edges are the plane's diagonals.
pub fn seven_tet_triangulations() -> Vec<CubeTriangulation> {
    let prism = triangulations_of(CellKind::Prism);
    let halves: Vec<Vec<Vec<[u8; 4]>>> = SPLIT_PRISMS
        .iter()
        .map(|map| {
            prism
                .iter()
                .map(|t| {
                    t.tets
                        .iter()
                        .map(|tet| tet.map(|l| map[l as usize]))
                        .collect()
                })
                .collect()
        })
        .collect();
    let [a, c, g, e] = SPLIT_PLANE;
    let mut seeds = Vec::new();
    for p in &halves[0] {
        for q in &halves[1] {
            if uses_edge(p, a, g) == uses_edge(q, a, g) {
                continue;
            }
            debug_assert_ne!(uses_edge(p, c, e), uses_edge(q, c, e));
            let mut tets: Vec<[u8; 4]> = p.iter().chain(q).copied().collect();
            tets.push([a, c, g, e]);
            for t in &mut tets {
                t.sort_unstable();
            }
            tets.sort_unstable();
            seeds.push(CubeTriangulation { tets });
        }
    }
    let all: BTreeSet<CubeTriangulation> = seeds
        .iter()
        .flat_map(|s| {
            automorphisms(CellKind::Hexahedron)
                .iter()
                .map(move |p| s.relabeled(p))
        })
        .collect();
    all.into_iter().collect()
}

fn cube_dual(t: &CubeTriangulation) -> DualComplex {
    let tets: Vec<[u32; 4]> = t.tets.iter().map(|x| x.map(u32::from)).collect();
    let quads: Vec<[u32; 4]> = template(CellKind::Hexahedron)
        .quad_faces
        .iter()
        .map(|q| q.map(u32::from))
        .collect();
    DualComplex::new(&tets, &quads)
}

/// Classes of `tris` (already closed under symmetry) whose dual complexes
/// are pairwise isomorphic, each listed by triangulation index.
fn dual_classes(tris: &[CubeTriangulation], sym: &[TriangulationClass]) -> Vec<Vec<usize>> {
    let mut groups: Vec<(DualComplex, Vec<usize>)> = Vec::new();
    for class in sym {
        let d = cube_dual(&tris[class.members[0]]);
        match groups
            .iter_mut()
            .find(|(g, _)| g.isomorphic(&d) == Some(true))
        {
            Some((_, m)) => m.extend(&class.members),
            None => groups.push((d, class.members.clone())),
        }
    }
    groups.into_iter().map(|(_, m)| m).collect()
}

pub(super) struct Reference {
    pub class: super::PatternClass,
    pub dual: DualComplex,
    pub members: usize,
}

/// Reference dual complexes of every named pattern.
pub(super) static REFERENCES: LazyLock<Vec<Reference>> = LazyLock::new(build_references);

fn build_references() -> Vec<Reference> {
    use super::PatternClass::*;
    let mut out = Vec::new();
    let (tris, classes) = enumerate_cube_triangulations();
    let regular = &classes[0];
    out.push(Reference {
        class: FiveTetRegular,
        dual: cube_dual(&tris[regular.members[0]]),
        members: regular.members.len(),
    });
    let mut six: Vec<&TriangulationClass> = classes[1..].iter().collect();
    six.sort_by_key(|c| six_tet_order(&tris, c));
    for (c, name) in six
        .into_iter()
        .zip([SixTetA, SixTetB, SixTetC, SixTetD, SixTetE])
    {
        out.push(Reference {
            class: name,
            dual: cube_dual(&tris[c.members[0]]),
            members: c.members.len(),
        });
    }
    let seven = seven_tet_triangulations();
    let sym = symmetry_classes(CellKind::Hexahedron, &seven);
    let mut groups = dual_classes(&seven, &sym);
    groups.sort_by_key(|g| (g.len(), g[0]));
    for (g, name) in groups
        .iter()
        .zip([SevenTetA, SevenTetB, SevenTetC, SevenTetD])
    {
        out.push(Reference {
            class: name,
            dual: cube_dual(&seven[g[0]]),
            members: g.len(),
        });
    }
    out
}

/// Position of a diameter class among the names: class sizes 8, 24, 12, 24,
/// 4. The two classes of 24 are told apart by the number of tetrahedra
/// around the diameter, more first.
fn six_tet_order(tris: &[CubeTriangulation], c: &TriangulationClass) -> (usize, usize) {
    let t = &tris[c.members[0]];
    let diam = t.interior_edges(CellKind::Hexahedron);
    let around = t
        .tets
        .iter()
        .filter(|x| diam.iter().any(|d| x.contains(&d[0]) && x.contains(&d[1])))
        .count();
    let rank = match (c.members.len(), around) {
        (8, _) => 0,
        (24, 5) => 1,
        (12, _) => 2,
        (24, _) => 3,
        (4, _) => 4,
        (n, _) => panic!("unexpected diameter class of {n}"),
    };
    (rank, around)
}
