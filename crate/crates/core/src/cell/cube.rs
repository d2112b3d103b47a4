//! Triangulations of the ideal cells without interior vertices, and the
//! Euler-characteristic bound on their number of tetrahedra.

use super::{automorphisms, template, CellError, CellKind};
use crate::geom::{orient3d, Point3};
use std::collections::BTreeSet;

/// A tetrahedron on local vertices, ascending.
pub type CubeTet = [u8; 4];

/// Expected tetrahedron count for a given number of interior edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TetCountBound {
    pub expected: usize,
    pub min: usize,
    pub max: usize,
    pub in_range: bool,
}

pub fn tet_count_bounds(kind: CellKind, interior_edges: usize) -> Result<TetCountBound, CellError> {
    let (base, max) = match kind {
        CellKind::Hexahedron => (5, 15),
        CellKind::Prism => (3, 6),
        CellKind::Pyramid => (2, 3),
        CellKind::Tetrahedron => return Err(CellError::NoBound(kind)),
    };
    let expected = base + interior_edges;
    Ok(TetCountBound {
        expected,
        min: base,
        max,
        in_range: expected <= max,
    })
}

/// A triangulation of an ideal cell, tetrahedra in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeTriangulation {
    pub tets: Vec<CubeTet>,
}

impl CubeTriangulation {
    /// Edges used by the tetrahedra that are neither template edges nor lie
    /// in a face of the cell.
    pub fn interior_edges(&self, kind: CellKind) -> Vec<[u8; 2]> {
        let t = template(kind);
        let mut edges = BTreeSet::new();
        for tet in &self.tets {
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.insert([tet[i], tet[j]]);
                }
            }
        }
        edges
            .into_iter()
            .filter(|e| {
                !faces_of(t)
                    .iter()
                    .any(|f| f.contains(&e[0]) && f.contains(&e[1]))
            })
            .collect()
    }

    /// Whether some tetrahedron has six edges of equal length.
    pub fn has_regular_tet(&self, kind: CellKind) -> bool {
        let ideal = &template(kind).ideal;
        self.tets.iter().any(|t| {
            let l: Vec<f64> = (0..4)
                .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                .map(|(i, j)| (ideal[t[i] as usize] - ideal[t[j] as usize]).norm())
                .collect();
            l.iter().all(|x| (x - l[0]).abs() < 1e-9)
        })
    }

    /// Image under a vertex relabeling.
    pub fn relabeled(&self, perm: &[u8]) -> CubeTriangulation {
        let mut tets: Vec<CubeTet> = self
            .tets
            .iter()
            .map(|t| {
                let mut m = t.map(|v| perm[v as usize]);
                m.sort_unstable();
                m
            })
            .collect();
        tets.sort_unstable();
        CubeTriangulation { tets }
    }
}

/// Orbit of triangulations under all symmetries of the cell.
#[derive(Debug, Clone)]
pub struct TriangulationClass {
    /// Indices into the triangulation list.
    pub members: Vec<usize>,
    pub has_regular_tet: bool,
    pub num_tets: usize,
}

fn faces_of(t: &super::CellTemplate) -> Vec<Vec<u8>> {
    t.quad_faces
        .iter()
        .map(|f| f.to_vec())
        .chain(t.tri_faces.iter().map(|f| f.to_vec()))
        .collect()
}

fn cell_volume(kind: CellKind) -> f64 {
    let t = template(kind);
    let c = Point3::centroid(&t.ideal);
    faces_of(t)
        .iter()
        .map(|f| {
            let p = |i: usize| t.ideal[f[i] as usize];
            (1..f.len() - 1)
                .map(|i| orient3d(c, p(0), p(i), p(i + 1)).abs() / 6.0)
                .sum::<f64>()
        })
        .sum()
}

struct Search<'a> {
    pts: &'a [Point3],
    cands: Vec<(CubeTet, f64)>,
    on_boundary: Vec<bool>,
    /// Side of each candidate relative to each of its facets (`+1`/`-1`).
    facet_side: Vec<[i8; 4]>,
    facet_id: Vec<[usize; 4]>,
    target: f64,
    found: BTreeSet<CubeTriangulation>,
}

const EPS: f64 = 1e-9;

fn tri_index(n: usize, mut t: [u8; 3]) -> usize {
    t.sort_unstable();
    (t[0] as usize * n + t[1] as usize) * n + t[2] as usize
}

impl Search<'_> {
    fn run(&mut self, chosen: &mut Vec<usize>, used: &mut [(u8, i8)], vol: f64) {
        let open = (0..chosen.len()).find_map(|k| {
            let c = chosen[k];
            (0..4).find_map(|i| {
                let f = self.facet_id[c][i];
                (!self.on_boundary[f] && used[f].0 == 1).then_some((f, -self.facet_side[c][i]))
            })
        });
        let Some((facet, side)) = open else {
            if (vol - self.target).abs() < 1e-9 {
                let mut tets: Vec<CubeTet> = chosen.iter().map(|&c| self.cands[c].0).collect();
                tets.sort_unstable();
                self.found.insert(CubeTriangulation { tets });
            }
            return;
        };
        for c in 0..self.cands.len() {
            if let Some(i) = (0..4).find(|&i| self.facet_id[c][i] == facet) {
                if self.facet_side[c][i] == side {
                    self.try_add(c, chosen, used, vol);
                }
            }
        }
    }

    fn try_add(&mut self, c: usize, chosen: &mut Vec<usize>, used: &mut [(u8, i8)], vol: f64) {
        let v = vol + self.cands[c].1;
        if chosen.contains(&c) || v > self.target + 1e-9 {
            return;
        }
        for i in 0..4 {
            let f = self.facet_id[c][i];
            let (n, s) = used[f];
            if n >= 2 || (n == 1 && (self.on_boundary[f] || s == self.facet_side[c][i])) {
                return;
            }
        }
        for i in 0..4 {
            let f = self.facet_id[c][i];
            used[f].0 += 1;
            used[f].1 = self.facet_side[c][i];
        }
        chosen.push(c);
        self.run(chosen, used, v);
        chosen.pop();
        for i in 0..4 {
            let f = self.facet_id[c][i];
            used[f].0 -= 1;
            if used[f].0 == 1 {
                // the remaining user sits on the opposite side
                used[f].1 = -self.facet_side[c][i];
            }
        }
    }

    fn contains(&self, c: usize, p: Point3) -> bool {
        let t = self.cands[c].0.map(|v| self.pts[v as usize]);
        let s = orient3d(t[0], t[1], t[2], t[3]).signum();
        let mut q = t;
        (0..4).all(|i| {
            q[i] = p;
            let r = orient3d(q[0], q[1], q[2], q[3]) * s > 0.0;
            q[i] = t[i];
            r
        })
    }
}

/// All triangulations of the ideal cell of `kind` that use only its
/// vertices, found by exhaustive conforming search.
pub fn triangulations_of(kind: CellKind) -> Vec<CubeTriangulation> {
    let t = template(kind);
    let pts = &t.ideal;
    let n = pts.len();
    let faces = faces_of(t);
    let mut cands = Vec::new();
    for a in 0..n as u8 {
        for b in a + 1..n as u8 {
            for c in b + 1..n as u8 {
                for d in c + 1..n as u8 {
                    let p = |i: u8| pts[i as usize];
                    let v = orient3d(p(a), p(b), p(c), p(d)).abs() / 6.0;
                    if v > EPS {
                        cands.push(([a, b, c, d], v));
                    }
                }
            }
        }
    }
    let mut on_boundary = vec![false; n * n * n];
    for f in &faces {
        for &a in f {
            for &b in f {
                for &c in f {
                    if a < b && b < c {
                        on_boundary[tri_index(n, [a, b, c])] = true;
                    }
                }
            }
        }
    }
    let mut facet_side = Vec::new();
    let mut facet_id = Vec::new();
    for (tet, _) in &cands {
        let mut side = [0i8; 4];
        let mut id = [0usize; 4];
        for i in 0..4 {
            let tri = crate::mesh::tet_facet(tet.map(u32::from), i).map(|v| v as u8);
            id[i] = tri_index(n, tri);
            let p = |v: u8| pts[v as usize];
            // side is measured against the sorted triangle
            let mut s = tri;
            s.sort_unstable();
            side[i] = if orient3d(p(s[0]), p(s[1]), p(s[2]), p(tet[i])) > 0.0 {
                1
            } else {
                -1
            };
        }
        facet_side.push(side);
        facet_id.push(id);
    }
    let mut search = Search {
        pts,
        cands,
        on_boundary,
        facet_side,
        facet_id,
        target: cell_volume(kind),
        found: BTreeSet::new(),
    };
    let probe = Point3::centroid(pts) + Point3::new(0.0131, 0.0217, 0.0071);
    let mut used = vec![(0u8, 0i8); n * n * n];
    for c in 0..search.cands.len() {
        if search.contains(c, probe) {
            let mut chosen = Vec::new();
            search.try_add(c, &mut chosen, &mut used, 0.0);
        }
    }
    search.found.into_iter().collect()
}

/// The triangulations of the unit cube and their symmetry classes.
///
/// Classes are listed with the regular-tetrahedron class first, the others
/// ordered by their smallest member.
pub fn enumerate_cube_triangulations() -> (Vec<CubeTriangulation>, Vec<TriangulationClass>) {
    let tris = triangulations_of(CellKind::Hexahedron);
    let classes = symmetry_classes(CellKind::Hexahedron, &tris);
    (tris, classes)
}

pub fn symmetry_classes(kind: CellKind, tris: &[CubeTriangulation]) -> Vec<TriangulationClass> {
    let mut assigned = vec![false; tris.len()];
    let mut classes = Vec::new();
    for i in 0..tris.len() {
        if assigned[i] {
            continue;
        }
        let orbit: BTreeSet<CubeTriangulation> = automorphisms(kind)
            .iter()
            .map(|p| tris[i].relabeled(p))
            .collect();
        let members: Vec<usize> = orbit
            .iter()
            .map(|t| tris.binary_search(t).expect("orbit stays in the list"))
            .collect();
        for &m in &members {
            assigned[m] = true;
        }
        classes.push(TriangulationClass {
            members,
            has_regular_tet: tris[i].has_regular_tet(kind),
            num_tets: tris[i].tets.len(),
        });
    }
    classes.sort_by_key(|c| (!c.has_regular_tet, c.members[0]));
    classes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        let b = tet_count_bounds(CellKind::Hexahedron, 0).unwrap();
        assert_eq!((b.expected, b.in_range), (5, true));
        let b = tet_count_bounds(CellKind::Hexahedron, 3).unwrap();
        assert_eq!((b.expected, b.in_range), (8, true));
        let b = tet_count_bounds(CellKind::Pyramid, 2).unwrap();
        assert_eq!((b.expected, b.in_range), (4, false));
        assert_eq!(tet_count_bounds(CellKind::Prism, 3).unwrap().expected, 6);
        assert!(tet_count_bounds(CellKind::Tetrahedron, 0).is_err());
    }

    #[test]
    fn cube_has_74_triangulations_in_six_classes() {
        let (tris, classes) = enumerate_cube_triangulations();
        assert_eq!(tris.len(), 74);
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.members.len()).collect();
        assert_eq!(sizes[0], 2);
        assert!(classes[0].has_regular_tet);
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 4, 8, 12, 24, 24]);
        for t in &tris {
            let e = t.interior_edges(CellKind::Hexahedron).len();
            assert_eq!(t.tets.len(), 5 + e);
            if t.tets.len() == 5 {
                assert!(t.has_regular_tet(CellKind::Hexahedron));
            }
        }
        assert_eq!(tris.iter().filter(|t| t.tets.len() == 5).count(), 2);
    }

    #[test]
    fn prism_and_pyramid_triangulations() {
        let p = triangulations_of(CellKind::Prism);
        assert_eq!(p.len(), 6);
        assert!(p.iter().all(|t| t.tets.len() == 3));
        assert_eq!(symmetry_classes(CellKind::Prism, &p).len(), 1);
        let y = triangulations_of(CellKind::Pyramid);
        assert_eq!(y.len(), 2);
        assert!(y.iter().all(|t| t.tets.len() == 2));
    }
}
