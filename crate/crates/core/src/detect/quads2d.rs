//! Quadrilaterals formed by triangles of a planar triangulation.

use crate::mesh::{intersect_sorted, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quad2d {
    /// Cyclic vertex order `abcd`.
    pub verts: [VertexId; 4],
    /// Triangles (indices into the input) covering the quadrilateral.
    pub triangles: Vec<usize>,
}

fn inside_polygon(poly: &[[f64; 2]; 4], p: [f64; 2]) -> bool {
    let mut inside = false;
    for i in 0..4 {
        let (a, b) = (poly[i], poly[(i + 1) % 4]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Every quadrilateral whose four edges are edges of the triangulation, once
/// each, with the triangles it covers.
pub fn find_quads_2d(points: &[[f64; 2]], triangles: &[[VertexId; 3]]) -> Vec<Quad2d> {
    let n = points.len();
    let mut nbrs: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for t in triangles {
        for i in 0..3 {
            let (u, v) = (t[i], t[(i + 1) % 3]);
            nbrs[u as usize].push(v);
            nbrs[v as usize].push(u);
        }
    }
    for l in &mut nbrs {
        l.sort_unstable();
        l.dedup();
    }
    let centroids: Vec<[f64; 2]> = triangles
        .iter()
        .map(|t| {
            let p = |i: usize| points[t[i] as usize];
            [
                (p(0)[0] + p(1)[0] + p(2)[0]) / 3.0,
                (p(0)[1] + p(1)[1] + p(2)[1]) / 3.0,
            ]
        })
        .collect();
    let mut out = Vec::new();
    let mut cs = Vec::new();
    for a in 0..n as VertexId {
        let na = &nbrs[a as usize];
        for &b in na.iter().filter(|&&b| b > a) {
            for &d in na.iter().filter(|&&d| d > b) {
                intersect_sorted(&nbrs[b as usize], &nbrs[d as usize], &mut cs);
                for &c in cs.iter().filter(|&&c| c > a) {
                    let verts = [a, b, c, d];
                    let poly = verts.map(|v| points[v as usize]);
                    let tris = (0..triangles.len())
                        .filter(|&i| inside_polygon(&poly, centroids[i]))
                        .collect();
                    out.push(Quad2d {
                        verts,
                        triangles: tris,
                    });
                }
            }
        }
    }
    out
}
