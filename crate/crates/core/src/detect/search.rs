//! Vertex-based searches for hexahedra and prisms, and the facet-based
//! construction of pyramids.

use super::examine::{examine, is_quad_face};
use super::SearchConfig;
use crate::cell::{CellKind, PotentialCell};
use crate::geom::{orient3d, Point3};
use crate::mesh::{intersect_sorted, AdjacencyIndex, TetMesh, VertexId};
use crate::quality::{
    hex_corner_quality, prism_corner_quality, quad_corner_quality, tri_corner_quality, QualityBound,
};

pub(super) struct Search<'a> {
    pub mesh: &'a TetMesh,
    pub index: &'a AdjacencyIndex,
    pub config: &'a SearchConfig,
}

/// Entries of sorted `s` greater than `x`.
#[inline]
fn above(s: &[VertexId], x: VertexId) -> &[VertexId] {
    &s[s.partition_point(|&y| y <= x)..]
}

impl Search<'_> {
    #[inline]
    fn p(&self, v: VertexId) -> Point3 {
        self.mesh.point(v)
    }

    #[inline]
    fn quad(&self, a: VertexId, b: VertexId, d: VertexId) -> f64 {
        quad_corner_quality(self.p(a), self.p(b), self.p(d))
    }

    #[inline]
    fn hex(&self, a: VertexId, b: VertexId, d: VertexId, e: VertexId) -> f64 {
        hex_corner_quality(self.p(a), self.p(b), self.p(d), self.p(e))
    }

    #[inline]
    fn prism(&self, a: VertexId, b: VertexId, c: VertexId, d: VertexId) -> f64 {
        prism_corner_quality(self.p(a), self.p(b), self.p(c), self.p(d))
    }

    /// Bound after adding the four corners of quad face `pqrs` that are not
    /// yet accounted for (all of them; cheap and order independent).
    fn face(&self, bound: QualityBound, f: [VertexId; 4]) -> QualityBound {
        let [p, q, r, s] = f;
        bound
            .update(self.quad(p, q, s))
            .update(self.quad(q, r, p))
            .update(self.quad(r, s, q))
            .update(self.quad(s, p, r))
    }

    #[inline]
    fn fails(&self, bound: QualityBound) -> bool {
        self.config.pruning && bound.fails(self.config.min_quality)
    }

    fn emit(&self, kind: CellKind, tuple: &[VertexId], out: &mut Vec<PotentialCell>) {
        if let Ok(c) = examine(self.mesh, self.index, self.config, kind, tuple) {
            out.push(c);
        }
    }

    /// All hexahedra whose smallest vertex is `a`.
    pub fn hexes_from(&self, a: VertexId, out: &mut Vec<PotentialCell>) {
        let idx = self.index;
        let na = idx.neighbors(a);
        let (mut cs, mut fs, mut hs, mut gs, mut tmp) =
            (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let start = QualityBound::START;
        for &b in above(na, a) {
            for &d in above(na, b) {
                let b_abd = start.update(self.quad(a, b, d));
                if self.fails(b_abd) {
                    continue;
                }
                intersect_sorted(idx.neighbors(b), idx.neighbors(d), &mut cs);
                for &e in above(na, b) {
                    if e == d {
                        continue;
                    }
                    let b_e = b_abd
                        .update(self.hex(a, b, d, e))
                        .update(self.quad(a, b, e))
                        .update(self.quad(a, d, e));
                    if self.fails(b_e) {
                        continue;
                    }
                    intersect_sorted(idx.neighbors(b), idx.neighbors(e), &mut fs);
                    intersect_sorted(idx.neighbors(d), idx.neighbors(e), &mut hs);
                    for &c in above(&cs, a) {
                        if c == e || is_quad_face(idx, a, b, c, d).is_none() {
                            continue;
                        }
                        let b_c = self.face(b_e, [a, b, c, d]);
                        if self.fails(b_c) {
                            continue;
                        }
                        for &f in above(&fs, a) {
                            if f == d || f == c || is_quad_face(idx, a, b, f, e).is_none() {
                                continue;
                            }
                            let b_f = self.face(b_c.update(self.hex(b, c, a, f)), [a, b, f, e]);
                            if self.fails(b_f) {
                                continue;
                            }
                            for &h in above(&hs, a) {
                                if h == b
                                    || h == c
                                    || h == f
                                    || is_quad_face(idx, a, d, h, e).is_none()
                                {
                                    continue;
                                }
                                let b_h = self.face(
                                    b_f.update(self.hex(d, a, c, h))
                                        .update(self.hex(e, h, f, a)),
                                    [a, d, h, e],
                                );
                                if self.fails(b_h) {
                                    continue;
                                }
                                intersect_sorted(idx.neighbors(c), idx.neighbors(f), &mut tmp);
                                intersect_sorted(&tmp, idx.neighbors(h), &mut gs);
                                for &g in above(&gs, a) {
                                    if g == b || g == d || g == e {
                                        continue;
                                    }
                                    if is_quad_face(idx, d, c, g, h).is_none()
                                        || is_quad_face(idx, e, f, g, h).is_none()
                                        || is_quad_face(idx, b, c, g, f).is_none()
                                    {
                                        continue;
                                    }
                                    let mut b_g = b_h
                                        .update(self.hex(c, d, b, g))
                                        .update(self.hex(f, e, g, b))
                                        .update(self.hex(g, f, h, c))
                                        .update(self.hex(h, g, e, d));
                                    b_g = self.face(b_g, [d, c, g, h]);
                                    b_g = self.face(b_g, [e, f, g, h]);
                                    b_g = self.face(b_g, [b, c, g, f]);
                                    if self.fails(b_g) {
                                        continue;
                                    }
                                    self.emit(CellKind::Hexahedron, &[a, b, c, d, e, f, g, h], out);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    /// All prisms whose smallest vertex is `a`.
    pub fn prisms_from(&self, a: VertexId, out: &mut Vec<PotentialCell>) {
        let idx = self.index;
        let na = idx.neighbors(a);
        let (mut cs, mut es, mut fs, mut tmp) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let start = QualityBound::START;
        for &b in above(na, a) {
            intersect_sorted(na, idx.neighbors(b), &mut cs);
            for &c in above(&cs, a) {
                if !idx.has_triangle(a, b, c) {
                    continue;
                }
                let b_c = start.update(tri_corner_quality(self.p(a), self.p(b), self.p(c)));
                if self.fails(b_c) {
                    continue;
                }
                for &d in above(na, a) {
                    if d == b || d == c {
                        continue;
                    }
                    let b_d = b_c
                        .update(self.prism(a, b, c, d))
                        .update(self.quad(a, b, d))
                        .update(self.quad(a, c, d));
                    if self.fails(b_d) {
                        continue;
                    }
                    intersect_sorted(idx.neighbors(b), idx.neighbors(d), &mut es);
                    for &e in above(&es, a) {
                        if e == c || is_quad_face(idx, a, b, e, d).is_none() {
                            continue;
                        }
                        let b_e = self.face(b_d.update(self.prism(b, c, a, e)), [a, b, e, d]);
                        if self.fails(b_e) {
                            continue;
                        }
                        intersect_sorted(idx.neighbors(c), idx.neighbors(d), &mut tmp);
                        intersect_sorted(&tmp, idx.neighbors(e), &mut fs);
                        for &f in above(&fs, a) {
                            if f == b
                                || !idx.has_triangle(d, e, f)
                                || is_quad_face(idx, e, f, c, b).is_none()
                                || is_quad_face(idx, a, c, f, d).is_none()
                            {
                                continue;
                            }
                            let mut b_f = b_e
                                .update(self.prism(c, a, b, f))
                                .update(self.prism(d, f, e, a))
                                .update(self.prism(e, d, f, b))
                                .update(self.prism(f, e, d, c))
                                .update(tri_corner_quality(self.p(d), self.p(e), self.p(f)));
                            b_f = self.face(b_f, [e, f, c, b]);
                            b_f = self.face(b_f, [a, c, f, d]);
                            if self.fails(b_f) {
                                continue;
                            }
                            self.emit(CellKind::Prism, &[a, b, c, d, e, f], out);
                        }
                    }
                }
            }
        }
    }

    /// The candidate pyramids around the interior facet `xyz` whose two
    /// tetrahedra have opposite vertices `p` and `q`.
    pub fn pyramids_at(
        &self,
        tri: [VertexId; 3],
        p: VertexId,
        q: VertexId,
        out: &mut Vec<PotentialCell>,
    ) {
        let [x, y, z] = tri;
        for (u, w, apex) in [(x, y, z), (y, z, x), (z, x, y)] {
            // base p u q w, diagonal u-w shared by both tetrahedra
            let mut base = [p, u, q, w];
            if orient3d(self.p(p), self.p(u), self.p(w), self.p(apex)) < 0.0 {
                base = [p, w, q, u];
            }
            self.emit(
                CellKind::Pyramid,
                &[base[0], base[1], base[2], base[3], apex],
                out,
            );
        }
    }
}
