//! Certified validity and a certified lower bound of the cell quality.
//!
//! The Jacobian determinant of each element map is a polynomial; its
//! Bernstein coefficients on a sub-region bound it from below, and equal its
//! values at the sub-region corners. Validity subdivides until every
//! coefficient is positive. The quality bound divides the determinant bound by
//! upper bounds of the column norms, which are convex along each reference
//! axis and therefore maximal at sub-region corners, and refines best-first
//! until it is within [`QUALITY_TOL`] of the sampled minimum.

#![allow(clippy::needless_range_loop)]

use super::{mean_ratio, TRI_NORM};
use crate::cell::{template, CellKind, PYRAMID_HEIGHT};
use crate::geom::{det3, Mat3, Point3};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Maximum subdivision depth of the validity certificate.
pub const CERT_MAX_DEPTH: u32 = 6;
/// Target gap between the certified lower bound and the sampled minimum.
pub const QUALITY_TOL: f64 = 1e-4;
const QUALITY_MAX_DEPTH: u32 = 12;
const QUALITY_BUDGET: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellQuality {
    pub valid: bool,
    /// Certified lower bound of the minimum scaled Jacobian; 0 when invalid.
    pub quality: f64,
}

impl CellQuality {
    const INVALID: CellQuality = CellQuality {
        valid: false,
        quality: 0.0,
    };
}

struct Eval {
    coef_min: f64,
    corner_min: f64,
    lower: f64,
    sampled: f64,
}

trait Model {
    type Region: Clone;
    fn root(&self) -> Self::Region;
    fn split(&self, r: &Self::Region) -> Vec<Self::Region>;
    fn eval(&self, r: &Self::Region) -> Eval;
    /// Like `eval`, possibly with a tighter `lower` at a higher cost.
    fn eval_quality(&self, r: &Self::Region) -> Eval {
        self.eval(r)
    }
}

/// Samples at `i/4`, `i = 0..=4`, to quartic Bernstein coefficients.
const QUARTIC_FROM_SAMPLES: [[f64; 5]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [-13.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25],
    [
        13.0 / 18.0,
        -32.0 / 9.0,
        20.0 / 3.0,
        -32.0 / 9.0,
        13.0 / 18.0,
    ],
    [-0.25, 4.0 / 3.0, -3.0, 4.0, -13.0 / 12.0],
    [0.0, 0.0, 0.0, 0.0, 1.0],
];

/// Converts a 5x5x5 grid of samples of a polynomial of degree 4 per axis
/// into its Bernstein coefficients, in place.
fn quartic_bernstein(f: &mut [[[f64; 5]; 5]; 5]) {
    let conv = |line: [f64; 5]| {
        QUARTIC_FROM_SAMPLES.map(|row| row.iter().zip(line).map(|(m, x)| m * x).sum::<f64>())
    };
    for i in 0..5 {
        for j in 0..5 {
            f[i][j] = conv(f[i][j]);
        }
    }
    for i in 0..5 {
        for k in 0..5 {
            let c = conv([0, 1, 2, 3, 4].map(|j| f[i][j][k]));
            for j in 0..5 {
                f[i][j][k] = c[j];
            }
        }
    }
    for j in 0..5 {
        for k in 0..5 {
            let c = conv([0, 1, 2, 3, 4].map(|i| f[i][j][k]));
            for i in 0..5 {
                f[i][j][k] = c[i];
            }
        }
    }
}

/// Bernstein coefficient of the middle control point from samples at 0, 1/2, 1.
#[inline]
fn mid_coef(f0: f64, fh: f64, f1: f64) -> f64 {
    2.0 * fh - 0.5 * (f0 + f1)
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + (b - a) * t
}

struct Hex([Point3; 8]);

impl Hex {
    fn columns(&self, u: f64, v: f64, w: f64) -> [Point3; 3] {
        let [a, b, c, d, e, f, g, h] = self.0;
        let (iu, iv, iw) = (1.0 - u, 1.0 - v, 1.0 - w);
        let xu = (b - a) * (iv * iw) + (c - d) * (v * iw) + (f - e) * (iv * w) + (g - h) * (v * w);
        let xv = (d - a) * (iu * iw) + (c - b) * (u * iw) + (h - e) * (iu * w) + (g - f) * (u * w);
        let xw = (e - a) * (iu * iv) + (f - b) * (u * iv) + (g - c) * (u * v) + (h - d) * (iu * v);
        [xu, xv, xw]
    }

    fn point(&self, r: [f64; 3]) -> (f64, f64) {
        let [xu, xv, xw] = self.columns(r[0], r[1], r[2]);
        let det = det3(xu, xv, xw);
        let den = xu.norm() * xv.norm() * xw.norm();
        (det, if den > 0.0 { det / den } else { 0.0 })
    }
}

#[derive(Clone)]
struct Box3 {
    lo: [f64; 3],
    hi: [f64; 3],
}

impl Model for Hex {
    type Region = Box3;

    fn root(&self) -> Box3 {
        Box3 {
            lo: [0.0; 3],
            hi: [1.0; 3],
        }
    }

    fn split(&self, r: &Box3) -> Vec<Box3> {
        let m = [0, 1, 2].map(|i| 0.5 * (r.lo[i] + r.hi[i]));
        let mut out = Vec::with_capacity(8);
        for k in 0..8 {
            let mut lo = r.lo;
            let mut hi = r.hi;
            for i in 0..3 {
                if k >> i & 1 == 0 {
                    hi[i] = m[i];
                } else {
                    lo[i] = m[i];
                }
            }
            out.push(Box3 { lo, hi });
        }
        out
    }

    fn eval(&self, r: &Box3) -> Eval {
        let t = |i: usize, k: usize| lerp(r.lo[i], r.hi[i], k as f64 * 0.5);
        let mut f = [[[0.0; 3]; 3]; 3];
        let mut nmax = [0.0f64; 3];
        let mut sampled = f64::INFINITY;
        for (i, fi) in f.iter_mut().enumerate() {
            for (j, fij) in fi.iter_mut().enumerate() {
                for (k, fijk) in fij.iter_mut().enumerate() {
                    let cols = self.columns(t(0, i), t(1, j), t(2, k));
                    let det = det3(cols[0], cols[1], cols[2]);
                    let n = cols.map(|c| c.norm());
                    *fijk = det;
                    let den = n[0] * n[1] * n[2];
                    sampled = sampled.min(if den > 0.0 { det / den } else { 0.0 });
                    if i != 1 && j != 1 && k != 1 {
                        for a in 0..3 {
                            nmax[a] = nmax[a].max(n[a]);
                        }
                    }
                }
            }
        }
        let mut corner_min = f64::INFINITY;
        for i in [0, 2] {
            for j in [0, 2] {
                for k in [0, 2] {
                    corner_min = corner_min.min(f[i][j][k]);
                }
            }
        }
        // convert along each axis in turn
        for i in 0..3 {
            for j in 0..3 {
                f[i][j][1] = mid_coef(f[i][j][0], f[i][j][1], f[i][j][2]);
            }
        }
        for i in 0..3 {
            for k in 0..3 {
                f[i][1][k] = mid_coef(f[i][0][k], f[i][1][k], f[i][2][k]);
            }
        }
        for j in 0..3 {
            for k in 0..3 {
                f[1][j][k] = mid_coef(f[0][j][k], f[1][j][k], f[2][j][k]);
            }
        }
        let coef_min = f
            .iter()
            .flatten()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let den = nmax[0] * nmax[1] * nmax[2];
        let lower = if coef_min > 0.0 && den > 0.0 {
            coef_min / den
        } else {
            f64::NEG_INFINITY
        };
        Eval {
            coef_min,
            corner_min,
            lower,
            sampled,
        }
    }

    // With det > 0, q >= t iff det^2 - t^2 |xu|^2 |xv|^2 |xw|^2 >= 0, a
    // polynomial of degree 4 per axis whose coefficients are linear in t^2.
    fn eval_quality(&self, r: &Box3) -> Eval {
        let mut e = self.eval(r);
        let t = |i: usize, k: usize| lerp(r.lo[i], r.hi[i], k as f64 * 0.25);
        let mut a = [[[0.0; 5]; 5]; 5];
        let mut b = [[[0.0; 5]; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    let cols = self.columns(t(0, i), t(1, j), t(2, k));
                    let det = det3(cols[0], cols[1], cols[2]);
                    let s = cols[0].norm2() * cols[1].norm2() * cols[2].norm2();
                    a[i][j][k] = det * det;
                    b[i][j][k] = s;
                    e.sampled = e.sampled.min(if s > 0.0 { det / s.sqrt() } else { 0.0 });
                }
            }
        }
        quartic_bernstein(&mut a);
        quartic_bernstein(&mut b);
        let mut tau = f64::INFINITY;
        for (ak, bk) in a
            .iter()
            .flatten()
            .flatten()
            .zip(b.iter().flatten().flatten())
        {
            if *bk > 0.0 {
                tau = tau.min(ak / bk);
            } else if *ak < 0.0 {
                tau = f64::NEG_INFINITY;
            }
        }
        if e.coef_min > 0.0 && tau > 0.0 {
            e.lower = e.lower.max(tau.min(1.0).sqrt());
        }
        e
    }
}

struct Prism([Point3; 6]);

#[derive(Clone)]
struct PrismRegion {
    tri: [[f64; 2]; 3],
    w: [f64; 2],
}

impl Prism {
    /// `(X_xi, X_eta, X_w)` at reference point `(xi, eta, w)`.
    fn columns(&self, xi: f64, eta: f64, w: f64) -> [Point3; 3] {
        let [a, b, c, d, e, f] = self.0;
        let iw = 1.0 - w;
        let u = (b - a) * iw + (e - d) * w;
        let v = (c - a) * iw + (f - d) * w;
        let xw = (d - a) * (1.0 - xi - eta) + (e - b) * xi + (f - c) * eta;
        [u, v, xw]
    }

    fn measure(cols: &[Point3; 3]) -> (f64, f64) {
        let [u, v, xw] = *cols;
        let det = det3(u, v, xw);
        let (lu, lv, luv, lw) = (u.norm(), v.norm(), (u - v).norm(), xw.norm());
        let den = lu * lv * luv * lw;
        let q = if den > 0.0 {
            TRI_NORM * det * (lu + lv + luv) / den
        } else {
            0.0
        };
        (det, q)
    }

    fn point(&self, r: [f64; 3]) -> (f64, f64) {
        Self::measure(&self.columns(r[0], r[1], r[2]))
    }
}

fn mid2(p: [f64; 2], q: [f64; 2]) -> [f64; 2] {
    [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]
}

impl Model for Prism {
    type Region = PrismRegion;

    fn root(&self) -> PrismRegion {
        PrismRegion {
            tri: [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            w: [0.0, 1.0],
        }
    }

    fn split(&self, r: &PrismRegion) -> Vec<PrismRegion> {
        let [t0, t1, t2] = r.tri;
        let (m01, m12, m02) = (mid2(t0, t1), mid2(t1, t2), mid2(t0, t2));
        let tris = [
            [t0, m01, m02],
            [m01, t1, m12],
            [m02, m12, t2],
            [m01, m12, m02],
        ];
        let wm = 0.5 * (r.w[0] + r.w[1]);
        let mut out = Vec::with_capacity(8);
        for tri in tris {
            out.push(PrismRegion {
                tri,
                w: [r.w[0], wm],
            });
            out.push(PrismRegion {
                tri,
                w: [wm, r.w[1]],
            });
        }
        out
    }

    fn eval(&self, r: &PrismRegion) -> Eval {
        let ws = [r.w[0], 0.5 * (r.w[0] + r.w[1]), r.w[1]];
        let mut f = [[0.0; 3]; 3];
        let mut sampled = f64::INFINITY;
        let (mut mu, mut mv, mut muv, mut mw) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for (i, t) in r.tri.iter().enumerate() {
            for (k, &w) in ws.iter().enumerate() {
                let cols = self.columns(t[0], t[1], w);
                let (det, q) = Self::measure(&cols);
                f[i][k] = det;
                sampled = sampled.min(q);
                if k != 1 {
                    mu = mu.max(cols[0].norm());
                    mv = mv.max(cols[1].norm());
                    muv = muv.max((cols[0] - cols[1]).norm());
                }
                mw = mw.max(cols[2].norm());
            }
        }
        let corner_min = f
            .iter()
            .flat_map(|l| [l[0], l[2]])
            .fold(f64::INFINITY, f64::min);
        let coef_min = f
            .iter()
            .flat_map(|l| [l[0], mid_coef(l[0], l[1], l[2]), l[2]])
            .fold(f64::INFINITY, f64::min);
        let lower = if coef_min > 0.0 && mu * mv * muv * mw > 0.0 {
            TRI_NORM * coef_min * (1.0 / (mv * muv) + 1.0 / (mu * muv) + 1.0 / (mu * mv)) / mw
        } else {
            f64::NEG_INFINITY
        };
        Eval {
            coef_min,
            corner_min,
            lower,
            sampled,
        }
    }
}

/// Pyramid relative to the ideal pyramid under the collapsed-cube map. The
/// relative Jacobian depends on the base coordinates only.
struct Pyramid([Point3; 5]);

#[derive(Clone)]
struct Box2 {
    lo: [f64; 2],
    hi: [f64; 2],
}

impl Pyramid {
    fn columns(&self, xi: f64, eta: f64) -> [Point3; 3] {
        let [a, b, c, d, e] = self.0;
        let j1 = (b - a) * (1.0 - eta) + (c - d) * eta;
        let j2 = (d - a) * (1.0 - xi) + (c - b) * xi;
        let center = (a + b + c + d) * 0.25;
        let j3 =
            (e - center + (a - b + c - d) * ((0.5 - xi) * (0.5 - eta))) * (1.0 / PYRAMID_HEIGHT);
        [j1, j2, j3]
    }

    fn point(&self, r: [f64; 3]) -> (f64, f64) {
        let [j1, j2, j3] = self.columns(r[0], r[1]);
        let m = Mat3::from_cols(j1, j2, j3);
        (m.det(), mean_ratio(&m))
    }
}

impl Model for Pyramid {
    type Region = Box2;

    fn root(&self) -> Box2 {
        Box2 {
            lo: [0.0; 2],
            hi: [1.0; 2],
        }
    }

    fn split(&self, r: &Box2) -> Vec<Box2> {
        let m = [0.5 * (r.lo[0] + r.hi[0]), 0.5 * (r.lo[1] + r.hi[1])];
        (0..4)
            .map(|k| {
                let mut lo = r.lo;
                let mut hi = r.hi;
                for i in 0..2 {
                    if k >> i & 1 == 0 {
                        hi[i] = m[i];
                    } else {
                        lo[i] = m[i];
                    }
                }
                Box2 { lo, hi }
            })
            .collect()
    }

    fn eval(&self, r: &Box2) -> Eval {
        let t = |i: usize, k: usize| lerp(r.lo[i], r.hi[i], k as f64 * 0.5);
        let mut f = [[0.0; 3]; 3];
        let mut sampled = f64::INFINITY;
        let mut nmax = [0.0f64; 3];
        for (i, fi) in f.iter_mut().enumerate() {
            for (j, fij) in fi.iter_mut().enumerate() {
                let cols = self.columns(t(0, i), t(1, j));
                let m = Mat3::from_cols(cols[0], cols[1], cols[2]);
                *fij = m.det();
                sampled = sampled.min(mean_ratio(&m));
                if i != 1 && j != 1 {
                    for a in 0..3 {
                        nmax[a] = nmax[a].max(cols[a].norm2());
                    }
                }
            }
        }
        let corner_min = [f[0][0], f[0][2], f[2][0], f[2][2]]
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        for fi in f.iter_mut() {
            fi[1] = mid_coef(fi[0], fi[1], fi[2]);
        }
        for j in 0..3 {
            f[1][j] = mid_coef(f[0][j], f[1][j], f[2][j]);
        }
        let coef_min = f.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        let f2 = nmax[0] + nmax[1] + nmax[2];
        let lower = if coef_min > 0.0 && f2 > 0.0 {
            3.0 * coef_min.powf(2.0 / 3.0) / f2
        } else {
            f64::NEG_INFINITY
        };
        Eval {
            coef_min,
            corner_min,
            lower,
            sampled,
        }
    }
}

fn regular_tet_inverse() -> Mat3 {
    let i = &template(CellKind::Tetrahedron).ideal;
    Mat3::from_cols(i[1] - i[0], i[2] - i[0], i[3] - i[0])
        .inverse()
        .expect("regular tetrahedron")
}

/// Mean ratio of a tetrahedron relative to the regular one.
pub(crate) fn tet_quality(pts: &[Point3]) -> f64 {
    let j = Mat3::from_cols(pts[1] - pts[0], pts[2] - pts[0], pts[3] - pts[0]);
    mean_ratio(&j.mul(&regular_tet_inverse()))
}

fn certify<M: Model>(m: &M) -> bool {
    let mut stack = vec![(m.root(), 0u32)];
    while let Some((r, depth)) = stack.pop() {
        let e = m.eval(&r);
        if e.coef_min > 0.0 {
            continue;
        }
        if e.corner_min.is_nan() || e.corner_min <= 0.0 || depth == CERT_MAX_DEPTH {
            return false;
        }
        stack.extend(m.split(&r).into_iter().map(|c| (c, depth + 1)));
    }
    true
}

struct Node<R> {
    lower: f64,
    depth: u32,
    region: R,
}

impl<R> PartialEq for Node<R> {
    fn eq(&self, o: &Self) -> bool {
        self.lower.total_cmp(&o.lower) == Ordering::Equal
    }
}
impl<R> Eq for Node<R> {}
impl<R> PartialOrd for Node<R> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<R> Ord for Node<R> {
    // reversed: the heap pops the smallest lower bound
    fn cmp(&self, o: &Self) -> Ordering {
        o.lower.total_cmp(&self.lower)
    }
}

fn quality_lower_bound<M: Model>(m: &M) -> f64 {
    let root = m.root();
    let e = m.eval_quality(&root);
    let mut upper = e.sampled;
    let mut heap = BinaryHeap::new();
    heap.push(Node {
        lower: e.lower,
        depth: 0,
        region: root,
    });
    let mut evals = 1;
    loop {
        let worst = heap.pop().expect("heap is never empty");
        if upper - worst.lower <= QUALITY_TOL
            || worst.depth >= QUALITY_MAX_DEPTH
            || evals >= QUALITY_BUDGET
        {
            return worst.lower.max(0.0).min(upper);
        }
        for c in m.split(&worst.region) {
            let e = m.eval_quality(&c);
            evals += 1;
            upper = upper.min(e.sampled);
            heap.push(Node {
                lower: e.lower,
                depth: worst.depth + 1,
                region: c,
            });
        }
    }
}

fn run<M: Model>(m: &M) -> CellQuality {
    if !certify(m) {
        return CellQuality::INVALID;
    }
    CellQuality {
        valid: true,
        quality: quality_lower_bound(m),
    }
}

fn has_coincident(pts: &[Point3]) -> bool {
    (0..pts.len()).any(|i| (i + 1..pts.len()).any(|j| pts[i] == pts[j]))
}

/// Validity (Jacobian determinant positive everywhere) and a certified lower
/// bound of the minimal scaled Jacobian of a cell given in template order.
pub fn cell_validity_and_quality(kind: CellKind, pts: &[Point3]) -> CellQuality {
    assert_eq!(pts.len(), kind.num_vertices());
    if has_coincident(pts) || pts.iter().any(|p| !p.is_finite()) {
        return CellQuality::INVALID;
    }
    match kind {
        CellKind::Hexahedron => run(&Hex(pts.try_into().unwrap())),
        CellKind::Prism => run(&Prism(pts.try_into().unwrap())),
        CellKind::Pyramid => run(&Pyramid(pts.try_into().unwrap())),
        CellKind::Tetrahedron => {
            let q = tet_quality(pts);
            CellQuality {
                valid: q > 0.0,
                quality: q,
            }
        }
    }
}

/// Jacobian determinant and pointwise quality at a reference point. Prism
/// points use `(xi, eta, w)` with `xi + eta <= 1`; pyramids ignore `r[2]`.
pub(crate) fn point_measure(kind: CellKind, pts: &[Point3], r: [f64; 3]) -> (f64, f64) {
    match kind {
        CellKind::Hexahedron => Hex(pts.try_into().unwrap()).point(r),
        CellKind::Prism => Prism(pts.try_into().unwrap()).point(r),
        CellKind::Pyramid => Pyramid(pts.try_into().unwrap()).point(r),
        CellKind::Tetrahedron => {
            let j = Mat3::from_cols(pts[1] - pts[0], pts[2] - pts[0], pts[3] - pts[0]);
            (j.det(), tet_quality(pts))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quality::min_corner_quality;

    fn ideal(kind: CellKind) -> Vec<Point3> {
        template(kind).ideal.clone()
    }

    #[test]
    fn ideal_cells_have_quality_one() {
        for kind in CellKind::COMBINED {
            let q = cell_validity_and_quality(kind, &ideal(kind));
            assert!(q.valid, "{kind}");
            assert!((q.quality - 1.0).abs() < 1e-9, "{kind}: {}", q.quality);
        }
    }

    #[test]
    fn pointwise_measure_matches_corners() {
        let mut h = ideal(CellKind::Hexahedron);
        h[6] = Point3::new(1.3, 1.1, 0.8);
        h[1] = Point3::new(0.9, -0.1, 0.05);
        let corners = [
            [0., 0., 0.],
            [1., 0., 0.],
            [1., 1., 0.],
            [0., 1., 0.],
            [0., 0., 1.],
            [1., 0., 1.],
            [1., 1., 1.],
            [0., 1., 1.],
        ];
        for (i, r) in corners.iter().enumerate() {
            let (_, q) = point_measure(CellKind::Hexahedron, &h, *r);
            let c = crate::quality::corner_quality(CellKind::Hexahedron, &h, i);
            assert!((q - c).abs() < 1e-12);
        }
        let mut p = ideal(CellKind::Prism);
        p[4] = Point3::new(1.2, 0.1, 0.9);
        let pr = [
            [0., 0., 0.],
            [1., 0., 0.],
            [0., 1., 0.],
            [0., 0., 1.],
            [1., 0., 1.],
            [0., 1., 1.],
        ];
        for (i, r) in pr.iter().enumerate() {
            let (_, q) = point_measure(CellKind::Prism, &p, *r);
            let c = crate::quality::corner_quality(CellKind::Prism, &p, i);
            assert!((q - c).abs() < 1e-12, "prism corner {i}: {q} vs {c}");
        }
        let mut y = ideal(CellKind::Pyramid);
        y[2] = Point3::new(1.1, 0.9, 0.1);
        y[4] = Point3::new(0.4, 0.6, 0.8);
        let yr = [[0., 0., 0.], [1., 0., 0.], [1., 1., 0.], [0., 1., 0.]];
        for (i, r) in yr.iter().enumerate() {
            let (_, q) = point_measure(CellKind::Pyramid, &y, *r);
            let c = crate::quality::corner_quality(CellKind::Pyramid, &y, i);
            assert!((q - c).abs() < 1e-12, "pyramid corner {i}: {q} vs {c}");
        }
    }

    #[test]
    fn inverted_corner_is_invalid() {
        let mut h = ideal(CellKind::Hexahedron);
        h[4] = Point3::new(0.3, 0.3, -0.5);
        assert!(min_corner_quality(CellKind::Hexahedron, &h) < 0.0);
        let q = cell_validity_and_quality(CellKind::Hexahedron, &h);
        assert!(!q.valid);
        assert_eq!(q.quality, 0.0);
    }

    #[test]
    fn slightly_perturbed_cube() {
        let mut h = ideal(CellKind::Hexahedron);
        h[6] = h[6] + Point3::new(0.01, -0.004, 0.006);
        let q = cell_validity_and_quality(CellKind::Hexahedron, &h);
        assert!(q.valid);
        assert!(q.quality < 1.0 && q.quality > 0.95);
        assert!(q.quality <= min_corner_quality(CellKind::Hexahedron, &h) + 1e-12);
    }

    #[test]
    fn quartic_conversion_reproduces_monomials() {
        // t has coefficients k/4, t^4 has (0, 0, 0, 0, 1)
        let mut f = [[[0.0; 5]; 5]; 5];
        for (i, fi) in f.iter_mut().enumerate() {
            for (j, fij) in fi.iter_mut().enumerate() {
                for (k, x) in fij.iter_mut().enumerate() {
                    let (u, v, w) = (i as f64 / 4.0, j as f64 / 4.0, k as f64 / 4.0);
                    *x = u + w.powi(4) + v * v;
                }
            }
        }
        quartic_bernstein(&mut f);
        let v2 = [0.0, 0.0, 1.0 / 6.0, 0.5, 1.0];
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    let want = i as f64 / 4.0 + if k == 4 { 1.0 } else { 0.0 } + v2[j];
                    assert!((f[i][j][k] - want).abs() < 1e-12, "{i}{j}{k}");
                }
            }
        }
    }

    #[test]
    fn perturbed_cube_bound_is_tight() {
        let mut h = ideal(CellKind::Hexahedron);
        h[6] = h[6] + Point3::new(0.01, -0.008, 0.006);
        h[1] = h[1] + Point3::new(-0.007, 0.009, 0.004);
        let q = cell_validity_and_quality(CellKind::Hexahedron, &h);
        let s = crate::quality::sampling::sample_jacobian(CellKind::Hexahedron, &h, 20);
        assert!(q.quality <= s.min_quality + 1e-12);
        assert!(
            s.min_quality - q.quality < 1e-3,
            "{} vs {}",
            q.quality,
            s.min_quality
        );
    }

    #[test]
    fn coincident_vertices_short_circuit() {
        let mut h = ideal(CellKind::Hexahedron);
        h[7] = h[6];
        assert_eq!(
            cell_validity_and_quality(CellKind::Hexahedron, &h),
            CellQuality::INVALID
        );
    }
}
