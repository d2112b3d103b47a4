//! Inversion of the cell maps by Newton iteration: physical point to
//! reference coordinates. Used to decide whether a point lies in a cell.

use crate::cell::CellKind;
use crate::geom::{Mat3, Point3};

fn hex_map(p: &[Point3], r: [f64; 3]) -> (Point3, Mat3) {
    let [u, v, w] = r;
    let (iu, iv, iw) = (1.0 - u, 1.0 - v, 1.0 - w);
    let wts = [
        iu * iv * iw,
        u * iv * iw,
        u * v * iw,
        iu * v * iw,
        iu * iv * w,
        u * iv * w,
        u * v * w,
        iu * v * w,
    ];
    let du = [
        -iv * iw,
        iv * iw,
        v * iw,
        -v * iw,
        -iv * w,
        iv * w,
        v * w,
        -v * w,
    ];
    let dv = [
        -iu * iw,
        -u * iw,
        u * iw,
        iu * iw,
        -iu * w,
        -u * w,
        u * w,
        iu * w,
    ];
    let dw = [
        -iu * iv,
        -u * iv,
        -u * v,
        -iu * v,
        iu * iv,
        u * iv,
        u * v,
        iu * v,
    ];
    let sum = |c: &[f64; 8]| (0..8).fold(Point3::ZERO, |s, i| s + p[i] * c[i]);
    (sum(&wts), Mat3::from_cols(sum(&du), sum(&dv), sum(&dw)))
}

fn prism_map(p: &[Point3], r: [f64; 3]) -> (Point3, Mat3) {
    let [x, y, w] = r;
    let n = [1.0 - x - y, x, y];
    let lo = p[0] * n[0] + p[1] * n[1] + p[2] * n[2];
    let hi = p[3] * n[0] + p[4] * n[1] + p[5] * n[2];
    let dx = (p[1] - p[0]) * (1.0 - w) + (p[4] - p[3]) * w;
    let dy = (p[2] - p[0]) * (1.0 - w) + (p[5] - p[3]) * w;
    (lo * (1.0 - w) + hi * w, Mat3::from_cols(dx, dy, hi - lo))
}

fn pyramid_map(p: &[Point3], r: [f64; 3]) -> (Point3, Mat3) {
    let [x, y, z] = r;
    let base = p[0] * ((1.0 - x) * (1.0 - y))
        + p[1] * (x * (1.0 - y))
        + p[2] * (x * y)
        + p[3] * ((1.0 - x) * y);
    let bx = (p[1] - p[0]) * (1.0 - y) + (p[2] - p[3]) * y;
    let by = (p[3] - p[0]) * (1.0 - x) + (p[2] - p[1]) * x;
    (
        base * (1.0 - z) + p[4] * z,
        Mat3::from_cols(bx * (1.0 - z), by * (1.0 - z), p[4] - base),
    )
}

fn tet_map(p: &[Point3], r: [f64; 3]) -> (Point3, Mat3) {
    let j = Mat3::from_cols(p[1] - p[0], p[2] - p[0], p[3] - p[0]);
    (p[0] + j.mul_vec(Point3::from_array(r)), j)
}

/// Reference coordinates of `x` in the cell, or `None` when Newton fails to
/// converge.
pub fn reference_coords(kind: CellKind, pts: &[Point3], x: Point3) -> Option<[f64; 3]> {
    let map = match kind {
        CellKind::Hexahedron => hex_map,
        CellKind::Prism => prism_map,
        CellKind::Pyramid => pyramid_map,
        CellKind::Tetrahedron => tet_map,
    };
    let scale = pts.iter().map(|p| (*p - pts[0]).norm()).fold(0.0, f64::max);
    let mut r = match kind {
        CellKind::Hexahedron => [0.5; 3],
        CellKind::Prism => [1.0 / 3.0, 1.0 / 3.0, 0.5],
        CellKind::Pyramid => [0.5, 0.5, 0.25],
        CellKind::Tetrahedron => [0.25; 3],
    };
    for _ in 0..60 {
        let (y, j) = map(pts, r);
        let res = y - x;
        if res.norm() <= 1e-13 * scale {
            return Some(r);
        }
        let step = j.inverse()?.mul_vec(res);
        let len = step.norm();
        let damp = if len > 0.5 { 0.5 / len } else { 1.0 };
        r = [
            r[0] - step.x * damp,
            r[1] - step.y * damp,
            r[2] - step.z * damp,
        ];
        if !r.iter().all(|c| c.is_finite()) {
            return None;
        }
    }
    let (y, _) = map(pts, r);
    ((y - x).norm() <= 1e-10 * scale).then_some(r)
}

/// Whether the reference coordinates lie in the closed reference element
/// shrunk by `tol` (strict interior for `tol > 0`).
pub fn reference_inside(kind: CellKind, r: [f64; 3], tol: f64) -> bool {
    let unit = |c: f64| c > tol && c < 1.0 - tol;
    match kind {
        CellKind::Hexahedron | CellKind::Pyramid => r.iter().all(|&c| unit(c)),
        CellKind::Prism => r[0] > tol && r[1] > tol && r[0] + r[1] < 1.0 - tol && unit(r[2]),
        CellKind::Tetrahedron => r.iter().all(|&c| c > tol) && r[0] + r[1] + r[2] < 1.0 - tol,
    }
}

/// Whether `x` lies strictly inside the cell (reference tolerance `tol`).
pub fn contains_point(kind: CellKind, pts: &[Point3], x: Point3, tol: f64) -> bool {
    reference_coords(kind, pts, x).is_some_and(|r| reference_inside(kind, r, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::template;

    #[test]
    fn roundtrip_on_distorted_cells() {
        for kind in CellKind::COMBINED {
            let mut pts = template(kind).ideal.clone();
            pts[1] = pts[1] + Point3::new(0.1, -0.05, 0.07);
            let r = [0.2, 0.3, 0.4];
            let map = match kind {
                CellKind::Hexahedron => hex_map,
                CellKind::Prism => prism_map,
                _ => pyramid_map,
            };
            let (x, _) = map(&pts, r);
            let got = reference_coords(kind, &pts, x).unwrap();
            for i in 0..3 {
                assert!((got[i] - r[i]).abs() < 1e-9, "{kind}");
            }
            assert!(contains_point(kind, &pts, x, 1e-9));
            assert!(!contains_point(
                kind,
                &pts,
                Point3::new(5.0, 5.0, 5.0),
                1e-9
            ));
        }
    }
}
