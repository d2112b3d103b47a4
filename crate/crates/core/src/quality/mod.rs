//! Corner-quality formulas, running upper bounds used for pruning, and the
//! certified validity / quality of complete cells.

mod bezier;
pub mod sampling;

pub use bezier::{cell_validity_and_quality, CellQuality, CERT_MAX_DEPTH, QUALITY_TOL};

use crate::cell::{template, CellKind};
use crate::geom::{det3, Mat3, Point3};
use std::fmt;

/// `2 / (3 sqrt 3)`
const TRI_NORM: f64 = 0.384_900_179_459_750_5;

/// Value of [`prism_corner_quality`] on a corner of the ideal prism.
pub const PRISM_IDEAL_CORNER: f64 = 1.0;

/// Sine of the angle between `ab` and `ad`.
pub fn quad_corner_quality(a: Point3, b: Point3, d: Point3) -> f64 {
    let u = b - a;
    let v = d - a;
    let n = u.norm() * v.norm();
    if n == 0.0 {
        return 0.0;
    }
    (u.cross(v).norm() / n).clamp(0.0, 1.0)
}

/// Triangle shape quality at corner `a`; 1 for an equilateral triangle.
pub fn tri_corner_quality(a: Point3, b: Point3, c: Point3) -> f64 {
    let ab = b - a;
    let ac = c - a;
    let lab = ab.norm();
    let lac = ac.norm();
    let lbc = (c - b).norm();
    let den = lab * lac * lbc;
    if den == 0.0 {
        return 0.0;
    }
    TRI_NORM * ab.cross(ac).norm() * (lab + lac + lbc) / den
}

/// Signed scaled Jacobian of the hexahedron corner `a` with edges to `b`,
/// `d`, `e`.
pub fn hex_corner_quality(a: Point3, b: Point3, d: Point3, e: Point3) -> f64 {
    let (u, v, w) = (b - a, d - a, e - a);
    let den = u.norm() * v.norm() * w.norm();
    if den == 0.0 {
        return 0.0;
    }
    det3(u, v, w) / den
}

/// Signed prism corner quality: triangle `abc` with vertical edge `ad`.
pub fn prism_corner_quality(a: Point3, b: Point3, c: Point3, d: Point3) -> f64 {
    let (ab, ac, ad) = (b - a, c - a, d - a);
    let lab = ab.norm();
    let lac = ac.norm();
    let lbc = (c - b).norm();
    let den = lab * lac * lbc * ad.norm();
    if den == 0.0 {
        return 0.0;
    }
    TRI_NORM * det3(ab, ac, ad) * (lab + lac + lbc) / den
}

fn pyramid_ref_inverse() -> Mat3 {
    let h = crate::cell::PYRAMID_HEIGHT;
    Mat3::from_cols(
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(0.0, 1.0, 0.0),
        Point3::new(0.5, 0.5, h),
    )
    .inverse()
    .expect("reference corner is invertible")
}

/// `3 det(J)^(2/3) / |J|_F^2` for the pyramid base corner `a` with base edges
/// to `b`, `d` and apex `e`. Zero when `det(J) <= 0`.
pub fn pyramid_corner_quality(a: Point3, b: Point3, d: Point3, e: Point3) -> f64 {
    let jp = Mat3::from_cols(b - a, d - a, e - a);
    mean_ratio(&jp.mul(&pyramid_ref_inverse()))
}

pub(crate) fn mean_ratio(j: &Mat3) -> f64 {
    let det = j.det();
    let f2 = j.frobenius2();
    if det <= 0.0 || f2 == 0.0 {
        return 0.0;
    }
    3.0 * det.powf(2.0 / 3.0) / f2
}

/// Corner quality of corner `i` (index into the template corner list).
pub fn corner_quality(kind: CellKind, pts: &[Point3], i: usize) -> f64 {
    let c = template(kind).corners[i];
    let p = |k: usize| pts[c[k] as usize];
    match kind {
        CellKind::Hexahedron => hex_corner_quality(p(0), p(1), p(2), p(3)),
        CellKind::Prism => prism_corner_quality(p(0), p(1), p(2), p(3)),
        CellKind::Pyramid => pyramid_corner_quality(p(0), p(1), p(2), p(3)),
        CellKind::Tetrahedron => bezier::tet_quality(pts),
    }
}

/// Minimum over all template corners.
pub fn min_corner_quality(kind: CellKind, pts: &[Point3]) -> f64 {
    (0..template(kind).corners.len())
        .map(|i| corner_quality(kind, pts, i))
        .fold(f64::INFINITY, f64::min)
}

/// Running upper bound on the quality of a cell under construction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QualityBound(pub f64);

impl QualityBound {
    pub const START: QualityBound = QualityBound(1.0);

    pub fn update(self, q: f64) -> QualityBound {
        QualityBound(self.0.min(q))
    }

    /// Whether the branch must be abandoned.
    pub fn fails(self, min: MinQuality) -> bool {
        self.0 <= min.0
    }
}

pub fn update_bound(bound: QualityBound, q: f64) -> QualityBound {
    bound.update(q)
}

/// Emission threshold; cells with quality `<= threshold` are dropped.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct MinQuality(f64);

#[derive(Debug, Clone, PartialEq)]
pub struct MinQualityError(pub f64);

impl fmt::Display for MinQualityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "minimum quality {} is outside [0, 1)", self.0)
    }
}

impl std::error::Error for MinQualityError {}

impl MinQuality {
    pub const VALID_ONLY: MinQuality = MinQuality(0.0);

    pub fn new(t: f64) -> Result<Self, MinQualityError> {
        if (0.0..1.0).contains(&t) {
            Ok(MinQuality(t))
        } else {
            Err(MinQualityError(t))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn accepts(self, q: f64) -> bool {
        q > self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::template;

    fn p(x: f64, y: f64, z: f64) -> Point3 {
        Point3::new(x, y, z)
    }

    #[test]
    fn quad_corner() {
        let o = Point3::ZERO;
        assert_eq!(quad_corner_quality(o, p(1., 0., 0.), p(0., 2., 0.)), 1.0);
        assert_eq!(quad_corner_quality(o, p(1., 0., 0.), p(3., 0., 0.)), 0.0);
        let a = 30f64.to_radians();
        let q = quad_corner_quality(o, p(1., 0., 0.), p(a.cos(), a.sin(), 0.));
        assert!((q - 0.5).abs() < 1e-12);
        assert_eq!(quad_corner_quality(o, o, p(1., 0., 0.)), 0.0);
    }

    #[test]
    fn tri_corner() {
        let s3 = 3f64.sqrt() / 2.0;
        let q = tri_corner_quality(Point3::ZERO, p(1., 0., 0.), p(0.5, s3, 0.));
        assert!((q - 1.0).abs() < 1e-12);
        assert_eq!(
            tri_corner_quality(Point3::ZERO, p(1., 0., 0.), p(2., 0., 0.)),
            0.0
        );
    }

    #[test]
    fn hex_corner() {
        let o = Point3::ZERO;
        let (x, y, z) = (p(1., 0., 0.), p(0., 1., 0.), p(0., 0., 1.));
        assert_eq!(hex_corner_quality(o, x, y, z), 1.0);
        assert_eq!(hex_corner_quality(o, x, y, p(1., 1., 0.)), 0.0);
        assert!(hex_corner_quality(o, x, y, -z) < 0.0);
    }

    #[test]
    fn prism_ideal_corner_constant() {
        let t = template(CellKind::Prism);
        let i = &t.ideal;
        let q = prism_corner_quality(i[0], i[1], i[2], i[3]);
        assert!((q - PRISM_IDEAL_CORNER).abs() < 1e-12);
        for k in 0..6 {
            assert!((corner_quality(CellKind::Prism, i, k) - 1.0).abs() < 1e-12);
        }
        assert_eq!(prism_corner_quality(i[0], i[1], i[2], p(0.3, 0.1, 0.)), 0.0);
        assert!(prism_corner_quality(i[0], i[1], i[2], p(0., 0., -1.)) < 0.0);
    }

    #[test]
    fn pyramid_corner() {
        let t = template(CellKind::Pyramid);
        for k in 0..4 {
            assert!((corner_quality(CellKind::Pyramid, &t.ideal, k) - 1.0).abs() < 1e-12);
        }
        let i = &t.ideal;
        assert_eq!(
            pyramid_corner_quality(i[0], i[1], i[3], p(0.3, 0.3, 0.)),
            0.0
        );
    }

    #[test]
    fn ideal_hex_corners() {
        let t = template(CellKind::Hexahedron);
        assert_eq!(min_corner_quality(CellKind::Hexahedron, &t.ideal), 1.0);
    }

    #[test]
    fn bounds_and_thresholds() {
        assert_eq!(update_bound(QualityBound(1.0), 0.3).0, 0.3);
        assert_eq!(update_bound(QualityBound(0.2), 0.5).0, 0.2);
        let seq = [0.9, 0.4, 0.7, 0.35, 0.8];
        let b = seq.iter().fold(QualityBound::START, |b, &q| b.update(q));
        assert_eq!(b.0, 0.35);
        assert!(MinQuality::new(1.0).is_err());
        assert!(MinQuality::new(-0.1).is_err());
        let m = MinQuality::new(0.35).unwrap();
        assert!(b.fails(m));
        assert!(!m.accepts(0.35));
        assert!(MinQuality::VALID_ONLY.accepts(1e-9));
    }
}
