//! Dense sampling of the Jacobian over the reference element. Used as an
//! independent check of the certified bounds.

use super::bezier::point_measure;
use crate::cell::CellKind;
use crate::geom::Point3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledJacobian {
    pub min_det: f64,
    pub min_quality: f64,
}

/// Minimum determinant and pointwise quality over a regular grid with `n`
/// intervals per reference axis.
pub fn sample_jacobian(kind: CellKind, pts: &[Point3], n: usize) -> SampledJacobian {
    assert!(n >= 1);
    let mut out = SampledJacobian {
        min_det: f64::INFINITY,
        min_quality: f64::INFINITY,
    };
    let s = |i: usize| i as f64 / n as f64;
    let mut take = |r: [f64; 3]| {
        let (d, q) = point_measure(kind, pts, r);
        out.min_det = out.min_det.min(d);
        out.min_quality = out.min_quality.min(q);
    };
    match kind {
        CellKind::Hexahedron => {
            for i in 0..=n {
                for j in 0..=n {
                    for k in 0..=n {
                        take([s(i), s(j), s(k)]);
                    }
                }
            }
        }
        CellKind::Prism => {
            for i in 0..=n {
                for j in 0..=n - i {
                    for k in 0..=n {
                        take([s(i), s(j), s(k)]);
                    }
                }
            }
        }
        CellKind::Pyramid => {
            for i in 0..=n {
                for j in 0..=n {
                    take([s(i), s(j), 0.0]);
                }
            }
        }
        CellKind::Tetrahedron => take([0.0; 3]),
    }
    out
}
