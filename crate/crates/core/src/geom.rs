//! Small fixed-size vector algebra used throughout the crate.

use std::ops::{Add, Mul, Neg, Sub};

/// A point (or vector) in R^3.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ZERO: Point3 = Point3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Point3) -> Point3 {
        Point3 {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    #[inline]
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }

    pub fn centroid(pts: &[Point3]) -> Point3 {
        let mut s = Point3::ZERO;
        for &p in pts {
            s = s + p;
        }
        s * (1.0 / pts.len() as f64)
    }
}

impl Add for Point3 {
    type Output = Point3;
    #[inline]
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    #[inline]
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    #[inline]
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    #[inline]
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// Determinant of the 3x3 matrix with columns `u`, `v`, `w`.
#[inline]
pub fn det3(u: Point3, v: Point3, w: Point3) -> f64 {
    u.cross(v).dot(w)
}

/// Six times the signed volume of tetrahedron `abcd`; positive when `d` lies
/// on the side of `abc` that its counter-clockwise normal points to.
#[inline]
pub fn orient3d(a: Point3, b: Point3, c: Point3, d: Point3) -> f64 {
    det3(b - a, c - a, d - a)
}

pub fn tet_volume(a: Point3, b: Point3, c: Point3, d: Point3) -> f64 {
    orient3d(a, b, c, d) / 6.0
}

/// Column-major 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3 {
    pub cols: [Point3; 3],
}

impl Mat3 {
    pub fn from_cols(a: Point3, b: Point3, c: Point3) -> Self {
        Mat3 { cols: [a, b, c] }
    }

    pub fn det(&self) -> f64 {
        det3(self.cols[0], self.cols[1], self.cols[2])
    }

    pub fn frobenius2(&self) -> f64 {
        self.cols.iter().map(|c| c.norm2()).sum()
    }

    pub fn row(&self, i: usize) -> Point3 {
        let g = |c: Point3| c.to_array()[i];
        Point3::new(g(self.cols[0]), g(self.cols[1]), g(self.cols[2]))
    }

    pub fn mul(&self, o: &Mat3) -> Mat3 {
        let col = |c: Point3| self.cols[0] * c.x + self.cols[1] * c.y + self.cols[2] * c.z;
        Mat3::from_cols(col(o.cols[0]), col(o.cols[1]), col(o.cols[2]))
    }

    pub fn mul_vec(&self, v: Point3) -> Point3 {
        self.cols[0] * v.x + self.cols[1] * v.y + self.cols[2] * v.z
    }

    pub fn inverse(&self) -> Option<Mat3> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let [a, b, c] = self.cols;
        // rows of the inverse are the cross products of column pairs
        let r0 = b.cross(c) * (1.0 / d);
        let r1 = c.cross(a) * (1.0 / d);
        let r2 = a.cross(b) * (1.0 / d);
        Some(Mat3::from_cols(
            Point3::new(r0.x, r1.x, r2.x),
            Point3::new(r0.y, r1.y, r2.y),
            Point3::new(r0.z, r1.z, r2.z),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = Mat3::from_cols(
            Point3::new(2.0, 0.5, 0.1),
            Point3::new(-0.3, 1.0, 0.2),
            Point3::new(0.0, 0.4, 3.0),
        );
        let inv = m.inverse().unwrap();
        let id = m.mul(&inv);
        for (i, c) in id.cols.iter().enumerate() {
            let e = c.to_array();
            for (j, v) in e.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn orientation_of_unit_tet() {
        let o = Point3::ZERO;
        let v = orient3d(
            o,
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        );
        assert_eq!(v, 1.0);
    }
}
