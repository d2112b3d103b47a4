//! Small meshes with known content, and generators for jittered grids and
//! random point sets.

use crate::geom::{orient3d, Point3};
use crate::mesh::{AdjacencyIndex, BoundaryTri, TetMesh, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Unit cube corners in hexahedron template order.
pub fn cube_points() -> Vec<Point3> {
    crate::cell::template(crate::cell::CellKind::Hexahedron)
        .ideal
        .clone()
}

/// The five-tetrahedron triangulation with the regular tetrahedron `acfh`.
pub const CUBE_5TET: [[VertexId; 4]; 5] = [
    [0, 2, 5, 7],
    [1, 0, 2, 5],
    [3, 0, 2, 7],
    [4, 0, 5, 7],
    [6, 2, 5, 7],
];

/// The mirror five-tetrahedron triangulation around `bdeg`.
pub const CUBE_5TET_ALT: [[VertexId; 4]; 5] = [
    [1, 3, 4, 6],
    [0, 1, 3, 4],
    [2, 1, 3, 6],
    [5, 1, 4, 6],
    [7, 3, 4, 6],
];

/// Six tetrahedra around the diameter `ag`.
pub const CUBE_6TET: [[VertexId; 4]; 6] = [
    [0, 1, 2, 6],
    [0, 2, 3, 6],
    [0, 3, 7, 6],
    [0, 7, 4, 6],
    [0, 4, 5, 6],
    [0, 5, 1, 6],
];

pub fn cube_5tet() -> TetMesh {
    TetMesh::from_tets(cube_points(), CUBE_5TET.to_vec()).expect("valid fixture")
}

/// Unit cube with its centroid, split into 12 tetrahedra (two per face).
pub fn cube_with_centroid() -> TetMesh {
    let mut pts = cube_points();
    pts.push(Point3::new(0.5, 0.5, 0.5));
    let faces: [[VertexId; 4]; 6] = [
        [0, 1, 2, 3],
        [4, 5, 6, 7],
        [0, 1, 5, 4],
        [3, 2, 6, 7],
        [1, 2, 6, 5],
        [0, 3, 7, 4],
    ];
    let mut tets = Vec::new();
    for [p, q, r, s] in faces {
        tets.push([p, q, r, 8]);
        tets.push([p, r, s, 8]);
    }
    TetMesh::from_tets(pts, tets).expect("valid fixture")
}

/// Five-tetrahedron cube whose face `abcd` is folded upward along `ac`, with
/// the sliver `abcd` below it. The sliver has all four vertices on a quad face.
pub fn cube_with_sliver() -> TetMesh {
    let mut pts = cube_points();
    pts[2] = Point3::new(1.0, 1.0, 0.05);
    let mut tets = CUBE_5TET.to_vec();
    tets.push([0, 1, 2, 3]);
    TetMesh::from_tets(pts, tets).expect("valid fixture")
}

/// Ideal prism split into three tetrahedra.
pub fn prism_3tet() -> TetMesh {
    let pts = crate::cell::template(crate::cell::CellKind::Prism)
        .ideal
        .clone();
    TetMesh::from_tets(pts, vec![[0, 1, 2, 3], [1, 2, 3, 4], [2, 3, 4, 5]]).expect("valid fixture")
}

/// Two regular tetrahedra sharing facet `xyz` (vertices 0, 1, 2); apexes 3, 4.
pub fn glued_tets() -> TetMesh {
    let s3 = 3f64.sqrt();
    let h = (2.0f64 / 3.0).sqrt();
    let c = Point3::new(0.5, s3 / 6.0, 0.0);
    let pts = vec![
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(0.5, s3 / 2.0, 0.0),
        c + Point3::new(0.0, 0.0, h),
        c - Point3::new(0.0, 0.0, h),
    ];
    TetMesh::from_tets(pts, vec![[0, 1, 2, 3], [0, 1, 2, 4]]).expect("valid fixture")
}

pub fn single_tet() -> TetMesh {
    let pts = vec![
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(0.0, 1.0, 0.0),
        Point3::new(0.0, 0.0, 1.0),
    ];
    TetMesh::from_tets(pts, vec![[0, 1, 2, 3]]).expect("valid fixture")
}

/// Octahedron split into four tetrahedra around its vertical axis. The
/// equator has four edges but no triangle spanning it.
pub fn octahedron() -> TetMesh {
    let pts = vec![
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(0.0, 1.0, 0.0),
        Point3::new(-1.0, 0.0, 0.0),
        Point3::new(0.0, -1.0, 0.0),
        Point3::new(0.0, 0.0, 1.0),
        Point3::new(0.0, 0.0, -1.0),
    ];
    let tets = (0..4).map(|i| [i, (i + 1) % 4, 4, 5]).collect();
    TetMesh::from_tets(pts, tets).expect("valid fixture")
}

/// The planar triangulation used for the 2D quad search: points 1..5 of the
/// picture are indices 0..4.
pub fn planar_five() -> (Vec<[f64; 2]>, Vec<[VertexId; 3]>) {
    let pts = vec![[0.0, 0.0], [2.0, 0.0], [1.0, 0.8], [2.0, 2.0], [0.0, 2.0]];
    // triangles 123, 234, 345, 135
    let tris = vec![[0, 1, 2], [1, 2, 3], [2, 3, 4], [0, 2, 4]];
    (pts, tris)
}

fn grid_points(n: [usize; 3], jitter: f64, seed: u64) -> Vec<Point3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity((n[0] + 1) * (n[1] + 1) * (n[2] + 1));
    for k in 0..=n[2] {
        for j in 0..=n[1] {
            for i in 0..=n[0] {
                let mut d = [0.0; 3];
                if jitter > 0.0 {
                    for x in &mut d {
                        *x = rng.random_range(-jitter..=jitter);
                    }
                }
                pts.push(Point3::new(
                    i as f64 + d[0],
                    j as f64 + d[1],
                    k as f64 + d[2],
                ));
            }
        }
    }
    pts
}

fn cube_corners(n: [usize; 3], i: usize, j: usize, k: usize) -> [VertexId; 8] {
    let id = |i: usize, j: usize, k: usize| ((k * (n[1] + 1) + j) * (n[0] + 1) + i) as VertexId;
    [
        id(i, j, k),
        id(i + 1, j, k),
        id(i + 1, j + 1, k),
        id(i, j + 1, k),
        id(i, j, k + 1),
        id(i + 1, j, k + 1),
        id(i + 1, j + 1, k + 1),
        id(i, j + 1, k + 1),
    ]
}

fn grid_mesh(
    n: [usize; 3],
    jitter: f64,
    seed: u64,
    split: impl Fn([usize; 3]) -> &'static [[VertexId; 4]],
) -> TetMesh {
    let pts = grid_points(n, jitter, seed);
    let mut tets = Vec::new();
    for k in 0..n[2] {
        for j in 0..n[1] {
            for i in 0..n[0] {
                let c = cube_corners(n, i, j, k);
                for t in split([i, j, k]) {
                    tets.push(t.map(|l| c[l as usize]));
                }
            }
        }
    }
    TetMesh::from_tets(pts, tets).expect("jitter keeps grid tetrahedra positive")
}

/// Grid of `n` unit cubes, each split into six tetrahedra around its
/// diameter; vertices moved by up to `jitter` per coordinate.
pub fn kuhn_grid(n: [usize; 3], jitter: f64, seed: u64) -> TetMesh {
    grid_mesh(n, jitter, seed, |_| &CUBE_6TET)
}

/// Grid of cubes split into five tetrahedra, alternating the two
/// triangulations so that shared faces match.
pub fn five_tet_grid(n: [usize; 3], jitter: f64, seed: u64) -> TetMesh {
    grid_mesh(n, jitter, seed, |[i, j, k]| {
        if (i + j + k) % 2 == 0 {
            &CUBE_5TET
        } else {
            &CUBE_5TET_ALT
        }
    })
}

/// Two unit cubes side by side, five tetrahedra each, the shared face split
/// by the same diagonal from both sides.
pub fn two_cubes() -> TetMesh {
    five_tet_grid([2, 1, 1], 0.0, 0)
}

/// Grid points moved by up to `jitter`, with optional extra uniform points,
/// tetrahedralized by [`delaunay`].
pub fn random_point_mesh(n: [usize; 3], jitter: f64, extra: usize, seed: u64) -> Option<TetMesh> {
    let mut pts = grid_points(n, jitter, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    for _ in 0..extra {
        pts.push(Point3::new(
            rng.random_range(0.0..n[0] as f64),
            rng.random_range(0.0..n[1] as f64),
            rng.random_range(0.0..n[2] as f64),
        ));
    }
    let tets = delaunay(&pts);
    let mesh = TetMesh::from_tets(pts, tets).ok()?;
    // reject inconsistent results from near-degenerate input
    AdjacencyIndex::build(&mesh).ok()?;
    Some(mesh)
}

fn insphere(a: Point3, b: Point3, c: Point3, d: Point3, e: Point3) -> f64 {
    let rows = [a - e, b - e, c - e, d - e];
    let m: Vec<[f64; 4]> = rows.iter().map(|r| [r.x, r.y, r.z, r.norm2()]).collect();
    let det3 = |r0: [f64; 3], r1: [f64; 3], r2: [f64; 3]| {
        r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
            + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
    };
    let minor = |skip: usize| {
        let rows: Vec<[f64; 3]> = (0..4)
            .filter(|&i| i != skip)
            .map(|i| [m[i][0], m[i][1], m[i][2]])
            .collect();
        det3(rows[0], rows[1], rows[2])
    };
    // expansion along the last column, negated so that inside is positive
    // for positively oriented abcd
    m[0][3] * minor(0) - m[1][3] * minor(1) + m[2][3] * minor(2) - m[3][3] * minor(3)
}

/// Delaunay tetrahedra of points in general position, by testing every
/// 4-subset against every other point. Quartic; meant for a few dozen points.
pub fn delaunay(pts: &[Point3]) -> Vec<[VertexId; 4]> {
    let n = pts.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let o = orient3d(pts[a], pts[b], pts[c], pts[d]);
                    if o.abs() < 1e-12 {
                        continue;
                    }
                    let s = o.signum();
                    let empty = (0..n).all(|e| {
                        e == a
                            || e == b
                            || e == c
                            || e == d
                            || insphere(pts[a], pts[b], pts[c], pts[d], pts[e]) * s < 0.0
                    });
                    if empty {
                        out.push([a as VertexId, b as VertexId, c as VertexId, d as VertexId]);
                    }
                }
            }
        }
    }
    out
}

/// Same geometry with boundary triangles tagged by the coordinate plane they
/// lie in (1..=6 for x=min, x=max, y=min, ...). Triangles off those planes
/// keep tag 0.
pub fn tag_box_faces(mesh: &TetMesh) -> TetMesh {
    let lo_hi = |f: fn(&Point3) -> f64| {
        let v: Vec<f64> = mesh.vertices().iter().map(f).collect();
        (
            v.iter().copied().fold(f64::INFINITY, f64::min),
            v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    };
    let axes: [fn(&Point3) -> f64; 3] = [|p| p.x, |p| p.y, |p| p.z];
    let ranges: Vec<(f64, f64)> = axes.iter().map(|&f| lo_hi(f)).collect();
    let tris = mesh
        .boundary_tris()
        .iter()
        .map(|b| {
            let mut tag = 0;
            for (ax, f) in axes.iter().enumerate() {
                let vals = b.verts.map(|v| f(&mesh.point(v)));
                if vals.iter().all(|&x| (x - ranges[ax].0).abs() < 1e-12) {
                    tag = 1 + 2 * ax as i32;
                } else if vals.iter().all(|&x| (x - ranges[ax].1).abs() < 1e-12) {
                    tag = 2 + 2 * ax as i32;
                }
            }
            BoundaryTri {
                verts: b.verts,
                tag,
            }
        })
        .collect();
    TetMesh::with_node_ids(
        mesh.vertices().to_vec(),
        mesh.node_ids().to_vec(),
        mesh.tets().to_vec(),
        mesh.tet_regions().to_vec(),
        tris,
    )
    .expect("same mesh")
}
