#![allow(dead_code)]

use hexcomb::cell::{CellKind, PotentialCell};
use hexcomb::detect::{detect, SearchConfig};
use hexcomb::fixtures;
use hexcomb::mesh::{AdjacencyIndex, TetMesh};
use hexcomb::quality::MinQuality;

/// Named fixtures with known content.
pub fn fixture_meshes() -> Vec<(&'static str, TetMesh)> {
    vec![
        ("cube_5tet", fixtures::cube_5tet()),
        ("cube_with_centroid", fixtures::cube_with_centroid()),
        ("cube_with_sliver", fixtures::cube_with_sliver()),
        ("prism_3tet", fixtures::prism_3tet()),
        ("glued_tets", fixtures::glued_tets()),
        ("single_tet", fixtures::single_tet()),
        ("octahedron", fixtures::octahedron()),
        ("two_cubes", fixtures::two_cubes()),
        ("kuhn_3x2x2", fixtures::kuhn_grid([3, 2, 2], 0.15, 3)),
        (
            "five_tet_3x3x2",
            fixtures::five_tet_grid([3, 3, 2], 0.12, 4),
        ),
    ]
}

/// Seeded Delaunay meshes of a jittered grid plus random points; at most
/// `max_verts` vertices each.
pub fn random_meshes(count: usize, max_verts: usize, seed: u64) -> Vec<(String, TetMesh)> {
    let mut out = Vec::new();
    let mut s = seed;
    while out.len() < count {
        s += 1;
        let grid = match s % 3 {
            0 => [1, 1, 1],
            1 => [2, 1, 1],
            _ => [2, 2, 1],
        };
        let base = (grid[0] + 1) * (grid[1] + 1) * (grid[2] + 1);
        if base > max_verts {
            continue;
        }
        let extra = (s as usize * 7) % (max_verts - base + 1);
        if let Some(m) = fixtures::random_point_mesh(grid, 0.15, extra, s) {
            out.push((format!("random seed {s}"), fixtures::tag_box_faces(&m)));
        }
    }
    out
}

pub fn config(qmin: f64) -> SearchConfig {
    SearchConfig::default().with_min_quality(MinQuality::new(qmin).unwrap())
}

pub fn cells(mesh: &TetMesh, config: &SearchConfig) -> Vec<PotentialCell> {
    let idx = AdjacencyIndex::build(mesh).unwrap();
    detect(mesh, &idx, config, &CellKind::COMBINED)
        .all()
        .cloned()
        .collect()
}
