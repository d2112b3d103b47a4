use hexcomb::fixtures;
use hexcomb::mesh::{save_msh, TetMesh};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn hexcomb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hexcomb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_mesh(dir: &TempDir, name: &str, mesh: &TetMesh) -> String {
    let path = dir.path().join(name);
    save_msh(&path, mesh).unwrap();
    path.to_str().unwrap().to_string()
}

fn out_path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

/// Value after `key` on the report line starting with `key`.
fn field(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key} ")))
        .unwrap_or_else(|| panic!("no `{key}` line in\n{report}"))
        .to_string()
}

fn count(report: &str, kind: &str) -> usize {
    field(report, kind)
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

fn msh_element_types(path: &Path) -> Vec<u32> {
    let text = fs::read_to_string(path).unwrap();
    let body = text
        .split("$Elements\n")
        .nth(1)
        .unwrap()
        .split("$EndElements")
        .next()
        .unwrap();
    body.lines()
        .skip(1)
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn detect_cube_at_several_thresholds() {
    let dir = TempDir::new().unwrap();
    let cube = write_mesh(&dir, "cube.msh", &fixtures::cube_5tet());
    for q in ["0", "0.99"] {
        let o = hexcomb(&["detect", &cube, "--qmin", q]);
        assert!(o.status.success(), "{o:?}");
        let r = stdout(&o);
        assert_eq!(count(&r, "hex"), 1, "{r}");
        assert_eq!(field(&r, "vertices"), "8 tetrahedra 5");
    }
    let o = hexcomb(&["detect", &cube, "--qmin", "1.0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn detect_kinds_filter() {
    let dir = TempDir::new().unwrap();
    let prism = write_mesh(&dir, "prism.msh", &fixtures::prism_3tet());
    let o = hexcomb(&["detect", &prism, "--kinds", "prism"]);
    let r = stdout(&o);
    assert_eq!(count(&r, "prism"), 1);
    assert!(!r.lines().any(|l| l.starts_with("hex ")));
    let o = hexcomb(&["detect", &prism, "--kinds", "cube"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reported_counts_match_csv() {
    let dir = TempDir::new().unwrap();
    let mesh = write_mesh(&dir, "grid.msh", &fixtures::kuhn_grid([3, 2, 2], 0.15, 3));
    let csv = out_path(&dir, "cells.csv");
    let o = hexcomb(&["detect", &mesh, "--out", csv.to_str().unwrap()]);
    assert!(o.status.success());
    let r = stdout(&o);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,vertices,quality,interior_tets"));
    let rows: Vec<&str> = lines.collect();
    for kind in ["hex", "prism", "pyramid"] {
        let n = rows
            .iter()
            .filter(|l| l.starts_with(&format!("{kind},")))
            .count();
        assert_eq!(n, count(&r, kind), "{kind}");
    }
    assert!(count(&r, "hex") > 0);
}

#[test]
fn compare_fixtures() {
    let dir = TempDir::new().unwrap();
    let centroid = write_mesh(&dir, "c.msh", &fixtures::cube_with_centroid());
    let r = stdout(&hexcomb(&["compare", &centroid]));
    assert!(
        r.contains("ours,meshkat,botella_sokolov,yamakawa\n1,0,0,0\n"),
        "{r}"
    );
    let tet = write_mesh(&dir, "t.msh", &fixtures::single_tet());
    let csv = out_path(&dir, "cmp.csv");
    let o = hexcomb(&["compare", &tet, "--out", csv.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(
        fs::read_to_string(&csv).unwrap(),
        "ours,meshkat,botella_sokolov,yamakawa\n0,0,0,0\n"
    );
}

#[test]
fn select_fixtures() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("cube", fixtures::cube_5tet(), [1, 0, 0, 0]),
        ("two", fixtures::two_cubes(), [2, 0, 0, 0]),
        ("tet", fixtures::single_tet(), [0, 0, 0, 1]),
    ];
    for (name, mesh, want) in cases {
        let input = write_mesh(&dir, &format!("{name}.msh"), &mesh);
        let msh = out_path(&dir, &format!("{name}_out.msh"));
        let o = hexcomb(&["select", &input, "--out", msh.to_str().unwrap()]);
        assert!(o.status.success(), "{o:?}");
        let r = stdout(&o);
        let body = r.split("selected count volume_fraction\n").nth(1).unwrap();
        let got: Vec<usize> = ["hex", "prism", "pyramid", "tet"]
            .iter()
            .map(|k| count(body, k))
            .collect();
        assert_eq!(got, want, "{name}\n{r}");
        let types = msh_element_types(&msh);
        for (ty, n) in [(5, want[0]), (6, want[1]), (7, want[2]), (4, want[3])] {
            assert_eq!(
                types.iter().filter(|&&t| t == ty).count(),
                n,
                "{name} type {ty}"
            );
        }
    }
}

#[test]
fn thread_count_does_not_change_outputs() {
    let dir = TempDir::new().unwrap();
    let mesh = write_mesh(
        &dir,
        "grid.msh",
        &fixtures::five_tet_grid([3, 3, 2], 0.12, 4),
    );
    let mut csvs = Vec::new();
    let mut mshs = Vec::new();
    for t in ["1", "4"] {
        let csv = out_path(&dir, &format!("cells{t}.csv"));
        let msh = out_path(&dir, &format!("mixed{t}.msh"));
        let (csv_arg, msh_arg) = (csv.to_str().unwrap(), msh.to_str().unwrap());
        let detect = hexcomb(&["detect", &mesh, "--out", csv_arg, "--threads", t]);
        assert!(detect.status.success());
        let select = hexcomb(&["select", &mesh, "--out", msh_arg, "--threads", t]);
        assert!(select.status.success());
        csvs.push(fs::read(&csv).unwrap());
        mshs.push(fs::read(&msh).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
    assert_eq!(mshs[0], mshs[1]);
}

#[test]
fn oracle_passes_and_catches_faults() {
    let o = hexcomb(&[
        "oracle",
        "--max-verts",
        "8",
        "--trials",
        "10",
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = stdout(&o);
    assert!(r.starts_with("seed 3\n"));
    let o = hexcomb(&[
        "oracle",
        "--max-verts",
        "12",
        "--trials",
        "10",
        "--inject-fault",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stdout(&o).contains("first differing key"));
    let o = hexcomb(&["oracle", "--max-verts", "7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn input_errors() {
    let dir = TempDir::new().unwrap();
    let missing = out_path(&dir, "missing.msh");
    let o = hexcomb(&["detect", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    let garbage = out_path(&dir, "garbage.msh");
    fs::write(&garbage, "not a mesh\n").unwrap();
    let o = hexcomb(&["select", garbage.to_str().unwrap(), "--out", "x.msh"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(hexcomb(&[]).status.code(), Some(2));
}
