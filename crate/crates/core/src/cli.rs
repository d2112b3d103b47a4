//! Command-line front end.
//!
//! Exit codes: 0 success, 1 unreadable input or failed write, 2 bad usage,
//! 3 oracle mismatch.

use crate::baseline::{compare_counts, Comparison};
use crate::cell::{CellKind, PotentialCell};
use crate::detect::oracle::{brute_force_cells, diff_keys};
use crate::detect::{detect, find_hexes, find_prisms, find_pyramids, Detection, SearchConfig};
use crate::fixtures::{random_point_mesh, tag_box_faces};
use crate::format::g9;
use crate::mesh::{load_msh, AdjacencyIndex, MeshError, TetMesh};
use crate::quality::MinQuality;
use crate::select::{assemble, select_cells, write_mixed_msh, HexDominantMesh};
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// Largest vertex count accepted by `oracle --max-verts`.
pub const ORACLE_MAX_VERTS: usize = 30;
/// Smallest vertex count accepted by `oracle --max-verts`.
pub const ORACLE_MIN_VERTS: usize = 8;

const CSV_HELP: &str = "\
CSV columns: kind,vertices,quality,interior_tets
  kind           hex, prism or pyramid
  vertices       node ids in canonical template order, space separated
  quality        minimum scaled Jacobian, 9 significant digits
  interior_tets  number of tetrahedra filling the cell";

#[derive(Debug, Parser)]
#[command(
    name = "hexcomb",
    version,
    about = "Find the hexahedra, prisms and pyramids formed by tetrahedra of a mesh"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Keep cells whose quality exceeds this threshold, in [0, 1).
    #[arg(long, default_value = "0", value_parser = parse_qmin)]
    qmin: MinQuality,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Skip the certified validity test and use the corner quality.
    #[arg(long)]
    no_validity: bool,
    /// Disable branch pruning on the running quality bound.
    #[arg(long)]
    no_pruning: bool,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            min_quality: self.qmin,
            enforce_validity: !self.no_validity,
            pruning: !self.no_pruning,
            threads: self.threads,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect cells and write them as CSV.
    #[command(after_help = CSV_HELP)]
    Detect {
        input: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Cell kinds to search for.
        #[arg(long, value_delimiter = ',', default_value = "hex,prism,pyr", value_parser = parse_kind)]
        kinds: Vec<CellKind>,
        /// Output CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count detected hexahedra that pattern-based methods would also find.
    #[command(after_help = "CSV columns: ours,meshkat,botella_sokolov,yamakawa")]
    Compare {
        input: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Output CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedily select compatible cells and write the mixed mesh.
    Select {
        input: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Output MSH 2.2 file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the searches against exhaustive enumeration on random meshes.
    Oracle {
        /// Vertices per random mesh, 8 to 30.
        #[arg(long, default_value_t = 12, value_parser = parse_max_verts)]
        max_verts: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Drop one detected cell per trial (negative control).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn parse_qmin(s: &str) -> Result<MinQuality, String> {
    let q: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    MinQuality::new(q).map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> Result<CellKind, String> {
    match s {
        "hex" | "hexes" | "hexahedron" => Ok(CellKind::Hexahedron),
        "prism" | "prisms" => Ok(CellKind::Prism),
        "pyr" | "pyramid" | "pyramids" => Ok(CellKind::Pyramid),
        _ => Err(format!(
            "unknown cell kind '{s}' (expected hex, prism or pyr)"
        )),
    }
}

fn parse_max_verts(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("'{s}' is not a count"))?;
    if (ORACLE_MIN_VERTS..=ORACLE_MAX_VERTS).contains(&n) {
        Ok(n)
    } else {
        Err(format!(
            "must be between {ORACLE_MIN_VERTS} and {ORACLE_MAX_VERTS}"
        ))
    }
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{path}: {source}")]
    Load { path: PathBuf, source: MeshError },
    #[error("{path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Io(#[from] io::Error),
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Detect {
            input,
            search,
            kinds,
            out: csv,
        } => cmd_detect(&input, &search, &kinds, csv.as_deref(), out),
        Command::Compare {
            input,
            search,
            out: csv,
        } => cmd_compare(&input, &search, csv.as_deref(), out),
        Command::Select {
            input,
            search,
            out: msh,
        } => cmd_select(&input, &search, &msh, out),
        Command::Oracle {
            max_verts,
            trials,
            seed,
            threads,
            inject_fault,
        } => cmd_oracle(max_verts, trials, seed, threads, inject_fault, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

struct Loaded {
    mesh: TetMesh,
    index: AdjacencyIndex,
    seconds: f64,
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let t = Instant::now();
    let fail = |source| Failure::Load {
        path: path.to_path_buf(),
        source,
    };
    let mesh = load_msh(path).map_err(fail)?;
    let index = AdjacencyIndex::build(&mesh).map_err(fail)?;
    Ok(Loaded {
        mesh,
        index,
        seconds: t.elapsed().as_secs_f64(),
    })
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| Failure::Write {
            path: path.to_path_buf(),
            source,
        })
}

fn thread_count(requested: usize) -> usize {
    if requested == 0 {
        rayon::current_num_threads()
    } else {
        requested
    }
}

fn report_header(out: &mut dyn Write, input: &Path, l: &Loaded, s: &SearchArgs) -> io::Result<()> {
    writeln!(out, "input {}", input.display())?;
    writeln!(
        out,
        "vertices {} tetrahedra {}",
        l.mesh.num_vertices(),
        l.mesh.num_tets()
    )?;
    writeln!(out, "qmin {}", g9(s.qmin.value()))?;
    writeln!(out, "threads {}", thread_count(s.threads))?;
    writeln!(out, "load_seconds {}", g9(l.seconds))
}

fn report_detection(out: &mut dyn Write, d: &Detection, kinds: &[CellKind]) -> io::Result<()> {
    writeln!(out, "kind count seconds")?;
    for (kind, secs) in [
        (CellKind::Hexahedron, d.hex_time),
        (CellKind::Prism, d.prism_time),
        (CellKind::Pyramid, d.pyramid_time),
    ] {
        if kinds.contains(&kind) {
            writeln!(
                out,
                "{} {} {}",
                kind.name(),
                d.cells(kind).len(),
                g9(secs.as_secs_f64())
            )?;
        }
    }
    Ok(())
}

/// One CSV row per cell, in detection order.
pub fn write_cells_csv(
    mut w: impl Write,
    mesh: &TetMesh,
    cells: &[PotentialCell],
) -> io::Result<()> {
    writeln!(w, "kind,vertices,quality,interior_tets")?;
    for c in cells {
        let verts: Vec<String> = c
            .key()
            .verts()
            .iter()
            .map(|&v| mesh.node_id(v).to_string())
            .collect();
        writeln!(
            w,
            "{},{},{},{}",
            c.kind.name(),
            verts.join(" "),
            g9(c.quality),
            c.interior_tets.len()
        )?;
    }
    w.flush()
}

fn cmd_detect(
    input: &Path,
    search: &SearchArgs,
    kinds: &[CellKind],
    csv: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let l = load(input)?;
    let d = detect(&l.mesh, &l.index, &search.config(), kinds);
    report_header(out, input, &l, search)?;
    report_detection(out, &d, kinds)?;
    if let Some(path) = csv {
        let cells: Vec<PotentialCell> = d.all().cloned().collect();
        write_cells_csv(create(path)?, &l.mesh, &cells).map_err(|source| Failure::Write {
            path: path.to_path_buf(),
            source,
        })?;
        writeln!(out, "cells {}", path.display())?;
    }
    Ok(EXIT_OK)
}

fn write_comparison(mut w: impl Write, c: &Comparison) -> io::Result<()> {
    writeln!(w, "{}", Comparison::HEADER)?;
    writeln!(w, "{}", c.csv_row())?;
    w.flush()
}

fn cmd_compare(
    input: &Path,
    search: &SearchArgs,
    csv: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let l = load(input)?;
    let kinds = [CellKind::Hexahedron];
    let d = detect(&l.mesh, &l.index, &search.config(), &kinds);
    let t = Instant::now();
    let c = compare_counts(&d.hexes, &l.mesh);
    report_header(out, input, &l, search)?;
    report_detection(out, &d, &kinds)?;
    writeln!(out, "classify_seconds {}", g9(t.elapsed().as_secs_f64()))?;
    write_comparison(&mut *out, &c)?;
    if let Some(path) = csv {
        write_comparison(create(path)?, &c).map_err(|source| Failure::Write {
            path: path.to_path_buf(),
            source,
        })?;
    }
    Ok(EXIT_OK)
}

fn report_selection(out: &mut dyn Write, hd: &HexDominantMesh) -> io::Result<()> {
    writeln!(out, "selected count volume_fraction")?;
    for kind in [
        CellKind::Hexahedron,
        CellKind::Prism,
        CellKind::Pyramid,
        CellKind::Tetrahedron,
    ] {
        let s = hd.stats(kind);
        writeln!(out, "{} {} {}", kind.name(), s.count, g9(s.fraction))?;
    }
    writeln!(out, "nonconforming_quads {}", hd.nonconforming_quads)
}

fn cmd_select(
    input: &Path,
    search: &SearchArgs,
    msh: &Path,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let l = load(input)?;
    let d = detect(&l.mesh, &l.index, &search.config(), &CellKind::COMBINED);
    let cells: Vec<PotentialCell> = d.all().cloned().collect();
    let t = Instant::now();
    let chosen = select_cells(&cells);
    let select_secs = t.elapsed().as_secs_f64();
    let hd = assemble(&l.mesh, &l.index, &chosen);
    report_header(out, input, &l, search)?;
    report_detection(out, &d, &CellKind::COMBINED)?;
    writeln!(out, "select_seconds {}", g9(select_secs))?;
    report_selection(out, &hd)?;
    write_mixed_msh(create(msh)?, &l.mesh, &hd).map_err(|source| Failure::Write {
        path: msh.to_path_buf(),
        source,
    })?;
    writeln!(out, "mesh {}", msh.display())?;
    Ok(EXIT_OK)
}

/// Random mesh of about `n` vertices: jittered grid points plus uniform ones.
fn oracle_mesh(n: usize, seed: u64) -> Option<TetMesh> {
    let grid = if n >= 18 {
        [2, 2, 1]
    } else if n >= 12 {
        [2, 1, 1]
    } else {
        [1, 1, 1]
    };
    let base = (grid[0] + 1) * (grid[1] + 1) * (grid[2] + 1);
    random_point_mesh(grid, 0.15, n - base, seed).map(|m| tag_box_faces(&m))
}

fn cmd_oracle(
    max_verts: usize,
    trials: usize,
    seed: u64,
    threads: usize,
    inject_fault: bool,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    writeln!(out, "seed {seed}")?;
    let config = SearchConfig::default().with_threads(threads);
    let mut totals = [0usize; 3];
    let mut run = 0;
    let mut attempt = 0u64;
    while run < trials {
        let trial_seed = seed.wrapping_mul(1_000_003).wrapping_add(attempt);
        attempt += 1;
        let n = ORACLE_MIN_VERTS + (trial_seed as usize % (max_verts - ORACLE_MIN_VERTS + 1));
        let Some(mesh) = oracle_mesh(n, trial_seed) else {
            continue;
        };
        let Ok(index) = AdjacencyIndex::build(&mesh) else {
            continue;
        };
        run += 1;
        let mut found = [
            find_hexes(&mesh, &index, &config),
            find_prisms(&mesh, &index, &config),
            find_pyramids(&mesh, &index, &config),
        ];
        if inject_fault {
            if let Some(cells) = found.iter_mut().find(|c| !c.is_empty()) {
                cells.remove(0);
            }
        }
        for (k, kind) in CellKind::COMBINED.into_iter().enumerate() {
            let reference = brute_force_cells(&mesh, &index, &config, kind);
            let diff = diff_keys(&found[k], &reference);
            if !diff.is_empty() {
                writeln!(
                    out,
                    "mismatch trial {run} seed {trial_seed} vertices {} kind {}",
                    mesh.num_vertices(),
                    kind.name()
                )?;
                writeln!(out, "only in search: {:?}", diff.only_left)?;
                writeln!(out, "only in enumeration: {:?}", diff.only_right)?;
                let first = diff
                    .only_left
                    .iter()
                    .chain(&diff.only_right)
                    .min()
                    .expect("non-empty diff");
                writeln!(out, "first differing key {first:?}")?;
                return Ok(EXIT_MISMATCH);
            }
            totals[k] += reference.len();
        }
    }
    writeln!(
        out,
        "trials {trials} hexes {} prisms {} pyramids {}",
        totals[0], totals[1], totals[2]
    )?;
    writeln!(out, "pass")?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("hexcomb").chain(args.iter().copied()),
            &mut o,
            &mut e,
        );
        (
            code,
            String::from_utf8(o).unwrap(),
            String::from_utf8(e).unwrap(),
        )
    }

    #[test]
    fn qmin_must_be_below_one() {
        assert_eq!(run_str(&["detect", "x.msh", "--qmin", "1.0"]).0, EXIT_USAGE);
        assert_eq!(
            run_str(&["detect", "x.msh", "--qmin", "-0.1"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_str(&["detect", "x.msh", "--kinds", "tet"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_str(&["oracle", "--max-verts", "31"]).0, EXIT_USAGE);
    }

    #[test]
    fn missing_file_is_an_input_error() {
        let (code, _, err) = run_str(&["detect", "/nonexistent/mesh.msh"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("mesh.msh"));
    }

    #[test]
    fn help_documents_the_columns() {
        let (code, out, _) = run_str(&["detect", "--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("kind,vertices,quality,interior_tets"));
    }

    #[test]
    fn oracle_small() {
        let (code, out, _) = run_str(&[
            "oracle",
            "--max-verts",
            "10",
            "--trials",
            "3",
            "--seed",
            "5",
        ]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.starts_with("seed 5\n"));
    }
}
