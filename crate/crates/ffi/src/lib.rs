//! C interface to the cell detection, comparison and selection.
//!
//! Meshes and detection results are opaque handles released with their
//! `_free` function. Every fallible call returns an [`HcStatus`]; on failure
//! the message is available from [`hc_last_error`] on the same thread.

use hexcomb::baseline::compare_counts;
use hexcomb::cell::{CellKind, PotentialCell};
use hexcomb::detect::{detect, SearchConfig};
use hexcomb::geom::Point3;
use hexcomb::mesh::{load_msh, AdjacencyIndex, TetMesh};
use hexcomb::quality::MinQuality;
use hexcomb::select::{assemble, select_cells, write_mixed_msh};
use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::fs::File;
use std::io::BufWriter;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    LoadFailed = 3,
    WriteFailed = 4,
    OutOfRange = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcKind {
    Hex = 0,
    Prism = 1,
    Pyramid = 2,
}

impl HcKind {
    fn to_core(self) -> CellKind {
        match self {
            HcKind::Hex => CellKind::Hexahedron,
            HcKind::Prism => CellKind::Prism,
            HcKind::Pyramid => CellKind::Pyramid,
        }
    }

    fn from_core(k: CellKind) -> HcKind {
        match k {
            CellKind::Hexahedron => HcKind::Hex,
            CellKind::Prism => HcKind::Prism,
            CellKind::Pyramid | CellKind::Tetrahedron => HcKind::Pyramid,
        }
    }
}

pub const HC_KIND_MASK_HEX: u32 = 1;
pub const HC_KIND_MASK_PRISM: u32 = 2;
pub const HC_KIND_MASK_PYRAMID: u32 = 4;
pub const HC_KIND_MASK_ALL: u32 = 7;

/// Opaque tetrahedral mesh with its adjacency.
pub struct HcMesh {
    mesh: TetMesh,
    index: AdjacencyIndex,
}

/// Opaque detection result: cells of every kind ordered by canonical key.
pub struct HcCells {
    cells: Vec<PotentialCell>,
}

/// One detected cell. `vertices` holds 0-based mesh vertex indices in
/// template order; entries past `num_vertices` are unused.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HcCellInfo {
    pub kind: HcKind,
    pub num_vertices: u32,
    pub vertices: [u32; 8],
    pub quality: f64,
    pub num_interior_tets: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct HcComparison {
    pub ours: usize,
    pub meshkat: usize,
    pub botella_sokolov: usize,
    pub yamakawa: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct HcSelection {
    pub hexes: usize,
    pub prisms: usize,
    pub pyramids: usize,
    pub tets: usize,
    pub nonconforming_quads: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

/// Runs `f`, recording the message of a failure or panic.
fn guard(f: impl FnOnce() -> Result<(), (HcStatus, String)>) -> HcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            HcStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(msg);
            HcStatus::Panic
        }
    }
}

fn null(what: &str) -> (HcStatus, String) {
    (HcStatus::NullArgument, format!("{what} is null"))
}

unsafe fn path_arg(p: *const c_char) -> Result<PathBuf, (HcStatus, String)> {
    if p.is_null() {
        return Err(null("path"));
    }
    let s = CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (HcStatus::InvalidArgument, "path is not UTF-8".to_string()))?;
    Ok(PathBuf::from(s))
}

fn new_mesh(mesh: TetMesh) -> Result<Box<HcMesh>, (HcStatus, String)> {
    let index =
        AdjacencyIndex::build(&mesh).map_err(|e| (HcStatus::InvalidArgument, e.to_string()))?;
    Ok(Box::new(HcMesh { mesh, index }))
}

/// Reads an MSH 2.2 file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_mesh_load(path: *const c_char, out: *mut *mut HcMesh) -> HcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let path = path_arg(path)?;
        let mesh = load_msh(&path)
            .map_err(|e| (HcStatus::LoadFailed, format!("{}: {e}", path.display())))?;
        *out = Box::into_raw(new_mesh(mesh)?);
        Ok(())
    })
}

/// Builds a mesh from `num_points` xyz triples and `num_tets` quadruples of
/// 0-based point indices.
///
/// # Safety
/// `points` must hold `3 * num_points` doubles, `tets` `4 * num_tets`
/// integers, and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hc_mesh_new(
    points: *const f64,
    num_points: usize,
    tets: *const u32,
    num_tets: usize,
    out: *mut *mut HcMesh,
) -> HcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if (points.is_null() && num_points > 0) || (tets.is_null() && num_tets > 0) {
            return Err(null("points or tets"));
        }
        let p = if num_points == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(points, 3 * num_points)
        };
        let t = if num_tets == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(tets, 4 * num_tets)
        };
        let pts = p
            .chunks_exact(3)
            .map(|c| Point3::new(c[0], c[1], c[2]))
            .collect();
        let tets = t
            .chunks_exact(4)
            .map(|c| [c[0], c[1], c[2], c[3]])
            .collect();
        let mesh = TetMesh::from_tets(pts, tets)
            .map_err(|e| (HcStatus::InvalidArgument, e.to_string()))?;
        *out = Box::into_raw(new_mesh(mesh)?);
        Ok(())
    })
}

/// # Safety
/// `mesh` must come from `hc_mesh_load` or `hc_mesh_new`, or be null.
#[no_mangle]
pub unsafe extern "C" fn hc_mesh_free(mesh: *mut HcMesh) {
    if !mesh.is_null() {
        drop(Box::from_raw(mesh));
    }
}

/// # Safety
/// `mesh` must be a valid handle or null (giving 0).
#[no_mangle]
pub unsafe extern "C" fn hc_mesh_num_vertices(mesh: *const HcMesh) -> usize {
    mesh.as_ref().map_or(0, |m| m.mesh.num_vertices())
}

/// # Safety
/// `mesh` must be a valid handle or null (giving 0).
#[no_mangle]
pub unsafe extern "C" fn hc_mesh_num_tets(mesh: *const HcMesh) -> usize {
    mesh.as_ref().map_or(0, |m| m.mesh.num_tets())
}

/// Detects the cells of the kinds in `kinds` (a mask of `HC_KIND_MASK_*`)
/// with quality above `qmin`, which must lie in [0, 1). `threads` 0 uses
/// every core.
///
/// # Safety
/// `mesh` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_detect(
    mesh: *const HcMesh,
    qmin: f64,
    kinds: u32,
    threads: u32,
    out: *mut *mut HcCells,
) -> HcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let m = mesh.as_ref().ok_or_else(|| null("mesh"))?;
        let q = MinQuality::new(qmin).map_err(|e| (HcStatus::InvalidArgument, e.to_string()))?;
        if kinds & !HC_KIND_MASK_ALL != 0 {
            return Err((
                HcStatus::InvalidArgument,
                format!("unknown kind mask {kinds:#x}"),
            ));
        }
        let wanted: Vec<CellKind> = [
            (HC_KIND_MASK_HEX, CellKind::Hexahedron),
            (HC_KIND_MASK_PRISM, CellKind::Prism),
            (HC_KIND_MASK_PYRAMID, CellKind::Pyramid),
        ]
        .into_iter()
        .filter(|(bit, _)| kinds & bit != 0)
        .map(|(_, k)| k)
        .collect();
        let config = SearchConfig::default()
            .with_min_quality(q)
            .with_threads(threads as usize);
        let d = detect(&m.mesh, &m.index, &config, &wanted);
        let cells = d.all().cloned().collect();
        *out = Box::into_raw(Box::new(HcCells { cells }));
        Ok(())
    })
}

/// # Safety
/// `cells` must come from `hc_detect`, or be null.
#[no_mangle]
pub unsafe extern "C" fn hc_cells_free(cells: *mut HcCells) {
    if !cells.is_null() {
        drop(Box::from_raw(cells));
    }
}

/// Number of cells of every kind.
///
/// # Safety
/// `cells` must be a valid handle or null (giving 0).
#[no_mangle]
pub unsafe extern "C" fn hc_cells_len(cells: *const HcCells) -> usize {
    cells.as_ref().map_or(0, |c| c.cells.len())
}

/// Number of cells of one kind.
///
/// # Safety
/// `cells` must be a valid handle or null (giving 0).
#[no_mangle]
pub unsafe extern "C" fn hc_cells_count(cells: *const HcCells, kind: HcKind) -> usize {
    let k = kind.to_core();
    cells
        .as_ref()
        .map_or(0, |c| c.cells.iter().filter(|x| x.kind == k).count())
}

/// Cell `i` of the result, `i < hc_cells_len(cells)`.
///
/// # Safety
/// `cells` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_cells_get(
    cells: *const HcCells,
    i: usize,
    out: *mut HcCellInfo,
) -> HcStatus {
    guard(|| {
        let c = cells.as_ref().ok_or_else(|| null("cells"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let cell = c.cells.get(i).ok_or_else(|| {
            (
                HcStatus::OutOfRange,
                format!("cell {i} of {}", c.cells.len()),
            )
        })?;
        let mut vertices = [u32::MAX; 8];
        vertices[..cell.verts.len()].copy_from_slice(&cell.verts);
        *out = HcCellInfo {
            kind: HcKind::from_core(cell.kind),
            num_vertices: cell.verts.len() as u32,
            vertices,
            quality: cell.quality,
            num_interior_tets: cell.interior_tets.len() as u32,
        };
        Ok(())
    })
}

/// Counts the detected hexahedra matched by each pattern-based criterion.
///
/// # Safety
/// All pointers must be valid; `cells` must come from the same mesh.
#[no_mangle]
pub unsafe extern "C" fn hc_compare(
    mesh: *const HcMesh,
    cells: *const HcCells,
    out: *mut HcComparison,
) -> HcStatus {
    guard(|| {
        let m = mesh.as_ref().ok_or_else(|| null("mesh"))?;
        let c = cells.as_ref().ok_or_else(|| null("cells"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let r = compare_counts(&c.cells, &m.mesh);
        *out = HcComparison {
            ours: r.ours,
            meshkat: r.meshkat,
            botella_sokolov: r.botella_sokolov,
            yamakawa: r.yamakawa,
        };
        Ok(())
    })
}

/// Greedily selects compatible cells, writes the mixed mesh to `path` as
/// MSH 2.2 and fills `out` (which may be null) with the counts.
///
/// # Safety
/// `mesh` and `cells` must be valid handles from the same mesh, and `path`
/// a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hc_select_write(
    mesh: *const HcMesh,
    cells: *const HcCells,
    path: *const c_char,
    out: *mut HcSelection,
) -> HcStatus {
    guard(|| {
        let m = mesh.as_ref().ok_or_else(|| null("mesh"))?;
        let c = cells.as_ref().ok_or_else(|| null("cells"))?;
        let path = path_arg(path)?;
        let chosen = select_cells(&c.cells);
        let hd = assemble(&m.mesh, &m.index, &chosen);
        let fail = |e: std::io::Error| (HcStatus::WriteFailed, format!("{}: {e}", path.display()));
        let file = File::create(&path).map_err(fail)?;
        write_mixed_msh(BufWriter::new(file), &m.mesh, &hd).map_err(fail)?;
        if let Some(out) = out.as_mut() {
            *out = HcSelection {
                hexes: hd.hexes.count,
                prisms: hd.prisms.count,
                pyramids: hd.pyramids.count,
                tets: hd.tets.count,
                nonconforming_quads: hd.nonconforming_quads,
            };
        }
        Ok(())
    })
}

/// Copies the message of the last failed call on this thread into `buf`
/// (NUL-terminated, truncated to `len`) and returns its full length plus
/// one. `buf` may be null to query the length.
///
/// # Safety
/// `buf` must hold `len` bytes or be null.
#[no_mangle]
pub unsafe extern "C" fn hc_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len() + 1
    })
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn hc_status_name(status: HcStatus) -> *const c_char {
    let s: &'static CStr = match status {
        HcStatus::Ok => c"ok",
        HcStatus::NullArgument => c"null argument",
        HcStatus::InvalidArgument => c"invalid argument",
        HcStatus::LoadFailed => c"load failed",
        HcStatus::WriteFailed => c"write failed",
        HcStatus::OutOfRange => c"out of range",
        HcStatus::Panic => c"internal error",
    };
    s.as_ptr()
}
