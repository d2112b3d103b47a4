#ifndef HEXCOMB_H
#define HEXCOMB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define HC_KIND_MASK_HEX 1

#define HC_KIND_MASK_PRISM 2

#define HC_KIND_MASK_PYRAMID 4

#define HC_KIND_MASK_ALL 7

typedef enum HcStatus {
  HC_STATUS_OK = 0,
  HC_STATUS_NULL_ARGUMENT = 1,
  HC_STATUS_INVALID_ARGUMENT = 2,
  HC_STATUS_LOAD_FAILED = 3,
  HC_STATUS_WRITE_FAILED = 4,
  HC_STATUS_OUT_OF_RANGE = 5,
  HC_STATUS_PANIC = 6,
} HcStatus;

typedef enum HcKind {
  HC_KIND_HEX = 0,
  HC_KIND_PRISM = 1,
  HC_KIND_PYRAMID = 2,
} HcKind;

/**
 * Opaque detection result: cells of every kind ordered by canonical key.
 */
typedef struct HcCells HcCells;

/**
 * Opaque tetrahedral mesh with its adjacency.
 */
typedef struct HcMesh HcMesh;

/**
 * One detected cell. `vertices` holds 0-based mesh vertex indices in
 * template order; entries past `num_vertices` are unused.
 */
typedef struct HcCellInfo {
  enum HcKind kind;
  uint32_t num_vertices;
  uint32_t vertices[8];
  double quality;
  uint32_t num_interior_tets;
} HcCellInfo;

typedef struct HcComparison {
  size_t ours;
  size_t meshkat;
  size_t botella_sokolov;
  size_t yamakawa;
} HcComparison;

typedef struct HcSelection {
  size_t hexes;
  size_t prisms;
  size_t pyramids;
  size_t tets;
  size_t nonconforming_quads;
} HcSelection;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Reads an MSH 2.2 file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HcStatus hc_mesh_load(const char *path, struct HcMesh **out);

/**
 * Builds a mesh from `num_points` xyz triples and `num_tets` quadruples of
 * 0-based point indices.
 *
 * # Safety
 * `points` must hold `3 * num_points` doubles, `tets` `4 * num_tets`
 * integers, and `out` must be valid.
 */
enum HcStatus hc_mesh_new(const double *points,
                          size_t num_points,
                          const uint32_t *tets,
                          size_t num_tets,
                          struct HcMesh **out);

/**
 * # Safety
 * `mesh` must come from `hc_mesh_load` or `hc_mesh_new`, or be null.
 */
void hc_mesh_free(struct HcMesh *mesh);

/**
 * # Safety
 * `mesh` must be a valid handle or null (giving 0).
 */
size_t hc_mesh_num_vertices(const struct HcMesh *mesh);

/**
 * # Safety
 * `mesh` must be a valid handle or null (giving 0).
 */
size_t hc_mesh_num_tets(const struct HcMesh *mesh);

/**
 * Detects the cells of the kinds in `kinds` (a mask of `HC_KIND_MASK_*`)
 * with quality above `qmin`, which must lie in [0, 1). `threads` 0 uses
 * every core.
 *
 * # Safety
 * `mesh` must be a valid handle and `out` a valid pointer.
 */
enum HcStatus hc_detect(const struct HcMesh *mesh,
                        double qmin,
                        uint32_t kinds,
                        uint32_t threads,
                        struct HcCells **out);

/**
 * # Safety
 * `cells` must come from `hc_detect`, or be null.
 */
void hc_cells_free(struct HcCells *cells);

/**
 * Number of cells of every kind.
 *
 * # Safety
 * `cells` must be a valid handle or null (giving 0).
 */
size_t hc_cells_len(const struct HcCells *cells);

/**
 * Number of cells of one kind.
 *
 * # Safety
 * `cells` must be a valid handle or null (giving 0).
 */
size_t hc_cells_count(const struct HcCells *cells, enum HcKind kind);

/**
 * Cell `i` of the result, `i < hc_cells_len(cells)`.
 *
 * # Safety
 * `cells` must be a valid handle and `out` a valid pointer.
 */
enum HcStatus hc_cells_get(const struct HcCells *cells, size_t i, struct HcCellInfo *out);

/**
 * Counts the detected hexahedra matched by each pattern-based criterion.
 *
 * # Safety
 * All pointers must be valid; `cells` must come from the same mesh.
 */
enum HcStatus hc_compare(const struct HcMesh *mesh,
                         const struct HcCells *cells,
                         struct HcComparison *out);

/**
 * Greedily selects compatible cells, writes the mixed mesh to `path` as
 * MSH 2.2 and fills `out` (which may be null) with the counts.
 *
 * # Safety
 * `mesh` and `cells` must be valid handles from the same mesh, and `path`
 * a NUL-terminated string.
 */
enum HcStatus hc_select_write(const struct HcMesh *mesh,
                              const struct HcCells *cells,
                              const char *path,
                              struct HcSelection *out);

/**
 * Copies the message of the last failed call on this thread into `buf`
 * (NUL-terminated, truncated to `len`) and returns its full length plus
 * one. `buf` may be null to query the length.
 *
 * # Safety
 * `buf` must hold `len` bytes or be null.
 */
size_t hc_last_error(char *buf, size_t len);

/**
 * Static name of a status code.
 */
const char *hc_status_name(enum HcStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEXCOMB_H */
