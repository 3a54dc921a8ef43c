#ifndef FRACSTEP_H
#define FRACSTEP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Kernel evaluation strategy.
 */
typedef enum FsKernel {
  FS_KERNEL_DIRECT = 0,
  FS_KERNEL_SOE = 1,
} FsKernel;

/**
 * Linear solver selection.
 */
typedef enum FsSolver {
  FS_SOLVER_AUTO = 0,
  FS_SOLVER_DIRECT = 1,
  FS_SOLVER_ITERATIVE = 2,
} FsSolver;

/**
 * Result code of every fallible call.
 */
typedef enum FsStatus {
  FS_STATUS_OK = 0,
  FS_STATUS_NULL_POINTER = 1,
  FS_STATUS_INVALID_ARGUMENT = 2,
  FS_STATUS_PRECONDITION = 3,
  FS_STATUS_SOLVER_FAILURE = 4,
  FS_STATUS_IO = 5,
  FS_STATUS_BUFFER_TOO_SMALL = 6,
  FS_STATUS_PANIC = 7,
} FsStatus;

/**
 * Time mesh handle.
 */
typedef struct FsMesh FsMesh;

/**
 * Manufactured problem handle.
 */
typedef struct FsProblem FsProblem;

/**
 * Computed solution handle; keeps every level.
 */
typedef struct FsSolution FsSolution;

/**
 * Plain-data solve options; start from [`fs_options_default`].
 */
typedef struct FsOptions {
  enum FsKernel kernel;
  enum FsSolver solver;
  double solver_rel_tol;
  double soe_epsilon;
} FsOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread, or null. Owned by the library.
 */
const char *fs_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fs_version(void);

struct FsOptions fs_options_default(void);

/**
 * Sub-diffusion problem with `u = sin(πx) sin(πy)(1 + t + t^α)`; `preset` may be null for `variable`.
 *
 * # Safety
 * `preset` must be null or NUL-terminated; `out` must be writable.
 */
enum FsStatus fs_problem_subdiffusion_new(double alpha,
                                          const char *preset_name,
                                          struct FsProblem **out);

/**
 * Diffusion-wave counterpart of [`fs_problem_subdiffusion_new`].
 *
 * # Safety
 * As for [`fs_problem_subdiffusion_new`].
 */
enum FsStatus fs_problem_diffwave_new(double alpha,
                                      const char *preset_name,
                                      struct FsProblem **out);

/**
 * Offset `θ` a mesh must carry for this problem.
 *
 * # Safety
 * `problem` must be a live handle or null.
 */
enum FsStatus fs_problem_theta(const struct FsProblem *problem, double *out);

/**
 * # Safety
 * `problem` must be null or a handle not yet freed.
 */
void fs_problem_free(struct FsProblem *problem);

/**
 * Graded mesh `t_k = T (k/N)^γ`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FsStatus fs_mesh_graded_new(size_t n,
                                 double horizon,
                                 double gamma,
                                 double theta,
                                 struct FsMesh **out);

/**
 * Mesh from `len` strictly increasing nodes starting at zero.
 *
 * # Safety
 * `nodes` must point to `len` readable values; `out` must be writable.
 */
enum FsStatus fs_mesh_custom_new(const double *nodes,
                                 size_t len,
                                 double theta,
                                 struct FsMesh **out);

/**
 * Number of steps `N`; zero for a null handle.
 *
 * # Safety
 * `mesh` must be a live handle or null.
 */
size_t fs_mesh_steps(const struct FsMesh *mesh);

/**
 * # Safety
 * `mesh` must be null or a handle not yet freed.
 */
void fs_mesh_free(struct FsMesh *mesh);

/**
 * Writes `A^{(n)}_{n-k}`, `k = 1..=n`, into `buf`, which must hold `n` values.
 *
 * # Safety
 * `mesh` must be live; `buf` must point to `len` writable values.
 */
enum FsStatus fs_kernel_row(const struct FsMesh *mesh,
                            double beta,
                            size_t n,
                            double *buf,
                            size_t len);

/**
 * Solve on an `m × m` grid of the unit square; `options` may be null for defaults.
 *
 * # Safety
 * `problem` and `mesh` must be live handles; `out` must be writable.
 */
enum FsStatus fs_solve(const struct FsProblem *problem,
                       const struct FsMesh *mesh,
                       size_t m,
                       const struct FsOptions *options,
                       struct FsSolution **out);

/**
 * Interior unknowns per level, `(m-1)^2`; zero for a null handle.
 *
 * # Safety
 * `solution` must be a live handle or null.
 */
size_t fs_solution_size(const struct FsSolution *solution);

/**
 * Largest H¹-seminorm error over all levels.
 *
 * # Safety
 * `solution` must be live; `out` must be writable.
 */
enum FsStatus fs_solution_error(const struct FsSolution *solution, double *out);

/**
 * Copies level `n` of `u` (row-major, `x` fastest) into `buf`.
 *
 * # Safety
 * `solution` must be live; `buf` must point to `len` writable values.
 */
enum FsStatus fs_solution_level(const struct FsSolution *solution,
                                size_t n,
                                double *buf,
                                size_t len);

/**
 * # Safety
 * `solution` must be null or a handle not yet freed.
 */
void fs_solution_free(struct FsSolution *solution);

/**
 * Runs the property suites; `*passed` is 1 when every suite passes. `quick` shrinks the samples.
 *
 * # Safety
 * `passed` must be writable.
 */
enum FsStatus fs_verify(uint64_t seed, bool quick, int32_t *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACSTEP_H */
