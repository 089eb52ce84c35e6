/* C interface to the pathwise singular-drift solver. Every function that can
 * fail returns a pbp_status; on failure pbp_last_error() describes the error
 * for the calling thread. Handles are opaque and freed with their _free
 * function; strings returned through char** are freed with pbp_string_free. */
#ifndef PBP_PBP_H
#define PBP_PBP_H

#include <stddef.h>
#include <stdint.h>

#if defined(PBP_BUILDING_LIBRARY)
#define PBP_API __attribute__((visibility("default")))
#else
#define PBP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pbp_status {
  PBP_OK = 0,
  PBP_USAGE_ERROR = 1,
  PBP_SINGULAR_POINT = 2,
  PBP_STEP_UNDERFLOW = 3,
  PBP_SIDE_VIOLATION = 4,
  PBP_NON_FINITE = 5,
  PBP_DEGENERATE_INCREMENT = 6,
  PBP_INVALID_BRANCH = 7,
  PBP_JUNCTION_MISMATCH = 8,
  PBP_IO_ERROR = 9,
  PBP_INTERNAL_ERROR = 10
} pbp_status;

typedef enum pbp_side { PBP_SIDE_NONE = 0, PBP_SIDE_ABOVE = 1, PBP_SIDE_BELOW = 2 } pbp_side;
typedef enum pbp_ce1_branch { PBP_CE1_AUTO = 0, PBP_CE1_POSITIVE = 1, PBP_CE1_NEGATIVE = 2 } pbp_ce1_branch;
typedef enum pbp_ce2_variant { PBP_CE2_WEAK = 0, PBP_CE2_ALTERNATIVE = 1 } pbp_ce2_variant;

typedef struct pbp_path pbp_path;
typedef struct pbp_drift pbp_drift;
typedef struct pbp_solution pbp_solution;

typedef struct pbp_solve_options {
  double h_base;
  int max_refine_depth;
  double sing_guard;
  double pin_window;
  double boot_floor;
  double step_growth_cap;
  double pin_tolerance;
  int quad_cells_per_step;
} pbp_solve_options;

PBP_API const char* pbp_version(void);
/* Error name such as "InvalidBranch"; "Ok" for PBP_OK. */
PBP_API const char* pbp_status_name(pbp_status status);
PBP_API const char* pbp_last_error(void);
PBP_API void pbp_string_free(char* s);

PBP_API pbp_solve_options pbp_solve_options_default(void);
/* Defaults for base step h with the growth cap scaled along. */
PBP_API pbp_solve_options pbp_solve_options_with_step(double h_base);

/* Paths */
PBP_API pbp_status pbp_path_brownian(double horizon, int64_t cells, uint64_t seed, uint64_t stream, pbp_path** out);
PBP_API pbp_status pbp_path_zero(double horizon, int64_t cells, pbp_path** out);
PBP_API pbp_status pbp_path_from_arrays(const double* times, const double* values, size_t n, int is_driver,
                                        pbp_path** out);
PBP_API pbp_status pbp_path_refine(const pbp_path* path, double a, double b, int levels, uint64_t seed,
                                   uint64_t stream, pbp_path** out);
PBP_API pbp_status pbp_path_read_csv(const char* file, int is_driver, pbp_path** out);
PBP_API pbp_status pbp_path_write_csv(const pbp_path* path, const char* file);
PBP_API pbp_status pbp_path_to_csv_string(const pbp_path* path, char** out);
PBP_API pbp_status pbp_path_to_json(const pbp_path* path, char** out);
PBP_API pbp_status pbp_path_from_json(const char* json, pbp_path** out);
PBP_API size_t pbp_path_size(const pbp_path* path);
/* Copies min(size, capacity) nodes; either array may be NULL. */
PBP_API pbp_status pbp_path_copy(const pbp_path* path, double* times, double* values, size_t capacity);
PBP_API pbp_status pbp_path_eval(const pbp_path* path, double t, double* out);
PBP_API void pbp_path_free(pbp_path* path);

/* Drifts, described as JSON objects such as {"variant":"bes3","center":0,"side":"above"}. */
PBP_API pbp_status pbp_drift_from_json(const char* json, pbp_drift** out);
PBP_API pbp_status pbp_drift_to_json(const pbp_drift* drift, char** out);
PBP_API pbp_status pbp_drift_eval(const pbp_drift* drift, double t, double x, double* out);
PBP_API void pbp_drift_free(pbp_drift* drift);

/* Solving. opts may be NULL for defaults; stop_level may be NULL. PBP_SIDE_NONE
 * falls back to the side built into one-sided drifts. */
PBP_API pbp_status pbp_solve(const pbp_drift* drift, const pbp_path* driver, double x0, double t0, double t1,
                             pbp_side side, const double* stop_level, const pbp_solve_options* opts,
                             pbp_solution** out);
PBP_API pbp_status pbp_construct_bridge(int nonneg, double y, const pbp_path* driver, const pbp_solve_options* opts,
                                        pbp_solution** out);
PBP_API pbp_status pbp_construct_bes3(double x_start, double center, pbp_side side, const pbp_path* driver, double t0,
                                      double t1, const pbp_solve_options* opts, pbp_solution** out);
PBP_API pbp_status pbp_construct_ce1(const pbp_path* driver, pbp_ce1_branch branch, const pbp_solve_options* opts,
                                     pbp_solution** out);
PBP_API pbp_status pbp_construct_ce2(const pbp_path* driver, pbp_ce2_variant variant, const pbp_solve_options* opts,
                                     pbp_solution** out);

/* Sup-norm defect of a candidate path against the integral equation on [t0, t1]. */
PBP_API pbp_status pbp_residual_sup(const pbp_drift* drift, const pbp_path* candidate, const pbp_path* driver,
                                    double t0, double t1, const pbp_solve_options* opts, double* out);
/* Same check on the solution's own window; the value is kept in its diagnostics. */
PBP_API pbp_status pbp_solution_check(pbp_solution* solution, const pbp_drift* drift, const pbp_path* driver,
                                      const pbp_solve_options* opts, double* out);
PBP_API pbp_status pbp_solution_path(const pbp_solution* solution, pbp_path** out);
PBP_API pbp_status pbp_solution_sidecar_json(const pbp_solution* solution, char** out);
PBP_API void pbp_solution_free(pbp_solution* solution);

/* Runs the verification suite described by config_json. jsonl_out receives one
 * report per line; all_pass is 1 when every test passes and every negative
 * control fails. include_runtime = 0 drops the wall-clock field. */
PBP_API pbp_status pbp_verify_suite(const char* config_json, int include_runtime, char** jsonl_out, int* all_pass);
/* Suite config with every default filled in. */
PBP_API pbp_status pbp_suite_config_resolve(const char* config_json, char** out);

#ifdef __cplusplus
}
#endif

#endif
