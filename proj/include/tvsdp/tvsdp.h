/* tvsdp: C API for the time-varying SDP trajectory tracker.
 *
 * All entry points are thread-safe as long as distinct handles are used from
 * distinct threads. Functions return TVSDP_OK on success; on failure the
 * thread-local message from tvsdp_last_error() describes what went wrong.
 * Matrices are passed as dense column-major double buffers.
 */

#ifndef TVSDP_TVSDP_H
#define TVSDP_TVSDP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TVSDP_API __declspec(dllexport)
#else
#define TVSDP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tvsdp_status {
  TVSDP_OK = 0,
  TVSDP_ERR_INVALID_ARGUMENT = 1,
  TVSDP_ERR_IO = 2,
  TVSDP_ERR_NUMERICAL = 3,
  TVSDP_ERR_BUFFER_TOO_SMALL = 4,
  TVSDP_ERR_INTERNAL = 5
} tvsdp_status;

TVSDP_API const char* tvsdp_status_name(tvsdp_status status);
TVSDP_API const char* tvsdp_last_error(void);
TVSDP_API const char* tvsdp_version(void);

/* ---- problems ---------------------------------------------------------- */

typedef struct tvsdp_problem tvsdp_problem;

TVSDP_API tvsdp_status tvsdp_problem_create_maxcut(int n, double density, uint64_t seed,
                                                   tvsdp_problem** out);
TVSDP_API tvsdp_status tvsdp_problem_create_synthetic(int n, int r, int m, uint64_t seed,
                                                      tvsdp_problem** out);
TVSDP_API tvsdp_status tvsdp_problem_read_json(const char* path, tvsdp_problem** out);
TVSDP_API tvsdp_status tvsdp_problem_write_json(const tvsdp_problem* problem, const char* path);
TVSDP_API void tvsdp_problem_destroy(tvsdp_problem* problem);

TVSDP_API int tvsdp_problem_dim(const tvsdp_problem* problem);
TVSDP_API int tvsdp_problem_num_constraints(const tvsdp_problem* problem);
TVSDP_API double tvsdp_problem_horizon(const tvsdp_problem* problem);
TVSDP_API int tvsdp_problem_has_known_solution(const tvsdp_problem* problem);

/* ---- initial solve ----------------------------------------------------- */

typedef struct tvsdp_solution tvsdp_solution;

/* Solves the stationary problem at time t to tolerance tol (pass 0 for the
 * default) and detects the solution rank. */
TVSDP_API tvsdp_status tvsdp_initial_solve(const tvsdp_problem* problem, double t, double tol,
                                           tvsdp_solution** out);
TVSDP_API void tvsdp_solution_destroy(tvsdp_solution* solution);

TVSDP_API int tvsdp_solution_rank(const tvsdp_solution* solution);
TVSDP_API double tvsdp_solution_residual(const tvsdp_solution* solution);
TVSDP_API int tvsdp_solution_iterations(const tvsdp_solution* solution);
/* Copies the n x rank factor (column-major, len >= n * rank). */
TVSDP_API tvsdp_status tvsdp_solution_factor(const tvsdp_solution* solution, double* buf,
                                             size_t len);
/* Copies the m equality multipliers (len >= m). */
TVSDP_API tvsdp_status tvsdp_solution_multiplier(const tvsdp_solution* solution, double* buf,
                                                 size_t len);

/* ---- trajectory tracking ---------------------------------------------- */

typedef struct tvsdp_track_options {
  double dt0;            /* initial stepsize */
  int stepsize_tuning;   /* nonzero enables residual-driven tuning */
  double gamma1;         /* shrink factor in (0,1) */
  double gamma2;         /* growth factor > 1 */
  double residual_tol;   /* acceptance threshold when tuning */
  int max_retries;       /* shrink attempts per step */
  double init_tol;       /* tolerance of the initial solve */
} tvsdp_track_options;

TVSDP_API void tvsdp_track_options_defaults(tvsdp_track_options* options);

typedef struct tvsdp_trajectory tvsdp_trajectory;

typedef struct tvsdp_step_record {
  double t;
  double residual;
  double dt_used;
  double sigma_r;       /* smallest singular value of the factor */
  double wall_seconds;  /* timing; excluded from determinism guarantees */
  int retries;
} tvsdp_step_record;

/* Runs the initial solve at t = 0 followed by the tracking loop over the
 * whole horizon. A partial trajectory (aborted run) is reported with
 * TVSDP_OK; inspect tvsdp_trajectory_completed. */
TVSDP_API tvsdp_status tvsdp_track(const tvsdp_problem* problem,
                                   const tvsdp_track_options* options, tvsdp_trajectory** out);
TVSDP_API void tvsdp_trajectory_destroy(tvsdp_trajectory* trajectory);

TVSDP_API size_t tvsdp_trajectory_length(const tvsdp_trajectory* trajectory);
TVSDP_API tvsdp_status tvsdp_trajectory_record(const tvsdp_trajectory* trajectory, size_t k,
                                               tvsdp_step_record* out);
TVSDP_API int tvsdp_trajectory_completed(const tvsdp_trajectory* trajectory);
TVSDP_API int tvsdp_trajectory_rank(const tvsdp_trajectory* trajectory);
TVSDP_API const char* tvsdp_trajectory_abort_reason(const tvsdp_trajectory* trajectory);
/* Copies the factor of record k (column-major n x rank, len >= n * rank). */
TVSDP_API tvsdp_status tvsdp_trajectory_factor(const tvsdp_trajectory* trajectory, size_t k,
                                               double* buf, size_t len);

/* ---- stepsize / initialization conditions ------------------------------ */

typedef struct tvsdp_step_condition_inputs {
  double delta;
  double dt;
  double lambda_star;   /* lower bound on the smallest positive eigenvalue of X_t */
  double Lambda_star;   /* upper bound on the largest eigenvalue of X_t */
  double L;             /* bound on ||dX_t/dt||_F */
  double K;             /* bound on ||d lambda_t / dt|| */
  double m;             /* inverse-Jacobian bound */
  double M;             /* Jacobian Lipschitz constant */
  int r;
} tvsdp_step_condition_inputs;

typedef struct tvsdp_step_condition_report {
  int cond1, cond2, cond3;
  double lhs1, rhs1, lhs2, rhs2, lhs3, rhs3;
  double init_multiplier_bound;
  double init_primal_bound;
} tvsdp_step_condition_report;

TVSDP_API tvsdp_status tvsdp_check_step_conditions(const tvsdp_step_condition_inputs* inputs,
                                                   tvsdp_step_condition_report* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TVSDP_TVSDP_H */
