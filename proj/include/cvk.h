/* cvk — constrained von Kármán plate solver, C interface.
 *
 * Opaque-handle API over the C++ core. All functions return a cvk_status;
 * CVK_OK is 0. On failure, cvk_last_error() returns a thread-local detail
 * message valid until the next failing call on the same thread.
 */
#ifndef CVK_H
#define CVK_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cvk_status {
  CVK_OK = 0,
  CVK_ERROR_INVALID_ARGUMENT,
  CVK_ERROR_PARSE,
  CVK_ERROR_VALIDATION,
  CVK_ERROR_NOT_ELLIPTIC,
  CVK_ERROR_LOST_CONVEXITY,
  CVK_ERROR_MAX_NEWTON_ITERATIONS,
  CVK_ERROR_MAX_OUTER_ITERATIONS,
  CVK_ERROR_LINE_SEARCH_STALLED,
  CVK_ERROR_SINGULAR_SYSTEM,
  CVK_ERROR_DIVERGED,
  CVK_ERROR_SINGULAR_NORMAL_EQUATIONS,
  CVK_ERROR_NON_CONSTANT_K,
  CVK_ERROR_SIGN_MISMATCH,
  CVK_ERROR_FEASIBILITY_VIOLATED,
  CVK_ERROR_IO,
  CVK_ERROR_INTERNAL
} cvk_status;

const char* cvk_status_string(cvk_status status);
const char* cvk_last_error(void);
const char* cvk_version(void);

/* ---- grids and fields ------------------------------------------------- */

typedef struct cvk_grid cvk_grid;
typedef struct cvk_field cvk_field;
typedef struct cvk_report cvk_report;

/* Uniform node grid on [0, extent_x] x [0, extent_y]; counts include the
 * boundary and must be >= 5. */
cvk_status cvk_grid_create(double extent_x, double extent_y, int nx, int ny, cvk_grid** out);
void cvk_grid_destroy(cvk_grid* grid);
int cvk_grid_nx(const cvk_grid* grid);
int cvk_grid_ny(const cvk_grid* grid);
double cvk_grid_hx(const cvk_grid* grid);
double cvk_grid_hy(const cvk_grid* grid);

/* Fields store one value per node, row-major over (i, j). */
cvk_status cvk_field_create(const cvk_grid* grid, cvk_field** out);
void cvk_field_destroy(cvk_field* field);
int cvk_field_size(const cvk_field* field);
cvk_status cvk_field_set_values(cvk_field* field, const double* values, int count);
cvk_status cvk_field_get_values(const cvk_field* field, double* values, int count);
cvk_status cvk_field_set_constant(cvk_field* field, double value);
/* CSV with header "i,j,x,y,value". */
cvk_status cvk_field_write_csv(const cvk_field* field, const char* path);

/* ---- solver ----------------------------------------------------------- */

typedef struct cvk_solver_options {
  double tol_constraint;
  double tol_stationarity;
  int max_outer;
  int max_newton;
  double initial_step;
  double backtracking;
  double min_step;
  double convexity_margin;
} cvk_solver_options;

void cvk_solver_options_init(cvk_solver_options* options);

/* Minimize the bending energy subject to det(hess v) = k on the convex
 * branch. v0 may be NULL (default initial guess); options may be NULL
 * (defaults). A report is produced even when the iteration limit is hit;
 * inspect cvk_report_converged. Hard errors return a status and no report. */
cvk_status cvk_solve(const cvk_grid* grid, const cvk_field* k, const cvk_field* v0,
                     const cvk_solver_options* options, cvk_report** out);

void cvk_report_destroy(cvk_report* report);
int cvk_report_converged(const cvk_report* report);
double cvk_report_energy(const cvk_report* report);
double cvk_report_constraint_inf(const cvk_report* report);
double cvk_report_stationarity(const cvk_report* report);
int cvk_report_outer_iterations(const cvk_report* report);
int cvk_report_newton_iterations(const cvk_report* report);
/* Copies of the solution / multiplier fields (caller destroys). */
cvk_status cvk_report_solution(const cvk_report* report, cvk_field** out);
cvk_status cvk_report_multiplier(const cvk_report* report, cvk_field** out);

/* ---- batch runs -------------------------------------------------------- */

/* Parse a JSON config (optionally merged with a JSON overrides object),
 * dispatch the command (solve | verify | converge | identities), and write
 * the output files. On success returns CVK_OK and stores the process exit
 * status (0 converged/checks passed, 1 otherwise) in *exit_code. Config
 * problems return CVK_ERROR_PARSE / CVK_ERROR_VALIDATION and set *exit_code
 * to 2. */
cvk_status cvk_run_json(const char* config_json, const char* overrides_json, int* exit_code);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CVK_H */
