#include "cvk.h"

#include <cstring>
#include <string>

#include "cvk/io.hpp"
#include "cvk/runner.hpp"
#include "cvk/solver.hpp"

using cvk::Error;
using cvk::ErrorCode;

struct cvk_grid {
  cvk::GridDomain grid;
};

struct cvk_field {
  cvk::ScalarField field;
};

struct cvk_report {
  cvk::SolveReport report;
};

namespace {

thread_local std::string g_last_error;

cvk_status status_from_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return CVK_ERROR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return CVK_ERROR_PARSE;
    case ErrorCode::Validation: return CVK_ERROR_VALIDATION;
    case ErrorCode::NotElliptic: return CVK_ERROR_NOT_ELLIPTIC;
    case ErrorCode::LostConvexity: return CVK_ERROR_LOST_CONVEXITY;
    case ErrorCode::MaxNewtonIterations: return CVK_ERROR_MAX_NEWTON_ITERATIONS;
    case ErrorCode::MaxOuterIterations: return CVK_ERROR_MAX_OUTER_ITERATIONS;
    case ErrorCode::LineSearchStalled: return CVK_ERROR_LINE_SEARCH_STALLED;
    case ErrorCode::SingularSystem: return CVK_ERROR_SINGULAR_SYSTEM;
    case ErrorCode::Diverged: return CVK_ERROR_DIVERGED;
    case ErrorCode::SingularNormalEquations: return CVK_ERROR_SINGULAR_NORMAL_EQUATIONS;
    case ErrorCode::NonConstantK: return CVK_ERROR_NON_CONSTANT_K;
    case ErrorCode::SignMismatch: return CVK_ERROR_SIGN_MISMATCH;
    case ErrorCode::FeasibilityViolated: return CVK_ERROR_FEASIBILITY_VIOLATED;
    case ErrorCode::Io: return CVK_ERROR_IO;
    case ErrorCode::Internal: return CVK_ERROR_INTERNAL;
  }
  return CVK_ERROR_INTERNAL;
}

cvk_status set_error(cvk_status status, const char* message) {
  g_last_error = message ? message : "";
  return status;
}

/// Run `fn`, translating exceptions into status codes.
template <typename Fn>
cvk_status guarded(Fn&& fn) {
  try {
    fn();
    return CVK_OK;
  } catch (const Error& err) {
    return set_error(status_from_code(err.code()), err.what());
  } catch (const std::exception& err) {
    return set_error(CVK_ERROR_INTERNAL, err.what());
  } catch (...) {
    return set_error(CVK_ERROR_INTERNAL, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* cvk_status_string(cvk_status status) {
  switch (status) {
    case CVK_OK: return "ok";
    case CVK_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case CVK_ERROR_PARSE: return "parse error";
    case CVK_ERROR_VALIDATION: return "validation error";
    case CVK_ERROR_NOT_ELLIPTIC: return "not elliptic";
    case CVK_ERROR_LOST_CONVEXITY: return "lost convexity";
    case CVK_ERROR_MAX_NEWTON_ITERATIONS: return "max newton iterations";
    case CVK_ERROR_MAX_OUTER_ITERATIONS: return "max outer iterations";
    case CVK_ERROR_LINE_SEARCH_STALLED: return "line search stalled";
    case CVK_ERROR_SINGULAR_SYSTEM: return "singular system";
    case CVK_ERROR_DIVERGED: return "diverged";
    case CVK_ERROR_SINGULAR_NORMAL_EQUATIONS: return "singular normal equations";
    case CVK_ERROR_NON_CONSTANT_K: return "non-constant k";
    case CVK_ERROR_SIGN_MISMATCH: return "sign mismatch";
    case CVK_ERROR_FEASIBILITY_VIOLATED: return "feasibility violated";
    case CVK_ERROR_IO: return "io error";
    case CVK_ERROR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* cvk_last_error(void) { return g_last_error.c_str(); }

const char* cvk_version(void) { return cvk::artifact_version(); }

cvk_status cvk_grid_create(double extent_x, double extent_y, int nx, int ny, cvk_grid** out) {
  if (!out) return set_error(CVK_ERROR_INVALID_ARGUMENT, "out is null");
  *out = nullptr;
  return guarded([&] { *out = new cvk_grid{cvk::GridDomain(extent_x, extent_y, nx, ny)}; });
}

void cvk_grid_destroy(cvk_grid* grid) { delete grid; }

int cvk_grid_nx(const cvk_grid* grid) { return grid ? grid->grid.nx : 0; }
int cvk_grid_ny(const cvk_grid* grid) { return grid ? grid->grid.ny : 0; }
double cvk_grid_hx(const cvk_grid* grid) { return grid ? grid->grid.hx : 0.0; }
double cvk_grid_hy(const cvk_grid* grid) { return grid ? grid->grid.hy : 0.0; }

cvk_status cvk_field_create(const cvk_grid* grid, cvk_field** out) {
  if (!grid || !out) return set_error(CVK_ERROR_INVALID_ARGUMENT, "grid or out is null");
  *out = nullptr;
  return guarded([&] { *out = new cvk_field{cvk::ScalarField(grid->grid)}; });
}

void cvk_field_destroy(cvk_field* field) { delete field; }

int cvk_field_size(const cvk_field* field) {
  return field ? static_cast<int>(field->field.values.size()) : 0;
}

cvk_status cvk_field_set_values(cvk_field* field, const double* values, int count) {
  if (!field || !values) return set_error(CVK_ERROR_INVALID_ARGUMENT, "field or values is null");
  if (count != static_cast<int>(field->field.values.size()))
    return set_error(CVK_ERROR_INVALID_ARGUMENT, "value count does not match the grid");
  std::memcpy(field->field.values.data(), values, sizeof(double) * count);
  return CVK_OK;
}

cvk_status cvk_field_get_values(const cvk_field* field, double* values, int count) {
  if (!field || !values) return set_error(CVK_ERROR_INVALID_ARGUMENT, "field or values is null");
  if (count != static_cast<int>(field->field.values.size()))
    return set_error(CVK_ERROR_INVALID_ARGUMENT, "value count does not match the grid");
  std::memcpy(values, field->field.values.data(), sizeof(double) * count);
  return CVK_OK;
}

cvk_status cvk_field_set_constant(cvk_field* field, double value) {
  if (!field) return set_error(CVK_ERROR_INVALID_ARGUMENT, "field is null");
  for (double& v : field->field.values) v = value;
  return CVK_OK;
}

cvk_status cvk_field_write_csv(const cvk_field* field, const char* path) {
  if (!field || !path) return set_error(CVK_ERROR_INVALID_ARGUMENT, "field or path is null");
  return guarded([&] { cvk::write_scalar_csv(field->field, path); });
}

void cvk_solver_options_init(cvk_solver_options* options) {
  if (!options) return;
  const cvk::SolverConfig defaults;
  options->tol_constraint = defaults.tol_constraint;
  options->tol_stationarity = defaults.tol_stationarity;
  options->max_outer = defaults.max_outer;
  options->max_newton = defaults.max_newton;
  options->initial_step = defaults.initial_step;
  options->backtracking = defaults.backtracking;
  options->min_step = defaults.min_step;
  options->convexity_margin = defaults.convexity_margin;
}

cvk_status cvk_solve(const cvk_grid* grid, const cvk_field* k, const cvk_field* v0,
                     const cvk_solver_options* options, cvk_report** out) {
  if (!grid || !k || !out) return set_error(CVK_ERROR_INVALID_ARGUMENT, "grid, k, or out is null");
  *out = nullptr;
  return guarded([&] {
    cvk::SolverConfig cfg;
    if (options) {
      cfg.tol_constraint = options->tol_constraint;
      cfg.tol_stationarity = options->tol_stationarity;
      cfg.max_outer = options->max_outer;
      cfg.max_newton = options->max_newton;
      cfg.initial_step = options->initial_step;
      cfg.backtracking = options->backtracking;
      cfg.min_step = options->min_step;
      cfg.convexity_margin = options->convexity_margin;
    }
    const cvk::ConstraintData data = cvk::ConstraintData::from_field(k->field);
    std::optional<cvk::ScalarField> start;
    if (v0) start = v0->field;
    *out = new cvk_report{cvk::minimize(start, data, cfg)};
  });
}

void cvk_report_destroy(cvk_report* report) { delete report; }

int cvk_report_converged(const cvk_report* report) {
  return report && report->report.converged ? 1 : 0;
}
double cvk_report_energy(const cvk_report* report) { return report ? report->report.energy : 0.0; }
double cvk_report_constraint_inf(const cvk_report* report) {
  return report ? report->report.constraint_inf : 0.0;
}
double cvk_report_stationarity(const cvk_report* report) {
  return report ? report->report.stationarity_norm : 0.0;
}
int cvk_report_outer_iterations(const cvk_report* report) {
  return report ? report->report.outer_iterations : 0;
}
int cvk_report_newton_iterations(const cvk_report* report) {
  return report ? report->report.newton_iterations_total : 0;
}

cvk_status cvk_report_solution(const cvk_report* report, cvk_field** out) {
  if (!report || !out) return set_error(CVK_ERROR_INVALID_ARGUMENT, "report or out is null");
  *out = nullptr;
  return guarded([&] { *out = new cvk_field{report->report.v}; });
}

cvk_status cvk_report_multiplier(const cvk_report* report, cvk_field** out) {
  if (!report || !out) return set_error(CVK_ERROR_INVALID_ARGUMENT, "report or out is null");
  *out = nullptr;
  return guarded([&] { *out = new cvk_field{report->report.lambda}; });
}

cvk_status cvk_run_json(const char* config_json, const char* overrides_json, int* exit_code) {
  if (!config_json || !exit_code)
    return set_error(CVK_ERROR_INVALID_ARGUMENT, "config or exit_code is null");
  try {
    *exit_code = cvk::run_json(config_json, overrides_json ? overrides_json : "");
    return CVK_OK;
  } catch (const Error& err) {
    const cvk_status status = status_from_code(err.code());
    *exit_code = (status == CVK_ERROR_PARSE || status == CVK_ERROR_VALIDATION) ? 2 : 1;
    return set_error(status, err.what());
  } catch (const std::exception& err) {
    *exit_code = 1;
    return set_error(CVK_ERROR_INTERNAL, err.what());
  }
}

}  // extern "C"
