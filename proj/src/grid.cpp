#include "cvk/grid.hpp"

#include <algorithm>
#include <cmath>

namespace cvk {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Validation: return "ValidationError";
    case ErrorCode::NotElliptic: return "NotElliptic";
    case ErrorCode::LostConvexity: return "LostConvexity";
    case ErrorCode::MaxNewtonIterations: return "MaxNewtonIterations";
    case ErrorCode::MaxOuterIterations: return "MaxOuterIterations";
    case ErrorCode::LineSearchStalled: return "LineSearchStalled";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::SingularNormalEquations: return "SingularNormalEquations";
    case ErrorCode::NonConstantK: return "NonConstantK";
    case ErrorCode::SignMismatch: return "SignMismatch";
    case ErrorCode::FeasibilityViolated: return "FeasibilityViolated";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Internal: return "InternalError";
  }
  return "UnknownError";
}

GridDomain::GridDomain(double ext_x, double ext_y, int n_x, int n_y)
    : extent_x(ext_x), extent_y(ext_y), nx(n_x), ny(n_y) {
  if (nx < 5 || ny < 5)
    fail(ErrorCode::Validation, "grid: need at least 5 nodes per axis, got " +
                                    std::to_string(nx) + "x" + std::to_string(ny));
  if (!(extent_x > 0.0) || !(extent_y > 0.0))
    fail(ErrorCode::Validation, "extent: side lengths must be positive");
  hx = extent_x / (nx - 1);
  hy = extent_y / (ny - 1);
}

ScalarField ScalarField::from_function(const GridDomain& g,
                                       const std::function<double(double, double)>& f) {
  ScalarField out(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) out.at(i, j) = f(g.x(i), g.y(j));
  out.require_finite("field sampled from function");
  return out;
}

ScalarField ScalarField::constant(const GridDomain& g, double value) {
  ScalarField out(g);
  for (double& v : out.values) v = value;
  return out;
}

bool ScalarField::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

void ScalarField::require_finite(const char* what) const {
  if (!all_finite()) fail(ErrorCode::InvalidArgument, std::string(what) + " has non-finite values");
}

ScalarField add_scaled(const ScalarField& a, double t, const ScalarField& b) {
  ScalarField out = a;
  for (size_t n = 0; n < out.values.size(); ++n) out.values[n] += t * b.values[n];
  return out;
}

double nodal_dot(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (size_t n = 0; n < a.values.size(); ++n) s += a.values[n] * b.values[n];
  return s;
}

double inf_norm(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double inf_norm_interior(const ScalarField& f) {
  const GridDomain& g = f.domain;
  double m = 0.0;
  for (int i = 1; i <= g.nx - 2; ++i)
    for (int j = 1; j <= g.ny - 2; ++j) m = std::max(m, std::abs(f.at(i, j)));
  return m;
}

}  // namespace cvk
