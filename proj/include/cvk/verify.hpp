#pragma once

#include <cstdint>
#include <optional>

#include "cvk/solver.hpp"

namespace cvk {

/// Strong-form Euler-Lagrange residual
///   biharmonic(v) - cof(hess v) : hess(lambda)
/// on nodes at distance >= 2 from the boundary, zero-filled elsewhere.
ScalarField el_residual(const ScalarField& v, const ScalarField& lambda);

struct AnalyticComparison {
  double field_error_inf = 0.0;  // vs the closed-form minimizer, both normalized
  double field_error_l2 = 0.0;   // quad-norm variant
  double energy_error = 0.0;     // vs 2*k*interior_area
};

/// Comparison against the constant-k closed form, modulo affine maps.
/// Requires constant k > 0.
AnalyticComparison compare_to_analytic(const ScalarField& v, const ConstraintData& data);

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double field_error_inf = 0.0;
  double energy_error = 0.0;
  double multiplier_error_inf = 0.0;
  std::optional<double> observed_order;  // log2 ratio vs previous row
  double field_error_l2 = 0.0;
  double multiplier_error_l2 = 0.0;
  bool converged = false;
};

struct ConvergenceStudyOptions {
  double extent_x = 1.0;
  double extent_y = 1.0;
  double perturb_amplitude = 0.05;
  SolverConfig solver;
};

/// Smooth boundary-active perturbation of the default initial guess:
/// guess + amplitude * cos(pi x / Lx) * cos(pi y / Ly).
ScalarField perturbed_start(const GridDomain& g, const ConstraintData& data, double amplitude);

/// Full solve per grid against the constant-k oracle; rows carry the observed
/// orders of the inf-norm errors.
std::vector<ConvergenceRow> convergence_study(const KSpec& k, const std::vector<int>& grids,
                                              const ConvergenceStudyOptions& opts = {});

struct IdentitySuiteResult {
  bool passed = false;
  int matrix_checks = 0;
  int field_checks = 0;
  double max_matrix_identity_dev = 0.0;  // relative, over both identities
  double max_field_identity_dev = 0.0;
  double hyperbolic_constraint_inf = 0.0;
  double hyperbolic_energy = 0.0;
  double hyperbolic_energy_expected = 0.0;
  double hyperbolic_tracefree_dev = 0.0;
};

/// Pointwise identities |A|^2 = (Tr A)^2 - 2 det A and
/// |A|^2 = 2|tracefree A|^2 + 2 det A on seeded random symmetric matrices and
/// on Hessians of random fields, plus the hyperbolic closed-form checks.
IdentitySuiteResult identity_suite(std::uint64_t seed);

}  // namespace cvk
