#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cvk/functional.hpp"

namespace cvk {

struct SolverConfig {
  double tol_constraint = 1e-9;    // inf-norm of det(hess v) - k
  double tol_stationarity = 1e-6;  // quad-norm of projected gradient per unit area
  int max_outer = 500;
  int max_newton = 30;
  double initial_step = 1.0;       // scales the first line-search trial
  double backtracking = 0.5;
  double min_step = 1e-10;
  double convexity_margin = 1e-8;  // minimum nodal Hessian eigenvalue

  void validate() const;  // throws Validation on bad entries
};

enum class SolveStatus {
  Converged,
  MaxOuterIterations,
  LineSearchStalled,
  Failed,  // hard error captured in `message`
};

const char* solve_status_name(SolveStatus status);

struct IterationRecord {
  double energy = 0.0;
  double constraint_inf = 0.0;
  double stationarity_norm = 0.0;
};

struct SolveReport {
  ScalarField v;       // normalized minimizer
  ScalarField lambda;  // multiplier, interior-supported
  double energy = 0.0;
  double constraint_inf = 0.0;
  double stationarity_norm = 0.0;
  int outer_iterations = 0;
  int newton_iterations_total = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::Failed;
  std::string message;
  std::vector<IterationRecord> history;
};

/// Newton iteration for det(hess v) = k: repeatedly solve
/// cof(hess v) : hess(rho) = k - det(hess v) with rho = 0 on the boundary
/// and update v += rho, damping the step when convexity would be lost.
/// Preserves the boundary values of v. Throws LostConvexity,
/// MaxNewtonIterations, or propagated linear-solver errors.
ScalarField restore_feasibility(const ScalarField& v, const ConstraintData& data,
                                const SolverConfig& cfg, int* newton_iterations = nullptr);

struct MultiplierResult {
  ScalarField lambda;         // interior-supported
  double residual_norm = 0.0; // quad_norm(g - J^T lambda)
  ScalarField residual;       // g - J^T lambda, over all nodes
};

/// Least-squares recovery of the multiplier from the weak stationarity
/// relation <hess v, hess h> = <lambda cof(hess v), hess h> for all h:
/// minimizes |J^T(v) lambda - g| with g = energy_gradient(v)/2.
MultiplierResult recover_multiplier(const ScalarField& v);

struct TangentStep {
  ScalarField direction;          // -(g - J^T lambda); tangent to the constraint set
  double stationarity_norm = 0.0; // quad_norm(g - J^T lambda) / domain area
};

TangentStep tangent_step(const ScalarField& v);

/// Projected-gradient minimization of the bending energy over
/// {det(hess v) = k} on the convex branch: tangent step, backtracking line
/// search with feasibility restoration at every trial point, affine
/// normalization of accepted iterates. Requires k > 0 nodally; k identically
/// zero short-circuits to the affine (zero) solution. Throws NotElliptic on
/// sign violations; iteration-limit outcomes are reported via status.
SolveReport minimize(const std::optional<ScalarField>& v0, const ConstraintData& data,
                     const SolverConfig& cfg);

/// Default starting point: the constant-curvature quadratic matching the
/// interior mean of k.
ScalarField default_initial_guess(const GridDomain& g, const ConstraintData& data);

}  // namespace cvk
