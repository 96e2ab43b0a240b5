#pragma once

#include <optional>

#include "cvk/operators.hpp"

namespace cvk {

/// Right-hand side k of the Monge-Ampere constraint, given either as a
/// constant or as a polynomial sum(coeff * x^px * y^py).
struct PolyTerm {
  int px = 0;
  int py = 0;
  double coeff = 0.0;
};

struct KSpec {
  std::optional<double> constant;
  std::vector<PolyTerm> poly;

  bool is_constant() const { return constant.has_value(); }
  double evaluate(double x, double y) const;
  ScalarField sample(const GridDomain& g) const;
};

/// Nodal samples of k plus cached extrema.
struct ConstraintData {
  ScalarField k;
  double k_min = 0.0;
  double k_max = 0.0;

  static ConstraintData from_field(ScalarField k_field);
  static ConstraintData from_spec(const GridDomain& g, const KSpec& spec);

  bool is_constant() const { return k_min == k_max; }
  double mean() const;  // quadrature mean over the interior
};

/// Bending energy: integrate(|hessian(v)|^2).
double energy(const ScalarField& v);

/// Nodal field g with energy(v + t*h) = energy(v) + t*nodal_dot(g, h) + t^2*energy(h),
/// exactly; equals 2 * divdiv_adjoint(hessian(v)).
ScalarField energy_gradient(const ScalarField& v);

/// det2(hessian(v)) - k on interior nodes.
ScalarField constraint(const ScalarField& v, const ConstraintData& data);

/// Directional derivative of the constraint map: cof(hessian(v)) : hessian(h).
ScalarField constraint_jacobian_apply(const ScalarField& v, const ScalarField& h);

/// Quadrature adjoint of constraint_jacobian_apply:
///   <mu, constraint_jacobian_apply(v, h)>_quad == nodal_dot(result, h).
ScalarField constraint_jacobian_transpose_apply(const ScalarField& v, const ScalarField& mu);

/// Alternative energy evaluations valid on the constraint set:
///   integrate((lap v)^2 - 2k)   and   2 * integrate(|tracefree(hess v)|^2 + k).
/// Throw FeasibilityViolated when |constraint|_inf exceeds feasibility_tol.
double energy_identity_laplacian(const ScalarField& v, const ConstraintData& data,
                                 double feasibility_tol = 1e-6);
double energy_identity_tracefree(const ScalarField& v, const ConstraintData& data,
                                 double feasibility_tol = 1e-6);

enum class Branch { Elliptic, Hyperbolic };

/// Closed-form minimizer for constant k:
///   sqrt(k)/2 * |x|^2 for k >= 0,  sqrt(|k|)/2 * (x1^2 - x2^2) for k < 0.
ScalarField analytic_minimizer(const GridDomain& g, const ConstraintData& data, Branch branch);
ScalarField analytic_minimizer(const GridDomain& g, double k_constant, Branch branch);

/// Subtract the affine part a + b.x so the nodal mean and the mean
/// centered-difference gradient vanish. Idempotent; leaves the Hessian
/// unchanged.
ScalarField normalize(const ScalarField& v);

}  // namespace cvk
