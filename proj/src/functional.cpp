#include "cvk/functional.hpp"

#include <algorithm>
#include <cmath>

namespace cvk {

double KSpec::evaluate(double x, double y) const {
  if (constant) return *constant;
  double s = 0.0;
  for (const PolyTerm& t : poly) s += t.coeff * std::pow(x, t.px) * std::pow(y, t.py);
  return s;
}

ScalarField KSpec::sample(const GridDomain& g) const {
  if (constant) return ScalarField::constant(g, *constant);
  return ScalarField::from_function(g, [this](double x, double y) { return evaluate(x, y); });
}

ConstraintData ConstraintData::from_field(ScalarField k_field) {
  k_field.require_finite("constraint datum k");
  ConstraintData data;
  data.k = std::move(k_field);
  auto [lo, hi] = std::minmax_element(data.k.values.begin(), data.k.values.end());
  data.k_min = *lo;
  data.k_max = *hi;
  return data;
}

ConstraintData ConstraintData::from_spec(const GridDomain& g, const KSpec& spec) {
  return from_field(spec.sample(g));
}

double ConstraintData::mean() const {
  return integrate(k) / k.domain.interior_area();
}

double energy(const ScalarField& v) {
  const SymMatrixField h = hessian(v);
  return quad_inner(h, h);
}

ScalarField energy_gradient(const ScalarField& v) {
  ScalarField g = divdiv_adjoint(hessian(v));
  for (double& x : g.values) x *= 2.0;
  return g;
}

ScalarField constraint(const ScalarField& v, const ConstraintData& data) {
  const GridDomain& g = v.domain;
  ScalarField out = det2(hessian(v));
  for (int i = 1; i <= g.nx - 2; ++i)
    for (int j = 1; j <= g.ny - 2; ++j) out.at(i, j) -= data.k.at(i, j);
  return out;
}

ScalarField constraint_jacobian_apply(const ScalarField& v, const ScalarField& h) {
  return frobenius(cofactor(hessian(v)), hessian(h));
}

ScalarField constraint_jacobian_transpose_apply(const ScalarField& v, const ScalarField& mu) {
  const GridDomain& g = v.domain;
  SymMatrixField weighted = cofactor(hessian(v));
  for (int i = 1; i <= g.nx - 2; ++i)
    for (int j = 1; j <= g.ny - 2; ++j) {
      const int p = weighted.iidx(i, j);
      const double m = mu.at(i, j);
      weighted.a11[p] *= m;
      weighted.a12[p] *= m;
      weighted.a22[p] *= m;
    }
  return divdiv_adjoint(weighted);
}

namespace {

void require_feasible(const ScalarField& v, const ConstraintData& data, double tol) {
  const double c = inf_norm_interior(constraint(v, data));
  if (c > tol)
    fail(ErrorCode::FeasibilityViolated,
         "constraint violation " + std::to_string(c) + " exceeds tolerance " + std::to_string(tol));
}

}  // namespace

double energy_identity_laplacian(const ScalarField& v, const ConstraintData& data,
                                 double feasibility_tol) {
  require_feasible(v, data, feasibility_tol);
  const GridDomain& g = v.domain;
  const ScalarField lap = laplacian(v);
  ScalarField integrand(g);
  for (int i = 1; i <= g.nx - 2; ++i)
    for (int j = 1; j <= g.ny - 2; ++j)
      integrand.at(i, j) = lap.at(i, j) * lap.at(i, j) - 2.0 * data.k.at(i, j);
  return integrate(integrand);
}

double energy_identity_tracefree(const ScalarField& v, const ConstraintData& data,
                                 double feasibility_tol) {
  require_feasible(v, data, feasibility_tol);
  const GridDomain& g = v.domain;
  const SymMatrixField dev = tracefree(hessian(v));
  ScalarField integrand = frobenius(dev, dev);
  for (int i = 1; i <= g.nx - 2; ++i)
    for (int j = 1; j <= g.ny - 2; ++j) integrand.at(i, j) += data.k.at(i, j);
  return 2.0 * integrate(integrand);
}

ScalarField analytic_minimizer(const GridDomain& g, const ConstraintData& data, Branch branch) {
  if (!data.is_constant())
    fail(ErrorCode::NonConstantK, "closed-form minimizer requires constant k");
  return analytic_minimizer(g, data.k_min, branch);
}

ScalarField analytic_minimizer(const GridDomain& g, double k_constant, Branch branch) {
  if (branch == Branch::Elliptic) {
    if (k_constant < 0.0)
      fail(ErrorCode::SignMismatch, "elliptic branch requires k >= 0");
    const double c = 0.5 * std::sqrt(k_constant);
    return ScalarField::from_function(g, [c](double x, double y) { return c * (x * x + y * y); });
  }
  if (!(k_constant < 0.0))
    fail(ErrorCode::SignMismatch, "hyperbolic branch requires k < 0");
  const double c = 0.5 * std::sqrt(-k_constant);
  return ScalarField::from_function(g, [c](double x, double y) { return c * (x * x - y * y); });
}

ScalarField normalize(const ScalarField& v) {
  const GridDomain& g = v.domain;

  // Mean centered-difference gradient over interior nodes.
  double gx = 0.0, gy = 0.0;
  for (int i = 1; i <= g.nx - 2; ++i)
    for (int j = 1; j <= g.ny - 2; ++j) {
      gx += (v.at(i + 1, j) - v.at(i - 1, j)) / (2.0 * g.hx);
      gy += (v.at(i, j + 1) - v.at(i, j - 1)) / (2.0 * g.hy);
    }
  gx /= g.interior_count();
  gy /= g.interior_count();

  double mean = 0.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) mean += v.at(i, j) - gx * g.x(i) - gy * g.y(j);
  mean /= g.node_count();

  ScalarField out(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      out.at(i, j) = v.at(i, j) - mean - gx * g.x(i) - gy * g.y(j);
  return out;
}

}  // namespace cvk
