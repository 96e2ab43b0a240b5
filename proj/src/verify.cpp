#include "cvk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cvk {

ScalarField el_residual(const ScalarField& v, const ScalarField& lambda) {
  const GridDomain& g = v.domain;
  if (!lambda.domain.same_as(g)) fail(ErrorCode::InvalidArgument, "multiplier grid mismatch");
  const ScalarField bih = biharmonic(v);
  const ScalarField coupling = frobenius(cofactor(hessian(v)), hessian(lambda));
  ScalarField out(g);
  for (int i = 2; i <= g.nx - 3; ++i)
    for (int j = 2; j <= g.ny - 3; ++j) out.at(i, j) = bih.at(i, j) - coupling.at(i, j);
  return out;
}

AnalyticComparison compare_to_analytic(const ScalarField& v, const ConstraintData& data) {
  if (!data.is_constant()) fail(ErrorCode::NonConstantK, "analytic comparison requires constant k");
  if (!(data.k_min > 0.0))
    fail(ErrorCode::SignMismatch, "analytic comparison requires constant k > 0");

  const GridDomain& g = v.domain;
  const ScalarField exact = normalize(analytic_minimizer(g, data, Branch::Elliptic));
  const ScalarField diff = add_scaled(normalize(v), -1.0, exact);

  AnalyticComparison cmp;
  cmp.field_error_inf = inf_norm(diff);
  cmp.field_error_l2 = quad_norm(diff);
  cmp.energy_error = std::abs(energy(v) - 2.0 * data.k_min * g.interior_area());
  return cmp;
}

ScalarField perturbed_start(const GridDomain& g, const ConstraintData& data, double amplitude) {
  const ScalarField guess = default_initial_guess(g, data);
  const double pi = std::acos(-1.0);
  ScalarField out = guess;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      out.at(i, j) += amplitude * std::cos(pi * g.x(i) / g.extent_x) *
                      std::cos(pi * g.y(j) / g.extent_y);
  return out;
}

std::vector<ConvergenceRow> convergence_study(const KSpec& k, const std::vector<int>& grids,
                                              const ConvergenceStudyOptions& opts) {
  if (grids.empty()) fail(ErrorCode::InvalidArgument, "convergence study needs at least one grid");

  std::vector<ConvergenceRow> rows;
  rows.reserve(grids.size());
  for (const int n : grids) {
    const GridDomain g(opts.extent_x, opts.extent_y, n, n);
    const ConstraintData data = ConstraintData::from_spec(g, k);

    std::optional<ScalarField> start;
    if (opts.perturb_amplitude != 0.0)
      start = perturbed_start(g, data, opts.perturb_amplitude);
    const SolveReport report = minimize(start, data, opts.solver);

    ConvergenceRow row;
    row.n = n;
    row.h = g.hx;
    row.converged = report.converged;

    const AnalyticComparison cmp = compare_to_analytic(report.v, data);
    row.field_error_inf = cmp.field_error_inf;
    row.field_error_l2 = cmp.field_error_l2;
    row.energy_error = cmp.energy_error;

    ScalarField lambda_err = report.lambda;  // oracle: multiplier is 1 for constant k
    for (int i = 1; i <= g.nx - 2; ++i)
      for (int j = 1; j <= g.ny - 2; ++j) lambda_err.at(i, j) -= 1.0;
    row.multiplier_error_inf = inf_norm_interior(lambda_err);
    row.multiplier_error_l2 = quad_norm(lambda_err);

    if (!rows.empty() && row.field_error_inf > 0.0 && rows.back().field_error_inf > 0.0)
      row.observed_order = std::log2(rows.back().field_error_inf / row.field_error_inf);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

struct Sym2 {
  double a, b, c;  // [[a, b], [b, c]]
};

// |A|^2, (Tr A)^2 - 2 det A, 2|A°|^2 + 2 det A for one matrix; returns the
// worst relative deviation between the three.
double identity_deviation(const Sym2& m) {
  const double norm2 = m.a * m.a + 2.0 * m.b * m.b + m.c * m.c;
  const double tr = m.a + m.c;
  const double det = m.a * m.c - m.b * m.b;
  const double via_trace = tr * tr - 2.0 * det;
  const double half_tr = 0.5 * tr;
  const double da = m.a - half_tr;
  const double dc = m.c - half_tr;
  const double dev2 = da * da + 2.0 * m.b * m.b + dc * dc;
  const double via_tracefree = 2.0 * dev2 + 2.0 * det;
  const double scale = std::max({std::abs(norm2), std::abs(via_trace), std::abs(via_tracefree), 1.0});
  return std::max(std::abs(norm2 - via_trace), std::abs(norm2 - via_tracefree)) / scale;
}

}  // namespace

IdentitySuiteResult identity_suite(std::uint64_t seed) {
  IdentitySuiteResult result;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (int trial = 0; trial < 1000; ++trial) {
    const Sym2 m{4.0 * unit(rng), 4.0 * unit(rng), 4.0 * unit(rng)};
    result.max_matrix_identity_dev = std::max(result.max_matrix_identity_dev, identity_deviation(m));
    ++result.matrix_checks;
  }

  const GridDomain g(1.0, 1.0, 17, 17);
  for (int trial = 0; trial < 10; ++trial) {
    ScalarField v(g);
    for (double& x : v.values) x = unit(rng);
    const SymMatrixField hess = hessian(v);
    for (int p = 0; p < hess.size(); ++p) {
      const Sym2 m{hess.a11[p], hess.a12[p], hess.a22[p]};
      result.max_field_identity_dev = std::max(result.max_field_identity_dev, identity_deviation(m));
      ++result.field_checks;
    }
  }

  // Hyperbolic closed form: (x1^2 - x2^2)/2 solves det(hess v) = -1 with
  // energy 2 * interior area and trace-free Hessian diag(1, -1).
  const GridDomain gh(1.0, 1.0, 33, 33);
  const ConstraintData data_neg =
      ConstraintData::from_field(ScalarField::constant(gh, -1.0));
  const ScalarField vh = analytic_minimizer(gh, data_neg, Branch::Hyperbolic);
  result.hyperbolic_constraint_inf = inf_norm_interior(constraint(vh, data_neg));
  result.hyperbolic_energy = energy(vh);
  result.hyperbolic_energy_expected = 2.0 * gh.interior_area();

  const SymMatrixField dev = tracefree(hessian(vh));
  double tracefree_dev = 0.0;
  for (int p = 0; p < dev.size(); ++p) {
    tracefree_dev = std::max(tracefree_dev, std::abs(dev.a11[p] - 1.0));
    tracefree_dev = std::max(tracefree_dev, std::abs(dev.a12[p]));
    tracefree_dev = std::max(tracefree_dev, std::abs(dev.a22[p] + 1.0));
  }
  result.hyperbolic_tracefree_dev = tracefree_dev;

  const double energy_rel =
      std::abs(result.hyperbolic_energy - result.hyperbolic_energy_expected) /
      result.hyperbolic_energy_expected;
  result.passed = result.max_matrix_identity_dev <= 1e-13 &&
                  result.max_field_identity_dev <= 1e-13 &&
                  result.hyperbolic_constraint_inf <= 1e-11 && energy_rel <= 1e-10 &&
                  result.hyperbolic_tracefree_dev <= 1e-11;
  return result;
}

}  // namespace cvk
