#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cvk/verify.hpp"

using namespace cvk;

namespace {

GridDomain unit_grid(int n) { return GridDomain(1.0, 1.0, n, n); }

ConstraintData constant_k(const GridDomain& g, double k) {
  return ConstraintData::from_field(ScalarField::constant(g, k));
}

}  // namespace

TEST_CASE("el_residual") {
  const GridDomain g = unit_grid(17);
  const auto v = ScalarField::from_function(g, [](double x, double y) {
    return 0.5 * (x * x + y * y);
  });

  SUBCASE("vanishes for the closed form with constant multiplier") {
    const ScalarField res = el_residual(v, ScalarField::constant(g, 1.0));
    CHECK(inf_norm(res) <= 1e-11);
  }

  SUBCASE("vanishes for any affine multiplier") {
    const auto lam = ScalarField::from_function(g, [](double x, double) { return x; });
    CHECK(inf_norm(el_residual(v, lam)) <= 1e-11);
  }

  SUBCASE("restricted to nodes at distance >= 2 from the boundary") {
    const auto lam = ScalarField::from_function(g, [](double x, double y) { return x * x * y; });
    const ScalarField res = el_residual(v, lam);
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const bool deep = i >= 2 && i <= g.nx - 3 && j >= 2 && j <= g.ny - 3;
        if (!deep) CHECK(res.at(i, j) == 0.0);
      }
    CHECK(inf_norm(res) > 0.0);
  }

  SUBCASE("small at a converged solve on 65x65") {
    const GridDomain g65 = unit_grid(65);
    const SolveReport rep = minimize(std::nullopt, constant_k(g65, 1.0), SolverConfig{});
    REQUIRE(rep.converged);
    CHECK(inf_norm(el_residual(rep.v, rep.lambda)) <= 1e-4);
  }
}

TEST_CASE("compare_to_analytic") {
  const GridDomain g = unit_grid(17);
  const ConstraintData data = constant_k(g, 1.0);

  SUBCASE("blind to affine parts") {
    const auto v = ScalarField::from_function(g, [](double x, double y) {
      return 0.5 * (x * x + y * y) + 3.0 + 2.0 * x;
    });
    const AnalyticComparison cmp = compare_to_analytic(v, data);
    CHECK(cmp.field_error_inf <= 1e-12);
    CHECK(cmp.energy_error <= 1e-12);
  }

  SUBCASE("energy error at the sampled closed form is the pure quadrature gap") {
    // integrate(2) misses 2*(1 - interior area), shrinking ~O(h) as the
    // dropped boundary ring narrows; against the interior measure it is 0.
    const auto v = ScalarField::from_function(g, [](double x, double y) {
      return 0.5 * (x * x + y * y);
    });
    const AnalyticComparison cmp = compare_to_analytic(v, data);
    CHECK(cmp.energy_error <= 1e-12);
    const double full_domain_gap = std::abs(energy(v) - 2.0);
    CHECK(full_domain_gap == doctest::Approx(2.0 * (1.0 - g.interior_area())).epsilon(1e-10));
  }

  SUBCASE("rejects non-constant or non-positive k") {
    const auto kf = ScalarField::from_function(g, [](double x, double) { return 1.0 + x; });
    CHECK_THROWS_AS(compare_to_analytic(ScalarField(g), ConstraintData::from_field(kf)), Error);
    CHECK_THROWS_AS(compare_to_analytic(ScalarField(g), constant_k(g, -1.0)), Error);
  }
}

TEST_CASE("perturbed_start is convex, boundary-active, and non-stationary") {
  const GridDomain g = unit_grid(17);
  const ConstraintData data = constant_k(g, 1.0);
  const ScalarField v0 = perturbed_start(g, data, 0.05);
  CHECK(min_hessian_eigenvalue(hessian(v0)) > 0.0);
  // differs from the plain guess on the boundary
  const ScalarField guess = default_initial_guess(g, data);
  CHECK(std::abs(v0.at(0, 0) - guess.at(0, 0)) > 0.01);
  const ScalarField restored = restore_feasibility(v0, data, SolverConfig{});
  CHECK(tangent_step(restored).stationarity_norm > 10.0 * SolverConfig{}.tol_stationarity);
}

TEST_CASE("convergence_study") {
  KSpec k;
  k.constant = 1.0;

  SUBCASE("rows carry grids, spacings, and orders") {
    ConvergenceStudyOptions opts;
    opts.perturb_amplitude = 0.05;
    const std::vector<ConvergenceRow> rows = convergence_study(k, {9, 17}, opts);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].n == 9);
    CHECK(rows[1].n == 17);
    CHECK(rows[0].h == doctest::Approx(1.0 / 8.0));
    CHECK(rows[1].h == doctest::Approx(1.0 / 16.0));
    CHECK(!rows[0].observed_order.has_value());
    CHECK(rows[1].observed_order.has_value());
    CHECK(rows[0].converged);
    CHECK(rows[1].converged);
    for (const ConvergenceRow& row : rows) {
      CHECK(row.field_error_inf >= 0.0);
      CHECK(row.energy_error >= 0.0);
      CHECK(row.multiplier_error_inf < 1e-2);
    }
  }

  SUBCASE("single grid yields one row without an order") {
    const std::vector<ConvergenceRow> rows = convergence_study(k, {17});
    REQUIRE(rows.size() == 1);
    CHECK(!rows[0].observed_order.has_value());
  }

  SUBCASE("rows are reproducible bitwise") {
    ConvergenceStudyOptions opts;
    opts.perturb_amplitude = 0.03;
    const auto a = convergence_study(k, {9, 17}, opts);
    const auto b = convergence_study(k, {9, 17}, opts);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].field_error_inf == b[i].field_error_inf);
      CHECK(a[i].energy_error == b[i].energy_error);
      CHECK(a[i].multiplier_error_inf == b[i].multiplier_error_inf);
    }
  }
}

TEST_CASE("identity_suite") {
  SUBCASE("seed 0 passes with tiny deviations") {
    const IdentitySuiteResult r = identity_suite(0);
    CHECK(r.passed);
    CHECK(r.matrix_checks == 1000);
    CHECK(r.field_checks > 0);
    CHECK(r.max_matrix_identity_dev <= 1e-13);
    CHECK(r.max_field_identity_dev <= 1e-13);
    CHECK(r.hyperbolic_constraint_inf <= 1e-11);
    CHECK(r.hyperbolic_energy ==
          doctest::Approx(r.hyperbolic_energy_expected).epsilon(1e-10));
    CHECK(r.hyperbolic_tracefree_dev <= 1e-11);
  }

  SUBCASE("other seeds pass too") {
    CHECK(identity_suite(1).passed);
    CHECK(identity_suite(20260811).passed);
  }
}
