#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cvk/functional.hpp"

using namespace cvk;

namespace {

GridDomain unit_grid(int n) { return GridDomain(1.0, 1.0, n, n); }

ScalarField random_field(const GridDomain& g, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> unit(-scale, scale);
  ScalarField f(g);
  for (double& v : f.values) v = unit(rng);
  return f;
}

ScalarField paraboloid(const GridDomain& g) {
  return ScalarField::from_function(g, [](double x, double y) { return 0.5 * (x * x + y * y); });
}

}  // namespace

TEST_CASE("energy values") {
  const GridDomain g = unit_grid(17);

  SUBCASE("paraboloid has energy 2 * interior area, tending to 2") {
    CHECK(energy(paraboloid(g)) == doctest::Approx(2.0 * g.interior_area()).epsilon(1e-13));
    const GridDomain fine = unit_grid(257);
    CHECK(energy(paraboloid(fine)) == doctest::Approx(2.0).epsilon(0.02));
  }

  SUBCASE("affine fields carry no energy") {
    const auto v = ScalarField::from_function(g, [](double x, double y) {
      return 3.0 - 2.0 * x + 0.7 * y;
    });
    CHECK(energy(v) <= 1e-24);  // squared centered differences leave only roundoff
  }

  SUBCASE("hyperbolic closed form has the same energy as the paraboloid") {
    const auto v = ScalarField::from_function(g, [](double x, double y) {
      return 0.5 * (x * x - y * y);
    });
    CHECK(energy(v) == doctest::Approx(2.0 * g.interior_area()).epsilon(1e-13));
  }
}

TEST_CASE("energy gradient") {
  const GridDomain g = unit_grid(17);
  std::mt19937_64 rng(42);

  SUBCASE("exact quadratic expansion") {
    for (int trial = 0; trial < 10; ++trial) {
      const ScalarField v = random_field(g, rng);
      const ScalarField h = random_field(g, rng);
      const ScalarField grad = energy_gradient(v);
      for (double t : {0.1, 1.0}) {
        const double lhs = energy(add_scaled(v, t, h));
        const double rhs = energy(v) + t * nodal_dot(grad, h) + t * t * energy(h);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
      }
    }
  }

  SUBCASE("central difference oracle") {
    const double eps = 1e-5;
    for (int trial = 0; trial < 5; ++trial) {
      ScalarField v = random_field(g, rng);
      ScalarField h = random_field(g, rng);
      const double vn = std::sqrt(nodal_dot(v, v));
      const double hn = std::sqrt(nodal_dot(h, h));
      for (double& x : v.values) x /= vn;
      for (double& x : h.values) x /= hn;
      const double analytic = nodal_dot(energy_gradient(v), h);
      const double fd =
          (energy(add_scaled(v, eps, h)) - energy(add_scaled(v, -eps, h))) / (2.0 * eps);
      CHECK(std::abs(analytic - fd) <= 1e-6 * std::max(1.0, std::abs(analytic)));
    }
  }

  SUBCASE("zero field has zero gradient") {
    CHECK(inf_norm(energy_gradient(ScalarField(g))) == 0.0);
  }
}

TEST_CASE("constraint map") {
  const GridDomain g = unit_grid(17);

  SUBCASE("closed forms are exactly feasible") {
    const ConstraintData one = ConstraintData::from_field(ScalarField::constant(g, 1.0));
    CHECK(inf_norm_interior(constraint(paraboloid(g), one)) <= 1e-12);

    const ConstraintData neg = ConstraintData::from_field(ScalarField::constant(g, -1.0));
    const auto saddle = ScalarField::from_function(g, [](double x, double y) {
      return 0.5 * (x * x - y * y);
    });
    CHECK(inf_norm_interior(constraint(saddle, neg)) <= 1e-12);

    const ScalarField zero_c = constraint(ScalarField(g), one);
    for (int i = 1; i <= g.nx - 2; ++i)
      for (int j = 1; j <= g.ny - 2; ++j) CHECK(zero_c.at(i, j) == -1.0);
  }
}

TEST_CASE("constraint jacobian") {
  const GridDomain g = unit_grid(17);
  std::mt19937_64 rng(7);

  SUBCASE("at the paraboloid the jacobian is the laplacian") {
    const ScalarField v = paraboloid(g);
    const auto xy = ScalarField::from_function(g, [](double x, double y) { return x * y; });
    CHECK(inf_norm_interior(constraint_jacobian_apply(v, xy)) <= 1e-12);
    const ScalarField dvv = constraint_jacobian_apply(v, v);
    for (int i = 1; i <= g.nx - 2; ++i)
      for (int j = 1; j <= g.ny - 2; ++j)
        CHECK(dvv.at(i, j) == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("exact quadratic expansion of the constraint") {
    const ConstraintData data = ConstraintData::from_field(ScalarField::constant(g, 1.0));
    for (int trial = 0; trial < 10; ++trial) {
      const ScalarField v = random_field(g, rng);
      const ScalarField h = random_field(g, rng);
      const ScalarField lhs = constraint(add_scaled(v, 1.0, h), data);
      const ScalarField c0 = constraint(v, data);
      const ScalarField jac = constraint_jacobian_apply(v, h);
      const ScalarField quad = det2(hessian(h));
      for (int i = 1; i <= g.nx - 2; ++i)
        for (int j = 1; j <= g.ny - 2; ++j) {
          const double rhs = c0.at(i, j) + jac.at(i, j) + quad.at(i, j);
          const double scale = std::max({std::abs(lhs.at(i, j)), std::abs(c0.at(i, j)),
                                         std::abs(jac.at(i, j)), std::abs(quad.at(i, j)), 1.0});
          CHECK(std::abs(lhs.at(i, j) - rhs) <= 1e-12 * scale);
        }
    }
  }

  SUBCASE("transpose is the exact quadrature adjoint") {
    for (int trial = 0; trial < 10; ++trial) {
      const ScalarField v = random_field(g, rng);
      const ScalarField h = random_field(g, rng);
      ScalarField mu(g);
      for (int i = 1; i <= g.nx - 2; ++i)
        for (int j = 1; j <= g.ny - 2; ++j)
          mu.at(i, j) = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
      const double lhs = integrate([&] {
        ScalarField prod = constraint_jacobian_apply(v, h);
        for (int i = 1; i <= g.nx - 2; ++i)
          for (int j = 1; j <= g.ny - 2; ++j) prod.at(i, j) *= mu.at(i, j);
        return prod;
      }());
      const double rhs = nodal_dot(constraint_jacobian_transpose_apply(v, mu), h);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    }

    CHECK(inf_norm(constraint_jacobian_transpose_apply(random_field(g, rng), ScalarField(g))) ==
          0.0);
  }

  SUBCASE("transpose with unit multiplier matches half the energy gradient at the paraboloid") {
    const GridDomain g9 = unit_grid(9);
    const ScalarField v = paraboloid(g9);
    const ScalarField lhs = constraint_jacobian_transpose_apply(v, ScalarField::constant(g9, 1.0));
    const ScalarField rhs = divdiv_adjoint(hessian(v));
    for (int n = 0; n < g9.node_count(); ++n)
      CHECK(lhs.values[n] == doctest::Approx(rhs.values[n]).epsilon(1e-12));
  }
}

TEST_CASE("energy identities on the constraint set") {
  const GridDomain g = unit_grid(17);

  SUBCASE("elliptic closed form") {
    const ConstraintData one = ConstraintData::from_field(ScalarField::constant(g, 1.0));
    const ScalarField v = paraboloid(g);
    const double e = energy(v);
    CHECK(energy_identity_laplacian(v, one) == doctest::Approx(e).epsilon(1e-10));
    CHECK(energy_identity_tracefree(v, one) == doctest::Approx(e).epsilon(1e-10));
  }

  SUBCASE("hyperbolic closed form") {
    const ConstraintData neg = ConstraintData::from_field(ScalarField::constant(g, -1.0));
    const auto v = ScalarField::from_function(g, [](double x, double y) {
      return 0.5 * (x * x - y * y);
    });
    const double e = energy(v);
    CHECK(energy_identity_laplacian(v, neg) == doctest::Approx(e).epsilon(1e-10));
    CHECK(energy_identity_tracefree(v, neg) == doctest::Approx(e).epsilon(1e-10));
  }

  SUBCASE("pointwise identity for diag(1,2)") {
    // |A|^2 = 5, (Tr A)^2 - 2 det A = 9 - 4.
    CHECK(1.0 * 1.0 + 2.0 * 2.0 == 5.0);
    CHECK((1.0 + 2.0) * (1.0 + 2.0) - 2.0 * (1.0 * 2.0) == 5.0);
  }

  SUBCASE("infeasible input is rejected") {
    const ConstraintData one = ConstraintData::from_field(ScalarField::constant(g, 1.0));
    try {
      energy_identity_laplacian(ScalarField(g), one);
      FAIL("expected FeasibilityViolated");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::FeasibilityViolated);
    }
  }
}

TEST_CASE("pointwise matrix identities on random symmetric matrices") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = unit(rng), b = unit(rng), c = unit(rng);
    const double norm2 = a * a + 2.0 * b * b + c * c;
    const double tr = a + c;
    const double det = a * c - b * b;
    const double da = a - 0.5 * tr, dc = c - 0.5 * tr;
    const double dev2 = da * da + 2.0 * b * b + dc * dc;
    const double scale = std::max(1.0, std::abs(norm2));
    CHECK(std::abs(norm2 - (tr * tr - 2.0 * det)) <= 1e-13 * scale);
    CHECK(std::abs(norm2 - (2.0 * dev2 + 2.0 * det)) <= 1e-13 * scale);
  }
}

TEST_CASE("feasible lower bound") {
  const GridDomain g = unit_grid(17);
  const ConstraintData data = ConstraintData::from_field(ScalarField::constant(g, 1.0));
  // Exactly feasible fields obey energy >= 2 * integral of k; near-feasible
  // fields obey the tau-relaxed version.
  const ScalarField v = paraboloid(g);
  const double tau = inf_norm_interior(constraint(v, data));
  CHECK(energy(v) >= 2.0 * integrate(data.k) - 2.0 * tau * g.interior_area() - 1e-13);

  const auto tilted = ScalarField::from_function(g, [](double x, double y) {
    return 0.6 * x * x + 0.45 * y * y + 0.1 * x * y + x - y;
  });
  const double tau2 = inf_norm_interior(constraint(tilted, data));
  CHECK(energy(tilted) >= 2.0 * integrate(data.k) - 2.0 * tau2 * g.interior_area() - 1e-13);
}

TEST_CASE("analytic minimizer") {
  const GridDomain g = unit_grid(9);

  const ConstraintData one = ConstraintData::from_field(ScalarField::constant(g, 1.0));
  const ScalarField vp = analytic_minimizer(g, one, Branch::Elliptic);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      CHECK(vp.at(i, j) ==
            doctest::Approx(0.5 * (g.x(i) * g.x(i) + g.y(j) * g.y(j))).epsilon(1e-14));

  const ConstraintData neg = ConstraintData::from_field(ScalarField::constant(g, -1.0));
  const ScalarField vh = analytic_minimizer(g, neg, Branch::Hyperbolic);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      CHECK(vh.at(i, j) ==
            doctest::Approx(0.5 * (g.x(i) * g.x(i) - g.y(j) * g.y(j))).epsilon(1e-14));

  CHECK(inf_norm(analytic_minimizer(g, 0.0, Branch::Elliptic)) == 0.0);

  const auto linear_k = ConstraintData::from_field(
      ScalarField::from_function(g, [](double x, double) { return 1.0 + x; }));
  CHECK_THROWS_AS(analytic_minimizer(g, linear_k, Branch::Elliptic), Error);
  try {
    analytic_minimizer(g, one, Branch::Hyperbolic);
    FAIL("expected SignMismatch");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::SignMismatch);
  }
  CHECK_THROWS_AS(analytic_minimizer(g, -2.0, Branch::Elliptic), Error);
}

TEST_CASE("normalize") {
  const GridDomain g = unit_grid(17);

  SUBCASE("kills affine fields") {
    const auto v = ScalarField::from_function(g, [](double x, double y) {
      return 4.0 - 3.0 * x + 2.5 * y;
    });
    CHECK(inf_norm(normalize(v)) <= 1e-13);
  }

  SUBCASE("idempotent") {
    std::mt19937_64 rng(5);
    const ScalarField v = random_field(g, rng);
    const ScalarField n1 = normalize(v);
    const ScalarField n2 = normalize(n1);
    for (int n = 0; n < g.node_count(); ++n)
      CHECK(std::abs(n1.values[n] - n2.values[n]) <= 1e-13);
  }

  SUBCASE("zeroes the nodal mean and mean gradient of the paraboloid") {
    const ScalarField v = normalize(paraboloid(g));
    double mean = 0.0;
    for (double x : v.values) mean += x;
    mean /= g.node_count();
    CHECK(std::abs(mean) <= 1e-13);

    double gx = 0.0, gy = 0.0;
    for (int i = 1; i <= g.nx - 2; ++i)
      for (int j = 1; j <= g.ny - 2; ++j) {
        gx += (v.at(i + 1, j) - v.at(i - 1, j)) / (2.0 * g.hx);
        gy += (v.at(i, j + 1) - v.at(i, j - 1)) / (2.0 * g.hy);
      }
    CHECK(std::abs(gx / g.interior_count()) <= 1e-13);
    CHECK(std::abs(gy / g.interior_count()) <= 1e-13);
  }

  SUBCASE("leaves the energy unchanged") {
    std::mt19937_64 rng(11);
    const ScalarField v = random_field(g, rng);
    const double e0 = energy(v);
    CHECK(energy(normalize(v)) == doctest::Approx(e0).epsilon(1e-13));
  }
}

TEST_CASE("k specification sampling") {
  const GridDomain g(2.0, 1.0, 9, 9);

  KSpec constant;
  constant.constant = 2.5;
  const ScalarField kc = constant.sample(g);
  CHECK(inf_norm(kc) == 2.5);
  CHECK(ConstraintData::from_spec(g, constant).is_constant());

  KSpec poly;
  poly.poly = {{0, 0, 1.0}, {1, 0, 0.5}, {1, 1, -0.25}};
  const ScalarField kp = poly.sample(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      CHECK(kp.at(i, j) ==
            doctest::Approx(1.0 + 0.5 * g.x(i) - 0.25 * g.x(i) * g.y(j)).epsilon(1e-14));
  const ConstraintData data = ConstraintData::from_field(kp);
  CHECK(!data.is_constant());
  CHECK(data.k_min == doctest::Approx(1.0));  // at x = 0
  CHECK(data.k_max == doctest::Approx(2.0));  // at (2, 0)
}
