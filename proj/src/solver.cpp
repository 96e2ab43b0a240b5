#include "cvk/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace cvk {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

void check_grid(const ScalarField& a, const GridDomain& g, const char* what) {
  if (!a.domain.same_as(g)) fail(ErrorCode::InvalidArgument, std::string(what) + ": grid mismatch");
}

/// Newton linearization solver with symbolic-factorization reuse: the sparsity
/// pattern of cof(hess v):hess(.) is fixed by the grid, so only the numeric
/// factorization is redone per step.
class EllipticCache {
 public:
  explicit EllipticCache(const GridDomain& g) : grid_(g) {
    const int m = g.interior_count();
    matrix_.resize(m, m);
    trips_.reserve(static_cast<size_t>(9) * m);
  }

  void factorize(const SymMatrixField& coeff) {
    const GridDomain& g = grid_;
    int bad_node = -1;
    const double min_eig = min_hessian_eigenvalue(coeff, &bad_node);
    if (!(min_eig > 0.0))
      fail(ErrorCode::NotElliptic, "linearized constraint not elliptic at interior node " +
                                       std::to_string(bad_node));

    trips_.clear();
    for (int i = 1; i <= g.nx - 2; ++i) {
      for (int j = 1; j <= g.ny - 2; ++j) {
        const int row = g.interior_idx(i, j);
        const int p = coeff.iidx(i, j);
        const double cxx = coeff.a11[p] / (g.hx * g.hx);
        const double cyy = coeff.a22[p] / (g.hy * g.hy);
        const double cxy = coeff.a12[p] / (2.0 * g.hx * g.hy);
        auto add = [&](int ii, int jj, double w) {
          if (ii >= 1 && ii <= g.nx - 2 && jj >= 1 && jj <= g.ny - 2)
            trips_.emplace_back(row, g.interior_idx(ii, jj), w);
        };
        add(i, j, -2.0 * (cxx + cyy));
        add(i + 1, j, cxx);
        add(i - 1, j, cxx);
        add(i, j + 1, cyy);
        add(i, j - 1, cyy);
        add(i + 1, j + 1, cxy);
        add(i - 1, j - 1, cxy);
        add(i + 1, j - 1, -cxy);
        add(i - 1, j + 1, -cxy);
      }
    }
    matrix_.setFromTriplets(trips_.begin(), trips_.end());
    matrix_.makeCompressed();

    if (!analyzed_) {
      lu_.analyzePattern(matrix_);
      analyzed_ = true;
    }
    lu_.factorize(matrix_);
    if (lu_.info() != Eigen::Success)
      fail(ErrorCode::SingularSystem, "Newton correction factorization failed");
  }

  ScalarField solve(const ScalarField& f) const {
    const GridDomain& g = grid_;
    const int m = g.interior_count();
    Eigen::VectorXd rhs(m);
    for (int i = 1; i <= g.nx - 2; ++i)
      for (int j = 1; j <= g.ny - 2; ++j) rhs[g.interior_idx(i, j)] = f.at(i, j);
    Eigen::VectorXd x = lu_.solve(rhs);
    if (lu_.info() != Eigen::Success)
      fail(ErrorCode::SingularSystem, "Newton correction solve failed");
    ScalarField u(g);
    for (int i = 1; i <= g.nx - 2; ++i)
      for (int j = 1; j <= g.ny - 2; ++j) u.at(i, j) = x[g.interior_idx(i, j)];
    u.require_finite("Newton correction");
    return u;
  }

 private:
  GridDomain grid_;
  SpMat matrix_;
  Eigen::SparseLU<SpMat> lu_;
  std::vector<Triplet> trips_;
  bool analyzed_ = false;
};

ScalarField restore_impl(const ScalarField& v, const ConstraintData& data,
                         const SolverConfig& cfg, EllipticCache& cache, int* newton_count) {
  const GridDomain& g = v.domain;
  ScalarField cur = v;

  // Inner target well below the contract tolerance: quadratic convergence
  // makes the extra Newton step nearly free, and iterates that sit close to
  // the constraint set keep energy comparisons between them meaningful.
  const double target = std::min(cfg.tol_constraint, std::max(1e-3 * cfg.tol_constraint, 1e-13));
  double prev_violation = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter <= cfg.max_newton; ++iter) {
    const SymMatrixField hess = hessian(cur);
    const double min_eig = min_hessian_eigenvalue(hess);
    if (min_eig < cfg.convexity_margin)
      fail(ErrorCode::LostConvexity, "Hessian eigenvalue " + std::to_string(min_eig) +
                                         " below convexity margin");

    ScalarField residual = det2(hess);
    for (int i = 1; i <= g.nx - 2; ++i)
      for (int j = 1; j <= g.ny - 2; ++j)
        residual.at(i, j) = data.k.at(i, j) - residual.at(i, j);  // k - det(hess v)
    const double violation = inf_norm_interior(residual);
    if (violation <= target) return cur;
    // Within the contract and no longer improving fast: stop here.
    if (violation <= cfg.tol_constraint && violation > 0.25 * prev_violation) return cur;
    if (iter == cfg.max_newton) {
      if (violation <= cfg.tol_constraint) return cur;
      break;
    }
    prev_violation = violation;

    cache.factorize(cofactor(hess));
    const ScalarField rho = cache.solve(residual);
    if (newton_count) ++*newton_count;

    // Damp the correction if the full step would leave the convex branch.
    bool accepted = false;
    double step = 1.0;
    for (int halving = 0; halving < 30; ++halving) {
      ScalarField cand = add_scaled(cur, step, rho);
      if (min_hessian_eigenvalue(hessian(cand)) >= cfg.convexity_margin) {
        cur = std::move(cand);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted)
      fail(ErrorCode::LostConvexity, "Newton correction leaves the convex branch even when damped");
  }
  fail(ErrorCode::MaxNewtonIterations,
       "feasibility not reached within " + std::to_string(cfg.max_newton) + " Newton iterations");
}

/// Least-squares multiplier solve with reusable symbolic Cholesky of the
/// normal equations (their pattern is fixed by the grid).
class MultiplierCache {
 public:
  explicit MultiplierCache(const GridDomain& g) : grid_(g) {
    const int n = g.node_count();
    const int m = g.interior_count();
    jt_.resize(n, m);
    trips_.reserve(static_cast<size_t>(9) * m);
  }

  MultiplierResult recover(const ScalarField& v) {
    const GridDomain& g = grid_;
    const SymMatrixField hess = hessian(v);

    // Definiteness of hess(v) keeps the linearized constraint surjective and
    // the normal equations nonsingular.
    for (int p = 0; p < hess.size(); ++p) {
      const double det = hess.a11[p] * hess.a22[p] - hess.a12[p] * hess.a12[p];
      if (!(det > 0.0))
        fail(ErrorCode::SingularNormalEquations,
             "hessian not definite at interior node " + std::to_string(p));
    }

    const SymMatrixField cof = cofactor(hess);
    build_jt(cof);

    const ScalarField g_half = divdiv_adjoint(hess);  // energy_gradient / 2
    Eigen::Map<const Eigen::VectorXd> gvec(g_half.values.data(), g_half.values.size());

    SpMat normal = SpMat(jt_.transpose()) * jt_;
    if (!analyzed_) {
      ldlt_.analyzePattern(normal);
      analyzed_ = true;
    }
    ldlt_.factorize(normal);
    if (ldlt_.info() != Eigen::Success)
      fail(ErrorCode::SingularNormalEquations, "normal equations factorization failed");

    const Eigen::VectorXd jtg = jt_.transpose() * gvec;
    Eigen::VectorXd lam = ldlt_.solve(jtg);
    // One refinement pass keeps the multiplier accurate on fine grids.
    lam += ldlt_.solve(jtg - normal * lam);
    if (!lam.allFinite())
      fail(ErrorCode::SingularNormalEquations, "multiplier solve produced non-finite values");

    MultiplierResult out;
    out.lambda = ScalarField(g);
    for (int i = 1; i <= g.nx - 2; ++i)
      for (int j = 1; j <= g.ny - 2; ++j) out.lambda.at(i, j) = lam[g.interior_idx(i, j)];

    const Eigen::VectorXd res = gvec - jt_ * lam;
    out.residual = ScalarField(g);
    for (Eigen::Index n = 0; n < res.size(); ++n) out.residual.values[n] = res[n];
    out.residual_norm = quad_norm(out.residual);
    return out;
  }

 private:
  void build_jt(const SymMatrixField& cof) {
    const GridDomain& g = grid_;
    const double q = g.hx * g.hy;
    const double wxx = q / (g.hx * g.hx);
    const double wyy = q / (g.hy * g.hy);
    const double wxy = q / (2.0 * g.hx * g.hy);
    trips_.clear();
    for (int i = 1; i <= g.nx - 2; ++i) {
      for (int j = 1; j <= g.ny - 2; ++j) {
        const int col = g.interior_idx(i, j);
        const int p = cof.iidx(i, j);
        const double cxx = wxx * cof.a11[p];
        const double cyy = wyy * cof.a22[p];
        const double cxy = wxy * cof.a12[p];
        trips_.emplace_back(g.idx(i + 1, j), col, cxx);
        trips_.emplace_back(g.idx(i - 1, j), col, cxx);
        trips_.emplace_back(g.idx(i, j + 1), col, cyy);
        trips_.emplace_back(g.idx(i, j - 1), col, cyy);
        trips_.emplace_back(g.idx(i, j), col, -2.0 * (cxx + cyy));
        trips_.emplace_back(g.idx(i + 1, j + 1), col, cxy);
        trips_.emplace_back(g.idx(i - 1, j - 1), col, cxy);
        trips_.emplace_back(g.idx(i + 1, j - 1), col, -cxy);
        trips_.emplace_back(g.idx(i - 1, j + 1), col, -cxy);
      }
    }
    jt_.setFromTriplets(trips_.begin(), trips_.end());
    jt_.makeCompressed();
  }

  GridDomain grid_;
  SpMat jt_;  // maps interior multipliers to nodal co-fields
  Eigen::SimplicialLDLT<SpMat> ldlt_;
  std::vector<Triplet> trips_;
  bool analyzed_ = false;
};

bool is_rejectable(ErrorCode code) {
  return code == ErrorCode::LostConvexity || code == ErrorCode::MaxNewtonIterations ||
         code == ErrorCode::SingularSystem || code == ErrorCode::Diverged ||
         code == ErrorCode::NotElliptic;
}

}  // namespace

void SolverConfig::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0)) fail(ErrorCode::Validation, std::string("solver.") + name + " must be positive");
  };
  positive(tol_constraint, "tol_constraint");
  positive(tol_stationarity, "tol_stationarity");
  positive(initial_step, "initial_step");
  positive(min_step, "min_step");
  positive(convexity_margin, "convexity_margin");
  if (!(backtracking > 0.0 && backtracking < 1.0))
    fail(ErrorCode::Validation, "solver.backtracking must lie in (0, 1)");
  if (max_outer < 1) fail(ErrorCode::Validation, "solver.max_outer must be at least 1");
  if (max_newton < 1) fail(ErrorCode::Validation, "solver.max_newton must be at least 1");
}

const char* solve_status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxOuterIterations: return "max_outer_iterations";
    case SolveStatus::LineSearchStalled: return "line_search_stalled";
    case SolveStatus::Failed: return "failed";
  }
  return "unknown";
}

ScalarField restore_feasibility(const ScalarField& v, const ConstraintData& data,
                                const SolverConfig& cfg, int* newton_iterations) {
  cfg.validate();
  check_grid(data.k, v.domain, "constraint datum");
  v.require_finite("initial field");
  if (newton_iterations) *newton_iterations = 0;
  EllipticCache cache(v.domain);
  return restore_impl(v, data, cfg, cache, newton_iterations);
}

MultiplierResult recover_multiplier(const ScalarField& v) {
  v.require_finite("field");
  MultiplierCache cache(v.domain);
  return cache.recover(v);
}

TangentStep tangent_step(const ScalarField& v) {
  const MultiplierResult mult = recover_multiplier(v);
  TangentStep step;
  step.direction = mult.residual;
  for (double& x : step.direction.values) x = -x;
  step.stationarity_norm = mult.residual_norm / v.domain.area();
  return step;
}

ScalarField default_initial_guess(const GridDomain& g, const ConstraintData& data) {
  return analytic_minimizer(g, std::max(data.mean(), 0.0), Branch::Elliptic);
}

SolveReport minimize(const std::optional<ScalarField>& v0, const ConstraintData& data,
                     const SolverConfig& cfg) {
  cfg.validate();
  const GridDomain& g = data.k.domain;
  const double area = g.area();

  SolveReport report;

  if (data.k_min < 0.0)
    fail(ErrorCode::NotElliptic, "k attains negative values (min " + std::to_string(data.k_min) +
                                     "); only the elliptic branch is solvable");
  if (data.k_min == 0.0 && data.k_max > 0.0)
    fail(ErrorCode::NotElliptic, "k touches zero; degenerate-elliptic data is not supported");

  if (data.k_max == 0.0) {
    // k identically zero: affine fields are exactly feasible and attain the
    // lower bound, so the normalized solution is the zero field.
    report.v = ScalarField(g);
    report.lambda = ScalarField(g);
    report.converged = true;
    report.status = SolveStatus::Converged;
    report.history.push_back({0.0, 0.0, 0.0});
    return report;
  }

  EllipticCache elliptic(g);
  MultiplierCache multiplier(g);

  ScalarField v = v0 ? *v0 : default_initial_guess(g, data);
  if (v0) {
    check_grid(v, g, "initial field");
    v.require_finite("initial field");
  }
  v = restore_impl(v, data, cfg, elliptic, &report.newton_iterations_total);
  v = normalize(v);

  MultiplierResult mult;
  ScalarField prev_v;
  ScalarField prev_residual;
  bool have_previous = false;

  for (int outer = 0;; ++outer) {
    mult = multiplier.recover(v);
    const double stationarity = mult.residual_norm / area;
    const double energy_now = energy(v);
    const double constraint_inf = inf_norm_interior(constraint(v, data));
    report.history.push_back({energy_now, constraint_inf, stationarity});
    report.energy = energy_now;
    report.constraint_inf = constraint_inf;
    report.stationarity_norm = stationarity;
    report.outer_iterations = outer;

    if (stationarity <= cfg.tol_stationarity) {
      report.converged = true;
      report.status = SolveStatus::Converged;
      break;
    }
    if (outer >= cfg.max_outer) {
      report.status = SolveStatus::MaxOuterIterations;
      report.message = "stationarity tolerance not met within max_outer iterations";
      break;
    }

    ScalarField direction = mult.residual;
    for (double& x : direction.values) x = -x;

    // Exact line minimum of the quadratic energy along the direction; the
    // energy along v + t*h is an exact parabola, so steps beyond 2*t_quad
    // cannot decrease it.
    const double rr = nodal_dot(mult.residual, mult.residual);
    const double curvature = energy(direction);
    double t_quad = curvature > 0.0 ? rr / curvature : cfg.initial_step;

    // Spectral (Barzilai-Borwein) trial steps from the previous residual
    // change, alternating the two step lengths; backtracking enforces the
    // energy decrease, so occasional over-long trials are safe.
    double seed = t_quad;
    if (have_previous) {
      const ScalarField s = add_scaled(v, -1.0, prev_v);
      const ScalarField y = add_scaled(mult.residual, -1.0, prev_residual);
      const double sy = nodal_dot(s, y);
      if (sy > 0.0) {
        const double bb1 = nodal_dot(s, s) / sy;
        const double bb2 = sy / nodal_dot(y, y);
        seed = std::min((outer % 2 == 0) ? bb1 : bb2, 50.0 * t_quad);
      }
    }
    seed *= cfg.initial_step;
    seed = std::max(seed, cfg.min_step);

    prev_v = v;
    prev_residual = mult.residual;
    have_previous = true;

    bool accepted = false;
    for (double t = seed; t >= cfg.min_step; t *= cfg.backtracking) {
      ScalarField trial = add_scaled(v, t, direction);
      ScalarField restored;
      try {
        restored = restore_impl(trial, data, cfg, elliptic, &report.newton_iterations_total);
      } catch (const Error& err) {
        if (is_rejectable(err.code())) continue;
        throw;
      }
      if (energy(restored) < energy_now) {
        v = normalize(restored);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      report.status = SolveStatus::LineSearchStalled;
      report.message = "no energy decrease above the minimum step length";
      break;
    }
  }

  report.v = v;
  report.lambda = mult.lambda;
  return report;
}

}  // namespace cvk
