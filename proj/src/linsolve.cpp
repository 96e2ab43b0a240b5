#include "cvk/linsolve.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <Eigen/IterativeLinearSolvers>

#include <cmath>
#include <string>
#include <vector>

namespace cvk {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

/// Row of the discrete operator a11*uxx + 2*a12*uxy + a22*uyy for interior
/// node (i, j); couplings to boundary nodes are dropped (zero Dirichlet data).
void append_row(std::vector<Eigen::Triplet<double>>& trips, const GridDomain& g,
                const SymMatrixField& coeff, int i, int j) {
  const int row = g.interior_idx(i, j);
  const int p = coeff.iidx(i, j);
  const double cxx = coeff.a11[p] / (g.hx * g.hx);
  const double cyy = coeff.a22[p] / (g.hy * g.hy);
  const double cxy = coeff.a12[p] / (2.0 * g.hx * g.hy);

  auto add = [&](int ii, int jj, double w) {
    if (ii >= 1 && ii <= g.nx - 2 && jj >= 1 && jj <= g.ny - 2)
      trips.emplace_back(row, g.interior_idx(ii, jj), w);
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

}  // namespace

struct EllipticOperator::Impl {
  GridDomain grid;
  double ellipticity = 0.0;
  SpMat matrix;
  Eigen::SparseLU<SpMat> lu;
  bool factorized = false;
};

EllipticOperator::EllipticOperator() : impl_(new Impl) {}
EllipticOperator::EllipticOperator(EllipticOperator&&) noexcept = default;
EllipticOperator& EllipticOperator::operator=(EllipticOperator&&) noexcept = default;
EllipticOperator::~EllipticOperator() = default;

const GridDomain& EllipticOperator::domain() const { return impl_->grid; }
double EllipticOperator::ellipticity_constant() const { return impl_->ellipticity; }

EllipticOperator EllipticOperator::assemble(const SymMatrixField& coeff) {
  const GridDomain& g = coeff.domain;

  int bad_node = -1;
  const double min_eig = min_hessian_eigenvalue(coeff, &bad_node);
  if (!(min_eig > 0.0))
    fail(ErrorCode::NotElliptic, "coefficient matrix not strictly elliptic at interior node " +
                                     std::to_string(bad_node) + " (min eigenvalue " +
                                     std::to_string(min_eig) + ")");

  EllipticOperator op;
  op.impl_->grid = g;
  op.impl_->ellipticity = min_eig;

  const int m = g.interior_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(9) * m);
  for (int i = 1; i <= g.nx - 2; ++i)
    for (int j = 1; j <= g.ny - 2; ++j) append_row(trips, g, coeff, i, j);

  op.impl_->matrix.resize(m, m);
  op.impl_->matrix.setFromTriplets(trips.begin(), trips.end());
  op.impl_->matrix.makeCompressed();

  // Factorize up front so the operator is immutable afterwards and
  // concurrent solves against it stay safe.
  op.impl_->lu.compute(op.impl_->matrix);
  if (op.impl_->lu.info() != Eigen::Success)
    fail(ErrorCode::SingularSystem, "sparse LU factorization failed");
  op.impl_->factorized = true;
  return op;
}

DirichletSolution EllipticOperator::solve_dirichlet(const ScalarField& f,
                                                    const EllipticSolveOptions& opts) const {
  const GridDomain& g = impl_->grid;
  f.require_finite("right-hand side");
  if (!f.domain.same_as(g)) fail(ErrorCode::InvalidArgument, "right-hand side grid mismatch");

  const int m = g.interior_count();
  Eigen::VectorXd rhs(m);
  for (int i = 1; i <= g.nx - 2; ++i)
    for (int j = 1; j <= g.ny - 2; ++j) rhs[g.interior_idx(i, j)] = f.at(i, j);

  Eigen::VectorXd x;
  if (opts.method == EllipticSolveOptions::Method::Direct) {
    x = impl_->lu.solve(rhs);
    if (impl_->lu.info() != Eigen::Success)
      fail(ErrorCode::SingularSystem, "sparse LU solve failed");
  } else {
    Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> bicg;
    bicg.setTolerance(opts.iterative_tol);
    bicg.setMaxIterations(opts.iterative_max_iter);
    bicg.compute(impl_->matrix);
    if (bicg.info() != Eigen::Success)
      fail(ErrorCode::SingularSystem, "BiCGSTAB preconditioner setup failed");
    x = bicg.solve(rhs);
    if (bicg.info() != Eigen::Success)
      fail(ErrorCode::Diverged, "BiCGSTAB did not converge: error " + std::to_string(bicg.error()));
  }

  DirichletSolution sol;
  sol.u = ScalarField(g);
  for (int i = 1; i <= g.nx - 2; ++i)
    for (int j = 1; j <= g.ny - 2; ++j) sol.u.at(i, j) = x[g.interior_idx(i, j)];
  sol.u.require_finite("Dirichlet solution");

  const Eigen::VectorXd res = impl_->matrix * x - rhs;
  sol.residual_inf = res.size() ? res.cwiseAbs().maxCoeff() : 0.0;
  return sol;
}

}  // namespace cvk
