#pragma once

#include <memory>

#include "cvk/operators.hpp"

namespace cvk {

struct EllipticSolveOptions {
  enum class Method { Direct, BiCgStab };
  Method method = Method::Direct;
  double iterative_tol = 1e-12;
  int iterative_max_iter = 20000;
};

struct DirichletSolution {
  ScalarField u;           // zero on the boundary
  double residual_inf = 0; // |A:hess(u) - f|_inf over interior nodes
};

/// Strictly elliptic operator u -> A(x):hess(u) with zero Dirichlet data,
/// assembled over interior nodes from the three Hessian stencils.
class EllipticOperator {
 public:
  EllipticOperator(EllipticOperator&&) noexcept;
  EllipticOperator& operator=(EllipticOperator&&) noexcept;
  ~EllipticOperator();

  /// Throws NotElliptic if some nodal eigenvalue of coeff is <= 0.
  static EllipticOperator assemble(const SymMatrixField& coeff);

  const GridDomain& domain() const;
  double ellipticity_constant() const;

  /// Solve A(x):hess(u) = f (f read on interior nodes) with u = 0 on the
  /// boundary. Direct factorization by default; BiCGSTAB as fallback.
  DirichletSolution solve_dirichlet(const ScalarField& f,
                                    const EllipticSolveOptions& opts = {}) const;

 private:
  EllipticOperator();
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cvk
