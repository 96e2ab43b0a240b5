#pragma once

#include "cvk/grid.hpp"

namespace cvk {

/// Discrete Hessian: 3-point second differences on the diagonal, 4-point
/// cross stencil for the mixed entry. Exact on quadratics.
SymMatrixField hessian(const ScalarField& v);

/// Trace of the discrete Hessian; zero on boundary nodes.
ScalarField laplacian(const ScalarField& v);

/// Composition of the 5-point Laplacian with itself. Defined on nodes at
/// distance >= 2 from the boundary, zero-filled elsewhere.
ScalarField biharmonic(const ScalarField& v);

/// Per-node 2x2 cofactor: cof[[a,b],[b,c]] = [[c,-b],[-b,a]].
SymMatrixField cofactor(const SymMatrixField& m);

/// Per-node determinant a11*a22 - a12^2, as an interior-supported field.
ScalarField det2(const SymMatrixField& m);

/// Per-node full contraction A : B = a11*b11 + 2*a12*b12 + a22*b22.
ScalarField frobenius(const SymMatrixField& m, const SymMatrixField& n);

/// A - (Tr A / 2) I per node.
SymMatrixField tracefree(const SymMatrixField& m);

/// Midpoint-type quadrature: hx*hy times the sum over interior nodes.
double integrate(const ScalarField& f);

/// sqrt(hx*hy * sum over all nodes of f^2).
double quad_norm(const ScalarField& f);

/// Quadrature adjoint of `hessian`:
///   <M, hessian(h)>_quad == nodal_dot(divdiv_adjoint(M), h)  for every h.
/// Assembled by transposing the Hessian stencils against the quadrature
/// weights; supported on every node touched by an interior stencil.
ScalarField divdiv_adjoint(const SymMatrixField& m);

/// integrate(frobenius(m, n)).
double quad_inner(const SymMatrixField& m, const SymMatrixField& n);

/// Smallest eigenvalue of the 2x2 matrix over all interior nodes.
/// If argmin_node is non-null it receives the offending interior index.
double min_hessian_eigenvalue(const SymMatrixField& m, int* argmin_node = nullptr);

}  // namespace cvk
