#pragma once

#include <functional>
#include <vector>

#include "cvk/errors.hpp"

namespace cvk {

/// Uniform rectangular node grid over [0, extent_x] x [0, extent_y].
/// Node (i, j) sits at (i*hx, j*hy); i in [0, nx), j in [0, ny).
/// Counts include the boundary nodes.
struct GridDomain {
  double extent_x = 1.0;
  double extent_y = 1.0;
  int nx = 0;
  int ny = 0;
  double hx = 0.0;
  double hy = 0.0;

  GridDomain() = default;
  GridDomain(double ext_x, double ext_y, int n_x, int n_y);

  int node_count() const { return nx * ny; }
  int interior_nx() const { return nx - 2; }
  int interior_ny() const { return ny - 2; }
  int interior_count() const { return interior_nx() * interior_ny(); }

  double x(int i) const { return i * hx; }
  double y(int j) const { return j * hy; }

  double area() const { return extent_x * extent_y; }
  /// Measure covered by the interior-node quadrature rule.
  double interior_area() const { return interior_count() * hx * hy; }

  int idx(int i, int j) const { return i * ny + j; }
  /// Index into interior-only storage; valid for 1 <= i <= nx-2, 1 <= j <= ny-2.
  int interior_idx(int i, int j) const { return (i - 1) * interior_ny() + (j - 1); }

  bool same_as(const GridDomain& other) const {
    return nx == other.nx && ny == other.ny && extent_x == other.extent_x &&
           extent_y == other.extent_y;
  }
};

/// One real value per grid node, row-major over (i, j).
struct ScalarField {
  GridDomain domain;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const GridDomain& g) : domain(g), values(g.node_count(), 0.0) {}

  static ScalarField from_function(const GridDomain& g,
                                   const std::function<double(double, double)>& f);
  static ScalarField constant(const GridDomain& g, double value);

  double& at(int i, int j) { return values[domain.idx(i, j)]; }
  double at(int i, int j) const { return values[domain.idx(i, j)]; }

  bool all_finite() const;
  void require_finite(const char* what) const;
};

/// Symmetric 2x2 matrix per interior node. The (2,1) entry is a12 by construction.
struct SymMatrixField {
  GridDomain domain;
  std::vector<double> a11;
  std::vector<double> a12;
  std::vector<double> a22;

  SymMatrixField() = default;
  explicit SymMatrixField(const GridDomain& g)
      : domain(g),
        a11(g.interior_count(), 0.0),
        a12(g.interior_count(), 0.0),
        a22(g.interior_count(), 0.0) {}

  int size() const { return static_cast<int>(a11.size()); }
  int iidx(int i, int j) const { return domain.interior_idx(i, j); }
};

// Field arithmetic used throughout the solver; all return fresh fields.
ScalarField add_scaled(const ScalarField& a, double t, const ScalarField& b);
double nodal_dot(const ScalarField& a, const ScalarField& b);
double inf_norm(const ScalarField& f);
double inf_norm_interior(const ScalarField& f);

}  // namespace cvk
