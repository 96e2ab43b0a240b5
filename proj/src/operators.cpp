#include "cvk/operators.hpp"

#include <cmath>
#include <limits>

namespace cvk {

SymMatrixField hessian(const ScalarField& v) {
  const GridDomain& g = v.domain;
  SymMatrixField m(g);
  const double ihx2 = 1.0 / (g.hx * g.hx);
  const double ihy2 = 1.0 / (g.hy * g.hy);
  const double ihxy = 1.0 / (4.0 * g.hx * g.hy);
  for (int i = 1; i <= g.nx - 2; ++i) {
    for (int j = 1; j <= g.ny - 2; ++j) {
      const int p = m.iidx(i, j);
      m.a11[p] = (v.at(i + 1, j) - 2.0 * v.at(i, j) + v.at(i - 1, j)) * ihx2;
      m.a22[p] = (v.at(i, j + 1) - 2.0 * v.at(i, j) + v.at(i, j - 1)) * ihy2;
      m.a12[p] = (v.at(i + 1, j + 1) - v.at(i + 1, j - 1) - v.at(i - 1, j + 1) +
                  v.at(i - 1, j - 1)) * ihxy;
    }
  }
  return m;
}

ScalarField laplacian(const ScalarField& v) {
  const GridDomain& g = v.domain;
  ScalarField out(g);
  const double ihx2 = 1.0 / (g.hx * g.hx);
  const double ihy2 = 1.0 / (g.hy * g.hy);
  for (int i = 1; i <= g.nx - 2; ++i)
    for (int j = 1; j <= g.ny - 2; ++j)
      out.at(i, j) = (v.at(i + 1, j) - 2.0 * v.at(i, j) + v.at(i - 1, j)) * ihx2 +
                     (v.at(i, j + 1) - 2.0 * v.at(i, j) + v.at(i, j - 1)) * ihy2;
  return out;
}

ScalarField biharmonic(const ScalarField& v) {
  const GridDomain& g = v.domain;
  const ScalarField lap = laplacian(v);
  ScalarField out(g);
  const double ihx2 = 1.0 / (g.hx * g.hx);
  const double ihy2 = 1.0 / (g.hy * g.hy);
  for (int i = 2; i <= g.nx - 3; ++i)
    for (int j = 2; j <= g.ny - 3; ++j)
      out.at(i, j) = (lap.at(i + 1, j) - 2.0 * lap.at(i, j) + lap.at(i - 1, j)) * ihx2 +
                     (lap.at(i, j + 1) - 2.0 * lap.at(i, j) + lap.at(i, j - 1)) * ihy2;
  return out;
}

SymMatrixField cofactor(const SymMatrixField& m) {
  SymMatrixField out(m.domain);
  for (int p = 0; p < m.size(); ++p) {
    out.a11[p] = m.a22[p];
    out.a12[p] = -m.a12[p];
    out.a22[p] = m.a11[p];
  }
  return out;
}

ScalarField det2(const SymMatrixField& m) {
  const GridDomain& g = m.domain;
  ScalarField out(g);
  for (int i = 1; i <= g.nx - 2; ++i)
    for (int j = 1; j <= g.ny - 2; ++j) {
      const int p = m.iidx(i, j);
      out.at(i, j) = m.a11[p] * m.a22[p] - m.a12[p] * m.a12[p];
    }
  return out;
}

ScalarField frobenius(const SymMatrixField& m, const SymMatrixField& n) {
  const GridDomain& g = m.domain;
  ScalarField out(g);
  for (int i = 1; i <= g.nx - 2; ++i)
    for (int j = 1; j <= g.ny - 2; ++j) {
      const int p = m.iidx(i, j);
      out.at(i, j) = m.a11[p] * n.a11[p] + 2.0 * m.a12[p] * n.a12[p] + m.a22[p] * n.a22[p];
    }
  return out;
}

SymMatrixField tracefree(const SymMatrixField& m) {
  SymMatrixField out = m;
  for (int p = 0; p < m.size(); ++p) {
    const double half_tr = 0.5 * (m.a11[p] + m.a22[p]);
    out.a11[p] -= half_tr;
    out.a22[p] -= half_tr;
  }
  return out;
}

double integrate(const ScalarField& f) {
  const GridDomain& g = f.domain;
  double s = 0.0;
  for (int i = 1; i <= g.nx - 2; ++i)
    for (int j = 1; j <= g.ny - 2; ++j) s += f.at(i, j);
  return g.hx * g.hy * s;
}

double quad_norm(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values) s += v * v;
  return std::sqrt(f.domain.hx * f.domain.hy * s);
}

ScalarField divdiv_adjoint(const SymMatrixField& m) {
  const GridDomain& g = m.domain;
  ScalarField out(g);
  const double q = g.hx * g.hy;
  const double wxx = q / (g.hx * g.hx);
  const double wyy = q / (g.hy * g.hy);
  const double wxy = q / (2.0 * g.hx * g.hy);  // carries the factor 2 on the mixed entry
  for (int i = 1; i <= g.nx - 2; ++i) {
    for (int j = 1; j <= g.ny - 2; ++j) {
      const int p = m.iidx(i, j);
      const double cxx = wxx * m.a11[p];
      const double cyy = wyy * m.a22[p];
      const double cxy = wxy * m.a12[p];
      out.at(i + 1, j) += cxx;
      out.at(i - 1, j) += cxx;
      out.at(i, j + 1) += cyy;
      out.at(i, j - 1) += cyy;
      out.at(i, j) -= 2.0 * (cxx + cyy);
      out.at(i + 1, j + 1) += cxy;
      out.at(i - 1, j - 1) += cxy;
      out.at(i + 1, j - 1) -= cxy;
      out.at(i - 1, j + 1) -= cxy;
    }
  }
  return out;
}

double quad_inner(const SymMatrixField& m, const SymMatrixField& n) {
  return integrate(frobenius(m, n));
}

double min_hessian_eigenvalue(const SymMatrixField& m, int* argmin_node) {
  double best = std::numeric_limits<double>::infinity();
  int best_p = -1;
  for (int p = 0; p < m.size(); ++p) {
    const double tr = m.a11[p] + m.a22[p];
    const double d = m.a11[p] - m.a22[p];
    const double disc = std::sqrt(d * d + 4.0 * m.a12[p] * m.a12[p]);
    const double lo = 0.5 * (tr - disc);
    if (lo < best) {
      best = lo;
      best_p = p;
    }
  }
  if (argmin_node) *argmin_node = best_p;
  return best;
}

}  // namespace cvk
