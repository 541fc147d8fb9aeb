#include <cmath>

#include "ptwind/spectral.hpp"

namespace ptwind {

Grid1D discretization_grid(const SpectralProblem& p, std::size_t n) {
  if (n < 16) throw Error(ErrorKind::InvalidArgument, "discretization needs n >= 16");
  const double a = p.domain.x_min();
  if (p.boundary.kind == BoundaryKind::Dirichlet) {
    const double h = (p.domain.x_max() - a) / static_cast<double>(n + 1);
    return Grid1D(a + h, p.domain.x_max() - h, n);
  }
  const double period = p.potential.period();
  const double h = period / static_cast<double>(n);
  return Grid1D(a, a + period - h, n);
}

namespace {
struct Stencil {
  Grid1D grid;
  double inv_h2;
  std::vector<cd> diag;
  cd corner_lo;  // A(0, n-1)
  cd corner_hi;  // A(n-1, 0)
  bool cyclic;
};

Stencil build(const SpectralProblem& p, std::size_t n) {
  p.validate();
  if (!p.is_linear())
    throw Error(ErrorKind::UnsupportedBoundary, "discretize handles linear problems only");
  Stencil s{discretization_grid(p, n), 0.0, {}, 0.0, 0.0, false};
  const double h = s.grid.h();
  s.inv_h2 = 1.0 / (h * h);
  s.diag.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    s.diag[j] = 2.0 * s.inv_h2 + eval_potential(p.potential, s.grid.x(j));
  if (p.boundary.kind == BoundaryKind::Bloch) {
    const double phase = p.boundary.k * p.potential.period();
    s.cyclic = true;
    s.corner_lo = -std::polar(s.inv_h2, -phase);
    s.corner_hi = -std::polar(s.inv_h2, phase);
  }
  return s;
}
}  // namespace

Eigen::MatrixXcd discretize(const SpectralProblem& p, std::size_t n) {
  Stencil s = build(p, n);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    a(j, j) = s.diag[j];
    if (j + 1 < n) {
      a(j, j + 1) = -s.inv_h2;
      a(j + 1, j) = -s.inv_h2;
    }
  }
  if (s.cyclic) {
    a(0, n - 1) += s.corner_lo;
    a(n - 1, 0) += s.corner_hi;
  }
  return a;
}

Eigen::SparseMatrix<cd> discretize_sparse(const SpectralProblem& p, std::size_t n) {
  Stencil s = build(p, n);
  std::vector<Eigen::Triplet<cd>> t;
  t.reserve(3 * n + 2);
  const auto N = static_cast<Eigen::Index>(n);
  for (Eigen::Index j = 0; j < N; ++j) {
    t.emplace_back(j, j, s.diag[j]);
    if (j + 1 < N) {
      t.emplace_back(j, j + 1, -s.inv_h2);
      t.emplace_back(j + 1, j, -s.inv_h2);
    }
  }
  if (s.cyclic) {
    t.emplace_back(0, N - 1, s.corner_lo);
    t.emplace_back(N - 1, 0, s.corner_hi);
  }
  Eigen::SparseMatrix<cd> a(N, N);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  return a;
}

}  // namespace ptwind
