#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "biotcr/assembly.hpp"
#include "biotcr/mesh.hpp"

namespace fixtures {

using biotcr::Mesh;
using biotcr::Point;

inline Mesh unit_right_triangle() {
  return Mesh::from_triangles({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
}

// Two unit equilateral triangles sharing the face from (0,0) to (1,0).
inline Mesh equilateral_pair() {
  const double h = std::sqrt(3.0) / 2.0;
  return Mesh::from_triangles({{0, 0}, {1, 0}, {0.5, h}, {0.5, -h}}, {{0, 1, 2}, {0, 3, 1}});
}

// Lattice of acute isosceles triangles on a parallelogram, n x n rhombi.
inline Mesh acute_lattice(std::size_t n, double stretch = 1.2) {
  const double h = stretch * std::sqrt(3.0) / 2.0;
  std::vector<Point> v;
  for (std::size_t j = 0; j <= n; ++j)
    for (std::size_t i = 0; i <= n; ++i) v.emplace_back(double(i) + 0.5 * double(j), h * double(j));
  auto id = [n](std::size_t i, std::size_t j) { return j * (n + 1) + i; };
  std::vector<std::array<std::size_t, 3>> cells;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
      cells.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return Mesh::from_triangles(std::move(v), std::move(cells));
}

// Gauss-Legendre on [0,1] by Newton iteration; independent of the library rules.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

// Collapsed-square (Duffy) quadrature over triangle abc.
inline double integrate_triangle(const Point& a, const Point& b, const Point& c,
                                 const std::function<double(const Point&)>& f, int n = 12) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  const double area2 = std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double s = x[i];
      const double t = x[j] * (1.0 - s);
      const Point p = a + s * (b - a) + t * (c - a);
      sum += w[i] * w[j] * (1.0 - s) * f(p);
    }
  return sum * area2;
}

inline double relative_difference(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

inline double max_abs_entry(const biotcr::SparseMatrix& m) {
  double out = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (biotcr::SparseMatrix::InnerIterator it(m, k); it; ++it) out = std::max(out, std::abs(it.value()));
  return out;
}

}  // namespace fixtures
