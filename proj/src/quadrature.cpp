#include "biotcr/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace biotcr {

namespace {

void add_orbit3(QuadratureRule& rule, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  rule.points.push_back({b, a, a});
  rule.points.push_back({a, b, a});
  rule.points.push_back({a, a, b});
  for (int i = 0; i < 3; ++i) rule.weights.push_back(w);
}

QuadratureRule make_centroid() {
  return QuadratureRule{{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}}, {1.0}, 1};
}

QuadratureRule make_degree2() {
  QuadratureRule rule;
  rule.degree = 2;
  add_orbit3(rule, 1.0 / 6.0, 1.0 / 3.0);
  return rule;
}

// Dunavant's 6-point rule.
QuadratureRule make_degree4() {
  QuadratureRule rule;
  rule.degree = 4;
  add_orbit3(rule, 0.44594849091596488632, 0.22338158967801146570);
  add_orbit3(rule, 0.091576213509770743460, 0.10995174365532186764);
  return rule;
}

LineRule make_gauss(int n) {
  switch (n) {
    case 1: return LineRule{{0.5}, {1.0}, 1};
    case 2: {
      const double s = 0.5 / std::sqrt(3.0);
      return LineRule{{0.5 - s, 0.5 + s}, {0.5, 0.5}, 3};
    }
    case 3: {
      const double s = 0.5 * std::sqrt(0.6);
      return LineRule{{0.5 - s, 0.5, 0.5 + s}, {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0}, 5};
    }
    default: throw std::invalid_argument("gauss_line_rule: unsupported point count " + std::to_string(n));
  }
}

}  // namespace

const QuadratureRule& triangle_rule(int degree) {
  static const QuadratureRule r1 = make_centroid();
  static const QuadratureRule r2 = make_degree2();
  static const QuadratureRule r4 = make_degree4();
  if (degree <= 1) return r1;
  if (degree == 2) return r2;
  if (degree <= 4) return r4;
  throw std::invalid_argument("triangle_rule: degree " + std::to_string(degree) + " not available");
}

const LineRule& gauss_line_rule(int num_points) {
  static const LineRule g1 = make_gauss(1);
  static const LineRule g2 = make_gauss(2);
  static const LineRule g3 = make_gauss(3);
  switch (num_points) {
    case 1: return g1;
    case 2: return g2;
    case 3: return g3;
    default: throw std::invalid_argument("gauss_line_rule: unsupported point count " + std::to_string(num_points));
  }
}

}  // namespace biotcr
