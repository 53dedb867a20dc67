#pragma once

#include <array>
#include <vector>

namespace biotcr {

/// Triangle rule in barycentric coordinates; weights sum to one and are
/// scaled by |T| at the use site.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Rule on [0,1]; weights sum to one and are scaled by |e|.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;
};

const QuadratureRule& triangle_rule(int degree);
const LineRule& gauss_line_rule(int num_points);

}  // namespace biotcr
