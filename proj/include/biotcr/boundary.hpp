#pragma once

#include <array>
#include <optional>

#include "biotcr/mesh.hpp"

namespace biotcr {

struct Clamped {};
struct Traction {
  Point t = Point::Zero();
};
struct Impermeable {};
struct Drained {
  double pressure = 0.0;
};

struct SegmentCondition {
  bool clamped = true;
  Point traction = Point::Zero();  // used when !clamped
  bool drained = false;
  double pressure = 0.0;  // used when drained
};

/// Independent mechanical and flow conditions on each side of the rectangle.
class BoundarySpec {
 public:
  BoundarySpec& set(BoundaryTag segment, Clamped, Impermeable);
  BoundarySpec& set(BoundaryTag segment, Clamped, Drained d);
  BoundarySpec& set(BoundaryTag segment, Traction t, Impermeable);
  BoundarySpec& set(BoundaryTag segment, Traction t, Drained d);

  bool covers(BoundaryTag segment) const;
  /// Throws std::invalid_argument for an unmapped segment.
  const SegmentCondition& at(BoundaryTag segment) const;

  bool any_clamped() const;
  bool any_drained() const;

  /// u = 0 and w.n = 0 on every side.
  static BoundarySpec all_clamped_impermeable();
  /// Loaded, drained top; rigid impermeable elsewhere.
  static BoundarySpec footing(Point top_traction = Point(0.0, -1.0));
  /// u = 0 everywhere, p = 0 on top, impermeable elsewhere.
  static BoundarySpec clamped_drained_top();

 private:
  static int slot(BoundaryTag segment);
  std::array<std::optional<SegmentCondition>, 4> segments_{};
};

}  // namespace biotcr
