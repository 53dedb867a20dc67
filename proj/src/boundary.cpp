#include "biotcr/boundary.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace biotcr {

int BoundarySpec::slot(BoundaryTag segment) {
  switch (segment) {
    case BoundaryTag::Bottom: return 0;
    case BoundaryTag::Right: return 1;
    case BoundaryTag::Top: return 2;
    case BoundaryTag::Left: return 3;
    case BoundaryTag::Interior: break;
  }
  throw std::invalid_argument("BoundarySpec: interior is not a boundary segment");
}

BoundarySpec& BoundarySpec::set(BoundaryTag segment, Clamped, Impermeable) {
  segments_[slot(segment)] = SegmentCondition{true, Point::Zero(), false, 0.0};
  return *this;
}

BoundarySpec& BoundarySpec::set(BoundaryTag segment, Clamped, Drained d) {
  segments_[slot(segment)] = SegmentCondition{true, Point::Zero(), true, d.pressure};
  return *this;
}

BoundarySpec& BoundarySpec::set(BoundaryTag segment, Traction t, Impermeable) {
  segments_[slot(segment)] = SegmentCondition{false, t.t, false, 0.0};
  return *this;
}

BoundarySpec& BoundarySpec::set(BoundaryTag segment, Traction t, Drained d) {
  segments_[slot(segment)] = SegmentCondition{false, t.t, true, d.pressure};
  return *this;
}

bool BoundarySpec::covers(BoundaryTag segment) const {
  return segment != BoundaryTag::Interior && segments_[slot(segment)].has_value();
}

const SegmentCondition& BoundarySpec::at(BoundaryTag segment) const {
  const auto& s = segments_[slot(segment)];
  if (!s) {
    throw std::invalid_argument("BoundarySpec: no condition for segment " +
                                std::string(to_string(segment)));
  }
  return *s;
}

bool BoundarySpec::any_clamped() const {
  return std::any_of(segments_.begin(), segments_.end(),
                     [](const auto& s) { return s && s->clamped; });
}

bool BoundarySpec::any_drained() const {
  return std::any_of(segments_.begin(), segments_.end(),
                     [](const auto& s) { return s && s->drained; });
}

BoundarySpec BoundarySpec::all_clamped_impermeable() {
  BoundarySpec bc;
  for (auto tag : {BoundaryTag::Bottom, BoundaryTag::Right, BoundaryTag::Top, BoundaryTag::Left}) {
    bc.set(tag, Clamped{}, Impermeable{});
  }
  return bc;
}

BoundarySpec BoundarySpec::footing(Point top_traction) {
  BoundarySpec bc = all_clamped_impermeable();
  bc.set(BoundaryTag::Top, Traction{top_traction}, Drained{0.0});
  return bc;
}

BoundarySpec BoundarySpec::clamped_drained_top() {
  BoundarySpec bc = all_clamped_impermeable();
  bc.set(BoundaryTag::Top, Clamped{}, Drained{0.0});
  return bc;
}

}  // namespace biotcr
