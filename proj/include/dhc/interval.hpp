#pragma once

#include <optional>
#include <string>

#include "dhc/rational.hpp"

namespace dhc {

// Closed interval of road positions. Point intervals (lo == hi) are legal and
// show up as degenerate chop parts.
struct Interval {
  Rat lo;
  Rat hi;

  Rat length() const { return hi - lo; }
  bool is_point() const { return lo == hi; }
  bool valid() const { return lo <= hi; }

  bool contains(const Rat& p) const { return lo <= p && p <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }

  // Nonempty closed intersection, if any.
  std::optional<Interval> intersect(const Interval& o) const {
    Rat a = lo > o.lo ? lo : o.lo;
    Rat b = hi < o.hi ? hi : o.hi;
    if (a > b) {
      return std::nullopt;
    }
    return Interval{a, b};
  }

  // True when the intersection has positive length (touching endpoints do
  // not count).
  bool overlaps_positively(const Interval& o) const {
    auto x = intersect(o);
    return x && x->length() > Rat(0);
  }

  // True when this interval meets the open interior (lo, hi) of `view`.
  // Point views have an empty interior, so nothing meets them.
  bool meets_interior_of(const Interval& view) const {
    return view.lo < view.hi && hi > view.lo && lo < view.hi;
  }

  bool operator==(const Interval&) const = default;
  auto operator<=>(const Interval&) const = default;
};

std::string to_string(const Interval& v);

}  // namespace dhc
