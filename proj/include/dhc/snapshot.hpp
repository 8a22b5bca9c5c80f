#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dhc/interval.hpp"
#include "dhc/rational.hpp"

namespace dhc {

// Space a car holds on the ego path: the reservation is what it occupies
// now, the claim (if any) is the stretch ahead it intends to move into.
struct CarOccupancy {
  std::string id;
  Interval reservation;
  std::optional<Interval> claim;
  Rat size = Rat(1);

  bool operator==(const CarOccupancy&) const = default;
};

struct Pedestrian {
  Interval on;
  bool started_crossing = false;

  bool operator==(const Pedestrian&) const = default;
};

struct Sign {
  std::string kind;
  Rat at;

  bool operator==(const Sign&) const = default;
};

// One-dimensional abstraction of the ego's planned path through a junction.
// Immutable by convention: analyses copy-and-modify, never mutate in place.
struct TrafficSnapshot {
  Interval extent;
  std::string ego_id;
  std::vector<CarOccupancy> cars;  // ego included
  Interval crossing;               // the crossing segment (`cs`)
  std::vector<Pedestrian> pedestrians;
  std::vector<Sign> signs;
  Rat perception_distance;
  Rat approach_distance;  // the distance constant d_c, carried as configuration

  const CarOccupancy* find_car(std::string_view id) const;
  // Requires a validated snapshot (exactly one car with ego_id).
  const CarOccupancy& ego() const;

  bool operator==(const TrafficSnapshot&) const = default;
};

// Checks every snapshot invariant; returns human-readable violations,
// empty when the snapshot is well formed.
std::vector<std::string> validate_snapshot(const TrafficSnapshot& s);

// Endpoints of every occupancy (reservation and claim), the crossing and
// every pedestrian stretch that fall inside `view`, plus the view bounds.
// Sorted strictly ascending. Throws std::domain_error when `view` is not
// contained in the extent.
std::vector<Rat> event_points(const TrafficSnapshot& s, const Interval& view);

}  // namespace dhc
