#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dhc/snapshot.hpp"

namespace dhc {

// Bounded universe of traffic snapshots used for exhaustive checking. Each
// snapshot places the ego at the start of the extent (claiming up to the end
// of the crossing), up to max_cars other cars on the position grid, one
// pedestrian configuration from pedestrian_options, and one subset of
// sign_kinds (signs sit at the crossing entrance).
struct UniverseParams {
  int max_cars = 0;
  Rat position_grid_step = Rat(1);
  std::vector<Rat> car_sizes;  // nonempty; the smallest size is the ego's
  // One entry per configuration; an empty list means "no pedestrians" only.
  std::vector<std::vector<Pedestrian>> pedestrian_options;
  std::vector<std::string> sign_kinds;
  Interval extent;
  Interval crossing;
  Rat perception_distance = Rat(0);
  Rat approach_distance = Rat(0);
};

std::vector<std::string> validate_universe_params(const UniverseParams& p);

// Calls `fn` for every snapshot of the universe in a fixed deterministic
// order; stops early when `fn` returns false. Throws std::invalid_argument
// when the parameters do not validate.
void for_each_snapshot(const UniverseParams& p,
                       const std::function<bool(const TrafficSnapshot&)>& fn);

std::vector<TrafficSnapshot> enumerate_universe(const UniverseParams& p);

// The universe used by `--universe default`: extent [0,12], crossing [4,8],
// one extra car on a step-2 grid, an optional started-crossing pedestrian,
// and the Stop/SWL/Red/GreenArrow sign kinds.
UniverseParams default_universe();

}  // namespace dhc
