#include "dhc/universe.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace dhc {

namespace {

std::vector<Rat> grid_positions(const UniverseParams& p) {
  std::vector<Rat> out;
  for (Rat pos = p.extent.lo; pos <= p.extent.hi; pos += p.position_grid_step) {
    out.push_back(pos);
  }
  return out;
}

Rat ego_size(const UniverseParams& p) {
  return *std::min_element(p.car_sizes.begin(), p.car_sizes.end());
}

TrafficSnapshot base_snapshot(const UniverseParams& p) {
  TrafficSnapshot s;
  s.extent = p.extent;
  s.crossing = p.crossing;
  s.perception_distance = p.perception_distance;
  s.approach_distance = p.approach_distance;
  s.ego_id = "E";
  CarOccupancy ego;
  ego.id = "E";
  ego.size = ego_size(p);
  ego.reservation = Interval{p.extent.lo, p.extent.lo + ego.size};
  if (p.crossing.hi > ego.reservation.hi) {
    ego.claim = Interval{ego.reservation.hi, p.crossing.hi};
  }
  s.cars.push_back(ego);
  return s;
}

}  // namespace

std::vector<std::string> validate_universe_params(const UniverseParams& p) {
  std::vector<std::string> out;
  auto bad = [&out](std::string msg) { out.push_back(std::move(msg)); };

  if (p.max_cars < 0) {
    bad("max_cars negative");
  }
  if (!p.extent.valid()) {
    bad("extent is not an interval");
    return out;
  }
  if (!p.crossing.valid() || !p.extent.contains(p.crossing)) {
    bad("crossing must lie within the extent");
  }
  if (p.position_grid_step <= Rat(0)) {
    bad("position_grid_step must be positive");
  } else {
    Rat q = p.extent.length() / p.position_grid_step;
    if (q.denominator() != 1) {
      bad("position_grid_step must divide the extent length");
    }
  }
  if (p.car_sizes.empty()) {
    bad("car_sizes must be nonempty (the ego needs a size)");
  } else {
    std::set<Rat> sizes;
    for (const auto& sz : p.car_sizes) {
      if (sz <= Rat(0)) {
        bad("car size must be positive");
      }
      if (!sizes.insert(sz).second) {
        bad("duplicate car size " + to_string(sz));
      }
    }
    if (out.empty() && ego_size(p) > p.extent.length()) {
      bad("smallest car size exceeds the extent length");
    }
  }
  std::set<std::string> kinds;
  for (const auto& k : p.sign_kinds) {
    if (k.empty()) {
      bad("empty sign kind");
    }
    if (!kinds.insert(k).second) {
      bad("duplicate sign kind '" + k + "'");
    }
  }
  for (size_t i = 0; i < p.pedestrian_options.size(); ++i) {
    for (const auto& ped : p.pedestrian_options[i]) {
      if (!ped.on.valid() || !p.extent.contains(ped.on)) {
        bad("pedestrian option #" + std::to_string(i) + " outside extent");
      }
    }
    for (size_t j = 0; j < i; ++j) {
      if (p.pedestrian_options[j] == p.pedestrian_options[i]) {
        bad("duplicate pedestrian option #" + std::to_string(i));
      }
    }
  }
  if (p.perception_distance < Rat(0)) {
    bad("perception_distance negative");
  }
  if (p.approach_distance < Rat(0)) {
    bad("approach_distance negative");
  }
  return out;
}

void for_each_snapshot(const UniverseParams& p,
                       const std::function<bool(const TrafficSnapshot&)>& fn) {
  auto violations = validate_universe_params(p);
  if (!violations.empty()) {
    throw std::invalid_argument("invalid universe parameters: " + violations.front());
  }

  const TrafficSnapshot base = base_snapshot(p);
  const std::vector<Rat> grid = grid_positions(p);

  // Placements for one non-ego car: (position, size) with the car inside the
  // extent. Cars are interchangeable, so multi-car configurations are
  // nondecreasing placement tuples.
  std::vector<std::pair<Rat, Rat>> placements;
  for (const auto& pos : grid) {
    for (const auto& sz : p.car_sizes) {
      if (pos + sz <= p.extent.hi) {
        placements.emplace_back(pos, sz);
      }
    }
  }
  std::sort(placements.begin(), placements.end());

  std::vector<std::vector<Pedestrian>> ped_options = p.pedestrian_options;
  if (ped_options.empty()) {
    ped_options.push_back({});
  }
  const size_t sign_subsets = size_t{1} << p.sign_kinds.size();

  bool keep_going = true;
  std::vector<size_t> chosen;  // indices into placements, nondecreasing

  auto emit_with_extras = [&](const std::vector<size_t>& cars) {
    TrafficSnapshot s = base;
    for (size_t i = 0; i < cars.size(); ++i) {
      CarOccupancy c;
      c.id = "C" + std::to_string(i + 1);
      c.size = placements[cars[i]].second;
      c.reservation = Interval{placements[cars[i]].first,
                               placements[cars[i]].first + c.size};
      s.cars.push_back(c);
    }
    for (const auto& peds : ped_options) {
      s.pedestrians = peds;
      for (size_t mask = 0; mask < sign_subsets && keep_going; ++mask) {
        s.signs.clear();
        for (size_t bit = 0; bit < p.sign_kinds.size(); ++bit) {
          if (mask & (size_t{1} << bit)) {
            s.signs.push_back(Sign{p.sign_kinds[bit], p.crossing.lo});
          }
        }
        if (!validate_snapshot(s).empty()) {
          continue;  // defensive; construction keeps everything in the extent
        }
        keep_going = fn(s);
      }
      if (!keep_going) {
        return;
      }
    }
  };

  std::function<void(size_t, int)> pick = [&](size_t from, int remaining) {
    if (!keep_going) {
      return;
    }
    if (remaining == 0) {
      emit_with_extras(chosen);
      return;
    }
    for (size_t i = from; i < placements.size() && keep_going; ++i) {
      chosen.push_back(i);
      pick(i, remaining - 1);
      chosen.pop_back();
    }
  };

  for (int count = 0; count <= p.max_cars && keep_going; ++count) {
    pick(0, count);
  }
}

std::vector<TrafficSnapshot> enumerate_universe(const UniverseParams& p) {
  std::vector<TrafficSnapshot> out;
  for_each_snapshot(p, [&out](const TrafficSnapshot& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

UniverseParams default_universe() {
  UniverseParams p;
  p.max_cars = 1;
  p.position_grid_step = Rat(2);
  p.car_sizes = {Rat(2)};
  p.pedestrian_options = {{}, {Pedestrian{Interval{Rat(5), Rat(6)}, true}}};
  p.sign_kinds = {"Stop", "SWL", "Red", "GreenArrow"};
  p.extent = Interval{Rat(0), Rat(12)};
  p.crossing = Interval{Rat(4), Rat(8)};
  p.perception_distance = Rat(12);
  p.approach_distance = Rat(3);
  return p;
}

}  // namespace dhc
