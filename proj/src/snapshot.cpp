#include "dhc/snapshot.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace dhc {

const CarOccupancy* TrafficSnapshot::find_car(std::string_view id) const {
  for (const auto& c : cars) {
    if (c.id == id) {
      return &c;
    }
  }
  return nullptr;
}

const CarOccupancy& TrafficSnapshot::ego() const {
  const CarOccupancy* e = find_car(ego_id);
  if (e == nullptr) {
    throw std::logic_error("snapshot has no car with the ego id '" + ego_id + "'");
  }
  return *e;
}

std::vector<std::string> validate_snapshot(const TrafficSnapshot& s) {
  std::vector<std::string> out;
  auto bad = [&out](std::string msg) { out.push_back(std::move(msg)); };

  if (!s.extent.valid()) {
    bad("extent is not an interval (lo > hi)");
    return out;  // everything below is relative to the extent
  }
  if (!s.crossing.valid()) {
    bad("crossing is not an interval (lo > hi)");
  } else if (!s.extent.contains(s.crossing)) {
    bad("crossing outside extent");
  }
  if (s.perception_distance < Rat(0)) {
    bad("perception_distance negative");
  }
  if (s.approach_distance < Rat(0)) {
    bad("approach_distance negative");
  }

  std::set<std::string> seen;
  int ego_count = 0;
  for (const auto& c : s.cars) {
    if (c.id.empty()) {
      bad("car with empty id");
    }
    if (!seen.insert(c.id).second) {
      bad("duplicate id '" + c.id + "'");
    }
    if (c.id == s.ego_id) {
      ++ego_count;
    }
    if (!c.reservation.valid()) {
      bad("car '" + c.id + "' reservation is not an interval");
    } else if (!s.extent.contains(c.reservation)) {
      bad("occupancy outside extent (car '" + c.id + "' reservation " +
          to_string(c.reservation) + ")");
    }
    if (c.size <= Rat(0)) {
      bad("car '" + c.id + "' size must be positive");
    }
    if (c.claim) {
      if (!c.claim->valid()) {
        bad("car '" + c.id + "' claim is not an interval");
      } else {
        if (!s.extent.contains(*c.claim)) {
          bad("occupancy outside extent (car '" + c.id + "' claim " +
              to_string(*c.claim) + ")");
        }
        if (c.reservation.valid() && c.claim->lo < c.reservation.hi) {
          bad("car '" + c.id + "' claim does not extend ahead of its reservation");
        }
      }
    }
  }
  if (ego_count != 1) {
    bad("expected exactly one car with the ego id '" + s.ego_id + "', found " +
        std::to_string(ego_count));
  }

  for (size_t i = 0; i < s.pedestrians.size(); ++i) {
    const auto& p = s.pedestrians[i];
    if (!p.on.valid()) {
      bad("pedestrian #" + std::to_string(i) + " stretch is not an interval");
    } else if (!s.extent.contains(p.on)) {
      bad("pedestrian #" + std::to_string(i) + " outside extent");
    }
  }
  for (const auto& sign : s.signs) {
    if (sign.kind.empty()) {
      bad("sign with empty kind");
    }
    if (!s.extent.contains(sign.at)) {
      bad("sign '" + sign.kind + "' outside extent");
    }
  }
  return out;
}

std::vector<Rat> event_points(const TrafficSnapshot& s, const Interval& view) {
  if (!view.valid() || !s.extent.contains(view)) {
    throw std::domain_error("view " + to_string(view) + " outside extent " +
                            to_string(s.extent));
  }
  std::set<Rat> pts{view.lo, view.hi};
  auto add = [&](const Rat& p) {
    if (view.contains(p)) {
      pts.insert(p);
    }
  };
  for (const auto& c : s.cars) {
    add(c.reservation.lo);
    add(c.reservation.hi);
    if (c.claim) {
      add(c.claim->lo);
      add(c.claim->hi);
    }
  }
  add(s.crossing.lo);
  add(s.crossing.hi);
  for (const auto& p : s.pedestrians) {
    add(p.on.lo);
    add(p.on.hi);
  }
  return {pts.begin(), pts.end()};
}

std::string to_string(const Interval& v) {
  return "[" + to_string(v.lo) + "," + to_string(v.hi) + "]";
}

}  // namespace dhc
