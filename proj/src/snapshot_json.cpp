#include "dhc/snapshot_json.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

namespace dhc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw std::runtime_error("snapshot: " + msg);
}

void check_keys(const json& obj, const char* what,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      fail(std::string("unknown key '") + key + "' in " + what);
    }
  }
}

Rat parse_position(const json& v, const char* what) {
  if (v.is_number_integer()) {
    return Rat(v.get<long long>());
  }
  if (v.is_number_float()) {
    // Exact binary expansion of the double; use the string form for
    // decimals that are not binary-representable.
    double d = v.get<double>();
    long long scaled = static_cast<long long>(d * (1LL << 30));
    if (static_cast<double>(scaled) / static_cast<double>(1LL << 30) != d) {
      fail(std::string(what) + ": non-exact float; write it as a string");
    }
    return Rat(scaled, 1LL << 30);
  }
  if (v.is_string()) {
    auto r = parse_rational(v.get<std::string>());
    if (!r) {
      fail(std::string(what) + ": malformed rational '" + v.get<std::string>() +
           "'");
    }
    return *r;
  }
  fail(std::string(what) + ": expected a number or a rational string");
}

Interval parse_interval(const json& v, const char* what) {
  if (!v.is_array() || v.size() != 2) {
    fail(std::string(what) + ": expected [lo, hi]");
  }
  Interval out{parse_position(v[0], what), parse_position(v[1], what)};
  if (!out.valid()) {
    fail(std::string(what) + ": lo > hi");
  }
  return out;
}

json interval_to_json(const Interval& v) {
  auto pos = [](const Rat& r) -> json {
    if (r.denominator() == 1) {
      return json(r.numerator());
    }
    return json(to_string(r));
  };
  return json::array({pos(v.lo), pos(v.hi)});
}

json position_to_json(const Rat& r) {
  if (r.denominator() == 1) {
    return json(r.numerator());
  }
  return json(to_string(r));
}

}  // namespace

TrafficSnapshot load_snapshot(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    fail("top level must be an object");
  }
  check_keys(doc, "snapshot",
             {"extent", "ego", "cars", "crossing", "pedestrians", "signs",
              "perception_distance", "approach_distance"});
  for (const char* required :
       {"extent", "ego", "cars", "crossing", "pedestrians", "signs",
        "perception_distance", "approach_distance"}) {
    if (!doc.contains(required)) {
      fail(std::string("missing key '") + required + "'");
    }
  }

  TrafficSnapshot s;
  s.extent = parse_interval(doc["extent"], "extent");
  if (!doc["ego"].is_string()) {
    fail("ego: expected a car id string");
  }
  s.ego_id = doc["ego"].get<std::string>();
  s.crossing = parse_interval(doc["crossing"], "crossing");
  s.perception_distance = parse_position(doc["perception_distance"],
                                         "perception_distance");
  s.approach_distance = parse_position(doc["approach_distance"],
                                       "approach_distance");

  if (!doc["cars"].is_array()) {
    fail("cars: expected an array");
  }
  for (const auto& c : doc["cars"]) {
    if (!c.is_object()) {
      fail("cars: expected objects");
    }
    check_keys(c, "car", {"id", "reservation", "claim", "size"});
    CarOccupancy car;
    if (!c.contains("id") || !c["id"].is_string()) {
      fail("car: missing id");
    }
    car.id = c["id"].get<std::string>();
    if (!c.contains("reservation")) {
      fail("car '" + car.id + "': missing reservation");
    }
    car.reservation = parse_interval(c["reservation"], "reservation");
    if (c.contains("claim") && !c["claim"].is_null()) {
      car.claim = parse_interval(c["claim"], "claim");
    }
    if (!c.contains("size")) {
      fail("car '" + car.id + "': missing size");
    }
    car.size = parse_position(c["size"], "size");
    s.cars.push_back(std::move(car));
  }

  if (!doc["pedestrians"].is_array()) {
    fail("pedestrians: expected an array");
  }
  for (const auto& p : doc["pedestrians"]) {
    if (!p.is_object()) {
      fail("pedestrians: expected objects");
    }
    check_keys(p, "pedestrian", {"on", "started_crossing"});
    Pedestrian ped;
    if (!p.contains("on")) {
      fail("pedestrian: missing 'on'");
    }
    ped.on = parse_interval(p["on"], "pedestrian.on");
    if (p.contains("started_crossing")) {
      if (!p["started_crossing"].is_boolean()) {
        fail("pedestrian.started_crossing: expected a boolean");
      }
      ped.started_crossing = p["started_crossing"].get<bool>();
    }
    s.pedestrians.push_back(ped);
  }

  if (!doc["signs"].is_array()) {
    fail("signs: expected an array");
  }
  for (const auto& g : doc["signs"]) {
    if (!g.is_object()) {
      fail("signs: expected objects");
    }
    check_keys(g, "sign", {"kind", "at"});
    Sign sign;
    if (!g.contains("kind") || !g["kind"].is_string()) {
      fail("sign: missing kind");
    }
    sign.kind = g["kind"].get<std::string>();
    if (!g.contains("at")) {
      fail("sign '" + sign.kind + "': missing position");
    }
    sign.at = parse_position(g["at"], "sign.at");
    s.signs.push_back(std::move(sign));
  }

  auto violations = validate_snapshot(s);
  if (!violations.empty()) {
    fail("invariant violation: " + violations.front());
  }
  return s;
}

nlohmann::json snapshot_to_json(const TrafficSnapshot& s) {
  json doc;
  doc["extent"] = interval_to_json(s.extent);
  doc["ego"] = s.ego_id;
  doc["crossing"] = interval_to_json(s.crossing);
  doc["cars"] = json::array();
  for (const auto& c : s.cars) {
    json car;
    car["id"] = c.id;
    car["reservation"] = interval_to_json(c.reservation);
    if (c.claim) {
      car["claim"] = interval_to_json(*c.claim);
    }
    car["size"] = position_to_json(c.size);
    doc["cars"].push_back(std::move(car));
  }
  doc["pedestrians"] = json::array();
  for (const auto& p : s.pedestrians) {
    doc["pedestrians"].push_back(
        json{{"on", interval_to_json(p.on)},
             {"started_crossing", p.started_crossing}});
  }
  doc["signs"] = json::array();
  for (const auto& g : s.signs) {
    doc["signs"].push_back(json{{"kind", g.kind}, {"at", position_to_json(g.at)}});
  }
  doc["perception_distance"] = position_to_json(s.perception_distance);
  doc["approach_distance"] = position_to_json(s.approach_distance);
  return doc;
}

std::string save_snapshot(const TrafficSnapshot& s) {
  return snapshot_to_json(s).dump(2) + "\n";
}

}  // namespace dhc
