#pragma once

#include <string>
#include <vector>

#include "dhc/automaton.hpp"
#include "dhc/snapshot.hpp"

namespace dhc {

struct BundledSnapshot {
  std::string name;
  std::string text;  // the shipped JSON
  TrafficSnapshot snapshot;
  bool enabling = false;  // true: the terminal location is reachable with it
};

struct BundledRule {
  std::string name;
  std::string source;  // the shipped .rule text
  RuleAutomaton automaton;
  std::string terminal_location;  // the "on road junction" style sink
  std::vector<BundledSnapshot> snapshots;
};

// The shipped catalog: ukhc_170, ukhc_171, demo_red_light, demo_green_arrow,
// each with an enabling and a blocking example snapshot.
const std::vector<BundledRule>& bundled_rules();

// Standalone example snapshots (the worked three-part traffic situation and
// an empty road), not tied to a rule.
const std::vector<BundledSnapshot>& bundled_snapshots();

const BundledRule* find_bundled_rule(std::string_view name);
// Looks across the standalone examples and all bundled rules.
const BundledSnapshot* find_bundled_snapshot(std::string_view name);

}  // namespace dhc
