#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dhc/clocks.hpp"
#include "dhc/formula.hpp"

namespace dhc {

struct Location {
  std::string name;
  bool initial = false;
  ClockConstraint invariant;
  std::optional<Formula> spatial_invariant;
  std::set<std::string> forbid;  // actions this location explicitly forbids
  std::string role;              // free-text role, feeds the BDI action names
};

struct Transition {
  std::string source;
  std::string target;
  std::string action;
  Formula spatial_guard;  // never null; trivially true when unguarded
  ClockConstraint clock_guard;
  std::vector<std::string> resets;
};

// Extended timed automaton: USL-TR formulas as guards and invariants plus
// closed clock constraints. Spatial guards may reference quantified
// variables and the ego placeholder "E" only.
struct RuleAutomaton {
  std::string name;
  std::vector<std::string> clocks;
  std::vector<std::string> alphabet;
  std::map<std::string, long long> constants;
  std::vector<Location> locations;
  std::vector<Transition> transitions;
  std::vector<std::string> annotations;  // authoring notes from the rule file

  const Location* find_location(std::string_view name) const;
  int location_index(std::string_view name) const;  // -1 when absent
  const Location& initial_location() const;         // requires validity

  // Largest constant in any clock guard or invariant.
  long long max_constant() const;
};

// Checks the automaton invariants; returns human-readable violations.
std::vector<std::string> validate_automaton(const RuleAutomaton& a);

}  // namespace dhc
