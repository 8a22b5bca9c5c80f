#include "dhc/automaton.hpp"

#include <algorithm>
#include <stdexcept>

namespace dhc {

const Location* RuleAutomaton::find_location(std::string_view name) const {
  for (const auto& l : locations) {
    if (l.name == name) {
      return &l;
    }
  }
  return nullptr;
}

int RuleAutomaton::location_index(std::string_view name) const {
  for (size_t i = 0; i < locations.size(); ++i) {
    if (locations[i].name == name) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

const Location& RuleAutomaton::initial_location() const {
  for (const auto& l : locations) {
    if (l.initial) {
      return l;
    }
  }
  throw std::logic_error("automaton '" + name + "' has no initial location");
}

long long RuleAutomaton::max_constant() const {
  long long m = 0;
  for (const auto& l : locations) {
    m = std::max(m, l.invariant.max_constant());
  }
  for (const auto& t : transitions) {
    m = std::max(m, t.clock_guard.max_constant());
  }
  return m;
}

namespace {

void check_clock_constraint(const RuleAutomaton& a, const ClockConstraint& cc,
                            const std::string& where,
                            std::vector<std::string>& out) {
  for (const auto& atom : cc.atoms) {
    if (std::find(a.clocks.begin(), a.clocks.end(), atom.clock) ==
        a.clocks.end()) {
      out.push_back(where + " references undeclared clock '" + atom.clock + "'");
    }
    if (atom.bound < 0) {
      out.push_back(where + " uses a negative constant");
    }
  }
}

void check_spatial(const Formula& f, const std::string& where,
                   std::vector<std::string>& out) {
  for (const auto& var : free_variables(f)) {
    if (var != "E") {
      out.push_back(where + " is an open formula: unbound car reference '" + var +
                    "'");
    }
  }
}

}  // namespace

std::vector<std::string> validate_automaton(const RuleAutomaton& a) {
  std::vector<std::string> out;
  auto bad = [&out](std::string msg) { out.push_back(std::move(msg)); };

  if (a.name.empty()) {
    bad("rule name is empty");
  }

  std::set<std::string> location_names;
  int initial_count = 0;
  for (const auto& l : a.locations) {
    if (!location_names.insert(l.name).second) {
      bad("duplicate location '" + l.name + "'");
    }
    if (l.initial) {
      ++initial_count;
    }
    check_clock_constraint(a, l.invariant, "invariant of '" + l.name + "'", out);
    if (l.spatial_invariant) {
      check_spatial(*l.spatial_invariant, "spatial invariant of '" + l.name + "'",
                    out);
    }
    for (const auto& action : l.forbid) {
      if (std::find(a.alphabet.begin(), a.alphabet.end(), action) ==
          a.alphabet.end()) {
        bad("location '" + l.name + "' forbids unknown action '" + action + "'");
      }
    }
  }
  if (initial_count != 1) {
    bad("expected exactly one initial location, found " +
        std::to_string(initial_count));
  }

  std::set<std::string> clock_names;
  for (const auto& c : a.clocks) {
    if (!clock_names.insert(c).second) {
      bad("duplicate clock '" + c + "'");
    }
  }
  std::set<std::string> action_names;
  for (const auto& act : a.alphabet) {
    if (!action_names.insert(act).second) {
      bad("duplicate action '" + act + "'");
    }
  }
  for (const auto& [name, value] : a.constants) {
    if (value < 0) {
      bad("constant '" + name + "' is negative");
    }
  }

  for (size_t i = 0; i < a.transitions.size(); ++i) {
    const auto& t = a.transitions[i];
    const std::string where =
        "transition " + t.source + " -> " + t.target + " (#" + std::to_string(i) +
        ")";
    if (a.find_location(t.source) == nullptr) {
      bad(where + " leaves undeclared location '" + t.source + "'");
    }
    if (a.find_location(t.target) == nullptr) {
      bad(where + " enters undeclared location '" + t.target + "'");
    }
    if (std::find(a.alphabet.begin(), a.alphabet.end(), t.action) ==
        a.alphabet.end()) {
      bad(where + " uses action '" + t.action + "' outside the alphabet");
    }
    if (!t.spatial_guard) {
      bad(where + " has a null spatial guard");
    } else {
      check_spatial(t.spatial_guard, "guard of " + where, out);
    }
    check_clock_constraint(a, t.clock_guard, "clock guard of " + where, out);
    for (const auto& r : t.resets) {
      if (std::find(a.clocks.begin(), a.clocks.end(), r) == a.clocks.end()) {
        bad(where + " resets undeclared clock '" + r + "'");
      }
    }
  }
  return out;
}

}  // namespace dhc
