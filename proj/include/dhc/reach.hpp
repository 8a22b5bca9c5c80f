#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dhc/automaton.hpp"
#include "dhc/snapshot.hpp"
#include "dhc/zone.hpp"

namespace dhc {

// --- shared exploration engine -------------------------------------------
//
// One or more component automata interleave over a shared, nondeterministic
// environment: at every step any scenario snapshot may be current. A
// transition fires when its spatial guard, the source's and the target's
// spatial invariants all hold of the chosen snapshot and its clock guard is
// feasible. Zones carry the union of all component clocks.

struct ExploreStep {
  int component = 0;
  int transition = 0;   // index into that component's transition list
  size_t snapshot = 0;  // scenario chosen for this step
};
using SysTrace = std::vector<ExploreStep>;

struct SysReach {
  std::vector<std::vector<int>> order;  // location tuples in first-visit order
  std::map<std::vector<int>, std::vector<Zone>> zones;  // maximal zones per tuple
  std::map<std::vector<int>, SysTrace> traces;          // shortest arrival trace
  std::vector<std::string> clock_names;
  long long max_constant = 0;
};

// Exact capped-integer semantics: clock values live in {0..cap} with `cap`
// conflating everything above the largest constant. For these closed
// constraints this reaches exactly the locations of the dense semantics.
struct SysDiscrete {
  std::set<std::pair<std::vector<int>, std::vector<long long>>> states;
  std::set<std::vector<int>> locations;
  std::map<std::vector<int>, SysTrace> traces;
  long long cap = 1;
};

SysReach explore_zones(const std::vector<const RuleAutomaton*>& components,
                       const std::vector<TrafficSnapshot>& scenarios);

// horizon < 0 explores to the fixpoint; otherwise BFS depth is capped at
// `horizon` steps (each delay or action counts one step).
SysDiscrete explore_discrete(const std::vector<const RuleAutomaton*>& components,
                             const std::vector<TrafficSnapshot>& scenarios,
                             long long horizon);

// Re-executes a trace through the zone operations; true when every step is
// enabled under its recorded snapshot and the run ends in `expected`.
bool replay_system_trace(const std::vector<const RuleAutomaton*>& components,
                         const std::vector<TrafficSnapshot>& scenarios,
                         const SysTrace& trace, const std::vector<int>& expected);

// --- single-automaton API --------------------------------------------------

struct SymbolicState {
  std::string location;
  Zone zone;
  size_t snapshot_index = 0;
};

// Transitions leaving st.location whose spatial guard holds on `s` (full
// extent view, "E" bound to the ego) and whose clock guard intersected with
// the zone under the location invariant is nonempty.
std::vector<const Transition*> enabled(const RuleAutomaton& a,
                                       const SymbolicState& st,
                                       const TrafficSnapshot& s);

struct ReachStep {
  std::string action;
  std::string source;
  std::string target;
  size_t snapshot_index = 0;
  int transition_index = 0;
};

struct LocationReach {
  std::string location;
  std::vector<Zone> zones;
  std::vector<ReachStep> trace;
};

struct ReachResult {
  std::vector<LocationReach> locations;  // first-visit order
  std::vector<std::string> clock_names;

  bool contains(std::string_view location) const;
  const LocationReach* find(std::string_view location) const;
};

ReachResult reach(const RuleAutomaton& a,
                  const std::vector<TrafficSnapshot>& scenarios);

struct DiscreteResult {
  std::set<std::string> locations;
  size_t state_count = 0;
};

// Explicit-state oracle over capped integer valuations. Throws
// std::invalid_argument on a negative horizon; horizon 0 yields exactly the
// initial location (when its invariant admits the zero valuation).
DiscreteResult reach_discrete(const RuleAutomaton& a,
                              const std::vector<TrafficSnapshot>& scenarios,
                              long long horizon);

bool replay_trace(const RuleAutomaton& a,
                  const std::vector<TrafficSnapshot>& scenarios,
                  const std::vector<ReachStep>& trace,
                  const std::string& expected_final);

// Sufficient horizon for reach_discrete to be a complete oracle: every
// reachable capped state is reachable by a simple path.
long long sufficient_horizon(const std::vector<const RuleAutomaton*>& components);

}  // namespace dhc
