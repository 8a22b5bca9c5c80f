#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dhc/reach.hpp"
#include "dhc/universe.hpp"

namespace dhc {

// Interleaving parallel composition. Rules do not synchronize on actions;
// they share only the environment snapshot. Clocks are prefixed with the
// rule name ("ukhc_170.x") so the joint zone ranges over disjoint clocks.
struct ComposedSystem {
  std::vector<RuleAutomaton> components;

  std::vector<const RuleAutomaton*> pointers() const;
  // "L0|L1" style label for a location tuple.
  std::string label(const std::vector<int>& locs) const;
};

// Throws std::invalid_argument on fewer than two rules, duplicate rule
// names, or invalid component automata.
ComposedSystem compose(const std::vector<RuleAutomaton>& rules);

SysReach reach_composed(const ComposedSystem& c,
                        const std::vector<TrafficSnapshot>& scenarios);

enum class ConflictKind { Timelock, PermissionConflict };

struct ConflictReport {
  ConflictKind kind = ConflictKind::Timelock;
  std::vector<int> location_tuple;
  std::vector<std::string> location_names;  // one per component
  std::string action;          // permission conflicts only
  std::string enabling_rule;   // permission conflicts only
  std::string forbidding_rule; // permission conflicts only
  size_t snapshot_index = 0;
  TrafficSnapshot snapshot;    // witness environment, inline
  SysTrace trace;              // replayable trace to the composed state
  Zone witness_zone;           // stored zone containing the witness valuation
  std::vector<long long> witness_valuation;  // capped clock values
};

// Reachable composed states where no transition of any component is enabled
// under any scenario and some invariant upper bound blocks time. The
// blocking-point analysis runs on the exact capped valuation graph; the
// symbolic layer provides zones and traces. One report per location tuple.
std::vector<ConflictReport> find_timelocks(
    const ComposedSystem& c, const std::vector<TrafficSnapshot>& scenarios);

// Reachable composed states and snapshots where one component can take an
// action that another component's current location forbids. Deduplicated by
// (location tuple, action, snapshot).
std::vector<ConflictReport> find_permission_conflicts(
    const ComposedSystem& c, const std::vector<TrafficSnapshot>& scenarios);

struct GuardContradiction {
  std::string rule_a;
  std::string location_a;
  std::string rule_b;
  std::string location_b;
  std::string explanation;
};

// Pairs of jointly reachable locations whose spatial invariants cannot both
// hold on any snapshot of the universe: the composed system demands an
// impossible environment. Identical invariant formulas are never reported.
std::vector<GuardContradiction> guard_contradiction_scan(
    const std::vector<RuleAutomaton>& rules, const UniverseParams& universe);

// Same scan over an explicit scenario set.
std::vector<GuardContradiction> guard_contradiction_scan_snapshots(
    const std::vector<RuleAutomaton>& rules,
    const std::vector<TrafficSnapshot>& scenarios);

nlohmann::json conflict_report_to_json(const ComposedSystem& c,
                                       const ConflictReport& r);

}  // namespace dhc
