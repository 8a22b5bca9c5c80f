#include "dhc/compose.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <stdexcept>

#include "dhc/eval.hpp"
#include "dhc/formula_parser.hpp"
#include "dhc/snapshot_json.hpp"

namespace dhc {

namespace {

void rename_clock(ClockConstraint& cc, const std::map<std::string, std::string>& m) {
  for (auto& atom : cc.atoms) {
    atom.clock = m.at(atom.clock);
  }
}

RuleAutomaton prefix_clocks(const RuleAutomaton& a) {
  RuleAutomaton out = a;
  std::map<std::string, std::string> renames;
  for (auto& c : out.clocks) {
    std::string fresh = a.name + "." + c;
    renames[c] = fresh;
    c = fresh;
  }
  for (auto& l : out.locations) {
    rename_clock(l.invariant, renames);
  }
  for (auto& t : out.transitions) {
    rename_clock(t.clock_guard, renames);
    for (auto& r : t.resets) {
      r = renames.at(r);
    }
  }
  return out;
}

}  // namespace

std::vector<const RuleAutomaton*> ComposedSystem::pointers() const {
  std::vector<const RuleAutomaton*> out;
  for (const auto& a : components) {
    out.push_back(&a);
  }
  return out;
}

std::string ComposedSystem::label(const std::vector<int>& locs) const {
  std::string out;
  for (size_t i = 0; i < locs.size(); ++i) {
    if (i > 0) {
      out += "|";
    }
    out += components[i].locations[locs[i]].name;
  }
  return out;
}

ComposedSystem compose(const std::vector<RuleAutomaton>& rules) {
  if (rules.size() < 2) {
    throw std::invalid_argument("composition needs at least 2 rules");
  }
  std::set<std::string> names;
  for (const auto& r : rules) {
    if (!names.insert(r.name).second) {
      throw std::invalid_argument("duplicate rule name '" + r.name + "'");
    }
    auto violations = validate_automaton(r);
    if (!violations.empty()) {
      throw std::invalid_argument("invalid automaton '" + r.name +
                                  "': " + violations.front());
    }
  }
  ComposedSystem out;
  for (const auto& r : rules) {
    out.components.push_back(prefix_clocks(r));
  }
  return out;
}

SysReach reach_composed(const ComposedSystem& c,
                        const std::vector<TrafficSnapshot>& scenarios) {
  return explore_zones(c.pointers(), scenarios);
}

namespace {

struct PointChecks {
  const ComposedSystem& c;
  std::vector<const RuleAutomaton*> comps;
  std::vector<int> clock_offset;
  long long cap = 1;
  // spatial enabling per component/transition, mirroring the engine
  std::vector<std::vector<std::vector<size_t>>> sat;

  PointChecks(const ComposedSystem& system,
              const std::vector<TrafficSnapshot>& scenarios)
      : c(system), comps(system.pointers()) {
    long long max_const = 0;
    int offset = 0;
    for (const auto* a : comps) {
      clock_offset.push_back(offset);
      offset += static_cast<int>(a->clocks.size());
      max_const = std::max(max_const, a->max_constant());
    }
    cap = max_const + 1;
    sat.resize(comps.size());
    for (size_t i = 0; i < comps.size(); ++i) {
      const RuleAutomaton& a = *comps[i];
      sat[i].resize(a.transitions.size());
      for (size_t t = 0; t < a.transitions.size(); ++t) {
        Formula cond = a.transitions[t].spatial_guard;
        const Location* src = a.find_location(a.transitions[t].source);
        const Location* tgt = a.find_location(a.transitions[t].target);
        if (src && src->spatial_invariant) {
          cond = f_and(*src->spatial_invariant, cond);
        }
        if (tgt && tgt->spatial_invariant) {
          cond = f_and(cond, *tgt->spatial_invariant);
        }
        for (size_t k = 0; k < scenarios.size(); ++k) {
          try {
            if (evaluate(cond, scenarios[k], scenarios[k].extent,
                         Valuation{{"E", scenarios[k].ego_id}})) {
              sat[i][t].push_back(k);
            }
          } catch (const EvalError&) {
          }
        }
      }
    }
  }

  long long value(const std::vector<long long>& vals, size_t comp,
                  const std::string& clock) const {
    const auto& list = comps[comp]->clocks;
    for (size_t i = 0; i < list.size(); ++i) {
      if (list[i] == clock) {
        return vals[clock_offset[comp] + i];
      }
    }
    throw std::logic_error("undeclared clock '" + clock + "'");
  }

  bool satisfies(const ClockConstraint& cc, size_t comp,
                 const std::vector<long long>& vals) const {
    for (const auto& atom : cc.atoms) {
      long long v = value(vals, comp, atom.clock);
      if (atom.is_upper ? v > atom.bound : v < atom.bound) {
        return false;
      }
    }
    return true;
  }

  bool invariants_hold(const std::vector<int>& locs,
                       const std::vector<long long>& vals) const {
    for (size_t i = 0; i < comps.size(); ++i) {
      if (!satisfies(comps[i]->locations[locs[i]].invariant, i, vals)) {
        return false;
      }
    }
    return true;
  }

  // A unit delay is possible unless it violates some invariant upper bound
  // (or every clock is already conflated above the constants).
  bool delay_blocked(const std::vector<int>& locs,
                     const std::vector<long long>& vals) const {
    std::vector<long long> next = vals;
    bool moved = false;
    for (auto& v : next) {
      if (v < cap) {
        ++v;
        moved = true;
      }
    }
    if (!moved) {
      return false;
    }
    return !invariants_hold(locs, next);
  }

  // Can any component fire any transition from this capped valuation under
  // some scenario snapshot?
  bool action_possible(const std::vector<int>& locs,
                       const std::vector<long long>& vals) const {
    for (size_t i = 0; i < comps.size(); ++i) {
      const RuleAutomaton& a = *comps[i];
      for (size_t t = 0; t < a.transitions.size(); ++t) {
        if (a.location_index(a.transitions[t].source) != locs[i]) {
          continue;
        }
        if (sat[i][t].empty()) {
          continue;
        }
        if (!satisfies(a.transitions[t].clock_guard, i, vals)) {
          continue;
        }
        std::vector<long long> next = vals;
        for (const auto& r : a.transitions[t].resets) {
          const auto& list = comps[i]->clocks;
          for (size_t k = 0; k < list.size(); ++k) {
            if (list[k] == r) {
              next[clock_offset[i] + k] = 0;
            }
          }
        }
        std::vector<int> next_locs = locs;
        next_locs[i] = a.location_index(a.transitions[t].target);
        if (invariants_hold(next_locs, next)) {
          return true;
        }
      }
    }
    return false;
  }
};

Zone zone_containing(const SysReach& reach, const std::vector<int>& locs,
                     const std::vector<long long>& vals, long long cap) {
  auto it = reach.zones.find(locs);
  if (it != reach.zones.end()) {
    for (const auto& z : it->second) {
      if (z.contains_capped_point(vals, cap)) {
        return z;
      }
    }
    if (!it->second.empty()) {
      return it->second.front();
    }
  }
  return Zone();
}

}  // namespace

std::vector<ConflictReport> find_timelocks(
    const ComposedSystem& c, const std::vector<TrafficSnapshot>& scenarios) {
  auto comps = c.pointers();
  SysReach zones = explore_zones(comps, scenarios);
  SysDiscrete disc = explore_discrete(comps, scenarios, -1);
  PointChecks checks(c, scenarios);

  std::vector<ConflictReport> out;
  std::set<std::vector<int>> reported;
  for (const auto& [state, vals] : disc.states) {
    if (reported.count(state)) {
      continue;
    }
    if (!checks.delay_blocked(state, vals)) {
      continue;
    }
    if (checks.action_possible(state, vals)) {
      continue;
    }
    ConflictReport r;
    r.kind = ConflictKind::Timelock;
    r.location_tuple = state;
    for (size_t i = 0; i < c.components.size(); ++i) {
      r.location_names.push_back(c.components[i].locations[state[i]].name);
    }
    r.snapshot_index = disc.traces.count(state) && !disc.traces.at(state).empty()
                           ? disc.traces.at(state).back().snapshot
                           : 0;
    auto trace_it = zones.traces.find(state);
    if (trace_it != zones.traces.end()) {
      r.trace = trace_it->second;
      if (!r.trace.empty()) {
        r.snapshot_index = r.trace.back().snapshot;
      }
    }
    r.snapshot = scenarios[r.snapshot_index];
    r.witness_zone = zone_containing(zones, state, vals, checks.cap);
    r.witness_valuation = vals;
    reported.insert(state);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ConflictReport> find_permission_conflicts(
    const ComposedSystem& c, const std::vector<TrafficSnapshot>& scenarios) {
  auto comps = c.pointers();
  SysReach zones = explore_zones(comps, scenarios);
  SysDiscrete disc = explore_discrete(comps, scenarios, -1);
  PointChecks checks(c, scenarios);

  // group discrete valuations per location tuple
  std::map<std::vector<int>, std::vector<std::vector<long long>>> points;
  for (const auto& [locs, vals] : disc.states) {
    points[locs].push_back(vals);
  }

  std::vector<ConflictReport> out;
  std::set<std::tuple<std::vector<int>, std::string, size_t>> seen;

  for (const auto& locs : zones.order) {
    auto pts_it = points.find(locs);
    if (pts_it == points.end()) {
      continue;
    }
    for (size_t i = 0; i < comps.size(); ++i) {
      const RuleAutomaton& a = *comps[i];
      for (size_t t = 0; t < a.transitions.size(); ++t) {
        const Transition& tr = a.transitions[t];
        if (a.location_index(tr.source) != locs[i]) {
          continue;
        }
        // who forbids this action here?
        int forbidding = -1;
        for (size_t j = 0; j < comps.size(); ++j) {
          if (j == i) {
            continue;
          }
          const Location& lj = comps[j]->locations[locs[j]];
          if (lj.forbid.count(tr.action)) {
            forbidding = static_cast<int>(j);
            break;
          }
        }
        if (forbidding < 0) {
          continue;
        }
        for (size_t k : checks.sat[i][t]) {
          std::tuple<std::vector<int>, std::string, size_t> key{locs, tr.action, k};
          if (seen.count(key)) {
            continue;
          }
          // some reachable point must let the transition actually fire
          const std::vector<long long>* witness = nullptr;
          for (const auto& vals : pts_it->second) {
            if (!checks.satisfies(tr.clock_guard, i, vals)) {
              continue;
            }
            std::vector<long long> next = vals;
            for (const auto& rname : tr.resets) {
              const auto& list = comps[i]->clocks;
              for (size_t q = 0; q < list.size(); ++q) {
                if (list[q] == rname) {
                  next[checks.clock_offset[i] + q] = 0;
                }
              }
            }
            std::vector<int> next_locs = locs;
            next_locs[i] = a.location_index(tr.target);
            if (checks.invariants_hold(next_locs, next)) {
              witness = &vals;
              break;
            }
          }
          if (witness == nullptr) {
            continue;
          }
          seen.insert(key);
          ConflictReport r;
          r.kind = ConflictKind::PermissionConflict;
          r.location_tuple = locs;
          for (size_t q = 0; q < c.components.size(); ++q) {
            r.location_names.push_back(c.components[q].locations[locs[q]].name);
          }
          r.action = tr.action;
          r.enabling_rule = c.components[i].name;
          r.forbidding_rule = c.components[forbidding].name;
          r.snapshot_index = k;
          r.snapshot = scenarios[k];
          auto trace_it = zones.traces.find(locs);
          if (trace_it != zones.traces.end()) {
            r.trace = trace_it->second;
          }
          r.witness_zone = zone_containing(zones, locs, *witness, checks.cap);
          r.witness_valuation = *witness;
          out.push_back(std::move(r));
        }
      }
    }
  }
  return out;
}

std::vector<GuardContradiction> guard_contradiction_scan_snapshots(
    const std::vector<RuleAutomaton>& rules,
    const std::vector<TrafficSnapshot>& scenarios) {
  ComposedSystem c = compose(rules);
  SysReach zones = explore_zones(c.pointers(), scenarios);

  std::vector<GuardContradiction> out;
  std::set<std::tuple<size_t, int, size_t, int>> seen;
  for (const auto& locs : zones.order) {
    for (size_t i = 0; i < c.components.size(); ++i) {
      for (size_t j = i + 1; j < c.components.size(); ++j) {
        const Location& li = c.components[i].locations[locs[i]];
        const Location& lj = c.components[j].locations[locs[j]];
        if (!li.spatial_invariant || !lj.spatial_invariant) {
          continue;
        }
        std::string fi = formula_to_string(*li.spatial_invariant);
        std::string fj = formula_to_string(*lj.spatial_invariant);
        if (fi == fj) {
          continue;  // a rule cannot contradict its own requirement
        }
        std::tuple<size_t, int, size_t, int> key{i, locs[i], j, locs[j]};
        if (seen.count(key)) {
          continue;
        }
        seen.insert(key);
        Formula both = f_and(*li.spatial_invariant, *lj.spatial_invariant);
        if (satisfiable_in_snapshots(both, scenarios)) {
          continue;
        }
        GuardContradiction g;
        g.rule_a = c.components[i].name;
        g.location_a = li.name;
        g.rule_b = c.components[j].name;
        g.location_b = lj.name;
        g.explanation = "jointly reachable but '" + fi + "' and '" + fj +
                        "' cannot hold together on any environment snapshot";
        out.push_back(std::move(g));
      }
    }
  }
  return out;
}

std::vector<GuardContradiction> guard_contradiction_scan(
    const std::vector<RuleAutomaton>& rules, const UniverseParams& universe) {
  return guard_contradiction_scan_snapshots(rules, enumerate_universe(universe));
}

nlohmann::json conflict_report_to_json(const ComposedSystem& c,
                                       const ConflictReport& r) {
  nlohmann::json doc;
  doc["kind"] = r.kind == ConflictKind::Timelock ? "timelock" : "permission_conflict";
  doc["locations"] = nlohmann::json::array();
  for (size_t i = 0; i < c.components.size(); ++i) {
    doc["locations"].push_back(nlohmann::json{
        {"rule", c.components[i].name}, {"location", r.location_names[i]}});
  }
  if (r.kind == ConflictKind::PermissionConflict) {
    doc["action"] = r.action;
    doc["enabling_rule"] = r.enabling_rule;
    doc["forbidding_rule"] = r.forbidding_rule;
  }
  doc["snapshot_index"] = r.snapshot_index;
  doc["snapshot"] = snapshot_to_json(r.snapshot);
  doc["trace"] = nlohmann::json::array();
  for (const auto& step : r.trace) {
    const RuleAutomaton& a = c.components[step.component];
    const Transition& t = a.transitions[step.transition];
    doc["trace"].push_back(nlohmann::json{{"rule", a.name},
                                          {"action", t.action},
                                          {"from", t.source},
                                          {"to", t.target},
                                          {"snapshot_index", step.snapshot}});
  }
  doc["clock_valuation"] = r.witness_valuation;
  return doc;
}

}  // namespace dhc
