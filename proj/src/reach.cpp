#include "dhc/reach.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "dhc/eval.hpp"

namespace dhc {

namespace {

// Precompiled view of one or more components exploring a shared environment.
struct System {
  std::vector<const RuleAutomaton*> comps;
  std::vector<TrafficSnapshot> scenarios;
  std::vector<std::string> clock_names;
  std::vector<int> clock_offset;  // per component, into clock_names
  long long max_const = 0;

  struct TransInfo {
    int source = 0;
    int target = 0;
    std::vector<int> resets;             // global 1-based clock indices
    std::vector<size_t> sat_snapshots;   // scenarios passing the spatial checks
  };
  std::vector<std::vector<TransInfo>> trans;              // [comp][transition]
  std::vector<std::vector<std::vector<int>>> outgoing;    // [comp][location]

  int clock_index(int comp, const std::string& name) const {
    const auto& list = comps[comp]->clocks;
    for (size_t i = 0; i < list.size(); ++i) {
      if (list[i] == name) {
        return clock_offset[comp] + static_cast<int>(i) + 1;
      }
    }
    throw std::logic_error("undeclared clock '" + name + "'");
  }
};

bool spatially_ok(const Formula& f, const TrafficSnapshot& s) {
  try {
    return evaluate(f, s, s.extent, Valuation{{"E", s.ego_id}});
  } catch (const EvalError&) {
    return false;  // references a car this snapshot does not have
  }
}

// Conjunction of source spatial invariant, guard and target spatial
// invariant: everything the chosen snapshot must satisfy at the instant the
// transition fires.
Formula firing_condition(const RuleAutomaton& a, const Transition& t) {
  Formula f = t.spatial_guard ? t.spatial_guard : f_true();
  const Location* src = a.find_location(t.source);
  const Location* tgt = a.find_location(t.target);
  if (src != nullptr && src->spatial_invariant) {
    f = f_and(*src->spatial_invariant, f);
  }
  if (tgt != nullptr && tgt->spatial_invariant) {
    f = f_and(f, *tgt->spatial_invariant);
  }
  return f;
}

System build_system(const std::vector<const RuleAutomaton*>& components,
                    const std::vector<TrafficSnapshot>& scenarios) {
  if (components.empty()) {
    throw std::invalid_argument("no automata to explore");
  }
  if (scenarios.empty()) {
    throw std::invalid_argument("scenario list is empty");
  }
  for (const auto& s : scenarios) {
    auto violations = validate_snapshot(s);
    if (!violations.empty()) {
      throw std::invalid_argument("invalid scenario snapshot: " + violations.front());
    }
  }

  System sys;
  sys.comps = components;
  sys.scenarios = scenarios;
  for (const auto* a : components) {
    auto violations = validate_automaton(*a);
    if (!violations.empty()) {
      throw std::invalid_argument("invalid automaton '" + a->name +
                                  "': " + violations.front());
    }
    sys.clock_offset.push_back(static_cast<int>(sys.clock_names.size()));
    for (const auto& c : a->clocks) {
      if (std::find(sys.clock_names.begin(), sys.clock_names.end(), c) !=
          sys.clock_names.end()) {
        throw std::invalid_argument("clock '" + c +
                                    "' appears in more than one component");
      }
      sys.clock_names.push_back(c);
    }
    sys.max_const = std::max(sys.max_const, a->max_constant());
  }

  sys.trans.resize(components.size());
  sys.outgoing.resize(components.size());
  for (size_t c = 0; c < components.size(); ++c) {
    const RuleAutomaton& a = *components[c];
    sys.outgoing[c].resize(a.locations.size());
    for (size_t t = 0; t < a.transitions.size(); ++t) {
      const Transition& tr = a.transitions[t];
      System::TransInfo info;
      info.source = a.location_index(tr.source);
      info.target = a.location_index(tr.target);
      for (const auto& r : tr.resets) {
        info.resets.push_back(sys.clock_index(static_cast<int>(c), r));
      }
      Formula cond = firing_condition(a, tr);
      for (size_t k = 0; k < scenarios.size(); ++k) {
        if (spatially_ok(cond, scenarios[k])) {
          info.sat_snapshots.push_back(k);
        }
      }
      sys.outgoing[c][info.source].push_back(static_cast<int>(t));
      sys.trans[c].push_back(std::move(info));
    }
  }
  return sys;
}

Zone apply_constraint(Zone z, const System& sys, int comp,
                      const ClockConstraint& cc) {
  for (const auto& atom : cc.atoms) {
    int idx = sys.clock_index(comp, atom.clock);
    z = atom.is_upper ? z.constrain_upper(idx, atom.bound)
                      : z.constrain_lower(idx, atom.bound);
    if (z.empty()) {
      return z;
    }
  }
  return z;
}

Zone apply_invariants(Zone z, const System& sys, const std::vector<int>& locs) {
  for (size_t c = 0; c < sys.comps.size() && !z.empty(); ++c) {
    z = apply_constraint(std::move(z), sys, static_cast<int>(c),
                         sys.comps[c]->locations[locs[c]].invariant);
  }
  return z;
}

std::vector<int> initial_locvec(const System& sys) {
  std::vector<int> locs;
  for (const auto* a : sys.comps) {
    locs.push_back(a->location_index(a->initial_location().name));
  }
  return locs;
}

// Delayed, invariant-constrained, extrapolated form every stored zone has.
Zone settle(Zone z, const System& sys, const std::vector<int>& locs) {
  z = apply_invariants(z.up(), sys, locs);
  if (z.empty()) {
    return z;
  }
  return z.extrapolate(sys.max_const);
}

bool satisfies(const ClockConstraint& cc, const System& sys, int comp,
               const std::vector<long long>& valuation) {
  for (const auto& atom : cc.atoms) {
    long long v = valuation[sys.clock_index(comp, atom.clock) - 1];
    if (atom.is_upper ? v > atom.bound : v < atom.bound) {
      return false;
    }
  }
  return true;
}

bool satisfies_invariants(const System& sys, const std::vector<int>& locs,
                          const std::vector<long long>& valuation) {
  for (size_t c = 0; c < sys.comps.size(); ++c) {
    if (!satisfies(sys.comps[c]->locations[locs[c]].invariant, sys,
                   static_cast<int>(c), valuation)) {
      return false;
    }
  }
  return true;
}

}  // namespace

SysReach explore_zones(const std::vector<const RuleAutomaton*>& components,
                       const std::vector<TrafficSnapshot>& scenarios) {
  System sys = build_system(components, scenarios);
  SysReach out;
  out.clock_names = sys.clock_names;
  out.max_constant = sys.max_const;

  const std::vector<int> init = initial_locvec(sys);
  Zone z0 = apply_invariants(Zone::zero(static_cast<int>(sys.clock_names.size())),
                             sys, init);
  if (z0.empty()) {
    return out;  // the initial invariant rejects the zero valuation
  }
  z0 = settle(std::move(z0), sys, init);

  struct Item {
    std::vector<int> locs;
    Zone zone;
    SysTrace trace;
  };
  std::deque<Item> queue;

  auto insert = [&](std::vector<int> locs, Zone z, SysTrace trace) {
    auto& list = out.zones[locs];
    for (const auto& existing : list) {
      if (existing.includes(z)) {
        return;
      }
    }
    std::erase_if(list, [&](const Zone& existing) { return z.includes(existing); });
    list.push_back(z);
    if (out.traces.find(locs) == out.traces.end()) {
      out.order.push_back(locs);
      out.traces.emplace(locs, trace);
    }
    queue.push_back(Item{std::move(locs), std::move(z), std::move(trace)});
  };

  insert(init, z0, {});

  while (!queue.empty()) {
    Item item = std::move(queue.front());
    queue.pop_front();
    for (size_t c = 0; c < sys.comps.size(); ++c) {
      const RuleAutomaton& a = *sys.comps[c];
      for (int t_idx : sys.outgoing[c][item.locs[c]]) {
        const System::TransInfo& info = sys.trans[c][t_idx];
        if (info.sat_snapshots.empty()) {
          continue;
        }
        Zone z1 = apply_constraint(item.zone, sys, static_cast<int>(c),
                                   a.transitions[t_idx].clock_guard);
        if (z1.empty()) {
          continue;
        }
        std::vector<int> next = item.locs;
        next[c] = info.target;
        Zone z2 = apply_invariants(z1.reset(info.resets), sys, next);
        if (z2.empty()) {
          continue;
        }
        Zone z3 = settle(std::move(z2), sys, next);
        if (z3.empty()) {
          continue;
        }
        SysTrace trace = item.trace;
        trace.push_back(ExploreStep{static_cast<int>(c), t_idx,
                                    info.sat_snapshots.front()});
        insert(std::move(next), std::move(z3), std::move(trace));
      }
    }
  }
  return out;
}

SysDiscrete explore_discrete(const std::vector<const RuleAutomaton*>& components,
                             const std::vector<TrafficSnapshot>& scenarios,
                             long long horizon) {
  System sys = build_system(components, scenarios);
  SysDiscrete out;
  out.cap = sys.max_const + 1;

  const std::vector<int> init = initial_locvec(sys);
  const std::vector<long long> zeros(sys.clock_names.size(), 0);
  if (!satisfies_invariants(sys, init, zeros)) {
    return out;
  }

  struct Item {
    std::vector<int> locs;
    std::vector<long long> vals;
    long long depth;
    SysTrace trace;
  };
  std::deque<Item> queue;

  auto insert = [&](std::vector<int> locs, std::vector<long long> vals,
                    long long depth, SysTrace trace) {
    if (!out.states.emplace(locs, vals).second) {
      return;
    }
    out.locations.insert(locs);
    if (out.traces.find(locs) == out.traces.end()) {
      out.traces.emplace(locs, trace);
    }
    queue.push_back(Item{std::move(locs), std::move(vals), depth, std::move(trace)});
  };

  insert(init, zeros, 0, {});

  while (!queue.empty()) {
    Item item = std::move(queue.front());
    queue.pop_front();
    if (horizon >= 0 && item.depth >= horizon) {
      continue;
    }

    // unit delay
    std::vector<long long> delayed = item.vals;
    bool moved = false;
    for (auto& v : delayed) {
      if (v < out.cap) {
        ++v;
        moved = true;
      }
    }
    if (moved && satisfies_invariants(sys, item.locs, delayed)) {
      insert(item.locs, std::move(delayed), item.depth + 1, item.trace);
    }

    // actions
    for (size_t c = 0; c < sys.comps.size(); ++c) {
      const RuleAutomaton& a = *sys.comps[c];
      for (int t_idx : sys.outgoing[c][item.locs[c]]) {
        const System::TransInfo& info = sys.trans[c][t_idx];
        if (info.sat_snapshots.empty()) {
          continue;
        }
        if (!satisfies(a.transitions[t_idx].clock_guard, sys, static_cast<int>(c),
                       item.vals)) {
          continue;
        }
        std::vector<long long> vals = item.vals;
        for (int r : info.resets) {
          vals[r - 1] = 0;
        }
        std::vector<int> next = item.locs;
        next[c] = info.target;
        if (!satisfies_invariants(sys, next, vals)) {
          continue;
        }
        SysTrace trace = item.trace;
        trace.push_back(ExploreStep{static_cast<int>(c), t_idx,
                                    info.sat_snapshots.front()});
        insert(std::move(next), std::move(vals), item.depth + 1, std::move(trace));
      }
    }
  }
  return out;
}

bool replay_system_trace(const std::vector<const RuleAutomaton*>& components,
                         const std::vector<TrafficSnapshot>& scenarios,
                         const SysTrace& trace, const std::vector<int>& expected) {
  System sys = build_system(components, scenarios);
  std::vector<int> locs = initial_locvec(sys);
  Zone z = apply_invariants(Zone::zero(static_cast<int>(sys.clock_names.size())),
                            sys, locs);
  if (z.empty()) {
    return false;
  }
  z = settle(std::move(z), sys, locs);

  for (const auto& step : trace) {
    if (step.component < 0 ||
        step.component >= static_cast<int>(sys.comps.size())) {
      return false;
    }
    const RuleAutomaton& a = *sys.comps[step.component];
    if (step.transition < 0 ||
        step.transition >= static_cast<int>(a.transitions.size()) ||
        step.snapshot >= sys.scenarios.size()) {
      return false;
    }
    const Transition& tr = a.transitions[step.transition];
    const System::TransInfo& info = sys.trans[step.component][step.transition];
    if (info.source != locs[step.component]) {
      return false;
    }
    if (!spatially_ok(firing_condition(a, tr), sys.scenarios[step.snapshot])) {
      return false;
    }
    Zone z1 = apply_constraint(z, sys, step.component, tr.clock_guard);
    if (z1.empty()) {
      return false;
    }
    locs[step.component] = info.target;
    Zone z2 = apply_invariants(z1.reset(info.resets), sys, locs);
    if (z2.empty()) {
      return false;
    }
    z = settle(std::move(z2), sys, locs);
    if (z.empty()) {
      return false;
    }
  }
  return locs == expected;
}

std::vector<const Transition*> enabled(const RuleAutomaton& a,
                                       const SymbolicState& st,
                                       const TrafficSnapshot& s) {
  auto violations = validate_snapshot(s);
  if (!violations.empty()) {
    throw std::invalid_argument("invalid snapshot: " + violations.front());
  }
  const Location* loc = a.find_location(st.location);
  if (loc == nullptr) {
    throw std::invalid_argument("unknown location '" + st.location + "'");
  }
  System sys = build_system({&a}, {s});

  Zone base = apply_constraint(st.zone, sys, 0, loc->invariant);
  std::vector<const Transition*> out;
  for (const auto& t : a.transitions) {
    if (t.source != st.location) {
      continue;
    }
    if (!spatially_ok(t.spatial_guard, s)) {
      continue;
    }
    if (base.empty()) {
      continue;
    }
    Zone z = apply_constraint(base, sys, 0, t.clock_guard);
    if (!z.empty()) {
      out.push_back(&t);
    }
  }
  return out;
}

namespace {

std::vector<ReachStep> to_reach_steps(const RuleAutomaton& a,
                                      const SysTrace& trace) {
  std::vector<ReachStep> out;
  for (const auto& s : trace) {
    const Transition& t = a.transitions[s.transition];
    out.push_back(ReachStep{t.action, t.source, t.target, s.snapshot, s.transition});
  }
  return out;
}

}  // namespace

bool ReachResult::contains(std::string_view location) const {
  return find(location) != nullptr;
}

const LocationReach* ReachResult::find(std::string_view location) const {
  for (const auto& l : locations) {
    if (l.location == location) {
      return &l;
    }
  }
  return nullptr;
}

ReachResult reach(const RuleAutomaton& a,
                  const std::vector<TrafficSnapshot>& scenarios) {
  SysReach sys = explore_zones({&a}, scenarios);
  ReachResult out;
  out.clock_names = sys.clock_names;
  for (const auto& locs : sys.order) {
    LocationReach lr;
    lr.location = a.locations[locs[0]].name;
    lr.zones = sys.zones.at(locs);
    lr.trace = to_reach_steps(a, sys.traces.at(locs));
    out.locations.push_back(std::move(lr));
  }
  return out;
}

DiscreteResult reach_discrete(const RuleAutomaton& a,
                              const std::vector<TrafficSnapshot>& scenarios,
                              long long horizon) {
  if (horizon < 0) {
    throw std::invalid_argument("horizon must be nonnegative");
  }
  SysDiscrete sys = explore_discrete({&a}, scenarios, horizon);
  DiscreteResult out;
  out.state_count = sys.states.size();
  for (const auto& locs : sys.locations) {
    out.locations.insert(a.locations[locs[0]].name);
  }
  return out;
}

bool replay_trace(const RuleAutomaton& a,
                  const std::vector<TrafficSnapshot>& scenarios,
                  const std::vector<ReachStep>& trace,
                  const std::string& expected_final) {
  int expected = a.location_index(expected_final);
  if (expected < 0) {
    return false;
  }
  SysTrace sys_trace;
  for (const auto& step : trace) {
    sys_trace.push_back(ExploreStep{0, step.transition_index, step.snapshot_index});
  }
  return replay_system_trace({&a}, scenarios, sys_trace, {expected});
}

long long sufficient_horizon(const std::vector<const RuleAutomaton*>& components) {
  long long locs = 1;
  long long clocks = 0;
  long long max_const = 0;
  for (const auto* a : components) {
    locs *= std::max<size_t>(a->locations.size(), 1);
    clocks += static_cast<long long>(a->clocks.size());
    max_const = std::max(max_const, a->max_constant());
  }
  long long per_clock = max_const + 2;  // values 0..cap
  long long states = locs;
  for (long long i = 0; i < clocks; ++i) {
    if (states > (1LL << 40)) {
      break;
    }
    states *= per_clock;
  }
  return states + 1;
}

}  // namespace dhc
