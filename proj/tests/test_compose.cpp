#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "dhc/bundled.hpp"
#include "dhc/compose.hpp"
#include "dhc/eval.hpp"
#include "dhc/formula_parser.hpp"
#include "dhc/universe.hpp"
#include "test_util.hpp"

using namespace dhc;

namespace {

TrafficSnapshot plain_snapshot() {
  TrafficSnapshot s;
  s.extent = Interval{Rat(0), Rat(8)};
  s.ego_id = "E";
  s.cars.push_back(CarOccupancy{"E", Interval{Rat(0), Rat(1)}, std::nullopt, Rat(1)});
  s.crossing = Interval{Rat(4), Rat(6)};
  s.perception_distance = Rat(8);
  s.approach_distance = Rat(2);
  return s;
}

TrafficSnapshot with_sign(const char* kind) {
  TrafficSnapshot s = plain_snapshot();
  s.signs.push_back(Sign{kind, Rat(4)});
  return s;
}

RuleAutomaton named_idler(const std::string& name) {
  RuleAutomaton a;
  a.name = name;
  a.alphabet = {"idle"};
  a.locations.push_back(Location{"Rest", true, {}, std::nullopt, {}, ""});
  return a;
}

// One location with invariant x <= 1 whose sole exit needs ob(Go).
RuleAutomaton deadline_rule() {
  RuleAutomaton a;
  a.name = "deadline";
  a.clocks = {"x"};
  a.alphabet = {"go"};
  Location l0{"L0", true, {}, std::nullopt, {}, ""};
  l0.invariant.atoms.push_back(ClockAtom{"x", true, 1, ""});
  a.locations.push_back(l0);
  a.locations.push_back(Location{"L1", false, {}, std::nullopt, {}, ""});
  a.transitions.push_back(
      Transition{"L0", "L1", "go", parse_formula("ob(Go)"), {}, {}});
  return a;
}

}  // namespace

TEST_CASE("compose validates its inputs") {
  CHECK_THROWS_AS(compose({named_idler("solo")}), std::invalid_argument);
  CHECK_THROWS_AS(compose({named_idler("dup"), named_idler("dup")}),
                  std::invalid_argument);
}

TEST_CASE("compose prefixes clocks with the rule name") {
  const auto& catalog = bundled_rules();
  ComposedSystem c = compose({catalog[0].automaton, catalog[1].automaton});
  REQUIRE(c.components.size() == 2);
  CHECK(c.components[0].clocks == std::vector<std::string>{"ukhc_170.x"});
  CHECK(c.components[1].clocks == std::vector<std::string>{"ukhc_171.x"});
  // renaming reaches guards, invariants and resets
  CHECK(c.components[0].locations[2].invariant.atoms[0].clock == "ukhc_170.x");
  CHECK(c.components[0].transitions[1].resets ==
        std::vector<std::string>{"ukhc_170.x"});
}

TEST_CASE("composed initial state is the tuple of initials") {
  ComposedSystem c = compose({named_idler("a"), named_idler("b")});
  SysReach r = reach_composed(c, {plain_snapshot()});
  REQUIRE(r.order.size() == 1);
  CHECK(c.label(r.order[0]) == "Rest|Rest");
}

TEST_CASE("composition is commutative up to tuple reordering") {
  std::mt19937 rng(90210);
  for (int i = 0; i < 25; ++i) {
    RuleAutomaton a = testutil::random_automaton(rng, 3, 1, 3);
    a.name = "first";
    RuleAutomaton b = testutil::random_automaton(rng, 3, 1, 3);
    b.name = "second";
    std::vector<TrafficSnapshot> scenarios{testutil::random_snapshot(rng)};

    SysReach ab = reach_composed(compose({a, b}), scenarios);
    SysReach ba = reach_composed(compose({b, a}), scenarios);
    std::set<std::pair<int, int>> ab_set;
    std::set<std::pair<int, int>> ba_swapped;
    for (const auto& locs : ab.order) {
      ab_set.emplace(locs[0], locs[1]);
    }
    for (const auto& locs : ba.order) {
      ba_swapped.emplace(locs[1], locs[0]);
    }
    CHECK(ab_set == ba_swapped);
  }
}

TEST_CASE("a single-rule system that can always idle has no timelocks") {
  ComposedSystem c = compose({named_idler("a"), named_idler("b")});
  CHECK(find_timelocks(c, {plain_snapshot()}).empty());
}

TEST_CASE("an invariant deadline without an enabled exit is a timelock") {
  ComposedSystem c = compose({deadline_rule(), named_idler("bystander")});
  // no Go sign anywhere: the deadline cannot be met
  auto reports = find_timelocks(c, {plain_snapshot()});
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].kind == ConflictKind::Timelock);
  CHECK(reports[0].location_names ==
        std::vector<std::string>{"L0", "Rest"});
  CHECK(replay_system_trace(c.pointers(), {plain_snapshot()}, reports[0].trace,
                            reports[0].location_tuple));

  // with a Go scenario available the environment can always rescue it
  CHECK(find_timelocks(c, {plain_snapshot(), with_sign("Go")}).empty());
}

TEST_CASE("permission conflicts need a shared action and a forbidder") {
  // rules with disjoint alphabets can never conflict
  RuleAutomaton a = named_idler("a");
  a.alphabet = {"alpha"};
  RuleAutomaton b = named_idler("b");
  b.alphabet = {"beta"};
  b.locations[0].forbid = {"beta"};
  CHECK(find_permission_conflicts(compose({a, b}), {plain_snapshot()}).empty());
}

TEST_CASE("the bundled demo pair conflicts on 'enter'") {
  const BundledRule* red = find_bundled_rule("demo_red_light");
  const BundledRule* green = find_bundled_rule("demo_green_arrow");
  REQUIRE(red != nullptr);
  REQUIRE(green != nullptr);
  std::vector<TrafficSnapshot> scenarios{
      find_bundled_snapshot("demo_red_blocked")->snapshot,
      find_bundled_snapshot("demo_red_arrow_gap")->snapshot};
  ComposedSystem c = compose({red->automaton, green->automaton});

  auto conflicts = find_permission_conflicts(c, scenarios);
  REQUIRE(conflicts.size() == 1);
  const ConflictReport& r = conflicts[0];
  CHECK(r.kind == ConflictKind::PermissionConflict);
  CHECK(r.action == "enter");
  CHECK(r.enabling_rule == "demo_green_arrow");
  CHECK(r.forbidding_rule == "demo_red_light");
  CHECK(c.label(r.location_tuple) == "RedWait|ArrowSeen");
  CHECK(r.snapshot_index == 1);
  CHECK(replay_system_trace(c.pointers(), scenarios, r.trace, r.location_tuple));
  CHECK(find_timelocks(c, scenarios).empty());
}

TEST_CASE("unreachable forbidders never fire") {
  RuleAutomaton guard_rule = named_idler("guard");
  guard_rule.alphabet = {"enter"};
  Location jail{"Jail", false, {}, std::nullopt, {"enter"}, ""};
  guard_rule.locations.push_back(jail);  // no transition ever reaches it

  RuleAutomaton actor = named_idler("actor");
  actor.alphabet = {"enter"};
  actor.locations.push_back(Location{"Done", false, {}, std::nullopt, {}, ""});
  actor.transitions.push_back(
      Transition{"Rest", "Done", "enter", f_true(), {}, {}});

  CHECK(find_permission_conflicts(compose({actor, guard_rule}),
                                  {plain_snapshot()})
            .empty());
}

TEST_CASE("adding a rule never removes a permission conflict") {
  std::mt19937 rng(60606);
  int interesting = 0;
  for (int i = 0; i < 40; ++i) {
    RuleAutomaton a = testutil::random_automaton(rng, 3, 1, 2);
    a.name = "a";
    RuleAutomaton b = testutil::random_automaton(rng, 3, 1, 2);
    b.name = "b";
    RuleAutomaton c = testutil::random_automaton(rng, 3, 1, 2);
    c.name = "c";
    std::vector<TrafficSnapshot> scenarios{testutil::random_snapshot(rng)};

    auto base = find_permission_conflicts(compose({a, b}), scenarios);
    if (base.empty()) {
      continue;
    }
    ++interesting;
    auto extended = find_permission_conflicts(compose({a, b, c}), scenarios);
    for (const auto& r : base) {
      bool preserved = false;
      for (const auto& e : extended) {
        if (e.action == r.action &&
            e.location_tuple[0] == r.location_tuple[0] &&
            e.location_tuple[1] == r.location_tuple[1] &&
            e.snapshot_index == r.snapshot_index) {
          preserved = true;
          break;
        }
      }
      CAPTURE(i);
      CHECK(preserved);
    }
  }
  CHECK(interesting > 0);
}

TEST_CASE("find_* agree with a brute-force search on small systems") {
  std::mt19937 rng(808017);
  for (int i = 0; i < 25; ++i) {
    RuleAutomaton a = testutil::random_automaton(rng, 3, 1, 3);
    a.name = "a";
    RuleAutomaton b = testutil::random_automaton(rng, 3, 1, 3);
    b.name = "b";
    std::vector<TrafficSnapshot> scenarios{testutil::random_snapshot(rng),
                                           testutil::random_snapshot(rng)};
    ComposedSystem c = compose({a, b});
    auto comps = c.pointers();

    SysDiscrete disc = explore_discrete(comps, scenarios, -1);
    // brute-force definitions straight off the discrete state set
    auto spatially_ok = [&](int comp, const Transition& t,
                            const TrafficSnapshot& s) {
      Formula cond = t.spatial_guard;
      const Location* src = comps[comp]->find_location(t.source);
      const Location* tgt = comps[comp]->find_location(t.target);
      if (src && src->spatial_invariant) {
        cond = f_and(*src->spatial_invariant, cond);
      }
      if (tgt && tgt->spatial_invariant) {
        cond = f_and(cond, *tgt->spatial_invariant);
      }
      try {
        return evaluate(cond, s, s.extent, Valuation{{"E", s.ego_id}});
      } catch (const EvalError&) {
        return false;
      }
    };
    long long cap = disc.cap;
    auto clock_value = [&](const std::vector<long long>& vals, int comp,
                           const std::string& name) {
      size_t offset = comp == 0 ? 0 : comps[0]->clocks.size();
      for (size_t k = 0; k < comps[comp]->clocks.size(); ++k) {
        if (comps[comp]->clocks[k] == name) {
          return vals[offset + k];
        }
      }
      FAIL("unknown clock");
      return 0LL;
    };
    auto cc_holds = [&](const ClockConstraint& cc, int comp,
                        const std::vector<long long>& vals) {
      for (const auto& atom : cc.atoms) {
        long long v = clock_value(vals, comp, atom.clock);
        if (atom.is_upper ? v > atom.bound : v < atom.bound) {
          return false;
        }
      }
      return true;
    };

    std::set<std::vector<int>> expected_timelocks;
    std::set<std::tuple<std::vector<int>, std::string, size_t>> expected_perm;
    for (const auto& [locs, vals] : disc.states) {
      // can time advance?
      std::vector<long long> next = vals;
      bool moved = false;
      for (auto& v : next) {
        if (v < cap) {
          ++v;
          moved = true;
        }
      }
      bool delay_ok = !moved;
      if (moved) {
        delay_ok = true;
        for (size_t comp = 0; comp < comps.size(); ++comp) {
          if (!cc_holds(comps[comp]->locations[locs[comp]].invariant,
                        static_cast<int>(comp), next)) {
            delay_ok = false;
          }
        }
      }
      bool any_action = false;
      for (size_t comp = 0; comp < comps.size(); ++comp) {
        for (const auto& t : comps[comp]->transitions) {
          if (comps[comp]->location_index(t.source) != locs[comp]) {
            continue;
          }
          bool spatial = false;
          size_t spatial_idx = 0;
          for (size_t k = 0; k < scenarios.size(); ++k) {
            if (spatially_ok(static_cast<int>(comp), t, scenarios[k])) {
              spatial = true;
              spatial_idx = k;
              break;
            }
          }
          if (!spatial || !cc_holds(t.clock_guard, static_cast<int>(comp), vals)) {
            continue;
          }
          std::vector<long long> after = vals;
          size_t offset = comp == 0 ? 0 : comps[0]->clocks.size();
          for (const auto& rname : t.resets) {
            for (size_t k = 0; k < comps[comp]->clocks.size(); ++k) {
              if (comps[comp]->clocks[k] == rname) {
                after[offset + k] = 0;
              }
            }
          }
          std::vector<int> nlocs = locs;
          nlocs[comp] = comps[comp]->location_index(t.target);
          bool invariants = true;
          for (size_t q = 0; q < comps.size(); ++q) {
            if (!cc_holds(comps[q]->locations[nlocs[q]].invariant,
                          static_cast<int>(q), after)) {
              invariants = false;
            }
          }
          if (!invariants) {
            continue;
          }
          any_action = true;
          // permission conflicts: every spatially-feasible snapshot counts
          for (size_t k = 0; k < scenarios.size(); ++k) {
            if (!spatially_ok(static_cast<int>(comp), t, scenarios[k])) {
              continue;
            }
            for (size_t other = 0; other < comps.size(); ++other) {
              if (other != comp &&
                  comps[other]->locations[locs[other]].forbid.count(t.action)) {
                expected_perm.emplace(locs, t.action, k);
              }
            }
          }
          (void)spatial_idx;
        }
      }
      if (!delay_ok && !any_action) {
        expected_timelocks.insert(locs);
      }
    }

    std::set<std::vector<int>> got_timelocks;
    for (const auto& r : find_timelocks(c, scenarios)) {
      got_timelocks.insert(r.location_tuple);
    }
    std::set<std::tuple<std::vector<int>, std::string, size_t>> got_perm;
    for (const auto& r : find_permission_conflicts(c, scenarios)) {
      got_perm.emplace(r.location_tuple, r.action, r.snapshot_index);
    }
    CAPTURE(i);
    REQUIRE(got_timelocks == expected_timelocks);
    REQUIRE(got_perm == expected_perm);
  }
}

TEST_CASE("guard contradictions: complementary invariants are reported") {
  // each rule can enter its Watch location under some snapshot, but no
  // single snapshot satisfies both invariants at once
  RuleAutomaton a = named_idler("a");
  a.alphabet = {"step"};
  Location a1{"Watch", false, {}, parse_formula("ob(Go)"), {}, ""};
  a.locations.push_back(a1);
  a.transitions.push_back(Transition{"Rest", "Watch", "step", f_true(), {}, {}});

  RuleAutomaton b = named_idler("b");
  b.alphabet = {"step"};
  Location b1{"Watch", false, {}, parse_formula("not ob(Go)"), {}, ""};
  b.locations.push_back(b1);
  b.transitions.push_back(Transition{"Rest", "Watch", "step", f_true(), {}, {}});

  UniverseParams p;
  p.max_cars = 0;
  p.position_grid_step = Rat(1);
  p.car_sizes = {Rat(1)};
  p.extent = Interval{Rat(0), Rat(10)};
  p.crossing = Interval{Rat(2), Rat(3)};
  p.sign_kinds = {"Go"};
  p.perception_distance = Rat(10);

  auto reports = guard_contradiction_scan({a, b}, p);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].location_a == "Watch");
  CHECK(reports[0].location_b == "Watch");
  CHECK(reports[0].rule_a == "a");
  CHECK(reports[0].rule_b == "b");

  // identical invariants are never a contradiction
  b.locations[1].spatial_invariant = parse_formula("ob(Go)");
  CHECK(guard_contradiction_scan({a, b}, p).empty());

  // jointly satisfiable length bounds are not reported
  a.locations[1].spatial_invariant = parse_formula("l >= 5");
  b.locations[1].spatial_invariant = parse_formula("l >= 3");
  CHECK(guard_contradiction_scan({a, b}, p).empty());
}

TEST_CASE("the bundled highway rules compose cleanly on the default universe") {
  const BundledRule* r170 = find_bundled_rule("ukhc_170");
  const BundledRule* r171 = find_bundled_rule("ukhc_171");
  auto scenarios = enumerate_universe(default_universe());
  ComposedSystem c = compose({r170->automaton, r171->automaton});
  CHECK(find_timelocks(c, scenarios).empty());
  CHECK(find_permission_conflicts(c, scenarios).empty());
  CHECK(guard_contradiction_scan({r170->automaton, r171->automaton},
                                 default_universe())
            .empty());
}
