#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "dhc/bundled.hpp"
#include "dhc/formula_parser.hpp"
#include "dhc/reach.hpp"
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

// L0 -a-> L1 (needs ob(Go), resets x), L1 -b-> L2 (x >= 2), invariant x <= 3.
RuleAutomaton two_step() {
  RuleAutomaton a;
  a.name = "two_step";
  a.clocks = {"x"};
  a.alphabet = {"a", "b"};
  a.locations.push_back(Location{"L0", true, {}, std::nullopt, {}, ""});
  Location l1{"L1", false, {}, std::nullopt, {}, ""};
  l1.invariant.atoms.push_back(ClockAtom{"x", true, 3, ""});
  a.locations.push_back(l1);
  a.locations.push_back(Location{"L2", false, {}, std::nullopt, {}, ""});
  Transition t01{"L0", "L1", "a", parse_formula("ob(Go)"), {}, {"x"}};
  Transition t12{"L1", "L2", "b", f_true(), {}, {}};
  t12.clock_guard.atoms.push_back(ClockAtom{"x", false, 2, ""});
  a.transitions.push_back(t01);
  a.transitions.push_back(t12);
  return a;
}

std::set<std::string> reachable_set(const ReachResult& r) {
  std::set<std::string> out;
  for (const auto& l : r.locations) {
    out.insert(l.location);
  }
  return out;
}

}  // namespace

TEST_CASE("an automaton without transitions reaches only its initial location") {
  RuleAutomaton a;
  a.name = "idle";
  a.locations.push_back(Location{"Only", true, {}, std::nullopt, {}, ""});
  auto result = reach(a, {plain_snapshot()});
  CHECK(reachable_set(result) == std::set<std::string>{"Only"});
  CHECK(result.find("Only")->trace.empty());
}

TEST_CASE("spatial guards gate transitions by scenario") {
  RuleAutomaton a = two_step();
  auto blocked = reach(a, {plain_snapshot()});
  CHECK(reachable_set(blocked) == std::set<std::string>{"L0"});
  auto open = reach(a, {with_sign("Go")});
  CHECK(reachable_set(open) == std::set<std::string>{"L0", "L1", "L2"});
  // the environment may present any scenario at any step
  auto mixed = reach(a, {plain_snapshot(), with_sign("Go")});
  CHECK(reachable_set(mixed) == std::set<std::string>{"L0", "L1", "L2"});
}

TEST_CASE("clock guards and invariants restrict reachability") {
  RuleAutomaton a = two_step();
  // shrink the invariant below the guard: L2 becomes unreachable
  a.locations[1].invariant.atoms[0].bound = 1;
  auto result = reach(a, {with_sign("Go")});
  CHECK(reachable_set(result) == std::set<std::string>{"L0", "L1"});
}

TEST_CASE("initial invariants rejecting zero make everything unreachable") {
  RuleAutomaton a = two_step();
  a.locations[0].invariant.atoms.push_back(ClockAtom{"x", false, 1, ""});
  auto result = reach(a, {with_sign("Go")});
  CHECK(result.locations.empty());
  auto disc = reach_discrete(a, {with_sign("Go")}, 100);
  CHECK(disc.locations.empty());
}

TEST_CASE("enabled follows the guard and the zone") {
  RuleAutomaton a = two_step();
  TrafficSnapshot go = with_sign("Go");
  Zone at_l0 = Zone::zero(1).up();
  auto from_l0 = enabled(a, SymbolicState{"L0", at_l0, 0}, go);
  REQUIRE(from_l0.size() == 1);
  CHECK(from_l0[0]->action == "a");
  CHECK(enabled(a, SymbolicState{"L0", at_l0, 0}, plain_snapshot()).empty());

  // at L1 with x <= 1 the guard x >= 2 cannot fire yet: the invariant caps
  // the zone and the intersection below the guard is empty
  Zone young = Zone::zero(1).up().constrain_upper(1, 1);
  CHECK(enabled(a, SymbolicState{"L1", young, 0}, go).empty());
  Zone ready = Zone::zero(1).up().constrain_upper(1, 3);
  CHECK(enabled(a, SymbolicState{"L1", ready, 0}, go).size() == 1);
  CHECK_THROWS_AS(enabled(a, SymbolicState{"nowhere", ready, 0}, go),
                  std::invalid_argument);
}

TEST_CASE("reach_discrete horizon and argument checks") {
  RuleAutomaton a = two_step();
  CHECK_THROWS_AS(reach_discrete(a, {with_sign("Go")}, -1),
                  std::invalid_argument);
  auto zero = reach_discrete(a, {with_sign("Go")}, 0);
  CHECK(zero.locations == std::set<std::string>{"L0"});
  auto one = reach_discrete(a, {with_sign("Go")}, 1);
  CHECK(one.locations == std::set<std::string>{"L0", "L1"});
}

TEST_CASE("witness traces replay through the zone operations") {
  RuleAutomaton a = two_step();
  std::vector<TrafficSnapshot> scenarios{plain_snapshot(), with_sign("Go")};
  auto result = reach(a, scenarios);
  const auto* l2 = result.find("L2");
  REQUIRE(l2 != nullptr);
  REQUIRE(l2->trace.size() == 2);
  CHECK(l2->trace[0].snapshot_index == 1);  // only the Go scenario enables 'a'
  CHECK(replay_trace(a, scenarios, l2->trace, "L2"));
  CHECK_FALSE(replay_trace(a, scenarios, l2->trace, "L1"));
  // corrupting the snapshot choice breaks the replay
  auto broken = l2->trace;
  broken[0].snapshot_index = 0;
  CHECK_FALSE(replay_trace(a, scenarios, broken, "L2"));
}

TEST_CASE("exploration order does not change the result") {
  std::mt19937 rng(5150);
  for (int i = 0; i < 30; ++i) {
    RuleAutomaton a = testutil::random_automaton(rng);
    std::vector<TrafficSnapshot> scenarios{testutil::random_snapshot(rng),
                                           testutil::random_snapshot(rng)};
    auto base = reach(a, scenarios);

    RuleAutomaton shuffled = a;
    std::reverse(shuffled.transitions.begin(), shuffled.transitions.end());
    std::vector<TrafficSnapshot> reversed_scenarios{scenarios[1], scenarios[0]};
    auto variant = reach(shuffled, reversed_scenarios);
    CHECK(reachable_set(base) == reachable_set(variant));
  }
}

TEST_CASE("zone and discrete engines agree on reachable locations") {
  std::mt19937 rng(31337);
  for (int i = 0; i < 60; ++i) {
    RuleAutomaton a = testutil::random_automaton(rng, 4, 2, 5);
    std::vector<TrafficSnapshot> scenarios;
    int n = 1 + testutil::pick(rng, 3);
    for (int k = 0; k < n; ++k) {
      scenarios.push_back(testutil::random_snapshot(rng));
    }
    auto zone_result = reach(a, scenarios);
    auto disc = reach_discrete(a, scenarios, sufficient_horizon({&a}));
    CAPTURE(i);
    REQUIRE(reachable_set(zone_result) == disc.locations);
  }
}

TEST_CASE("bundled rule 170 reaches the junction only without pedestrians") {
  const BundledRule* rule = find_bundled_rule("ukhc_170");
  REQUIRE(rule != nullptr);
  const auto& go = rule->snapshots[0];
  const auto& ped = rule->snapshots[1];
  REQUIRE(go.enabling);
  REQUIRE(!ped.enabling);

  auto open = reach(rule->automaton, {go.snapshot});
  REQUIRE(open.contains("L3"));
  const auto* l3 = open.find("L3");
  CHECK(l3->trace.size() <= 4);
  CHECK(replay_trace(rule->automaton, {go.snapshot}, l3->trace, "L3"));

  auto blocked = reach(rule->automaton, {ped.snapshot});
  CHECK_FALSE(blocked.contains("L3"));
  auto disc = reach_discrete(rule->automaton, {ped.snapshot},
                             sufficient_horizon({&rule->automaton}));
  CHECK_FALSE(disc.locations.count("L3"));
}

TEST_CASE("bundled rule 171 needs both signs to progress") {
  const BundledRule* rule = find_bundled_rule("ukhc_171");
  REQUIRE(rule != nullptr);
  auto open = reach(rule->automaton, {rule->snapshots[0].snapshot});
  CHECK(open.contains("L2"));
  CHECK(open.contains("L3"));
  auto blocked = reach(rule->automaton, {rule->snapshots[1].snapshot});
  CHECK_FALSE(blocked.contains("L2"));
  CHECK_FALSE(blocked.contains("L3"));
}
