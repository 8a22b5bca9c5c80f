"""Smoke tests for the python bindings against the bundled fixtures."""

import os
import pathlib

import pytest

import dhc

ROOT = pathlib.Path(os.environ.get("DHC_REPO_ROOT", pathlib.Path(__file__).parents[2]))

SAFE_GAP = "<< (re(A) and not cs) chop (free and not cs) chop (sg(A) and cs) >>"


def read(rel):
    return (ROOT / rel).read_text()


def test_parse_and_print_round_trip():
    f = dhc.parse_formula("(not exists c : pc(c)) and not pa(E)")
    assert str(f) == "not (exists c : pc(c)) and not pa(E)"
    assert f.free_variables() == {"E"}


def test_worked_example_evaluates_true():
    snapshot = dhc.load_snapshot(read("rules/snapshots/fig2.snapshot.json"))
    assert dhc.evaluate(dhc.parse_formula(SAFE_GAP), snapshot)
    assert not dhc.evaluate(dhc.parse_formula("cs"), snapshot, view=("0", "2"))
    assert dhc.validate_snapshot(snapshot) == []


def test_oracle_agrees_on_the_worked_example():
    snapshot = dhc.bundled_snapshot("fig2")
    formula = dhc.parse_formula(SAFE_GAP)
    assert dhc.evaluate_oracle(formula, snapshot, step="1/2") == dhc.evaluate(
        formula, snapshot
    )
    candidates = dhc.split_candidates(formula, snapshot)
    assert "0" in candidates and "14" in candidates


def test_exact_rationals_survive():
    snapshot = dhc.load_snapshot(
        """
        {"extent": [0, 10], "ego": "E",
         "cars": [{"id": "E", "reservation": ["7/2", "9/2"], "size": 1}],
         "crossing": [8, 9], "pedestrians": [], "signs": [],
         "perception_distance": 10, "approach_distance": 3}
        """
    )
    assert dhc.event_points(snapshot, view=("0", "5")) == ["0", "7/2", "9/2", "5"]


def test_rule_170_reachability():
    rule = dhc.bundled_rule("ukhc_170")
    assert rule.validate() == []
    go = dhc.bundled_snapshot("ukhc_go")
    ped = dhc.bundled_snapshot("ukhc_pedestrian")
    open_result = dhc.reach(rule, [go])
    assert "L3" in open_result["reachable"]
    assert len(open_result["traces"]["L3"]) <= 4
    blocked = dhc.reach(rule, [ped])
    assert "L3" not in blocked["reachable"]
    assert dhc.reach_discrete(rule, [ped]) == set(blocked["reachable"])


def test_rule_file_round_trip():
    source = dhc.bundled_rule_source("ukhc_171")
    rule = dhc.parse_rule_file(source)
    again = dhc.parse_rule_file(dhc.rule_to_string(rule))
    assert dhc.rule_to_string(again) == dhc.rule_to_string(rule)


def test_conflict_demo():
    red = dhc.bundled_rule("demo_red_light")
    green = dhc.bundled_rule("demo_green_arrow")
    scenarios = [
        dhc.bundled_snapshot("demo_red_blocked"),
        dhc.bundled_snapshot("demo_red_arrow_gap"),
    ]
    system = dhc.compose([red, green])
    conflicts = dhc.find_permission_conflicts(system, scenarios)
    assert len(conflicts) == 1
    assert conflicts[0]["kind"] == "permission_conflict"
    assert conflicts[0]["action"] == "enter"
    assert conflicts[0]["forbidding_rule"] == "demo_red_light"
    assert dhc.find_timelocks(system, scenarios) == []


def test_exports():
    rule = dhc.bundled_rule("ukhc_170")
    sketch = dhc.to_bdi_sketch(rule)
    assert "~potential-collision : ~pedestrian-ahead <- checkForSafeGap;" in sketch
    for mode in ("bool-env", "comment"):
        assert dhc.check_xta(dhc.to_xta(rule, mode)) == []
    dot = dhc.to_dot(rule)
    assert dot.count("->") == 4  # one edge per transition
    with pytest.raises(ValueError):
        dhc.to_xta(rule, "pdf")


def test_universe_enumeration():
    universe = dhc.default_universe()
    snapshots = dhc.enumerate_universe(universe)
    assert len(snapshots) > 100
    witness = dhc.satisfiable_in_snapshots(dhc.parse_formula("ob(Stop)"), snapshots)
    assert witness is not None
