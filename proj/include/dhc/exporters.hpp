#pragma once

#include <string>
#include <vector>

#include "dhc/automaton.hpp"
#include "dhc/compose.hpp"

namespace dhc {

enum class XtaSpatialMode {
  // One boolean environment variable per distinct spatial guard (negated
  // guards reuse the variable of the stripped formula), toggled freely by an
  // emitted environment template. Reachability of the export
  // over-approximates the engine's.
  BoolEnv,
  // Spatial guards dropped to `true` and preserved in comments.
  Comment,
};

// UPPAAL-compatible XTA text (subset grammar, docs/xta-subset.md). Output is
// deterministic. Throws std::invalid_argument on invalid automata.
std::string to_xta(const RuleAutomaton& a, XtaSpatialMode mode);

// DOT digraph; one node per location (initial drawn as a double circle),
// one edge per transition labelled action/guard/clock/reset.
std::string to_dot(const RuleAutomaton& a);
// Full product graph with "L0|L0" style node names.
std::string to_dot(const ComposedSystem& c);

struct PlanLine {
  std::string trigger;
  std::vector<std::string> guards;
  std::vector<std::string> actions;
};

// Plan sketch for a belief-desire-intention agent: one plan per transition,
// trigger and guards from the spatial guard conjuncts, action from the
// target location's role (or the action label).
struct PlanSketch {
  std::vector<PlanLine> lines;
  std::vector<std::string> warnings;  // non-conjunctive guards
};

PlanSketch to_bdi_sketch(const RuleAutomaton& a);
std::string plan_sketch_to_string(const PlanSketch& sketch);

}  // namespace dhc
