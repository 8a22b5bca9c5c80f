#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dhc/errors.hpp"
#include "dhc/formula.hpp"
#include "dhc/snapshot.hpp"
#include "dhc/universe.hpp"

namespace dhc {

// Maps variable names to car ids. Car references resolve through the
// valuation first and fall back to snapshot car ids.
using Valuation = std::map<std::string, std::string>;

// Exact truth of `f` on the view. Chop and somewhere splits range over a
// finite candidate set (event points shifted by the length bounds occurring
// in the formula) that is sufficient for these closed-interval semantics.
// Throws EvalError on unresolvable car references; std::domain_error when
// the view leaves the extent.
bool evaluate(const Formula& f, const TrafficSnapshot& s, const Interval& view,
              const Valuation& env = {});

// Same semantics, but splits range over the grid {view.lo, view.lo+step, ...}
// plus the event points. Independent of the candidate construction above;
// complete whenever all endpoints and length bounds lie on the grid. Used as
// the test oracle. Throws EvalError when step <= 0.
bool evaluate_oracle(const Formula& f, const TrafficSnapshot& s,
                     const Interval& view, const Valuation& env, const Rat& step);

// The split-candidate set for chops of `f` on `view`: event points closed
// under shifting by the formula's length bounds up to `depth` (defaults to
// the chop depth of `f`, at least 1), clipped to the view.
std::vector<Rat> split_candidates(const Formula& f, const TrafficSnapshot& s,
                                  const Interval& view, const Valuation& env = {},
                                  int depth = -1);

struct UniverseWitness {
  TrafficSnapshot snapshot;
  Interval view;
  size_t index = 0;  // position in enumeration order
};

// First snapshot of the universe on which `f` holds (on the given view, or
// the full extent). "E" denotes the ego. Snapshots where `f` references an
// absent car are skipped.
std::optional<UniverseWitness> satisfiable_in_universe(
    const Formula& f, const UniverseParams& p,
    const std::optional<Interval>& view = std::nullopt);

// Same search over an explicit snapshot collection.
std::optional<UniverseWitness> satisfiable_in_snapshots(
    const Formula& f, const std::vector<TrafficSnapshot>& snapshots,
    const std::optional<Interval>& view = std::nullopt);

}  // namespace dhc
