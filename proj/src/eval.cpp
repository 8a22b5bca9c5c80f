#include "dhc/eval.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace dhc {

namespace {

struct Ctx {
  const TrafficSnapshot& s;
  const Valuation& ambient;
  std::vector<std::pair<std::string, std::string>> bound{};  // quantifier scope
  bool exact = true;  // false: grid-oracle splits
  Rat step = Rat(1);

  using Key = std::tuple<const FormulaNode*, Rat, Rat, std::string>;
  std::map<Key, bool> memo{};

  std::string bound_signature() const {
    std::string sig;
    for (const auto& [var, id] : bound) {
      sig += var;
      sig += '=';
      sig += id;
      sig += ';';
    }
    return sig;
  }
};

std::string resolve_ref(const Ctx& ctx, const std::string& ref) {
  for (auto it = ctx.bound.rbegin(); it != ctx.bound.rend(); ++it) {
    if (it->first == ref) {
      return it->second;
    }
  }
  if (auto it = ctx.ambient.find(ref); it != ctx.ambient.end()) {
    return it->second;
  }
  if (ctx.s.find_car(ref) != nullptr) {
    return ref;
  }
  throw EvalError("unresolvable car reference '" + ref + "'");
}

const CarOccupancy& resolve_car(const Ctx& ctx, const std::string& ref) {
  std::string id = resolve_ref(ctx, ref);
  const CarOccupancy* car = ctx.s.find_car(id);
  if (car == nullptr) {
    throw EvalError("car reference '" + ref + "' resolves to unknown car '" + id +
                    "'");
  }
  return *car;
}

bool is_free(const Ctx& ctx, const Interval& view) {
  for (const auto& c : ctx.s.cars) {
    if (c.reservation.meets_interior_of(view)) {
      return false;
    }
  }
  for (const auto& p : ctx.s.pedestrians) {
    if (p.on.meets_interior_of(view)) {
      return false;
    }
  }
  return true;
}

// Length thresholds occurring in the subtree. A size whose car reference is
// not resolvable here (e.g. bound by a deeper quantifier) contributes every
// car size, which keeps the candidate set a superset of what is needed.
void collect_thresholds(const Ctx& ctx, const Formula& f, std::set<Rat>& out) {
  if (!f) {
    return;
  }
  auto add_size_of = [&](const std::string& ref) {
    try {
      out.insert(resolve_car(ctx, ref).size);
    } catch (const EvalError&) {
      for (const auto& c : ctx.s.cars) {
        out.insert(c.size);
      }
    }
  };
  switch (f->kind) {
    case FormulaKind::LengthGE:
      if (f->len.is_size) {
        add_size_of(f->len.car_ref);
      } else {
        out.insert(f->len.constant);
      }
      return;
    case FormulaKind::Sg:
      add_size_of(f->ref);
      return;
    default:
      collect_thresholds(ctx, f->lhs, out);
      collect_thresholds(ctx, f->rhs, out);
      return;
  }
}

std::vector<Rat> candidate_splits(const Ctx& ctx, const Formula& f,
                                  const Interval& view, int depth) {
  std::vector<Rat> base = event_points(ctx.s, view);
  std::set<Rat> thresholds;
  collect_thresholds(ctx, f, thresholds);
  thresholds.erase(Rat(0));

  std::set<Rat> points(base.begin(), base.end());
  for (int round = 0; round < depth && !thresholds.empty(); ++round) {
    std::set<Rat> next = points;
    for (const auto& p : points) {
      for (const auto& k : thresholds) {
        for (const Rat& q : {p + k, p - k}) {
          if (view.contains(q)) {
            next.insert(q);
          }
        }
      }
    }
    if (next.size() == points.size()) {
      break;
    }
    points.swap(next);
  }
  return {points.begin(), points.end()};
}

std::vector<Rat> grid_splits(const Ctx& ctx, const Interval& view) {
  std::set<Rat> points;
  for (Rat p = view.lo; p <= view.hi; p += ctx.step) {
    points.insert(p);
  }
  points.insert(view.hi);
  for (const auto& p : event_points(ctx.s, view)) {
    points.insert(p);
  }
  return {points.begin(), points.end()};
}

bool eval(Ctx& ctx, const Formula& f, const Interval& view);

bool eval_uncached(Ctx& ctx, const Formula& f, const Interval& view) {
  switch (f->kind) {
    case FormulaKind::True:
      return true;
    case FormulaKind::False:
      return false;
    case FormulaKind::Free:
      return is_free(ctx, view);
    case FormulaKind::Cs:
      return ctx.s.crossing.contains(view);
    case FormulaKind::Re:
      return resolve_car(ctx, f->ref).reservation.contains(view);
    case FormulaKind::Sg: {
      const CarOccupancy& car = resolve_car(ctx, f->ref);
      return view.length() >= car.size && is_free(ctx, view);
    }
    case FormulaKind::LengthGE: {
      Rat bound = f->len.is_size ? resolve_car(ctx, f->len.car_ref).size
                                 : f->len.constant;
      return view.length() >= bound;
    }
    case FormulaKind::Pc: {
      const CarOccupancy& car = resolve_car(ctx, f->ref);
      if (car.id == ctx.s.ego_id) {
        return false;
      }
      const CarOccupancy& ego = ctx.s.ego();
      auto pieces = [](const CarOccupancy& c) {
        std::vector<Interval> v{c.reservation};
        if (c.claim) {
          v.push_back(*c.claim);
        }
        return v;
      };
      for (const auto& a : pieces(car)) {
        for (const auto& b : pieces(ego)) {
          if (a.overlaps_positively(b)) {
            return true;
          }
        }
      }
      return false;
    }
    case FormulaKind::Pa: {
      const CarOccupancy& car = resolve_car(ctx, f->ref);
      if (!car.claim) {
        return false;
      }
      const Rat front = car.reservation.hi;
      for (const auto& p : ctx.s.pedestrians) {
        if (!p.started_crossing) {
          continue;
        }
        auto hit = p.on.intersect(*car.claim);
        if (hit && hit->hi > front) {
          return true;
        }
      }
      return false;
    }
    case FormulaKind::Ob: {
      const Rat front = ctx.s.ego().reservation.hi;
      const Interval window{front, front + ctx.s.perception_distance};
      for (const auto& sign : ctx.s.signs) {
        if (sign.kind == f->ref && window.contains(sign.at)) {
          return true;
        }
      }
      return false;
    }
    case FormulaKind::Not:
      return !eval(ctx, f->lhs, view);
    case FormulaKind::And:
      return eval(ctx, f->lhs, view) && eval(ctx, f->rhs, view);
    case FormulaKind::Or:
      return eval(ctx, f->lhs, view) || eval(ctx, f->rhs, view);
    case FormulaKind::Chop: {
      std::vector<Rat> splits = ctx.exact
                                    ? candidate_splits(ctx, f, view, chop_depth(f))
                                    : grid_splits(ctx, view);
      for (const auto& m : splits) {
        if (eval(ctx, f->lhs, Interval{view.lo, m}) &&
            eval(ctx, f->rhs, Interval{m, view.hi})) {
          return true;
        }
      }
      return false;
    }
    case FormulaKind::Somewhere: {
      std::vector<Rat> splits = ctx.exact
                                    ? candidate_splits(ctx, f, view, chop_depth(f))
                                    : grid_splits(ctx, view);
      for (size_t i = 0; i < splits.size(); ++i) {
        for (size_t j = i; j < splits.size(); ++j) {
          if (eval(ctx, f->lhs, Interval{splits[i], splits[j]})) {
            return true;
          }
        }
      }
      return false;
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      const bool existential = f->kind == FormulaKind::Exists;
      std::set<std::string> used;
      for (const auto& [var, id] : ctx.bound) {
        used.insert(id);
      }
      for (const auto& car : ctx.s.cars) {
        if (used.count(car.id)) {
          continue;  // quantifiers range over ids not already picked
        }
        ctx.bound.emplace_back(f->ref, car.id);
        bool sub = eval(ctx, f->lhs, view);
        ctx.bound.pop_back();
        if (existential && sub) {
          return true;
        }
        if (!existential && !sub) {
          return false;
        }
      }
      return !existential;
    }
  }
  throw EvalError("unhandled formula node");
}

bool eval(Ctx& ctx, const Formula& f, const Interval& view) {
  Ctx::Key key{f.get(), view.lo, view.hi, ctx.bound_signature()};
  if (auto it = ctx.memo.find(key); it != ctx.memo.end()) {
    return it->second;
  }
  bool result = eval_uncached(ctx, f, view);
  ctx.memo.emplace(std::move(key), result);
  return result;
}

void check_view(const TrafficSnapshot& s, const Interval& view) {
  if (!view.valid() || !s.extent.contains(view)) {
    throw std::domain_error("view " + to_string(view) + " outside extent " +
                            to_string(s.extent));
  }
}

}  // namespace

bool evaluate(const Formula& f, const TrafficSnapshot& s, const Interval& view,
              const Valuation& env) {
  check_view(s, view);
  Ctx ctx{s, env};
  return eval(ctx, f, view);
}

bool evaluate_oracle(const Formula& f, const TrafficSnapshot& s,
                     const Interval& view, const Valuation& env, const Rat& step) {
  if (step <= Rat(0)) {
    throw EvalError("oracle grid step must be positive");
  }
  check_view(s, view);
  Ctx ctx{s, env};
  ctx.exact = false;
  ctx.step = step;
  return eval(ctx, f, view);
}

std::vector<Rat> split_candidates(const Formula& f, const TrafficSnapshot& s,
                                  const Interval& view, const Valuation& env,
                                  int depth) {
  check_view(s, view);
  Ctx ctx{s, env};
  if (depth < 0) {
    depth = std::max(1, chop_depth(f));
  }
  return candidate_splits(ctx, f, view, depth);
}

std::optional<UniverseWitness> satisfiable_in_snapshots(
    const Formula& f, const std::vector<TrafficSnapshot>& snapshots,
    const std::optional<Interval>& view) {
  for (size_t i = 0; i < snapshots.size(); ++i) {
    const TrafficSnapshot& s = snapshots[i];
    Interval v = view ? *view : s.extent;
    Valuation env{{"E", s.ego_id}};
    try {
      if (evaluate(f, s, v, env)) {
        return UniverseWitness{s, v, i};
      }
    } catch (const EvalError&) {
      // formula talks about a car this snapshot does not have
    } catch (const std::domain_error&) {
      // requested view does not fit this snapshot's extent
    }
  }
  return std::nullopt;
}

std::optional<UniverseWitness> satisfiable_in_universe(
    const Formula& f, const UniverseParams& p,
    const std::optional<Interval>& view) {
  std::optional<UniverseWitness> found;
  size_t index = 0;
  for_each_snapshot(p, [&](const TrafficSnapshot& s) {
    Interval v = view ? *view : s.extent;
    Valuation env{{"E", s.ego_id}};
    try {
      if (evaluate(f, s, v, env)) {
        found = UniverseWitness{s, v, index};
        return false;
      }
    } catch (const EvalError&) {
    } catch (const std::domain_error&) {
    }
    ++index;
    return true;
  });
  return found;
}

}  // namespace dhc
