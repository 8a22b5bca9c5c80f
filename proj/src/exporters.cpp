#include "dhc/exporters.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace dhc {

namespace {

std::string sanitize_ident(const std::string& name) {
  std::string out;
  for (char c : name) {
    out += (std::isalnum(static_cast<unsigned char>(c)) != 0) ? c : '_';
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) {
    out = "r_" + out;
  }
  return out;
}

std::string clock_expr(const ClockConstraint& cc) {
  std::string out;
  for (const auto& a : cc.atoms) {
    if (!out.empty()) {
      out += " && ";
    }
    out += a.clock + (a.is_upper ? " <= " : " >= ") +
           (a.symbol.empty() ? std::to_string(a.bound) : a.symbol);
  }
  return out;
}

bool is_true(const Formula& f) { return f && f->kind == FormulaKind::True; }

}  // namespace

std::string to_xta(const RuleAutomaton& a, XtaSpatialMode mode) {
  auto violations = validate_automaton(a);
  if (!violations.empty()) {
    throw std::invalid_argument("invalid automaton '" + a.name +
                                "': " + violations.front());
  }

  const std::string proc = sanitize_ident(a.name);
  std::string out;
  out += "// rule '" + a.name + "' exported as a timed automaton\n";

  // Spatial guards cannot be expressed natively; either lower them to free
  // boolean environment variables (reachability then over-approximates the
  // exact spatial semantics) or keep them as comments.
  std::vector<std::string> env_vars;           // in first-use order
  std::map<std::string, int> var_of_formula;   // stripped formula -> var index
  auto lower_guard = [&](const Formula& f) -> std::string {
    if (is_true(f)) {
      return "";
    }
    bool negated = f->kind == FormulaKind::Not;
    Formula core = negated ? f->lhs : f;
    std::string key = formula_to_string(core);
    auto it = var_of_formula.find(key);
    if (it == var_of_formula.end()) {
      int index = static_cast<int>(env_vars.size());
      it = var_of_formula.emplace(key, index).first;
      env_vars.push_back("g" + std::to_string(index));
    }
    return (negated ? "!" : "") + env_vars[it->second];
  };

  std::string body;
  body += "process " + proc + "() {\n";
  for (const auto& c : a.clocks) {
    body += "    clock " + c + ";\n";
  }
  for (const auto& [name, value] : a.constants) {
    body += "    const int " + name + " = " + std::to_string(value) + ";\n";
  }
  body += "    state ";
  for (size_t i = 0; i < a.locations.size(); ++i) {
    if (i > 0) {
      body += ", ";
    }
    body += a.locations[i].name;
    std::string inv = clock_expr(a.locations[i].invariant);
    if (!inv.empty()) {
      body += " { " + inv + " }";
    }
  }
  body += ";\n";
  body += "    init " + a.initial_location().name + ";\n";
  if (!a.transitions.empty()) {
    body += "    trans\n";
    for (size_t i = 0; i < a.transitions.size(); ++i) {
      const Transition& t = a.transitions[i];
      std::string guard;
      if (mode == XtaSpatialMode::BoolEnv) {
        guard = lower_guard(t.spatial_guard);
      }
      std::string clocks = clock_expr(t.clock_guard);
      if (!clocks.empty()) {
        guard += (guard.empty() ? "" : " && ") + clocks;
      }
      std::string assigns;
      for (const auto& r : t.resets) {
        assigns += (assigns.empty() ? "" : ", ") + r + " = 0";
      }
      body += "        " + t.source + " -> " + t.target + " { ";
      if (!guard.empty()) {
        body += "guard " + guard + "; ";
      }
      if (!assigns.empty()) {
        body += "assign " + assigns + "; ";
      }
      body += "}";
      body += (i + 1 < a.transitions.size()) ? "," : ";";
      body += " // action: " + t.action;
      if (mode == XtaSpatialMode::Comment && !is_true(t.spatial_guard)) {
        body += "; spatial: " + formula_to_string(t.spatial_guard);
      }
      body += "\n";
    }
  }
  body += "}\n";

  if (mode == XtaSpatialMode::BoolEnv) {
    out += "// spatial guards are boolean environment variables set\n";
    out += "// nondeterministically by the template below; reachability of\n";
    out += "// this model over-approximates the exact spatial semantics.\n";
    std::vector<std::string> by_index(env_vars.size());
    for (const auto& [formula, index] : var_of_formula) {
      by_index[index] = formula;
    }
    for (size_t i = 0; i < env_vars.size(); ++i) {
      out += "bool " + env_vars[i] + "; // " + by_index[i] + "\n";
    }
  } else {
    out += "// spatial guards are preserved as comments only\n";
  }
  for (const auto& l : a.locations) {
    if (l.spatial_invariant) {
      out += "// spatial invariant of " + l.name + ": " +
             formula_to_string(*l.spatial_invariant) + "\n";
    }
  }
  out += body;

  std::string env_proc = proc == "spatial_env" ? "spatial_env_model" : "spatial_env";
  if (mode == XtaSpatialMode::BoolEnv && !env_vars.empty()) {
    out += "process " + env_proc + "() {\n";
    out += "    state run;\n";
    out += "    init run;\n";
    out += "    trans\n";
    for (size_t i = 0; i < env_vars.size(); ++i) {
      out += "        run -> run { assign " + env_vars[i] + " = !" + env_vars[i] +
             "; }";
      out += (i + 1 < env_vars.size()) ? ",\n" : ";\n";
    }
    out += "}\n";
    out += "system " + proc + ", " + env_proc + ";\n";
  } else {
    out += "system " + proc + ";\n";
  }
  return out;
}

namespace {

// Escapes quotes only; label text uses literal \n sequences for line breaks.
std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"') {
      out += '\\';
    }
    out += c;
  }
  return out;
}

std::string transition_label(const Transition& t) {
  std::string label = t.action;
  if (!is_true(t.spatial_guard)) {
    label += "\\n" + formula_to_string(t.spatial_guard);
  }
  if (!t.clock_guard.is_true()) {
    label += "\\n" + to_string(t.clock_guard);
  }
  if (!t.resets.empty()) {
    std::string resets;
    for (const auto& r : t.resets) {
      resets += (resets.empty() ? "" : ", ") + r;
    }
    label += "\\nreset " + resets;
  }
  return label;
}

}  // namespace

std::string to_dot(const RuleAutomaton& a) {
  std::string out = "digraph " + sanitize_ident(a.name) + " {\n";
  out += "  rankdir=LR;\n";
  out += "  node [shape=circle];\n";
  for (const auto& l : a.locations) {
    std::string label = l.name;
    if (!l.invariant.is_true()) {
      label += "\\n" + to_string(l.invariant);
    }
    if (l.spatial_invariant) {
      label += "\\n" + formula_to_string(*l.spatial_invariant);
    }
    if (!l.forbid.empty()) {
      std::string forbids;
      for (const auto& f : l.forbid) {
        forbids += (forbids.empty() ? "" : ", ") + f;
      }
      label += "\\nforbid " + forbids;
    }
    out += "  \"" + dot_escape(l.name) + "\" [label=\"" + dot_escape(label) +
           "\"" + (l.initial ? ", shape=doublecircle" : "") + "];\n";
  }
  for (const auto& t : a.transitions) {
    out += "  \"" + dot_escape(t.source) + "\" -> \"" + dot_escape(t.target) +
           "\" [label=\"" + dot_escape(transition_label(t)) + "\"];\n";
  }
  out += "}\n";
  return out;
}

std::string to_dot(const ComposedSystem& c) {
  std::string out = "digraph composition {\n";
  out += "  rankdir=LR;\n";
  out += "  node [shape=circle];\n";

  std::vector<std::vector<int>> tuples{{}};
  for (const auto& comp : c.components) {
    std::vector<std::vector<int>> next;
    for (const auto& t : tuples) {
      for (size_t i = 0; i < comp.locations.size(); ++i) {
        auto copy = t;
        copy.push_back(static_cast<int>(i));
        next.push_back(std::move(copy));
      }
    }
    tuples.swap(next);
  }

  auto is_initial = [&](const std::vector<int>& locs) {
    for (size_t i = 0; i < c.components.size(); ++i) {
      if (!c.components[i].locations[locs[i]].initial) {
        return false;
      }
    }
    return true;
  };

  for (const auto& locs : tuples) {
    std::string name = c.label(locs);
    out += "  \"" + dot_escape(name) + "\"" +
           (is_initial(locs) ? " [shape=doublecircle]" : "") + ";\n";
  }
  for (const auto& locs : tuples) {
    for (size_t i = 0; i < c.components.size(); ++i) {
      const RuleAutomaton& a = c.components[i];
      for (const auto& t : a.transitions) {
        if (a.location_index(t.source) != locs[i]) {
          continue;
        }
        auto next = locs;
        next[i] = a.location_index(t.target);
        out += "  \"" + dot_escape(c.label(locs)) + "\" -> \"" +
               dot_escape(c.label(next)) + "\" [label=\"" +
               dot_escape(a.name + ": " + t.action) + "\"];\n";
      }
    }
  }
  out += "}\n";
  return out;
}

namespace {

void flatten_conjuncts(const Formula& f, std::vector<Formula>& out) {
  if (f->kind == FormulaKind::And) {
    flatten_conjuncts(f->lhs, out);
    flatten_conjuncts(f->rhs, out);
  } else {
    out.push_back(f);
  }
}

bool contains_sg(const Formula& f) {
  if (!f) {
    return false;
  }
  if (f->kind == FormulaKind::Sg) {
    return true;
  }
  return contains_sg(f->lhs) || contains_sg(f->rhs);
}

// Fixed atom-to-event table; negations keep a '~' prefix and quantifier
// wrappers are transparent.
std::optional<std::string> render_literal(const Formula& conjunct) {
  bool negated = false;
  Formula g = conjunct;
  while (g && (g->kind == FormulaKind::Not || g->kind == FormulaKind::Exists ||
               g->kind == FormulaKind::Forall)) {
    if (g->kind == FormulaKind::Not) {
      negated = !negated;
    }
    g = g->lhs;
  }
  if (!g) {
    return std::nullopt;
  }
  std::string name;
  switch (g->kind) {
    case FormulaKind::Pc:
      name = "potential-collision";
      break;
    case FormulaKind::Pa:
      name = "pedestrian-ahead";
      break;
    case FormulaKind::Ob:
      name = "observed-" + g->ref;
      break;
    case FormulaKind::Sg:
      name = "safe-gap";
      break;
    case FormulaKind::Free:
      name = "free-space";
      break;
    case FormulaKind::Cs:
      name = "crossing-segment";
      break;
    case FormulaKind::Re:
      name = "reservation";
      break;
    case FormulaKind::LengthGE:
      if (g->len.is_size) {
        name = "length-ge-size-" + g->len.car_ref;
      } else {
        std::string v = to_string(g->len.constant);
        std::replace(v.begin(), v.end(), '/', ':');
        name = "length-ge-" + v;
      }
      break;
    case FormulaKind::Somewhere:
    case FormulaKind::Chop:
      if (contains_sg(g)) {
        name = "safe-gap-on-junction";
        break;
      }
      return std::nullopt;
    default:
      return std::nullopt;
  }
  return (negated ? "~" : "") + name;
}

std::string camel_case(const std::string& text) {
  std::string out;
  bool new_word = false;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)) == 0) {
      new_word = !out.empty();
      continue;
    }
    if (new_word) {
      out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      new_word = false;
    } else {
      out += out.empty()
                 ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                 : c;
    }
  }
  return out.empty() ? "act" : out;
}

}  // namespace

PlanSketch to_bdi_sketch(const RuleAutomaton& a) {
  auto violations = validate_automaton(a);
  if (!violations.empty()) {
    throw std::invalid_argument("invalid automaton '" + a.name +
                                "': " + violations.front());
  }
  PlanSketch sketch;
  for (const auto& t : a.transitions) {
    PlanLine line;
    const Location* target = a.find_location(t.target);
    line.actions.push_back(camel_case(
        target != nullptr && !target->role.empty() ? target->role : t.action));

    if (is_true(t.spatial_guard)) {
      line.trigger = "start";
      sketch.lines.push_back(std::move(line));
      continue;
    }

    std::vector<Formula> conjuncts;
    flatten_conjuncts(t.spatial_guard, conjuncts);
    std::vector<std::string> rendered;
    bool conjunctive = true;
    for (const auto& c : conjuncts) {
      auto lit = render_literal(c);
      if (!lit) {
        conjunctive = false;
        break;
      }
      rendered.push_back(*lit);
    }
    if (!conjunctive) {
      line.trigger = "'" + formula_to_string(t.spatial_guard) + "'";
      sketch.warnings.push_back("guard of " + t.source + " -> " + t.target +
                                " is not a conjunction of literals; emitted as a "
                                "composite trigger");
    } else {
      line.trigger = rendered.front();
      line.guards.assign(rendered.begin() + 1, rendered.end());
    }
    sketch.lines.push_back(std::move(line));
  }
  return sketch;
}

std::string plan_sketch_to_string(const PlanSketch& sketch) {
  std::string out;
  for (const auto& line : sketch.lines) {
    out += line.trigger;
    if (!line.guards.empty()) {
      out += " : ";
      for (size_t i = 0; i < line.guards.size(); ++i) {
        if (i > 0) {
          out += ", ";
        }
        out += line.guards[i];
      }
    }
    out += " <- ";
    for (size_t i = 0; i < line.actions.size(); ++i) {
      if (i > 0) {
        out += ", ";
      }
      out += line.actions[i];
    }
    out += ";\n";
  }
  for (const auto& w : sketch.warnings) {
    out += "// warning: " + w + "\n";
  }
  return out;
}

}  // namespace dhc
