#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "dhc/bundled.hpp"
#include "dhc/compose.hpp"
#include "dhc/eval.hpp"
#include "dhc/exporters.hpp"
#include "dhc/formula_parser.hpp"
#include "dhc/reach.hpp"
#include "dhc/rule_parser.hpp"
#include "dhc/snapshot_json.hpp"
#include "dhc/universe.hpp"
#include "dhc/xta_check.hpp"

namespace py = pybind11;

namespace {

// python-visible handle for the shared-pointer formula AST
struct PyFormula {
  dhc::Formula ast;
};

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

dhc::Interval interval_from(const std::pair<std::string, std::string>& bounds) {
  auto lo = dhc::parse_rational(bounds.first);
  auto hi = dhc::parse_rational(bounds.second);
  if (!lo || !hi) {
    throw py::value_error("malformed rational in interval");
  }
  return dhc::Interval{*lo, *hi};
}

dhc::Interval view_or_extent(const dhc::TrafficSnapshot& s,
                             const std::optional<std::pair<std::string, std::string>>& view) {
  return view ? interval_from(*view) : s.extent;
}

dhc::FormulaParseOptions formula_opts(bool somewhere_brackets) {
  dhc::FormulaParseOptions opts;
  opts.somewhere_brackets = somewhere_brackets;
  return opts;
}

std::vector<dhc::TrafficSnapshot> snapshots_from(const py::iterable& it) {
  std::vector<dhc::TrafficSnapshot> out;
  for (const auto& item : it) {
    out.push_back(item.cast<dhc::TrafficSnapshot>());
  }
  return out;
}

py::dict reach_to_py(const dhc::ReachResult& r) {
  py::dict out;
  py::list reachable;
  py::dict traces;
  for (const auto& l : r.locations) {
    reachable.append(l.location);
    py::list steps;
    for (const auto& step : l.trace) {
      py::dict d;
      d["action"] = step.action;
      d["from"] = step.source;
      d["to"] = step.target;
      d["snapshot_index"] = step.snapshot_index;
      steps.append(std::move(d));
    }
    traces[py::str(l.location)] = std::move(steps);
  }
  out["reachable"] = std::move(reachable);
  out["traces"] = std::move(traces);
  return out;
}

}  // namespace

PYBIND11_MODULE(_dhc, m) {
  m.doc() = "spatial traffic-rule formulas, rule automata and conflict hunting";

  py::register_exception<dhc::ParseError>(m, "FormulaParseError",
                                          PyExc_ValueError);
  py::register_exception<dhc::EvalError>(m, "EvalError", PyExc_ValueError);

  py::class_<PyFormula>(m, "Formula")
      .def("__str__",
           [](const PyFormula& f) { return dhc::formula_to_string(f.ast); })
      .def("__repr__",
           [](const PyFormula& f) {
             return "Formula('" + dhc::formula_to_string(f.ast) + "')";
           })
      .def("free_variables",
           [](const PyFormula& f) { return dhc::free_variables(f.ast); })
      .def("chop_depth",
           [](const PyFormula& f) { return dhc::chop_depth(f.ast); });

  py::class_<dhc::TrafficSnapshot>(m, "Snapshot")
      .def("__eq__", [](const dhc::TrafficSnapshot& a,
                        const dhc::TrafficSnapshot& b) { return a == b; })
      .def("to_json",
           [](const dhc::TrafficSnapshot& s) { return dhc::save_snapshot(s); })
      .def_property_readonly("ego",
                             [](const dhc::TrafficSnapshot& s) { return s.ego_id; })
      .def_property_readonly("car_ids", [](const dhc::TrafficSnapshot& s) {
        std::vector<std::string> ids;
        for (const auto& c : s.cars) {
          ids.push_back(c.id);
        }
        return ids;
      });

  py::class_<dhc::RuleAutomaton>(m, "RuleAutomaton")
      .def_property_readonly(
          "name", [](const dhc::RuleAutomaton& a) { return a.name; })
      .def_property_readonly("locations",
                             [](const dhc::RuleAutomaton& a) {
                               std::vector<std::string> names;
                               for (const auto& l : a.locations) {
                                 names.push_back(l.name);
                               }
                               return names;
                             })
      .def_property_readonly("clocks",
                             [](const dhc::RuleAutomaton& a) { return a.clocks; })
      .def("validate",
           [](const dhc::RuleAutomaton& a) { return dhc::validate_automaton(a); })
      .def("__repr__", [](const dhc::RuleAutomaton& a) {
        return "RuleAutomaton('" + a.name + "')";
      });

  py::class_<dhc::ComposedSystem>(m, "ComposedSystem")
      .def_property_readonly("rule_names", [](const dhc::ComposedSystem& c) {
        std::vector<std::string> names;
        for (const auto& a : c.components) {
          names.push_back(a.name);
        }
        return names;
      });

  py::class_<dhc::UniverseParams>(m, "UniverseParams");

  m.def(
      "parse_formula",
      [](const std::string& text, bool somewhere_brackets) {
        return PyFormula{dhc::parse_formula(text, formula_opts(somewhere_brackets))};
      },
      py::arg("text"), py::arg("somewhere_brackets") = true);

  m.def("formula_to_string",
        [](const PyFormula& f) { return dhc::formula_to_string(f.ast); });

  m.def("load_snapshot",
        [](const std::string& text) { return dhc::load_snapshot(text); },
        py::arg("json_text"));

  m.def("validate_snapshot", [](const dhc::TrafficSnapshot& s) {
    return dhc::validate_snapshot(s);
  });

  m.def(
      "event_points",
      [](const dhc::TrafficSnapshot& s,
         const std::optional<std::pair<std::string, std::string>>& view) {
        std::vector<std::string> out;
        for (const auto& p : dhc::event_points(s, view_or_extent(s, view))) {
          out.push_back(dhc::to_string(p));
        }
        return out;
      },
      py::arg("snapshot"), py::arg("view") = std::nullopt);

  m.def(
      "evaluate",
      [](const PyFormula& f, const dhc::TrafficSnapshot& s,
         const std::optional<std::pair<std::string, std::string>>& view,
         const std::map<std::string, std::string>& env, bool bind_ego) {
        dhc::Valuation valuation(env.begin(), env.end());
        if (bind_ego) {
          valuation.emplace("E", s.ego_id);
        }
        return dhc::evaluate(f.ast, s, view_or_extent(s, view), valuation);
      },
      py::arg("formula"), py::arg("snapshot"), py::arg("view") = std::nullopt,
      py::arg("env") = std::map<std::string, std::string>{},
      py::arg("bind_ego") = true);

  m.def(
      "evaluate_oracle",
      [](const PyFormula& f, const dhc::TrafficSnapshot& s,
         const std::optional<std::pair<std::string, std::string>>& view,
         const std::map<std::string, std::string>& env, const std::string& step,
         bool bind_ego) {
        auto parsed = dhc::parse_rational(step);
        if (!parsed) {
          throw py::value_error("malformed grid step");
        }
        dhc::Valuation valuation(env.begin(), env.end());
        if (bind_ego) {
          valuation.emplace("E", s.ego_id);
        }
        return dhc::evaluate_oracle(f.ast, s, view_or_extent(s, view), valuation,
                                    *parsed);
      },
      py::arg("formula"), py::arg("snapshot"), py::arg("view") = std::nullopt,
      py::arg("env") = std::map<std::string, std::string>{},
      py::arg("step") = "1", py::arg("bind_ego") = true);

  m.def(
      "split_candidates",
      [](const PyFormula& f, const dhc::TrafficSnapshot& s,
         const std::optional<std::pair<std::string, std::string>>& view) {
        std::vector<std::string> out;
        for (const auto& p :
             dhc::split_candidates(f.ast, s, view_or_extent(s, view))) {
          out.push_back(dhc::to_string(p));
        }
        return out;
      },
      py::arg("formula"), py::arg("snapshot"), py::arg("view") = std::nullopt);

  m.def(
      "parse_rule_file",
      [](const std::string& text, bool somewhere_brackets) {
        return dhc::parse_rule_file(text, formula_opts(somewhere_brackets));
      },
      py::arg("text"), py::arg("somewhere_brackets") = true);

  m.def("rule_to_string",
        [](const dhc::RuleAutomaton& a) { return dhc::rule_to_string(a); });

  m.def(
      "reach",
      [](const dhc::RuleAutomaton& a, const py::iterable& scenarios) {
        return reach_to_py(dhc::reach(a, snapshots_from(scenarios)));
      },
      py::arg("rule"), py::arg("scenarios"));

  m.def(
      "reach_discrete",
      [](const dhc::RuleAutomaton& a, const py::iterable& scenarios,
         long long horizon) {
        auto snaps = snapshots_from(scenarios);
        long long h = horizon >= 0 ? horizon : dhc::sufficient_horizon({&a});
        return dhc::reach_discrete(a, snaps, h).locations;
      },
      py::arg("rule"), py::arg("scenarios"), py::arg("horizon") = -1);

  m.def("compose", [](const py::iterable& rules) {
    std::vector<dhc::RuleAutomaton> list;
    for (const auto& r : rules) {
      list.push_back(r.cast<dhc::RuleAutomaton>());
    }
    return dhc::compose(list);
  });

  m.def(
      "find_timelocks",
      [](const dhc::ComposedSystem& c, const py::iterable& scenarios) {
        py::list out;
        for (const auto& r : dhc::find_timelocks(c, snapshots_from(scenarios))) {
          out.append(json_to_py(dhc::conflict_report_to_json(c, r)));
        }
        return out;
      },
      py::arg("system"), py::arg("scenarios"));

  m.def(
      "find_permission_conflicts",
      [](const dhc::ComposedSystem& c, const py::iterable& scenarios) {
        py::list out;
        for (const auto& r :
             dhc::find_permission_conflicts(c, snapshots_from(scenarios))) {
          out.append(json_to_py(dhc::conflict_report_to_json(c, r)));
        }
        return out;
      },
      py::arg("system"), py::arg("scenarios"));

  m.def(
      "guard_contradiction_scan",
      [](const py::iterable& rules, const py::iterable& scenarios) {
        std::vector<dhc::RuleAutomaton> list;
        for (const auto& r : rules) {
          list.push_back(r.cast<dhc::RuleAutomaton>());
        }
        py::list out;
        for (const auto& g : dhc::guard_contradiction_scan_snapshots(
                 list, snapshots_from(scenarios))) {
          py::dict d;
          d["rule_a"] = g.rule_a;
          d["location_a"] = g.location_a;
          d["rule_b"] = g.rule_b;
          d["location_b"] = g.location_b;
          d["explanation"] = g.explanation;
          out.append(std::move(d));
        }
        return out;
      },
      py::arg("rules"), py::arg("scenarios"));

  m.def(
      "satisfiable_in_snapshots",
      [](const PyFormula& f, const py::iterable& scenarios)
          -> std::optional<size_t> {
        auto witness =
            dhc::satisfiable_in_snapshots(f.ast, snapshots_from(scenarios));
        if (!witness) {
          return std::nullopt;
        }
        return witness->index;
      },
      py::arg("formula"), py::arg("scenarios"));

  m.def("default_universe", &dhc::default_universe);
  m.def("enumerate_universe", [](const dhc::UniverseParams& p) {
    return dhc::enumerate_universe(p);
  });

  m.def(
      "to_xta",
      [](const dhc::RuleAutomaton& a, const std::string& mode) {
        if (mode == "bool-env") {
          return dhc::to_xta(a, dhc::XtaSpatialMode::BoolEnv);
        }
        if (mode == "comment") {
          return dhc::to_xta(a, dhc::XtaSpatialMode::Comment);
        }
        throw py::value_error("mode must be 'bool-env' or 'comment'");
      },
      py::arg("rule"), py::arg("mode") = "bool-env");

  m.def("to_dot", [](const dhc::RuleAutomaton& a) { return dhc::to_dot(a); });
  m.def("to_dot_composed",
        [](const dhc::ComposedSystem& c) { return dhc::to_dot(c); });

  m.def("to_bdi_sketch", [](const dhc::RuleAutomaton& a) {
    return dhc::plan_sketch_to_string(dhc::to_bdi_sketch(a));
  });

  m.def("check_xta",
        [](const std::string& text) { return dhc::check_xta(text); });

  m.def("bundled_rule_names", [] {
    std::vector<std::string> names;
    for (const auto& r : dhc::bundled_rules()) {
      names.push_back(r.name);
    }
    return names;
  });

  m.def("bundled_rule", [](const std::string& name) {
    const auto* rule = dhc::find_bundled_rule(name);
    if (rule == nullptr) {
      throw py::key_error("no bundled rule named '" + name + "'");
    }
    return rule->automaton;
  });

  m.def("bundled_rule_source", [](const std::string& name) {
    const auto* rule = dhc::find_bundled_rule(name);
    if (rule == nullptr) {
      throw py::key_error("no bundled rule named '" + name + "'");
    }
    return rule->source;
  });

  m.def("bundled_snapshot", [](const std::string& name) {
    const auto* snap = dhc::find_bundled_snapshot(name);
    if (snap == nullptr) {
      throw py::key_error("no bundled snapshot named '" + name + "'");
    }
    return snap->snapshot;
  });

  m.def("bundled_example_snapshots", [](const std::string& rule_name) {
    const auto* rule = dhc::find_bundled_rule(rule_name);
    if (rule == nullptr) {
      throw py::key_error("no bundled rule named '" + rule_name + "'");
    }
    py::list out;
    for (const auto& s : rule->snapshots) {
      py::dict d;
      d["name"] = s.name;
      d["enabling"] = s.enabling;
      d["snapshot"] = s.snapshot;
      out.append(std::move(d));
    }
    return out;
  });
}
