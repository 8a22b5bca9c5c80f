#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dhc/bundled.hpp"
#include "dhc/compose.hpp"
#include "dhc/eval.hpp"
#include "dhc/exporters.hpp"
#include "dhc/formula_parser.hpp"
#include "dhc/reach.hpp"
#include "dhc/rule_parser.hpp"
#include "dhc/snapshot_json.hpp"
#include "dhc/xta_check.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFound = 1;  // the sought phenomenon exists (or a check failed)
constexpr int kExitError = 2;  // usage or input error

struct GlobalOptions {
  bool json = false;
  bool explain = false;
  bool oracle = false;
  bool somewhere_brackets = true;
  std::string out_path;
};

void write_output(const GlobalOptions& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write to '" + opts.out_path + "'");
  }
  out << text;
}

std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) {
    return std::nullopt;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string stem_of(const std::string& path) {
  std::string stem = fs::path(path).filename().string();
  for (const char* suffix : {".snapshot.json", ".rule", ".json"}) {
    if (stem.size() > std::strlen(suffix) &&
        stem.ends_with(suffix)) {
      return stem.substr(0, stem.size() - std::strlen(suffix));
    }
  }
  return stem;
}

// Literal path, then DHC_RULE_PATH directories, then the bundled catalog.
std::string load_rule_text(const std::string& path) {
  if (auto text = read_file(path)) {
    return *text;
  }
  if (path.find('/') == std::string::npos) {
    if (const char* env = std::getenv("DHC_RULE_PATH")) {
      std::stringstream dirs(env);
      std::string dir;
      while (std::getline(dirs, dir, ':')) {
        if (dir.empty()) {
          continue;
        }
        if (auto text = read_file(fs::path(dir) / path)) {
          return *text;
        }
      }
    }
    if (const auto* bundled = dhc::find_bundled_rule(stem_of(path))) {
      return bundled->source;
    }
  }
  throw std::runtime_error("cannot open rule file '" + path + "'");
}

std::string load_snapshot_text(const std::string& path) {
  if (auto text = read_file(path)) {
    return *text;
  }
  if (path.find('/') == std::string::npos) {
    if (const auto* bundled = dhc::find_bundled_snapshot(stem_of(path))) {
      return bundled->text;
    }
  }
  throw std::runtime_error("cannot open snapshot file '" + path + "'");
}

dhc::RuleAutomaton load_rule(const std::string& path, const GlobalOptions& opts) {
  dhc::FormulaParseOptions fopts;
  fopts.somewhere_brackets = opts.somewhere_brackets;
  try {
    return dhc::parse_rule_file(load_rule_text(path), fopts);
  } catch (const dhc::ParseError& e) {
    throw std::runtime_error(path + ":" + e.what());
  }
}

dhc::TrafficSnapshot load_snapshot_file(const std::string& path) {
  try {
    return dhc::load_snapshot(load_snapshot_text(path));
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::vector<dhc::TrafficSnapshot> load_scenarios(
    const std::vector<std::string>& paths) {
  std::vector<dhc::TrafficSnapshot> out;
  for (const auto& p : paths) {
    out.push_back(load_snapshot_file(p));
  }
  return out;
}

// ---------------------------------------------------------------- eval ----

int cmd_eval(const GlobalOptions& opts, const std::string& formula_text,
             const std::string& snapshot_path,
             const std::vector<std::string>& view_args,
             const std::vector<std::string>& env_args) {
  dhc::FormulaParseOptions fopts;
  fopts.somewhere_brackets = opts.somewhere_brackets;
  dhc::Formula f = dhc::parse_formula(formula_text, fopts);
  dhc::TrafficSnapshot s = load_snapshot_file(snapshot_path);

  dhc::Interval view = s.extent;
  if (!view_args.empty()) {
    if (view_args.size() != 2) {
      throw std::runtime_error("--view needs exactly two positions");
    }
    auto lo = dhc::parse_rational(view_args[0]);
    auto hi = dhc::parse_rational(view_args[1]);
    if (!lo || !hi) {
      throw std::runtime_error("--view: malformed rational");
    }
    view = dhc::Interval{*lo, *hi};
  }
  dhc::Valuation env{{"E", s.ego_id}};
  for (const auto& binding : env_args) {
    auto eq = binding.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("--env expects var=carid");
    }
    env[binding.substr(0, eq)] = binding.substr(eq + 1);
  }

  bool result = dhc::evaluate(f, s, view, env);
  std::vector<dhc::Rat> splits;
  if (opts.explain) {
    splits = dhc::split_candidates(f, s, view, env);
  }

  if (opts.json) {
    json doc;
    doc["command"] = "eval";
    doc["formula"] = dhc::formula_to_string(f);
    doc["view"] = {dhc::to_string(view.lo), dhc::to_string(view.hi)};
    doc["result"] = result;
    if (opts.explain) {
      doc["split_candidates"] = json::array();
      for (const auto& p : splits) {
        doc["split_candidates"].push_back(dhc::to_string(p));
      }
    }
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << (result ? "true" : "false") << "\n";
    if (opts.explain) {
      std::cout << "split candidates on " << dhc::to_string(view) << ":";
      for (const auto& p : splits) {
        std::cout << " " << dhc::to_string(p);
      }
      std::cout << "\n";
    }
  }
  return kExitOk;
}

// --------------------------------------------------------------- reach ----

void print_trace(std::ostream& os, const std::vector<dhc::ReachStep>& trace) {
  for (const auto& step : trace) {
    os << "  delay; " << step.action << ": " << step.source << " -> "
       << step.target << "  [snapshot #" << step.snapshot_index << "]\n";
  }
}

int cmd_reach(const GlobalOptions& opts, const std::string& rule_path,
              const std::vector<std::string>& scenario_paths,
              const std::string& target, long long horizon) {
  dhc::RuleAutomaton a = load_rule(rule_path, opts);
  std::vector<dhc::TrafficSnapshot> scenarios = load_scenarios(scenario_paths);

  dhc::ReachResult result = dhc::reach(a, scenarios);

  std::vector<std::string> targets;
  if (!target.empty()) {
    targets.push_back(target);
  } else {
    for (const auto& l : a.locations) {  // sinks
      bool has_out = false;
      for (const auto& t : a.transitions) {
        if (t.source == l.name) {
          has_out = true;
          break;
        }
      }
      if (!has_out) {
        targets.push_back(l.name);
      }
    }
  }

  bool oracle_agrees = true;
  if (opts.oracle) {
    long long h = horizon > 0 ? horizon : dhc::sufficient_horizon({&a});
    dhc::DiscreteResult disc = dhc::reach_discrete(a, scenarios, h);
    std::set<std::string> zone_locs;
    for (const auto& l : result.locations) {
      zone_locs.insert(l.location);
    }
    oracle_agrees = zone_locs == disc.locations;
  }

  json doc;
  doc["command"] = "reach";
  doc["rule"] = a.name;
  doc["reachable"] = json::array();
  for (const auto& l : result.locations) {
    doc["reachable"].push_back(l.location);
  }

  if (!opts.json) {
    std::cout << "reachable:";
    for (const auto& l : result.locations) {
      std::cout << " " << l.location;
    }
    std::cout << "\n";
  }
  doc["targets"] = json::array();
  for (const auto& t : targets) {
    const dhc::LocationReach* lr = result.find(t);
    json entry;
    entry["location"] = t;
    entry["reachable"] = lr != nullptr;
    if (lr != nullptr) {
      bool ok = dhc::replay_trace(a, scenarios, lr->trace, t);
      entry["trace_replays"] = ok;
      entry["trace"] = json::array();
      for (const auto& step : lr->trace) {
        entry["trace"].push_back(json{{"action", step.action},
                                      {"from", step.source},
                                      {"to", step.target},
                                      {"snapshot_index", step.snapshot_index}});
      }
      if (!opts.json) {
        std::cout << t << " reachable; witness trace"
                  << (ok ? "" : " (replay FAILED)") << ":\n";
        print_trace(std::cout, lr->trace);
      }
    } else if (!opts.json) {
      std::cout << t << " unreachable\n";
    }
    doc["targets"].push_back(std::move(entry));
  }
  if (opts.oracle) {
    doc["oracle_agrees"] = oracle_agrees;
    if (!opts.json) {
      std::cout << "discrete oracle: " << (oracle_agrees ? "agrees" : "DISAGREES")
                << "\n";
    }
  }
  if (opts.json) {
    std::cout << doc.dump(2) << "\n";
  }
  return oracle_agrees ? kExitOk : kExitFound;
}

// ----------------------------------------------------------- conflicts ----

int cmd_conflicts(const GlobalOptions& opts,
                  const std::vector<std::string>& input_paths,
                  const std::vector<std::string>& scenario_opts,
                  const std::string& universe_name) {
  std::vector<std::string> rule_paths;
  std::vector<std::string> scenario_paths = scenario_opts;
  for (const auto& p : input_paths) {
    if (p.ends_with(".rule")) {
      rule_paths.push_back(p);
    } else {
      scenario_paths.push_back(p);
    }
  }
  if (rule_paths.size() < 2) {
    throw std::runtime_error("need at least 2 rules to look for conflicts");
  }
  if (!scenario_paths.empty() && !universe_name.empty()) {
    throw std::runtime_error("give scenario snapshots or --universe, not both");
  }
  std::vector<dhc::RuleAutomaton> rules;
  for (const auto& p : rule_paths) {
    rules.push_back(load_rule(p, opts));
  }

  std::vector<dhc::TrafficSnapshot> scenarios;
  if (!scenario_paths.empty()) {
    scenarios = load_scenarios(scenario_paths);
  } else {
    std::string name = universe_name.empty() ? "default" : universe_name;
    if (name != "default") {
      throw std::runtime_error("unknown universe '" + name +
                               "' (only 'default' is built in)");
    }
    scenarios = dhc::enumerate_universe(dhc::default_universe());
  }

  dhc::ComposedSystem system = dhc::compose(rules);
  auto timelocks = dhc::find_timelocks(system, scenarios);
  auto permissions = dhc::find_permission_conflicts(system, scenarios);
  auto contradictions = dhc::guard_contradiction_scan_snapshots(rules, scenarios);

  size_t total = timelocks.size() + permissions.size() + contradictions.size();

  json doc;
  doc["command"] = "conflicts";
  doc["rules"] = json::array();
  for (const auto& r : rules) {
    doc["rules"].push_back(r.name);
  }
  doc["scenario_count"] = scenarios.size();
  doc["conflicts"] = json::array();
  for (const auto& r : timelocks) {
    doc["conflicts"].push_back(dhc::conflict_report_to_json(system, r));
  }
  for (const auto& r : permissions) {
    doc["conflicts"].push_back(dhc::conflict_report_to_json(system, r));
  }
  doc["guard_contradictions"] = json::array();
  for (const auto& g : contradictions) {
    doc["guard_contradictions"].push_back(json{{"rule_a", g.rule_a},
                                               {"location_a", g.location_a},
                                               {"rule_b", g.rule_b},
                                               {"location_b", g.location_b},
                                               {"explanation", g.explanation}});
  }
  doc["count"] = total;

  if (opts.json) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "timelocks: " << timelocks.size() << "\n";
    for (const auto& r : timelocks) {
      std::cout << "  at (" << system.label(r.location_tuple) << ")\n";
    }
    std::cout << "permission conflicts: " << permissions.size() << "\n";
    for (const auto& r : permissions) {
      std::cout << "  action '" << r.action << "' at ("
                << system.label(r.location_tuple) << "): " << r.enabling_rule
                << " allows what " << r.forbidding_rule << " forbids (snapshot #"
                << r.snapshot_index << ")\n";
    }
    std::cout << "guard contradictions: " << contradictions.size() << "\n";
    for (const auto& g : contradictions) {
      std::cout << "  " << g.rule_a << "/" << g.location_a << " vs " << g.rule_b
                << "/" << g.location_b << ": " << g.explanation << "\n";
    }
  }
  return total > 0 ? kExitFound : kExitOk;
}

// -------------------------------------------------------------- export ----

int cmd_export(const GlobalOptions& opts,
               const std::vector<std::string>& rule_paths,
               const std::string& format, const std::string& mode) {
  std::vector<dhc::RuleAutomaton> rules;
  for (const auto& p : rule_paths) {
    rules.push_back(load_rule(p, opts));
  }

  std::string artifact;
  if (format == "xta") {
    if (rules.size() != 1) {
      throw std::runtime_error("xta export takes exactly one rule");
    }
    dhc::XtaSpatialMode m = dhc::XtaSpatialMode::BoolEnv;
    if (mode == "comment") {
      m = dhc::XtaSpatialMode::Comment;
    } else if (!mode.empty() && mode != "bool-env") {
      throw std::runtime_error("unknown --mode '" + mode +
                               "' (bool-env or comment)");
    }
    artifact = dhc::to_xta(rules.front(), m);
  } else if (format == "dot") {
    if (rules.size() == 1) {
      artifact = dhc::to_dot(rules.front());
    } else {
      artifact = dhc::to_dot(dhc::compose(rules));
    }
  } else if (format == "bdi") {
    if (rules.size() != 1) {
      throw std::runtime_error("bdi export takes exactly one rule");
    }
    artifact = dhc::plan_sketch_to_string(dhc::to_bdi_sketch(rules.front()));
  } else {
    throw std::runtime_error("unknown --format '" + format +
                             "' (xta, dot or bdi)");
  }

  if (opts.json) {
    json doc;
    doc["command"] = "export";
    doc["format"] = format;
    doc["content"] = artifact;
    write_output(opts, doc.dump(2) + "\n");
  } else {
    write_output(opts, artifact);
  }
  return kExitOk;
}

// ------------------------------------------------------------ validate ----

int cmd_validate(const GlobalOptions& opts,
                 const std::vector<std::string>& paths) {
  json doc;
  doc["command"] = "validate";
  doc["files"] = json::array();
  bool any_violation = false;
  for (const auto& path : paths) {
    std::vector<std::string> violations;
    if (path.ends_with(".rule")) {
      try {
        dhc::RuleAutomaton a = load_rule(path, opts);
        violations = dhc::validate_automaton(a);
      } catch (const std::runtime_error& e) {
        // semantic errors from the parser are validation findings
        std::string msg = e.what();
        if (msg.find("cannot open") != std::string::npos) {
          throw;
        }
        violations.push_back(msg);
      }
    } else {
      dhc::TrafficSnapshot s = load_snapshot_file(path);  // throws on bad input
      violations = dhc::validate_snapshot(s);
    }
    any_violation = any_violation || !violations.empty();
    doc["files"].push_back(json{{"path", path}, {"violations", violations}});
    if (!opts.json) {
      if (violations.empty()) {
        std::cout << path << ": ok\n";
      } else {
        std::cout << path << ":\n";
        for (const auto& v : violations) {
          std::cout << "  " << v << "\n";
        }
      }
    }
  }
  if (opts.json) {
    std::cout << doc.dump(2) << "\n";
  }
  return any_violation ? kExitFound : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dhc: evaluate spatial traffic-rule formulas, run rule automata, "
               "hunt for rule conflicts, export models"};
  app.require_subcommand(1);

  GlobalOptions opts;
  std::string somewhere = "on";
  auto add_global_flags = [&](CLI::App* cmd) {
    cmd->add_flag("--json", opts.json, "machine-readable JSON report");
    cmd->add_flag("--explain", opts.explain, "show chop split points");
    cmd->add_flag("--oracle", opts.oracle,
                  "cross-check the discrete engine (reach)");
    cmd->add_option("--out", opts.out_path, "write the artifact to a file");
    cmd->add_option("--somewhere-brackets", somewhere,
                    "'on': << >> is the somewhere modality; 'off': grouping only")
        ->check(CLI::IsMember({"on", "off"}));
  };

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula on a snapshot");
  add_global_flags(eval_cmd);
  std::string formula_text;
  std::string snapshot_path;
  std::vector<std::string> view_args;
  std::vector<std::string> env_args;
  eval_cmd->add_option("formula", formula_text, "formula text")->required();
  eval_cmd->add_option("snapshot", snapshot_path, "snapshot file")->required();
  eval_cmd->add_option("--view", view_args, "view interval (two positions)")
      ->expected(2);
  eval_cmd->add_option("--env", env_args, "variable binding var=carid");

  // reach
  auto* reach_cmd = app.add_subcommand("reach", "explore a rule automaton");
  add_global_flags(reach_cmd);
  std::string rule_path;
  std::vector<std::string> scenario_paths;
  std::string target;
  long long horizon = 0;
  reach_cmd->add_option("rule", rule_path, "rule file")->required();
  reach_cmd->add_option("scenarios", scenario_paths, "scenario snapshots")
      ->required();
  reach_cmd->add_option("--target", target, "report this location (default: sinks)");
  reach_cmd->add_option("--horizon", horizon, "discrete-oracle step bound");

  // conflicts
  auto* conflicts_cmd =
      app.add_subcommand("conflicts", "compose rules and hunt for conflicts");
  add_global_flags(conflicts_cmd);
  std::vector<std::string> conflict_inputs;
  std::vector<std::string> conflict_scenarios;
  std::string universe_name;
  conflicts_cmd
      ->add_option("inputs", conflict_inputs,
                   "two or more .rule files, optionally followed by scenario "
                   "snapshots")
      ->required();
  conflicts_cmd->add_option("--scenario", conflict_scenarios,
                            "scenario snapshot file (repeatable)");
  conflicts_cmd->add_option("--universe", universe_name,
                            "bounded snapshot universe name ('default')");

  // export
  auto* export_cmd = app.add_subcommand("export", "emit XTA, DOT or a BDI sketch");
  add_global_flags(export_cmd);
  std::vector<std::string> export_rules;
  std::string format;
  std::string mode;
  export_cmd->add_option("rules", export_rules, "rule file(s)")->required();
  export_cmd->add_option("--format", format, "xta, dot or bdi")->required();
  export_cmd->add_option("--mode", mode, "xta lowering: bool-env or comment");

  // validate
  auto* validate_cmd =
      app.add_subcommand("validate", "check rule or snapshot files");
  add_global_flags(validate_cmd);
  std::vector<std::string> validate_paths;
  validate_cmd->add_option("files", validate_paths, "files to check")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints help or the error
    return e.get_exit_code() == 0 ? kExitOk : kExitError;
  }
  opts.somewhere_brackets = somewhere != "off";

  try {
    if (app.got_subcommand(eval_cmd)) {
      return cmd_eval(opts, formula_text, snapshot_path, view_args, env_args);
    }
    if (app.got_subcommand(reach_cmd)) {
      return cmd_reach(opts, rule_path, scenario_paths, target, horizon);
    }
    if (app.got_subcommand(conflicts_cmd)) {
      return cmd_conflicts(opts, conflict_inputs, conflict_scenarios,
                           universe_name);
    }
    if (app.got_subcommand(export_cmd)) {
      return cmd_export(opts, export_rules, format, mode);
    }
    if (app.got_subcommand(validate_cmd)) {
      return cmd_validate(opts, validate_paths);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
