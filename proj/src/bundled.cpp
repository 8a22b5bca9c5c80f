#include "dhc/bundled.hpp"

#include "dhc/rule_parser.hpp"
#include "dhc/snapshot_json.hpp"

namespace dhc::bundled_data {
extern const char* const ukhc_170_rule;
extern const char* const ukhc_171_rule;
extern const char* const demo_red_light_rule;
extern const char* const demo_green_arrow_rule;
extern const char* const fig2_snapshot;
extern const char* const empty_snapshot;
extern const char* const ukhc_go_snapshot;
extern const char* const ukhc_pedestrian_snapshot;
extern const char* const ukhc171_signs_snapshot;
extern const char* const demo_green_clear_snapshot;
extern const char* const demo_red_blocked_snapshot;
extern const char* const demo_red_arrow_gap_snapshot;
}  // namespace dhc::bundled_data

namespace dhc {

namespace {

BundledSnapshot make_snapshot(std::string name, const char* text, bool enabling) {
  BundledSnapshot s;
  s.name = std::move(name);
  s.text = text;
  s.snapshot = load_snapshot(s.text);
  s.enabling = enabling;
  return s;
}

BundledRule make_rule(const char* source, std::string terminal,
                      std::vector<BundledSnapshot> snapshots) {
  BundledRule r;
  r.source = source;
  r.automaton = parse_rule_file(r.source);
  r.name = r.automaton.name;
  r.terminal_location = std::move(terminal);
  r.snapshots = std::move(snapshots);
  return r;
}

std::vector<BundledRule> build_catalog() {
  namespace data = bundled_data;
  std::vector<BundledRule> rules;
  rules.push_back(make_rule(
      data::ukhc_170_rule, "L3",
      {make_snapshot("ukhc_go", data::ukhc_go_snapshot, true),
       make_snapshot("ukhc_pedestrian", data::ukhc_pedestrian_snapshot, false)}));
  rules.push_back(make_rule(
      data::ukhc_171_rule, "L3",
      {make_snapshot("ukhc171_signs", data::ukhc171_signs_snapshot, true),
       make_snapshot("ukhc171_nosigns", data::ukhc_go_snapshot, false)}));
  rules.push_back(make_rule(
      data::demo_red_light_rule, "Crossed",
      {make_snapshot("demo_green_clear", data::demo_green_clear_snapshot, true),
       make_snapshot("demo_red_blocked", data::demo_red_blocked_snapshot, false)}));
  rules.push_back(make_rule(
      data::demo_green_arrow_rule, "Crossed",
      {make_snapshot("demo_red_arrow_gap", data::demo_red_arrow_gap_snapshot, true),
       make_snapshot("demo_arrow_blocked", data::demo_red_blocked_snapshot,
                     false)}));
  return rules;
}

}  // namespace

const std::vector<BundledRule>& bundled_rules() {
  static const std::vector<BundledRule> catalog = build_catalog();
  return catalog;
}

const std::vector<BundledSnapshot>& bundled_snapshots() {
  static const std::vector<BundledSnapshot> examples = {
      make_snapshot("fig2", bundled_data::fig2_snapshot, false),
      make_snapshot("empty", bundled_data::empty_snapshot, false),
  };
  return examples;
}

const BundledRule* find_bundled_rule(std::string_view name) {
  for (const auto& r : bundled_rules()) {
    if (r.name == name) {
      return &r;
    }
  }
  return nullptr;
}

const BundledSnapshot* find_bundled_snapshot(std::string_view name) {
  for (const auto& s : bundled_snapshots()) {
    if (s.name == name) {
      return &s;
    }
  }
  for (const auto& r : bundled_rules()) {
    for (const auto& s : r.snapshots) {
      if (s.name == name) {
        return &s;
      }
    }
  }
  return nullptr;
}

}  // namespace dhc
