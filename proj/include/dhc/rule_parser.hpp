#pragma once

#include <string_view>

#include "dhc/automaton.hpp"
#include "dhc/errors.hpp"
#include "dhc/formula_parser.hpp"

namespace dhc {

// Parses the `.rule` block syntax (docs/rule-format.md). Spatial formulas
// are quoted strings in the formula grammar; clock constants may be given
// symbolically once declared with `const`. Throws ParseError (positioned)
// for syntax problems and std::runtime_error for semantic violations
// reported by validate_automaton.
RuleAutomaton parse_rule_file(std::string_view text,
                              const FormulaParseOptions& formula_opts = {});

// Canonical rendering; parse_rule_file(rule_to_string(a)) reproduces `a`.
std::string rule_to_string(const RuleAutomaton& a);

bool automata_structurally_equal(const RuleAutomaton& a, const RuleAutomaton& b);

}  // namespace dhc
