#pragma once

#include <string_view>

#include "dhc/errors.hpp"
#include "dhc/formula.hpp"

namespace dhc {

struct FormulaParseOptions {
  // When true, `<< f >>` is the somewhere modality; when false the brackets
  // are plain grouping (both readings of the paper notation are supported,
  // selected on the CLI with --somewhere-brackets).
  bool somewhere_brackets = true;
};

// Recursive-descent parser for the formula grammar (docs/formula-grammar.md).
// Throws ParseError with 1-based line:column on syntax errors and on a
// quantifier rebinding a variable already in scope.
Formula parse_formula(std::string_view text, const FormulaParseOptions& opts = {});

}  // namespace dhc
