#pragma once

#include <stdexcept>
#include <string>

namespace dhc {

// Positioned error for the formula, rule and snapshot front-ends.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                           ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Raised by the evaluator: unresolvable car references, views outside the
// extent, malformed oracle steps.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dhc
