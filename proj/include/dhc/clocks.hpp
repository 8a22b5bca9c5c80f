#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace dhc {

// One non-strict comparison `clock <= bound` or `clock >= bound`. `symbol`
// remembers the constant name from the rule file for round-trip printing.
struct ClockAtom {
  std::string clock;
  bool is_upper = true;  // true: clock <= bound, false: clock >= bound
  long long bound = 0;
  std::string symbol;

  bool operator==(const ClockAtom& o) const {
    return clock == o.clock && is_upper == o.is_upper && bound == o.bound;
  }
};

// Conjunction of closed clock comparisons; empty means true. Only non-strict
// bounds exist in this automaton class, which is what makes the integer
// discretization a complete oracle for reachability.
struct ClockConstraint {
  std::vector<ClockAtom> atoms;

  bool is_true() const { return atoms.empty(); }

  long long max_constant() const {
    long long m = 0;
    for (const auto& a : atoms) {
      m = std::max(m, a.bound);
    }
    return m;
  }

  bool operator==(const ClockConstraint& o) const { return atoms == o.atoms; }
};

std::string to_string(const ClockAtom& a);
std::string to_string(const ClockConstraint& cc);

}  // namespace dhc
