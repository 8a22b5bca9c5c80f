#pragma once

#include <string>
#include <vector>

#include "dhc/clocks.hpp"

namespace dhc {

// Difference-bound matrix over clocks x_1..x_n plus the zero reference x_0.
// Entry (i,j) bounds x_i - x_j <= m[i][j]. All comparisons in this automaton
// class are non-strict, so entries are plain integers with an infinity
// sentinel. Public operations keep zones canonical (shortest-path closed);
// an empty zone is represented with a negative diagonal.
class Zone {
 public:
  static constexpr long long kInf = (1LL << 60);

  // Clockless point zone; useful as a placeholder member.
  Zone() : Zone(0) { m_[0] = 0; }

  // Zone with every clock equal to zero.
  static Zone zero(int clocks);
  // Zone with every clock >= 0 and no upper bounds.
  static Zone top(int clocks);
  // The canonical empty zone over `clocks` clocks.
  static Zone make_empty(int clocks);

  int clocks() const { return n_; }
  long long at(int i, int j) const { return m_[idx(i, j)]; }

  bool empty() const;

  // Future closure: removes the upper bounds, keeping differences.
  Zone up() const;
  // Conjoins `clock <= bound` / `clock >= bound` (clock is 1-based).
  Zone constrain_upper(int clock, long long bound) const;
  Zone constrain_lower(int clock, long long bound) const;
  // Resets the given clocks (1-based) to zero.
  Zone reset(const std::vector<int>& clocks) const;
  // All-pairs shortest-path closure.
  Zone canonical() const;
  // Max-constant extrapolation: entries above `max_const` become infinite,
  // entries below -max_const are raised. Guarantees finitely many zones.
  Zone extrapolate(long long max_const) const;

  // Set inclusion; both zones canonical over the same clock count.
  bool includes(const Zone& o) const;

  bool operator==(const Zone& o) const { return n_ == o.n_ && m_ == o.m_; }

  // True when some point of the zone agrees with a capped integer valuation:
  // value v < cap pins the clock to v, value == cap means "anything >= cap".
  bool contains_capped_point(const std::vector<long long>& valuation,
                             long long cap) const;

  std::string to_string(const std::vector<std::string>& clock_names) const;

 private:
  explicit Zone(int clocks);
  int idx(int i, int j) const { return i * (n_ + 1) + j; }
  long long& cell(int i, int j) { return m_[idx(i, j)]; }

  int n_ = 0;
  std::vector<long long> m_;
};

}  // namespace dhc
