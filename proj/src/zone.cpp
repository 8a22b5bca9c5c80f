#include "dhc/zone.hpp"

#include <algorithm>

namespace dhc {

namespace {

long long add(long long a, long long b) {
  if (a >= Zone::kInf || b >= Zone::kInf) {
    return Zone::kInf;
  }
  return a + b;
}

}  // namespace

Zone::Zone(int clocks) : n_(clocks), m_((clocks + 1) * (clocks + 1), kInf) {}

Zone Zone::zero(int clocks) {
  Zone z(clocks);
  std::fill(z.m_.begin(), z.m_.end(), 0);
  return z;
}

Zone Zone::top(int clocks) {
  Zone z(clocks);
  for (int i = 0; i <= clocks; ++i) {
    z.cell(i, i) = 0;
    z.cell(0, i) = 0;  // x_i >= 0
  }
  return z;
}

bool Zone::empty() const {
  for (int i = 0; i <= n_; ++i) {
    if (at(i, i) < 0) {
      return true;
    }
  }
  return false;
}

// The one canonical empty representation: a negative-diagonal DBM is not a
// fixpoint of shortest-path closure, so all empties collapse to this form.
Zone Zone::make_empty(int clocks) {
  Zone z(clocks);
  std::fill(z.m_.begin(), z.m_.end(), -1);
  return z;
}

Zone Zone::up() const {
  if (empty()) {
    return *this;
  }
  Zone z = *this;
  for (int i = 1; i <= n_; ++i) {
    z.cell(i, 0) = kInf;
  }
  return z;
}

Zone Zone::constrain_upper(int clock, long long bound) const {
  Zone z = *this;
  z.cell(clock, 0) = std::min(z.cell(clock, 0), bound);
  return z.canonical();
}

Zone Zone::constrain_lower(int clock, long long bound) const {
  Zone z = *this;
  z.cell(0, clock) = std::min(z.cell(0, clock), -bound);
  return z.canonical();
}

Zone Zone::reset(const std::vector<int>& clocks) const {
  if (empty()) {
    return *this;
  }
  Zone z = *this;
  for (int x : clocks) {
    for (int j = 0; j <= n_; ++j) {
      z.cell(x, j) = z.at(0, j);
      z.cell(j, x) = z.at(j, 0);
    }
    z.cell(x, x) = 0;
  }
  return z;
}

Zone Zone::canonical() const {
  if (empty()) {
    return make_empty(n_);
  }
  Zone z = *this;
  for (int k = 0; k <= n_; ++k) {
    for (int i = 0; i <= n_; ++i) {
      for (int j = 0; j <= n_; ++j) {
        long long via = add(z.at(i, k), z.at(k, j));
        if (via < z.at(i, j)) {
          z.cell(i, j) = via;
        }
      }
    }
  }
  if (z.empty()) {
    return make_empty(n_);
  }
  return z;
}

Zone Zone::extrapolate(long long max_const) const {
  if (empty()) {
    return make_empty(n_);
  }
  Zone z = *this;
  for (int i = 0; i <= n_; ++i) {
    for (int j = 0; j <= n_; ++j) {
      if (i == j) {
        continue;
      }
      long long& v = z.cell(i, j);
      if (v != kInf && v > max_const) {
        v = kInf;
      } else if (v < -max_const) {
        v = -max_const;
      }
    }
  }
  return z.canonical();
}

bool Zone::includes(const Zone& o) const {
  if (o.empty()) {
    return true;
  }
  if (empty()) {
    return false;
  }
  for (size_t i = 0; i < m_.size(); ++i) {
    if (o.m_[i] > m_[i]) {
      return false;
    }
  }
  return true;
}

bool Zone::contains_capped_point(const std::vector<long long>& valuation,
                                 long long cap) const {
  Zone z = *this;
  for (int i = 1; i <= n_; ++i) {
    long long v = valuation[i - 1];
    if (v < cap) {
      z.cell(i, 0) = std::min(z.cell(i, 0), v);
      z.cell(0, i) = std::min(z.cell(0, i), -v);
    } else {
      z.cell(0, i) = std::min(z.cell(0, i), -cap);
    }
  }
  return !z.canonical().empty();
}

std::string Zone::to_string(const std::vector<std::string>& clock_names) const {
  if (empty()) {
    return "(empty)";
  }
  auto name = [&](int i) -> std::string {
    if (i == 0) {
      return "0";
    }
    if (i - 1 < static_cast<int>(clock_names.size())) {
      return clock_names[i - 1];
    }
    return "x" + std::to_string(i);
  };
  std::string out;
  for (int i = 1; i <= n_; ++i) {
    if (!out.empty()) {
      out += ", ";
    }
    long long lo = -at(0, i);
    out += std::to_string(lo) + " <= " + name(i);
    if (at(i, 0) != kInf) {
      out += " <= " + std::to_string(at(i, 0));
    }
  }
  for (int i = 1; i <= n_; ++i) {
    for (int j = 1; j <= n_; ++j) {
      if (i != j && at(i, j) != kInf) {
        out += ", " + name(i) + " - " + name(j) + " <= " + std::to_string(at(i, j));
      }
    }
  }
  return out;
}

std::string to_string(const ClockAtom& a) {
  std::string bound = a.symbol.empty() ? std::to_string(a.bound) : a.symbol;
  return a.clock + (a.is_upper ? " <= " : " >= ") + bound;
}

std::string to_string(const ClockConstraint& cc) {
  if (cc.atoms.empty()) {
    return "true";
  }
  std::string out;
  for (const auto& a : cc.atoms) {
    if (!out.empty()) {
      out += " and ";
    }
    out += to_string(a);
  }
  return out;
}

}  // namespace dhc
