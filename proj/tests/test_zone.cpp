#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "dhc/zone.hpp"

using namespace dhc;

namespace {

// Independent integer-point semantics: enumerate valuations in [0, limit]^n
// and keep those satisfying every difference bound.
std::set<std::vector<long long>> points_of(const Zone& z, long long limit) {
  int n = z.clocks();
  std::set<std::vector<long long>> out;
  std::vector<long long> v(n, 0);
  while (true) {
    bool ok = true;
    for (int i = 0; i <= n && ok; ++i) {
      for (int j = 0; j <= n && ok; ++j) {
        long long vi = i == 0 ? 0 : v[i - 1];
        long long vj = j == 0 ? 0 : v[j - 1];
        if (z.at(i, j) != Zone::kInf && vi - vj > z.at(i, j)) {
          ok = false;
        }
      }
    }
    if (ok) {
      out.insert(v);
    }
    int k = 0;
    while (k < n && v[k] == limit) {
      v[k] = 0;
      ++k;
    }
    if (k == n) {
      return out;
    }
    ++v[k];
  }
}

}  // namespace

TEST_CASE("up from zero under an invariant") {
  Zone z = Zone::zero(1).up().constrain_upper(1, 3);
  CHECK(!z.empty());
  CHECK(points_of(z, 5) == points_of(Zone::zero(1).constrain_upper(1, 3).up()
                                          .constrain_upper(1, 3), 5));
  CHECK(z.at(1, 0) == 3);   // x <= 3
  CHECK(z.at(0, 1) == 0);   // x >= 0
}

TEST_CASE("up preserves lower bounds") {
  Zone z = Zone::zero(1).up().constrain_lower(1, 1).constrain_upper(1, 2);
  // now 1 <= x <= 2; up removes only the upper bound
  Zone up = z.up().constrain_upper(1, 5);
  std::set<std::vector<long long>> expect;
  for (long long x = 1; x <= 5; ++x) {
    expect.insert({x});
  }
  CHECK(points_of(up, 8) == expect);
}

TEST_CASE("conjoining an unsatisfiable bound empties the zone") {
  Zone z = Zone::zero(2).up().constrain_upper(1, 2);
  CHECK(!z.empty());
  CHECK(z.constrain_lower(1, 4).empty());
}

TEST_CASE("empty propagates through up") {
  Zone z = Zone::zero(1).constrain_lower(1, 2);  // x = 0 and x >= 2
  CHECK(z.empty());
  CHECK(z.up().canonical().empty());
}

TEST_CASE("reset projects correctly") {
  // x, y >= 7; reset x: x = 0, y >= 7 with the difference bounds to match
  Zone z = Zone::zero(2).up().constrain_lower(1, 7).constrain_lower(2, 7);
  Zone r = z.reset({1});
  std::set<std::vector<long long>> expect;
  for (long long y = 7; y <= 9; ++y) {
    expect.insert({0, y});
  }
  CHECK(points_of(r, 9) == expect);
}

TEST_CASE("reset of both clocks gives the origin") {
  Zone z = Zone::zero(2).up().constrain_lower(1, 3);
  Zone r = z.reset({1, 2});
  CHECK(points_of(r, 4) == std::set<std::vector<long long>>{{0, 0}});
}

TEST_CASE("canonical is idempotent") {
  std::mt19937 rng(777);
  for (int i = 0; i < 50; ++i) {
    Zone z = Zone::top(2);
    for (int step = 0; step < 3; ++step) {
      int clock = 1 + static_cast<int>(rng() % 2);
      long long bound = static_cast<long long>(rng() % 5);
      z = (rng() & 1) ? z.constrain_upper(clock, bound)
                      : z.constrain_lower(clock, bound);
    }
    Zone once = z.canonical();
    CHECK(once == once.canonical());
  }
}

TEST_CASE("inclusion matches point inclusion") {
  std::mt19937 rng(4242);
  for (int i = 0; i < 60; ++i) {
    auto random_zone = [&rng]() {
      Zone z = Zone::zero(2).up();
      for (int step = 0; step < 2; ++step) {
        int clock = 1 + static_cast<int>(rng() % 2);
        long long bound = static_cast<long long>(rng() % 4);
        z = (rng() & 1) ? z.constrain_upper(clock, bound)
                        : z.constrain_lower(clock, bound);
        if ((rng() % 3) == 0) {
          z = z.reset({clock});
        }
      }
      return z;
    };
    Zone a = random_zone();
    Zone b = random_zone();
    if (a.empty() || b.empty()) {
      continue;
    }
    // compare on a grid beyond every finite bound used (max constant 4)
    bool points_subset = true;
    auto pa = points_of(a, 6);
    auto pb = points_of(b, 6);
    for (const auto& p : pb) {
      if (!pa.count(p)) {
        points_subset = false;
        break;
      }
    }
    CHECK(a.includes(b) == points_subset);
  }
}

TEST_CASE("extrapolation keeps small bounds and drops large ones") {
  Zone z = Zone::zero(1).up().constrain_lower(1, 9);  // x >= 9
  Zone e = z.extrapolate(3);
  CHECK(e.at(0, 1) == -3);  // lower bound clipped to the max constant
  Zone bounded = Zone::zero(1).up().constrain_upper(1, 2);
  CHECK(bounded.extrapolate(3) == bounded);
}

TEST_CASE("capped point membership") {
  Zone z = Zone::zero(2).up().constrain_upper(1, 3);  // x = y <= 3
  CHECK(z.contains_capped_point({2, 2}, 4));
  CHECK(!z.contains_capped_point({2, 3}, 4));  // the diagonal pins x = y
  Zone wide = Zone::top(2).constrain_upper(1, 3);  // x <= 3, y independent
  CHECK(wide.contains_capped_point({2, 3}, 4));
  // capped coordinate means "at least the cap"
  Zone high = Zone::zero(1).up().constrain_lower(1, 5);
  CHECK(high.contains_capped_point({4}, 4));
  CHECK(!high.contains_capped_point({3}, 4));
}

TEST_CASE("clock constraint printing") {
  ClockConstraint cc;
  CHECK(to_string(cc) == "true");
  cc.atoms.push_back(ClockAtom{"x", false, 1, "t1"});
  cc.atoms.push_back(ClockAtom{"x", true, 3, ""});
  CHECK(to_string(cc) == "x >= t1 and x <= 3");
}
