#pragma once

#include <boost/rational.hpp>
#include <optional>
#include <string>
#include <string_view>

namespace dhc {

// Exact rational positions and lengths. All geometry in the snapshot model is
// rational so that chop splits can be computed without rounding.
using Rat = boost::rational<long long>;

inline Rat rat(long long n) { return Rat(n); }
inline Rat rat(long long num, long long den) { return Rat(num, den); }

// Accepts "7", "-3", "7/2", "-1/4", "3.5", "0.25". Returns nullopt on
// malformed input, zero denominators, or absurdly long decimal tails.
std::optional<Rat> parse_rational(std::string_view text);

std::string to_string(const Rat& r);

}  // namespace dhc
