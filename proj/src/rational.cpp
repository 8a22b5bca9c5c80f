#include "dhc/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace dhc {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) {
    return false;
  }
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return true;
}

std::optional<long long> parse_ll(std::string_view s) {
  if (!all_digits(s) || s.size() > 18) {
    return std::nullopt;
  }
  long long v = 0;
  for (char c : s) {
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

std::optional<Rat> parse_rational(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) {
    return std::nullopt;
  }

  auto slash = text.find('/');
  auto dot = text.find('.');
  if (slash != std::string_view::npos && dot != std::string_view::npos) {
    return std::nullopt;
  }

  if (slash != std::string_view::npos) {
    auto num = parse_ll(text.substr(0, slash));
    auto den = parse_ll(text.substr(slash + 1));
    if (!num || !den || *den == 0) {
      return std::nullopt;
    }
    Rat r(*num, *den);
    return negative ? -r : r;
  }

  if (dot != std::string_view::npos) {
    auto whole_text = text.substr(0, dot);
    auto frac_text = text.substr(dot + 1);
    if (frac_text.size() > 9) {
      return std::nullopt;
    }
    auto whole = parse_ll(whole_text);
    auto frac = parse_ll(frac_text);
    if (!whole || !frac) {
      return std::nullopt;
    }
    long long scale = 1;
    for (size_t i = 0; i < frac_text.size(); ++i) {
      scale *= 10;
    }
    Rat r = Rat(*whole) + Rat(*frac, scale);
    return negative ? -r : r;
  }

  auto num = parse_ll(text);
  if (!num) {
    return std::nullopt;
  }
  Rat r(*num);
  return negative ? -r : r;
}

std::string to_string(const Rat& r) {
  if (r.denominator() == 1) {
    return std::to_string(r.numerator());
  }
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace dhc
