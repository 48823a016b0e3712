#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "knotfill/errors.hpp"

namespace knotfill {

/// Unoriented slope p/q on the boundary torus, canonical: q >= 0, gcd = 1,
/// and infinity is (1, 0). Signs live in p.
class Slope {
 public:
  Slope() : p_(1), q_(0) {}

  Slope(std::int64_t p, std::int64_t q) {
    if (p == 0 && q == 0) throw InvalidSlope("0/0 is not a slope");
    if (q < 0 || (q == 0 && p < 0)) {
      p = -p;
      q = -q;
    }
    std::int64_t g = std::gcd(p < 0 ? -p : p, q);
    p_ = p / g;
    q_ = q / g;
  }

  static Slope infinity() { return Slope(1, 0); }
  static Slope integral(std::int64_t p) { return Slope(p, 1); }

  std::int64_t p() const noexcept { return p_; }
  std::int64_t q() const noexcept { return q_; }
  bool is_infinite() const noexcept { return q_ == 0; }

  friend bool operator==(const Slope&, const Slope&) = default;
  // Ordered by (q, p), the scan order.
  friend std::strong_ordering operator<=>(const Slope& a, const Slope& b) {
    if (auto c = a.q_ <=> b.q_; c != 0) return c;
    return a.p_ <=> b.p_;
  }

 private:
  std::int64_t p_;
  std::int64_t q_;
};

inline std::string to_string(const Slope& s) { return std::to_string(s.p()) + "/" + std::to_string(s.q()); }

inline Slope parse_slope(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "oo") return Slope::infinity();
  auto parse_int = [&](std::string_view t) -> std::int64_t {
    if (t.empty()) throw ParseError("bad slope '" + std::string(text) + "'");
    std::size_t i = 0;
    bool neg = false;
    if (t[0] == '-' || t[0] == '+') {
      neg = t[0] == '-';
      ++i;
    }
    if (i == t.size()) throw ParseError("bad slope '" + std::string(text) + "'");
    std::int64_t v = 0;
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') throw ParseError("bad slope '" + std::string(text) + "'");
      v = v * 10 + (t[i] - '0');
    }
    return neg ? -v : v;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Slope(parse_int(text), 1);
  return Slope(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

/// Minimal geometric intersection number |p1 q2 - p2 q1|.
inline std::int64_t slope_distance(const Slope& a, const Slope& b) {
  std::int64_t d = a.p() * b.q() - b.p() * a.q();
  return d < 0 ? -d : d;
}

/// All canonical p/q with |p| <= max_p, 1 <= q <= max_q, sorted by (q, p);
/// infinity appended last when requested.
inline std::vector<Slope> enumerate_slopes(std::int64_t max_p, std::int64_t max_q, bool include_infinity) {
  if (max_p < 1 || max_q < 1) throw InvalidSlope("slope bounds must be >= 1");
  std::vector<Slope> out;
  for (std::int64_t q = 1; q <= max_q; ++q)
    for (std::int64_t p = -max_p; p <= max_p; ++p)
      if (std::gcd(p < 0 ? -p : p, q) == 1) out.emplace_back(p, q);
  if (include_infinity) out.push_back(Slope::infinity());
  return out;
}

}  // namespace knotfill
