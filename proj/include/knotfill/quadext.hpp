#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "knotfill/errors.hpp"

namespace knotfill {

using Rational = boost::multiprecision::cpp_rational;

namespace detail {

inline bool square_free(std::int64_t d) {
  if (d == 0) return false;
  std::int64_t m = d < 0 ? -d : d;
  for (std::int64_t f = 2; f * f <= m; ++f)
    if (m % (f * f) == 0) return false;
  return true;
}

inline Rational parse_rational(std::string_view t) {
  auto bad = [&] { return ParseError("bad rational '" + std::string(t) + "'"); };
  auto slash = t.find('/');
  auto parse_int = [&](std::string_view s) {
    if (s.empty()) throw bad();
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw bad();
    for (std::size_t j = i; j < s.size(); ++j)
      if (s[j] < '0' || s[j] > '9') throw bad();
    boost::multiprecision::cpp_int v(std::string(s.substr(i)));
    return s[0] == '-' ? boost::multiprecision::cpp_int(-v) : v;
  };
  if (slash == std::string_view::npos) return Rational(parse_int(t));
  auto den = parse_int(t.substr(slash + 1));
  if (den == 0) throw bad();
  return Rational(parse_int(t.substr(0, slash)), den);
}

inline std::string rational_str(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace detail

/// a + b sqrt(d) over Q with d square-free and d != 1. All arithmetic is
/// exact; mixing different d is an error.
class QuadExt {
 public:
  explicit QuadExt(std::int64_t d = -3) : d_(d) { check_d(); }
  QuadExt(Rational a, Rational b, std::int64_t d) : a_(std::move(a)), b_(std::move(b)), d_(d) { check_d(); }

  static QuadExt rational(Rational a, std::int64_t d) { return QuadExt(std::move(a), 0, d); }
  static QuadExt sqrt_d(std::int64_t d) { return QuadExt(0, 1, d); }

  const Rational& a() const noexcept { return a_; }
  const Rational& b() const noexcept { return b_; }
  std::int64_t d() const noexcept { return d_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }

  // Positive means a > 0, or a == 0 and b > 0.
  bool is_positive() const { return a_ > 0 || (a_ == 0 && b_ > 0); }

  QuadExt conjugate() const { return QuadExt(a_, -b_, d_); }
  Rational norm() const { return a_ * a_ - b_ * b_ * d_; }

  QuadExt inverse() const {
    if (is_zero()) throw DivisionByZero();
    Rational n = norm();
    return QuadExt(a_ / n, -b_ / n, d_);
  }

  QuadExt operator-() const { return QuadExt(-a_, -b_, d_); }

  QuadExt& operator+=(const QuadExt& o) {
    same_field(o);
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  QuadExt& operator-=(const QuadExt& o) {
    same_field(o);
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  QuadExt& operator*=(const QuadExt& o) {
    same_field(o);
    Rational a = a_ * o.a_ + b_ * o.b_ * d_;
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(a);
    b_ = std::move(b);
    return *this;
  }
  QuadExt& operator/=(const QuadExt& o) { return *this *= o.inverse(); }

  friend QuadExt operator+(QuadExt l, const QuadExt& r) { return l += r; }
  friend QuadExt operator-(QuadExt l, const QuadExt& r) { return l -= r; }
  friend QuadExt operator*(QuadExt l, const QuadExt& r) { return l *= r; }
  friend QuadExt operator/(QuadExt l, const QuadExt& r) { return l /= r; }

  // Rational scalars adopt the field of the other operand.
  friend QuadExt operator+(QuadExt l, long long r) { return l += rational(r, l.d_); }
  friend QuadExt operator-(QuadExt l, long long r) { return l -= rational(r, l.d_); }
  friend QuadExt operator*(QuadExt l, long long r) { return l *= rational(r, l.d_); }
  friend QuadExt operator*(long long l, QuadExt r) { return r *= rational(l, r.d_); }

  QuadExt pow(long long k) const {
    if (k < 0) return inverse().pow(-k);
    QuadExt result = rational(1, d_), base = *this;
    while (k > 0) {
      if (k & 1) result *= base;
      k >>= 1;
      if (k) base *= base;
    }
    return result;
  }

  friend bool operator==(const QuadExt& l, const QuadExt& r) {
    l.same_field(r);
    return l.a_ == r.a_ && l.b_ == r.b_;
  }

  bool equals_up_to_sign(const QuadExt& o) const { return *this == o || *this == -o; }

  QuadExt canonical_sign() const { return (is_zero() || is_positive()) ? *this : -*this; }

 private:
  void check_d() const {
    if (d_ == 1 || !detail::square_free(d_))
      throw InvalidDiscriminant("discriminant " + std::to_string(d_) + " is not square-free or equals 1");
  }
  void same_field(const QuadExt& o) const {
    if (d_ != o.d_) throw DiscriminantMismatch(d_, o.d_);
  }

  Rational a_ = 0;
  Rational b_ = 0;
  std::int64_t d_;
};

/// Compact text: "a", "b*sqrt(d)", "a+b*sqrt(d)", with b = +-1 written as
/// "sqrt(d)" / "-sqrt(d)".
inline std::string to_string(const QuadExt& x) {
  std::string root = "sqrt(" + std::to_string(x.d()) + ")";
  if (x.b() == 0) return detail::rational_str(x.a());
  std::string irr;
  if (x.b() == 1)
    irr = root;
  else if (x.b() == -1)
    irr = "-" + root;
  else
    irr = detail::rational_str(x.b()) + "*" + root;
  if (x.a() == 0) return irr;
  return detail::rational_str(x.a()) + (irr.front() == '-' ? "" : "+") + irr;
}

inline std::ostream& operator<<(std::ostream& os, const QuadExt& x) { return os << to_string(x); }

/// Inverse of to_string; also accepts the long form "a+b*sqrt(d)". A bare
/// rational takes the field from `d`.
inline QuadExt parse_quadext(std::string_view text, std::int64_t d) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto root_pos = s.find("sqrt(");
  if (root_pos == std::string::npos) return QuadExt::rational(detail::parse_rational(s), d);
  auto close = s.find(')', root_pos);
  if (close == std::string::npos || close + 1 != s.size()) throw ParseError("bad field element '" + s + "'");
  std::int64_t dd = std::stoll(s.substr(root_pos + 5, close - root_pos - 5));
  if (dd != d) throw DiscriminantMismatch(dd, d);
  std::string head = s.substr(0, root_pos);  // "[a(+|-)][b*]"
  Rational b = 1;
  if (!head.empty() && head.back() == '*') {
    head.pop_back();
    // the coefficient starts at the last sign that is not a leading sign or
    // part of a "num/den" after the a-part
    std::size_t split = std::string::npos;
    for (std::size_t i = head.size(); i-- > 1;)
      if (head[i] == '+' || head[i] == '-') {
        split = i;
        break;
      }
    if (split == std::string::npos) return QuadExt(0, detail::parse_rational(head), d);
    Rational a = detail::parse_rational(head.substr(0, split));
    std::string coef = head.substr(split);
    if (coef.front() == '+') coef.erase(0, 1);
    return QuadExt(a, detail::parse_rational(coef), d);
  }
  // no explicit coefficient: head is "", "-", "a+", "a-"
  if (head.empty()) return QuadExt(0, 1, d);
  if (head == "-") return QuadExt(0, -1, d);
  if (head == "+") return QuadExt(0, 1, d);
  char sign = head.back();
  if (sign != '+' && sign != '-') throw ParseError("bad field element '" + s + "'");
  head.pop_back();
  return QuadExt(detail::parse_rational(head), sign == '-' ? -1 : 1, d);
}

}  // namespace knotfill
