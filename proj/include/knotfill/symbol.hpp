#pragma once

#include <cctype>
#include <compare>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_set>

#include "knotfill/errors.hpp"

namespace knotfill {

namespace detail {

inline const std::string* intern(std::string_view name) {
  static std::mutex mutex;
  static std::unordered_set<std::string> pool;
  std::lock_guard lock(mutex);
  return &*pool.emplace(name).first;
}

}  // namespace detail

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || u == '_')) return false;
  }
  return true;
}

// Interned generator name. Equality is pointer identity; ordering is by
// name so that normal forms do not depend on interning order.
class Symbol {
 public:
  explicit Symbol(std::string_view name) {
    if (!is_identifier(name)) throw ParseError("invalid generator name '" + std::string(name) + "'");
    name_ = detail::intern(name);
  }

  const std::string& name() const noexcept { return *name_; }

  friend bool operator==(Symbol a, Symbol b) noexcept { return a.name_ == b.name_; }
  friend std::strong_ordering operator<=>(Symbol a, Symbol b) noexcept {
    if (a.name_ == b.name_) return std::strong_ordering::equal;
    return a.name_->compare(*b.name_) < 0 ? std::strong_ordering::less
                                          : std::strong_ordering::greater;
  }

  std::size_t hash() const noexcept { return std::hash<const void*>{}(name_); }

 private:
  const std::string* name_;
};

}  // namespace knotfill

template <>
struct std::hash<knotfill::Symbol> {
  std::size_t operator()(knotfill::Symbol s) const noexcept { return s.hash(); }
};
