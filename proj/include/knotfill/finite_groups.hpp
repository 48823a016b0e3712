#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "knotfill/errors.hpp"

namespace knotfill {

// ---------------------------------------------------------------------------
// Target descriptions.

enum class TargetKind { Symmetric, Alternating, PSL2 };

struct TargetSpec {
  TargetKind kind;
  int param;  // degree n, or the prime p

  friend bool operator==(const TargetSpec&, const TargetSpec&) = default;
  friend auto operator<=>(const TargetSpec&, const TargetSpec&) = default;

  static TargetSpec symmetric(int n) { return {TargetKind::Symmetric, n}; }
  static TargetSpec alternating(int n) { return {TargetKind::Alternating, n}; }
  static TargetSpec psl2(int p) { return {TargetKind::PSL2, p}; }

  /// n!, n!/2, or p(p^2 - 1)/2.
  std::uint64_t order() const {
    if (kind == TargetKind::PSL2) {
      std::uint64_t p = static_cast<std::uint64_t>(param);
      return p * (p * p - 1) / 2;
    }
    std::uint64_t f = 1;
    for (int i = 2; i <= param; ++i) f *= static_cast<std::uint64_t>(i);
    return (kind == TargetKind::Alternating && param >= 2) ? f / 2 : f;
  }
};

inline std::string to_string(const TargetSpec& t) {
  switch (t.kind) {
    case TargetKind::Symmetric: return "S" + std::to_string(t.param);
    case TargetKind::Alternating: return "A" + std::to_string(t.param);
    case TargetKind::PSL2: return "PSL(2," + std::to_string(t.param) + ")";
  }
  return {};
}

namespace detail {
inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int f = 2; f * f <= p; ++f)
    if (p % f == 0) return false;
  return true;
}
}  // namespace detail

inline constexpr int kMaxPermDegree = 8;
inline constexpr int kMaxPslPrime = 31;

/// "S5", "A5", "PSL(2,7)", "PSL2(7)" or "PSL2_7".
inline TargetSpec parse_target(std::string_view text) {
  auto bad = [&] { return InvalidTarget("unknown finite target '" + std::string(text) + "'"); };
  auto number = [&](std::string_view s) {
    if (s.empty() || s.size() > 4) throw bad();
    int v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') throw bad();
      v = v * 10 + (c - '0');
    }
    return v;
  };
  TargetSpec t{};
  if (text.starts_with("PSL(2,") && text.ends_with(")"))
    t = TargetSpec::psl2(number(text.substr(6, text.size() - 7)));
  else if (text.starts_with("PSL2(") && text.ends_with(")"))
    t = TargetSpec::psl2(number(text.substr(5, text.size() - 6)));
  else if (text.starts_with("PSL2_"))
    t = TargetSpec::psl2(number(text.substr(5)));
  else if (text.starts_with("S"))
    t = TargetSpec::symmetric(number(text.substr(1)));
  else if (text.starts_with("A"))
    t = TargetSpec::alternating(number(text.substr(1)));
  else
    throw bad();
  if (t.kind == TargetKind::PSL2 && (!detail::is_prime(t.param) || t.param < 3 || t.param > kMaxPslPrime))
    throw InvalidTarget("PSL(2,p) needs a prime 3 <= p <= " + std::to_string(kMaxPslPrime));
  if (t.kind != TargetKind::PSL2 && (t.param < 1 || t.param > kMaxPermDegree))
    throw InvalidTarget("permutation degree must be in 1.." + std::to_string(kMaxPermDegree));
  return t;
}

/// S3..S7, A5 and PSL(2,p) for p in {5, 7, 11, 13}, in increasing order.
inline std::vector<TargetSpec> default_target_ladder() {
  return {TargetSpec::symmetric(3), TargetSpec::symmetric(4), TargetSpec::alternating(5), TargetSpec::psl2(5),
          TargetSpec::symmetric(5), TargetSpec::psl2(7),      TargetSpec::psl2(11),       TargetSpec::symmetric(6),
          TargetSpec::psl2(13),     TargetSpec::symmetric(7)};
}

// ---------------------------------------------------------------------------
// Permutation groups S_n and A_n.

struct Perm {
  std::array<std::uint8_t, kMaxPermDegree> img{};  // 0-based images
  friend bool operator==(const Perm&, const Perm&) = default;
};

/// S_n or A_n on {1..n}. Elements are indexed in lexicographic order of
/// one-line notation. Products act on the right: (a*b)(i) = b(a(i)).
class PermGroup {
 public:
  using Element = Perm;

  PermGroup(int n, bool alternating) : n_(n), alternating_(alternating) {
    if (n < 1 || n > kMaxPermDegree) throw InvalidTarget("permutation degree out of range");
    std::array<std::uint8_t, kMaxPermDegree> cur{};
    std::iota(cur.begin(), cur.begin() + n, 0);
    std::size_t fact = 1;
    for (int i = 2; i <= n; ++i) fact *= static_cast<std::size_t>(i);
    rank_to_index_.assign(fact, -1);
    std::size_t rank = 0;
    do {
      Perm p;
      p.img = cur;
      if (!alternating || even(p)) {
        rank_to_index_[rank] = static_cast<std::int32_t>(elements_.size());
        elements_.push_back(p);
      }
      ++rank;
    } while (std::next_permutation(cur.begin(), cur.begin() + n));
    compute_class_minima();
  }

  TargetSpec spec() const { return alternating_ ? TargetSpec::alternating(n_) : TargetSpec::symmetric(n_); }
  int degree() const noexcept { return n_; }
  std::size_t order() const noexcept { return elements_.size(); }
  const Perm& element(std::size_t i) const { return elements_[i]; }

  std::size_t index_of(const Perm& p) const {
    auto idx = rank_to_index_[lehmer_rank(p)];
    if (idx < 0) throw InvalidTarget("odd permutation is not in " + to_string(spec()));
    return static_cast<std::size_t>(idx);
  }

  Perm identity() const {
    Perm p;
    std::iota(p.img.begin(), p.img.begin() + n_, 0);
    return p;
  }
  bool is_identity(const Perm& p) const {
    for (int i = 0; i < n_; ++i)
      if (p.img[i] != i) return false;
    return true;
  }
  Perm multiply(const Perm& a, const Perm& b) const {
    Perm r;
    for (int i = 0; i < n_; ++i) r.img[i] = b.img[a.img[i]];
    return r;
  }
  Perm inverse(const Perm& a) const {
    Perm r;
    for (int i = 0; i < n_; ++i) r.img[a.img[i]] = static_cast<std::uint8_t>(i);
    return r;
  }

  std::vector<Perm> generators() const {
    std::vector<Perm> gens;
    if (n_ < 2 || (alternating_ && n_ < 3)) return gens;
    if (!alternating_) {
      Perm t = identity();
      std::swap(t.img[0], t.img[1]);
      Perm c;
      for (int i = 0; i < n_; ++i) c.img[i] = static_cast<std::uint8_t>((i + 1) % n_);
      return {t, c};
    }
    // (1 2 3) and an (n or n-1)-cycle of even parity
    Perm t = identity();
    t.img[0] = 1;
    t.img[1] = 2;
    t.img[2] = 0;
    Perm c = identity();
    int start = (n_ % 2 == 1) ? 0 : 1;
    for (int i = start; i < n_; ++i) c.img[i] = static_cast<std::uint8_t>(i + 1 < n_ ? i + 1 : start);
    return {t, c};
  }

  const std::vector<std::size_t>& class_minima() const noexcept { return class_minima_; }

  /// Cycle notation on 1..n, "()" for the identity.
  std::string format(const Perm& p) const {
    std::string out;
    std::array<bool, kMaxPermDegree> seen{};
    for (int i = 0; i < n_; ++i) {
      if (seen[i] || p.img[i] == i) continue;
      out += '(';
      int j = i;
      bool first = true;
      while (!seen[j]) {
        seen[j] = true;
        if (!first) out += ' ';
        out += std::to_string(j + 1);
        first = false;
        j = p.img[j];
      }
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

  Perm parse(std::string_view text) const {
    Perm p = identity();
    std::size_t i = 0;
    auto bad = [&] { return ParseError("bad permutation '" + std::string(text) + "'"); };
    std::array<bool, kMaxPermDegree> used{};
    while (i < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
        continue;
      }
      if (text[i] != '(') throw bad();
      ++i;
      std::vector<int> cycle;
      while (i < text.size() && text[i] != ')') {
        if (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',') {
          ++i;
          continue;
        }
        int v = 0;
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) throw bad();
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) v = v * 10 + (text[i++] - '0');
        if (v < 1 || v > n_ || used[v - 1]) throw bad();
        used[v - 1] = true;
        cycle.push_back(v - 1);
      }
      if (i == text.size()) throw bad();
      ++i;
      for (std::size_t k = 0; k < cycle.size(); ++k)
        p.img[cycle[k]] = static_cast<std::uint8_t>(cycle[(k + 1) % cycle.size()]);
    }
    if (alternating_ && !even(p)) throw bad();
    return p;
  }

 private:
  bool even(const Perm& p) const {
    int inversions = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if (p.img[i] > p.img[j]) ++inversions;
    return inversions % 2 == 0;
  }

  std::size_t lehmer_rank(const Perm& p) const {
    std::size_t rank = 0;
    for (int i = 0; i < n_; ++i) {
      std::size_t smaller = 0;
      for (int j = i + 1; j < n_; ++j)
        if (p.img[j] < p.img[i]) ++smaller;
      rank = rank * static_cast<std::size_t>(n_ - i) + smaller;
    }
    return rank;
  }

  void compute_class_minima();

  int n_;
  bool alternating_;
  std::vector<Perm> elements_;
  std::vector<std::int32_t> rank_to_index_;
  std::vector<std::size_t> class_minima_;
};

// ---------------------------------------------------------------------------
// PSL(2, p).

struct Mat2p {
  std::array<std::uint16_t, 4> e{};  // row-major, entries in [0, p)
  friend bool operator==(const Mat2p&, const Mat2p&) = default;
};

/// PSL(2, p), p an odd prime. Each element is stored as the matrix whose
/// first nonzero entry (row-major) lies in [1, (p-1)/2]; elements are
/// indexed in lexicographic order of those entries.
class Psl2Group {
 public:
  using Element = Mat2p;

  explicit Psl2Group(int p) : p_(p) {
    if (!detail::is_prime(p) || p < 3 || p > kMaxPslPrime) throw InvalidTarget("PSL(2,p) needs an odd prime p");
    const std::size_t pp = static_cast<std::size_t>(p);
    index_.assign(pp * pp * pp * pp, -1);
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b)
        for (int c = 0; c < p; ++c)
          for (int d = 0; d < p; ++d) {
            if (((a * d - b * c) % p + p) % p != 1) continue;
            Mat2p m{{static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b), static_cast<std::uint16_t>(c),
                     static_cast<std::uint16_t>(d)}};
            if (!(canonical(m) == m)) continue;
            index_[key(m)] = static_cast<std::int32_t>(elements_.size());
            elements_.push_back(m);
          }
    compute_class_minima();
  }

  TargetSpec spec() const { return TargetSpec::psl2(p_); }
  int prime() const noexcept { return p_; }
  std::size_t order() const noexcept { return elements_.size(); }
  const Mat2p& element(std::size_t i) const { return elements_[i]; }

  std::size_t index_of(const Mat2p& m) const {
    auto idx = index_[key(canonical(m))];
    if (idx < 0) throw InvalidTarget("matrix is not in " + to_string(spec()));
    return static_cast<std::size_t>(idx);
  }

  Mat2p identity() const { return {{1, 0, 0, 1}}; }
  bool is_identity(const Mat2p& m) const { return m == identity(); }

  Mat2p multiply(const Mat2p& x, const Mat2p& y) const {
    const auto& a = x.e;
    const auto& b = y.e;
    auto mod = [this](int v) { return static_cast<std::uint16_t>(v % p_); };
    return canonical({{mod(a[0] * b[0] + a[1] * b[2]), mod(a[0] * b[1] + a[1] * b[3]), mod(a[2] * b[0] + a[3] * b[2]),
                       mod(a[2] * b[1] + a[3] * b[3])}});
  }

  Mat2p inverse(const Mat2p& x) const {
    auto neg = [this](int v) { return static_cast<std::uint16_t>((p_ - v) % p_); };
    return canonical({{x.e[3], neg(x.e[1]), neg(x.e[2]), x.e[0]}});
  }

  std::vector<Mat2p> generators() const {
    return {canonical({{1, 1, 0, 1}}), canonical({{0, static_cast<std::uint16_t>(p_ - 1), 1, 0}})};
  }

  const std::vector<std::size_t>& class_minima() const noexcept { return class_minima_; }

  std::string format(const Mat2p& m) const {
    return "[[" + std::to_string(m.e[0]) + "," + std::to_string(m.e[1]) + "],[" + std::to_string(m.e[2]) + "," +
           std::to_string(m.e[3]) + "]] mod " + std::to_string(p_);
  }

  Mat2p parse(std::string_view text) const {
    std::vector<long> nums;
    long cur = 0;
    bool in_num = false, neg = false;
    for (char c : text) {
      if (c == '-') {
        neg = true;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        cur = cur * 10 + (c - '0');
        in_num = true;
      } else if (in_num) {
        nums.push_back(neg ? -cur : cur);
        cur = 0;
        in_num = false;
        neg = false;
      }
    }
    if (in_num) nums.push_back(neg ? -cur : cur);
    if (nums.size() != 5 || nums[4] != p_) throw ParseError("bad PSL(2," + std::to_string(p_) + ") element");
    Mat2p m;
    for (int i = 0; i < 4; ++i) m.e[i] = static_cast<std::uint16_t>(((nums[i] % p_) + p_) % p_);
    long det = (static_cast<long>(m.e[0]) * m.e[3] - static_cast<long>(m.e[1]) * m.e[2]) % p_;
    if ((det + p_) % p_ != 1) throw ParseError("PSL(2,p) element must have determinant 1");
    return canonical(m);
  }

 private:
  Mat2p canonical(Mat2p m) const {
    for (auto v : m.e) {
      if (v == 0) continue;
      if (v > (p_ - 1) / 2)
        for (auto& w : m.e) w = static_cast<std::uint16_t>((p_ - w) % p_);
      break;
    }
    return m;
  }

  std::size_t key(const Mat2p& m) const {
    const std::size_t p = static_cast<std::size_t>(p_);
    return ((m.e[0] * p + m.e[1]) * p + m.e[2]) * p + m.e[3];
  }

  void compute_class_minima();

  int p_;
  std::vector<Mat2p> elements_;
  std::vector<std::int32_t> index_;
  std::vector<std::size_t> class_minima_;
};

namespace detail {

// Conjugacy classes as orbits of x -> g^-1 x g over a generating set; keeps
// the least index of each class.
template <class G>
std::vector<std::size_t> class_minima_of(const G& group) {
  const auto gens = group.generators();
  std::vector<char> seen(group.order(), 0);
  std::vector<std::size_t> minima;
  for (std::size_t i = 0; i < group.order(); ++i) {
    if (seen[i]) continue;
    minima.push_back(i);
    std::vector<std::size_t> stack{i};
    seen[i] = 1;
    while (!stack.empty()) {
      auto x = group.element(stack.back());
      stack.pop_back();
      for (const auto& g : gens) {
        auto y = group.index_of(group.multiply(group.multiply(group.inverse(g), x), g));
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
  }
  return minima;
}

}  // namespace detail

inline void PermGroup::compute_class_minima() { class_minima_ = detail::class_minima_of(*this); }
inline void Psl2Group::compute_class_minima() { class_minima_ = detail::class_minima_of(*this); }

using AnyGroup = std::variant<PermGroup, Psl2Group>;

/// Shared, immutable group tables, built once per target.
inline const AnyGroup& group_for(const TargetSpec& t) {
  static std::mutex mutex;
  static std::map<TargetSpec, std::unique_ptr<AnyGroup>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[t];
  if (!slot) {
    switch (t.kind) {
      case TargetKind::Symmetric: slot = std::make_unique<AnyGroup>(PermGroup(t.param, false)); break;
      case TargetKind::Alternating: slot = std::make_unique<AnyGroup>(PermGroup(t.param, true)); break;
      case TargetKind::PSL2: slot = std::make_unique<AnyGroup>(Psl2Group(t.param)); break;
    }
  }
  return *slot;
}

}  // namespace knotfill
