#pragma once

// Deliberately naive reference implementations. Nothing here calls into the
// library beyond reading plain data out of its types.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace oracle {

// A letter is (generator name, +1 / -1).
using Letter = std::pair<std::string, int>;
using Letters = std::vector<Letter>;

inline Letters parse(const std::string& text) {
  Letters out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "1") continue;
    auto caret = tok.find('^');
    std::string gen = tok.substr(0, caret);
    long e = caret == std::string::npos ? 1 : std::stol(tok.substr(caret + 1));
    for (long i = 0; i < std::labs(e); ++i) out.push_back({gen, e > 0 ? 1 : -1});
  }
  return out;
}

// Repeatedly deletes adjacent inverse pairs until none remain.
inline Letters reduce(Letters w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (w[i].first == w[i + 1].first && w[i].second == -w[i + 1].second) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        changed = true;
        break;
      }
  }
  return w;
}

inline std::string render(const Letters& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    long e = static_cast<long>(j - i) * w[i].second;
    if (!out.empty()) out += ' ';
    out += w[i].first;
    if (e != 1) out += "^" + std::to_string(e);
    i = j;
  }
  return out;
}

inline Letters inverse(Letters w) {
  std::reverse(w.begin(), w.end());
  for (auto& l : w) l.second = -l.second;
  return w;
}

inline Letters concat(Letters a, const Letters& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Conjugacy in a free group: cyclically reduce, then compare all rotations.
inline bool conjugate(const Letters& a, const Letters& b) {
  auto cyc = [](Letters w) {
    w = reduce(w);
    while (w.size() >= 2 && w.front().first == w.back().first && w.front().second == -w.back().second)
      w = Letters(w.begin() + 1, w.end() - 1);
    return w;
  };
  Letters x = cyc(a), y = cyc(b);
  if (x.size() != y.size()) return false;
  if (x.empty()) return true;
  for (std::size_t r = 0; r < x.size(); ++r) {
    Letters rot(x.begin() + static_cast<std::ptrdiff_t>(r), x.end());
    rot.insert(rot.end(), x.begin(), x.begin() + static_cast<std::ptrdiff_t>(r));
    if (rot == y) return true;
  }
  return false;
}

inline Letters random_word(std::mt19937_64& rng, const std::vector<std::string>& gens, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), g(0, gens.size() - 1);
  std::uniform_int_distribution<int> s(0, 1);
  Letters w;
  for (std::size_t i = 0, n = len(rng); i < n; ++i) w.push_back({gens[g(rng)], s(rng) ? 1 : -1});
  return w;
}

// ---------------------------------------------------------------------------
// Permutations on {0..n-1}, composed left to right: (a*b)(i) = b(a(i)).

using Perm = std::vector<int>;

inline Perm compose(const Perm& a, const Perm& b) {
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = b[a[i]];
  return r;
}

inline Perm invert(const Perm& a) {
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[a[i]] = static_cast<int>(i);
  return r;
}

inline bool is_identity(const Perm& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != static_cast<int>(i)) return false;
  return true;
}

inline std::vector<Perm> all_perms(int n, bool even_only = false) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Perm> out;
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inv += p[i] > p[j];
    if (!even_only || inv % 2 == 0) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline Perm eval(const Letters& w, const std::map<std::string, Perm>& img, int n) {
  Perm acc(n);
  std::iota(acc.begin(), acc.end(), 0);
  for (const auto& [g, s] : w) acc = compose(acc, s > 0 ? img.at(g) : invert(img.at(g)));
  return acc;
}

// Every assignment of generators to elements, checked relator by relator.
inline std::size_t count_homs(const std::vector<std::string>& gens, const std::vector<Letters>& relators,
                              const std::vector<Perm>& elements) {
  const int n = static_cast<int>(elements.front().size());
  std::size_t count = 0;
  std::vector<std::size_t> idx(gens.size(), 0);
  for (;;) {
    std::map<std::string, Perm> img;
    for (std::size_t k = 0; k < gens.size(); ++k) img[gens[k]] = elements[idx[k]];
    bool ok = std::all_of(relators.begin(), relators.end(), [&](const Letters& r) { return is_identity(eval(r, img, n)); });
    count += ok;
    std::size_t k = gens.size();
    while (k > 0 && ++idx[k - 1] == elements.size()) idx[--k] = 0;
    if (k == 0) break;
  }
  return count;
}

inline Perm parse_cycles(const std::string& text, int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  std::size_t i = 0;
  while ((i = text.find('(', i)) != std::string::npos) {
    auto close = text.find(')', i);
    std::istringstream in(text.substr(i + 1, close - i - 1));
    std::vector<int> cyc;
    int v;
    while (in >> v) cyc.push_back(v - 1);
    for (std::size_t k = 0; k < cyc.size(); ++k) p[cyc[k]] = cyc[(k + 1) % cyc.size()];
    i = close;
  }
  return p;
}

// ---------------------------------------------------------------------------
// 2x2 matrices mod p up to sign.

using Mat = std::array<long, 4>;

inline Mat mat_mul(const Mat& a, const Mat& b, long p) {
  return {(a[0] * b[0] + a[1] * b[2]) % p, (a[0] * b[1] + a[1] * b[3]) % p, (a[2] * b[0] + a[3] * b[2]) % p,
          (a[2] * b[1] + a[3] * b[3]) % p};
}

inline Mat mat_inv(const Mat& a, long p) { return {a[3], (p - a[1]) % p, (p - a[2]) % p, a[0]}; }

inline bool mat_is_pm_identity(const Mat& a, long p) {
  return a[1] == 0 && a[2] == 0 && a[0] == a[3] && (a[0] == 1 || a[0] == p - 1);
}

inline bool mat_equal_pm(const Mat& a, const Mat& b, long p) {
  if (a == b) return true;
  for (int i = 0; i < 4; ++i)
    if ((a[i] + b[i]) % p != 0) return false;
  return true;
}

inline Mat parse_mat(const std::string& text, long& p) {
  std::vector<long> nums;
  std::string cur;
  for (char c : text + " ") {
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      cur += c;
    } else if (!cur.empty()) {
      nums.push_back(std::stol(cur));
      cur.clear();
    }
  }
  p = nums.at(4);
  return {((nums[0] % p) + p) % p, ((nums[1] % p) + p) % p, ((nums[2] % p) + p) % p, ((nums[3] % p) + p) % p};
}

// ---------------------------------------------------------------------------
// Standalone certificate checker working only from the JSON text and the
// relator strings.

inline bool check_certificate(const nlohmann::json& cert, const std::vector<std::string>& relators) {
  const std::string target = cert.at("target");
  auto words = relators;
  if (target.rfind("PSL", 0) == 0) {
    long p = 0;
    std::map<std::string, Mat> img;
    for (const auto& [g, m] : cert.at("images").items()) img[g] = parse_mat(m.get<std::string>(), p);
    auto ev = [&](const Letters& w) {
      Mat acc{1, 0, 0, 1};
      for (const auto& [g, s] : w) acc = mat_mul(acc, s > 0 ? img.at(g) : mat_inv(img.at(g), p), p);
      return acc;
    };
    for (const auto& r : words)
      if (!mat_is_pm_identity(ev(parse(r)), p)) return false;
    long p2 = 0;
    Mat claimed = parse_mat(cert.at("witness_image").get<std::string>(), p2);
    Mat got = ev(parse(cert.at("witness").get<std::string>()));
    return mat_equal_pm(got, claimed, p) && !mat_is_pm_identity(got, p);
  }
  const int n = std::stoi(target.substr(1));
  std::map<std::string, Perm> img;
  for (const auto& [g, c] : cert.at("images").items()) img[g] = parse_cycles(c.get<std::string>(), n);
  for (const auto& r : words)
    if (!is_identity(eval(parse(r), img, n))) return false;
  Perm got = eval(parse(cert.at("witness").get<std::string>()), img, n);
  return got == parse_cycles(cert.at("witness_image").get<std::string>(), n) && !is_identity(got);
}

// ---------------------------------------------------------------------------
// Q(sqrt -3) as pairs of rationals, for matrix products independent of the
// library's field type.

using Q = boost::multiprecision::cpp_rational;

struct E {
  Q a, b;  // a + b sqrt(-3)
};

inline E add(const E& x, const E& y) { return {x.a + y.a, x.b + y.b}; }
inline E sub(const E& x, const E& y) { return {x.a - y.a, x.b - y.b}; }
inline E mul(const E& x, const E& y) { return {x.a * y.a - 3 * x.b * y.b, x.a * y.b + x.b * y.a}; }
inline E inv(const E& x) {
  Q n = x.a * x.a + 3 * x.b * x.b;
  return {x.a / n, -x.b / n};
}

using M2 = std::array<E, 4>;

inline M2 mmul(const M2& x, const M2& y) {
  return {add(mul(x[0], y[0]), mul(x[1], y[2])), add(mul(x[0], y[1]), mul(x[1], y[3])),
          add(mul(x[2], y[0]), mul(x[3], y[2])), add(mul(x[2], y[1]), mul(x[3], y[3]))};
}

inline M2 minv(const M2& x) { return {x[3], sub({0, 0}, x[1]), sub({0, 0}, x[2]), x[0]}; }

}  // namespace oracle
