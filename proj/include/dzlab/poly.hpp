#pragma once

// Polynomials over Z (exact, arbitrary precision) and over F_p.
//
// Coefficient vectors are stored lowest degree first and kept normalized
// (no trailing zero coefficients); the zero polynomial is the empty vector.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dzlab/error.hpp"

namespace dzlab {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

namespace zpoly {

using Poly = std::vector<BigInt>;

inline void normalize(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline const BigInt& lead(const Poly& a) { return a.back(); }

/// Builds from coefficients given highest degree first.
template <typename Int>
Poly from_high_first(const std::vector<Int>& coeffs) {
  Poly p(coeffs.rbegin(), coeffs.rend());
  normalize(p);
  return p;
}

inline Poly derivative(const Poly& a) {
  Poly d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<long>(i));
  normalize(d);
  return d;
}

inline BigInt content(const Poly& a) {
  BigInt g = 0;
  for (const auto& c : a) g = boost::multiprecision::gcd(g, c);
  return abs(g);
}

inline Poly divide_exact(Poly a, const BigInt& c) {
  for (auto& x : a) x /= c;
  return a;
}

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a = q*b + r.
inline Poly pseudo_remainder(Poly a, const Poly& b) {
  const int db = degree(b);
  int delta = degree(a) - db + 1;
  const BigInt& lb = lead(b);
  while (!a.empty() && degree(a) >= db) {
    const BigInt la = lead(a);
    const int shift = degree(a) - db;
    for (auto& x : a) x *= lb;
    for (int i = 0; i <= db; ++i) a[static_cast<std::size_t>(i + shift)] -= la * b[static_cast<std::size_t>(i)];
    normalize(a);
    --delta;
  }
  BigInt scale = boost::multiprecision::pow(lb, static_cast<unsigned>(std::max(delta, 0)));
  for (auto& x : a) x *= scale;
  return a;
}

/// Resultant via the subresultant pseudo-remainder sequence (exact
/// divisions only, no fractions).
inline BigInt resultant(Poly a, Poly b) {
  using boost::multiprecision::pow;
  if (a.empty() || b.empty()) return 0;
  int sign = 1;
  if (degree(a) < degree(b)) {
    std::swap(a, b);
    if (degree(a) % 2 == 1 && degree(b) % 2 == 1) sign = -sign;
  }
  const BigInt ca = content(a), cb = content(b);
  a = divide_exact(std::move(a), ca);
  b = divide_exact(std::move(b), cb);
  BigInt g = 1, h = 1;
  const BigInt t = pow(ca, static_cast<unsigned>(degree(b))) * pow(cb, static_cast<unsigned>(degree(a)));
  while (degree(b) > 0) {
    const int delta = degree(a) - degree(b);
    if (degree(a) % 2 == 1 && degree(b) % 2 == 1) sign = -sign;
    Poly r = pseudo_remainder(a, b);
    a = std::move(b);
    if (r.empty()) return 0;
    const BigInt div = g * pow(h, static_cast<unsigned>(delta));
    b = divide_exact(std::move(r), div);
    g = lead(a);
    // h <- g^delta / h^(delta - 1)
    if (delta > 0) h = pow(g, static_cast<unsigned>(delta)) / pow(h, static_cast<unsigned>(delta - 1));
  }
  // b is a nonzero constant
  const int da = degree(a);
  BigInt hh = pow(lead(b), static_cast<unsigned>(da));
  if (da > 1) hh /= pow(h, static_cast<unsigned>(da - 1));
  return sign * t * hh;
}

/// disc(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f).
inline BigInt discriminant(const Poly& f) {
  const int n = degree(f);
  if (n < 1) throw Error(ErrorCode::DomainError, "discriminant of a constant");
  BigInt res = resultant(f, derivative(f));
  BigInt d = res / lead(f);
  if ((n * (n - 1) / 2) % 2 == 1) d = -d;
  return d;
}

/// Number of distinct real roots of a squarefree polynomial, by a Sturm
/// sequence evaluated at -inf and +inf.
inline int count_real_roots(const Poly& f) {
  using QPoly = std::vector<BigRational>;
  auto to_q = [](const Poly& p) { return QPoly(p.begin(), p.end()); };
  auto norm = [](QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
  };
  auto rem = [&](QPoly a, const QPoly& b) {
    const std::size_t db = b.size() - 1;
    while (!a.empty() && a.size() - 1 >= db) {
      BigRational c = a.back() / b.back();
      const std::size_t shift = a.size() - 1 - db;
      for (std::size_t i = 0; i <= db; ++i) a[i + shift] -= c * b[i];
      a.pop_back();
      norm(a);
    }
    return a;
  };
  std::vector<QPoly> seq{to_q(f), to_q(derivative(f))};
  while (!seq.back().empty() && seq.back().size() > 1) {
    QPoly r = rem(seq[seq.size() - 2], seq.back());
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    seq.push_back(std::move(r));
  }
  auto sign_changes = [&](bool at_plus) {
    int changes = 0, last = 0;
    for (const auto& p : seq) {
      if (p.empty()) continue;
      int s = p.back() > 0 ? 1 : -1;
      if (!at_plus && (p.size() - 1) % 2 == 1) s = -s;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  };
  return sign_changes(false) - sign_changes(true);
}

inline BigInt eval(const Poly& f, const BigInt& x) {
  BigInt acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// Integer roots of a monic polynomial (all rational roots are integers
/// dividing the constant term). Returns the first root found, if any.
inline std::optional<BigInt> find_rational_root(const Poly& f) {
  if (f.empty()) return BigInt(0);
  if (f[0] == 0) return BigInt(0);
  BigInt c = abs(f[0]);
  if (c > BigInt(100000000000000LL)) {
    throw Error(ErrorCode::Undecided, "constant term too large for the rational-root test");
  }
  const auto cc = c.convert_to<long long>();
  for (long long d = 1; d * d <= cc; ++d) {
    if (cc % d != 0) continue;
    for (long long cand : {d, -d, cc / d, -(cc / d)}) {
      if (eval(f, BigInt(cand)) == 0) return BigInt(cand);
    }
  }
  return std::nullopt;
}

}  // namespace zpoly

// ---------------------------------------------------------------------------

namespace fpoly {

using Poly = std::vector<std::uint64_t>;

/// Arithmetic context for F_p with p < 2^32.
struct Field {
  std::uint64_t p;

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p ? s - p : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p - b; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a * b) % p; }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  std::uint64_t inv(std::uint64_t a) const { return pow(a, p - 2); }
  std::uint64_t reduce(long long v) const {
    long long m = v % static_cast<long long>(p);
    return static_cast<std::uint64_t>(m < 0 ? m + static_cast<long long>(p) : m);
  }
  std::uint64_t reduce(const BigInt& v) const {
    BigInt m = v % p;
    if (m < 0) m += p;
    return m.convert_to<std::uint64_t>();
  }
};

inline void normalize(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline bool is_one(const Poly& a) { return a.size() == 1 && a[0] == 1; }

inline Poly reduce(const Field& F, const zpoly::Poly& f) {
  Poly r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = F.reduce(f[i]);
  normalize(r);
  return r;
}

inline Poly monic(const Field& F, Poly a) {
  if (a.empty()) return a;
  const std::uint64_t li = F.inv(a.back());
  for (auto& c : a) c = F.mul(c, li);
  return a;
}

inline Poly sub(const Field& F, Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = F.sub(a[i], b[i]);
  normalize(a);
  return a;
}

inline Poly mul(const Field& F, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  normalize(r);
  return r;
}

/// Returns (quotient, remainder).
inline std::pair<Poly, Poly> divmod(const Field& F, Poly a, const Poly& b) {
  if (b.empty()) throw Error(ErrorCode::DomainError, "polynomial division by zero");
  if (degree(a) < degree(b)) return {{}, a};
  const std::uint64_t li = F.inv(b.back());
  const std::size_t db = b.size() - 1;
  Poly q(a.size() - db, 0);
  for (std::size_t k = a.size(); k-- > db;) {
    const std::uint64_t c = F.mul(a[k], li);
    q[k - db] = c;
    if (c == 0) continue;
    for (std::size_t i = 0; i <= db; ++i) a[k - db + i] = F.sub(a[k - db + i], F.mul(c, b[i]));
  }
  a.resize(db);
  normalize(a);
  normalize(q);
  return {q, a};
}

inline Poly mod(const Field& F, const Poly& a, const Poly& b) { return divmod(F, a, b).second; }

/// Monic gcd.
inline Poly gcd(const Field& F, Poly a, Poly b) {
  while (!b.empty()) {
    Poly r = mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(F, std::move(a));
}

inline Poly derivative(const Field& F, const Poly& a) {
  Poly d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(F.mul(a[i], i % F.p));
  normalize(d);
  return d;
}

/// base^e mod m.
inline Poly powmod(const Field& F, Poly base, std::uint64_t e, const Poly& m) {
  Poly r = mod(F, Poly{1}, m);
  base = mod(F, base, m);
  while (e) {
    if (e & 1) r = mod(F, mul(F, r, base), m);
    base = mod(F, mul(F, base, base), m);
    e >>= 1;
  }
  return r;
}

/// Squarefree decomposition of a monic polynomial over F_p: pairs
/// (squarefree factor, multiplicity) with pairwise coprime factors.
inline std::vector<std::pair<Poly, int>> squarefree_decomposition(const Field& F, const Poly& f) {
  std::vector<std::pair<Poly, int>> out;
  if (degree(f) < 1) return out;
  Poly c = gcd(F, f, derivative(F, f));
  Poly w = divmod(F, f, c).first;
  int i = 1;
  while (!is_one(w) && !w.empty() && degree(w) > 0) {
    Poly y = gcd(F, w, c);
    Poly fac = divmod(F, w, y).first;
    if (degree(fac) > 0) out.emplace_back(monic(F, fac), i);
    w = std::move(y);
    c = divmod(F, c, w).first;
    ++i;
  }
  if (degree(c) > 0) {
    // c is a polynomial in x^p; its p-th root over F_p keeps the coefficients.
    Poly root;
    for (std::size_t k = 0; k < c.size(); k += F.p) root.push_back(c[k]);
    for (auto& [g, m] : squarefree_decomposition(F, monic(F, root))) {
      out.emplace_back(std::move(g), m * static_cast<int>(F.p));
    }
  }
  return out;
}

/// Distinct-degree factorization of a squarefree monic polynomial:
/// (degree, number of irreducible factors of that degree).
inline std::vector<std::pair<int, int>> distinct_degree_factorization(const Field& F, Poly g) {
  std::vector<std::pair<int, int>> out;
  const Poly x{0, 1};
  Poly h = mod(F, x, g);
  for (int k = 1; 2 * k <= degree(g); ++k) {
    h = powmod(F, h, F.p, g);
    Poly d = gcd(F, g, sub(F, h, x));
    if (degree(d) > 0) {
      out.emplace_back(k, degree(d) / k);
      g = divmod(F, g, d).first;
      h = mod(F, h, g);
    }
  }
  if (degree(g) > 0) out.emplace_back(degree(g), 1);
  return out;
}

}  // namespace fpoly

}  // namespace dzlab
