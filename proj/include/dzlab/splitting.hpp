#pragma once

// Decomposition of rational primes in O_K and enumeration of prime-ideal
// norms up to a bound.

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "dzlab/error.hpp"
#include "dzlab/field.hpp"
#include "dzlab/poly.hpp"

namespace dzlab {

namespace detail {

/// Jacobi symbol (a/n) for odd n > 0.
inline int jacobi(std::int64_t a, std::int64_t n) {
  a %= n;
  if (a < 0) a += n;
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::int64_t r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

}  // namespace detail

/// Kronecker symbol (D/m) for m >= 1: the quadratic character chi_D.
inline int kronecker(std::int64_t D, std::uint64_t m) {
  if (m == 0) throw Error(ErrorCode::DomainError, "kronecker symbol needs m >= 1");
  int result = 1;
  while (m % 2 == 0) {
    m /= 2;
    if (D % 2 == 0) return 0;
    const std::int64_t r = ((D % 8) + 8) % 8;
    if (r == 3 || r == 5) result = -result;
  }
  if (m == 1) return result;
  return result * detail::jacobi(D, static_cast<std::int64_t>(m));
}

/// Sieve of Eratosthenes: all primes <= limit.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<std::uint8_t> composite(limit + 1, 0);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return primes;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

struct SplitEntry {
  int residue_degree = 1;  ///< f
  int ramification = 1;    ///< e
  int count = 1;           ///< number of distinct primes with this (f, e)

  friend bool operator==(const SplitEntry&, const SplitEntry&) = default;
};

/// Shape of p O_K = prod P_i^{e_i}, N(P_i) = p^{f_i}.
struct PrimeSplit {
  std::uint64_t p = 0;
  std::vector<SplitEntry> entries;  ///< sorted by (f, e)

  /// sum of count * e * f; equals the field degree.
  int degree_sum() const {
    int s = 0;
    for (const auto& e : entries) s += e.count * e.ramification * e.residue_degree;
    return s;
  }
};

namespace detail {

inline void canonicalize(std::vector<SplitEntry>& entries) {
  std::map<std::pair<int, int>, int> merged;
  for (const auto& e : entries) merged[{e.residue_degree, e.ramification}] += e.count;
  entries.clear();
  for (const auto& [fe, c] : merged) entries.push_back({fe.first, fe.second, c});
}

// Dedekind's criterion: p does not divide [O_K : Z[theta]] iff
// gcd(Fbar, gbar, hbar) = 1 where gbar is the radical of fbar, hbar = fbar/gbar
// and F = (g h - f)/p for monic lifts g, h with coefficients in [0, p).
inline bool dedekind_index_coprime(const zpoly::Poly& f, const fpoly::Field& F,
                                   const std::vector<std::pair<fpoly::Poly, int>>& sqf) {
  fpoly::Poly radical{1};
  for (const auto& [g, m] : sqf) radical = fpoly::mul(F, radical, g);
  const fpoly::Poly fbar = fpoly::reduce(F, f);
  const fpoly::Poly cofactor = fpoly::divmod(F, fbar, radical).first;
  auto lift = [](const fpoly::Poly& a) {
    zpoly::Poly r;
    for (auto c : a) r.emplace_back(c);
    return r;
  };
  const zpoly::Poly g = lift(radical), h = lift(cofactor);
  zpoly::Poly gh(g.size() + h.size() - 1, 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < h.size(); ++j) gh[i + j] += g[i] * h[j];
  }
  zpoly::Poly diff(std::max(gh.size(), f.size()), 0);
  for (std::size_t i = 0; i < gh.size(); ++i) diff[i] += gh[i];
  for (std::size_t i = 0; i < f.size(); ++i) diff[i] -= f[i];
  for (auto& c : diff) c /= F.p;  // exact: g h == f (mod p)
  zpoly::normalize(diff);
  const fpoly::Poly Fbar = fpoly::reduce(F, diff);
  fpoly::Poly common = fpoly::gcd(F, fpoly::gcd(F, Fbar, radical), cofactor);
  return fpoly::degree(common) <= 0;
}

}  // namespace detail

/// Factorization shape of a rational prime p in O_K.
inline PrimeSplit split_prime(const NumberField& K, std::uint64_t p) {
  if (!is_prime(p)) throw Error(ErrorCode::DomainError, std::to_string(p) + " is not prime");
  PrimeSplit split{p, {}};
  switch (K.kind()) {
    case FieldKind::Rational:
      split.entries = {{1, 1, 1}};
      return split;
    case FieldKind::Quadratic: {
      const int chi = kronecker(K.discriminant(), p);
      if (chi == 1) split.entries = {{1, 1, 2}};
      else if (chi == -1) split.entries = {{2, 1, 1}};
      else split.entries = {{1, 2, 1}};
      return split;
    }
    case FieldKind::Monogenic:
      break;
  }
  if (p >= (1ULL << 32)) throw Error(ErrorCode::OutOfRange, "primes above 2^32 are not supported");
  const zpoly::Poly f = zpoly::from_high_first(K.polynomial());
  const fpoly::Field F{p};
  const fpoly::Poly fbar = fpoly::reduce(F, f);
  const auto sqf = fpoly::squarefree_decomposition(F, fbar);
  bool squarefree = true;
  for (const auto& [g, m] : sqf) squarefree = squarefree && m == 1;
  if (!squarefree && !detail::dedekind_index_coprime(f, F, sqf)) throw IndexDivisorError(p);
  for (const auto& [g, m] : sqf) {
    for (auto [deg, count] : fpoly::distinct_degree_factorization(F, g)) {
      split.entries.push_back({deg, m, count});
    }
  }
  detail::canonicalize(split.entries);
  return split;
}

/// One norm class of prime ideals: `multiplicity` distinct primes above p,
/// all of norm `norm` = p^f.
struct PrimeIdealNorm {
  std::uint64_t p = 0;
  std::uint64_t norm = 0;
  int multiplicity = 0;

  friend bool operator==(const PrimeIdealNorm&, const PrimeIdealNorm&) = default;
};

struct PrimeIdealClassList {
  std::uint64_t X = 0;
  std::vector<PrimeIdealNorm> items;  ///< grouped by p ascending, norms ascending within p

  /// Total number of prime ideals with norm <= X.
  std::uint64_t count() const {
    std::uint64_t c = 0;
    for (const auto& it : items) c += static_cast<std::uint64_t>(it.multiplicity);
    return c;
  }
};

/// All prime ideals of norm <= X, grouped into norm classes.
/// `excluded` lists primes whose splitting the caller explicitly waives
/// (otherwise an unresolvable prime raises IndexDivisor).
inline PrimeIdealClassList prime_ideals_up_to(const NumberField& K, std::uint64_t X,
                                              const std::vector<std::uint64_t>& excluded = {}) {
  PrimeIdealClassList list{X, {}};
  if (X < 2) return list;
  for (std::uint64_t p : primes_up_to(X)) {
    if (std::find(excluded.begin(), excluded.end(), p) != excluded.end()) continue;
    const PrimeSplit split = split_prime(K, p);
    std::map<std::uint64_t, int> by_norm;
    for (const auto& e : split.entries) {
      std::uint64_t norm = 1;
      bool fits = true;
      for (int i = 0; i < e.residue_degree; ++i) {
        if (norm > X / p) {
          fits = false;
          break;
        }
        norm *= p;
      }
      if (fits) by_norm[norm] += e.count;
    }
    for (const auto& [norm, mult] : by_norm) list.items.push_back({p, norm, mult});
  }
  return list;
}

}  // namespace dzlab
