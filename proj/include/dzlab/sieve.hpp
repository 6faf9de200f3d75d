#pragma once

// Norm-indexed Dirichlet coefficient tables for zeta_K, 1/zeta_K and
// zeta_K(s-1)/zeta_K(s), built by an Euler-product convolution sieve.
//
// Every prime ideal P of norm N contributes a local factor depending only on
// N, so the sieve runs over norm classes. The local factors, as power series
// in N^{-s}:
//   IdealCount   1 / (1 - N^{-s})
//   MoebiusSum   1 - N^{-s}
//   TotientSum   (1 - N^{-s}) / (1 - N^{1-s})
// Multiplying a truncated Dirichlet series by a series supported on powers of
// N is done in place over the multiples of N.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "dzlab/error.hpp"
#include "dzlab/field.hpp"
#include "dzlab/numeric.hpp"
#include "dzlab/splitting.hpp"

namespace dzlab {

enum class CoeffKind : std::uint8_t { IdealCount = 0, TotientSum = 1, MoebiusSum = 2 };

inline const char* to_string(CoeffKind k) {
  switch (k) {
    case CoeffKind::IdealCount: return "IdealCount";
    case CoeffKind::TotientSum: return "TotientSum";
    case CoeffKind::MoebiusSum: return "MoebiusSum";
  }
  return "?";
}

inline constexpr std::uint64_t kSieveHardCap = 100'000'000;
inline constexpr std::uint64_t kSieveWarnAbove = 10'000'000;

/// Exact coefficients c(1..X) of one Dirichlet series, stored as 64-bit
/// integers, or 128-bit when 64 bits overflowed during construction.
class CoeffTable {
 public:
  using Narrow = std::vector<std::int64_t>;
  using Wide = std::vector<int128>;

  CoeffTable(std::string field_spec, std::uint64_t X, CoeffKind kind, std::variant<Narrow, Wide> values)
      : field_spec_(std::move(field_spec)), X_(X), kind_(kind), values_(std::move(values)) {
    const std::size_t n = std::visit([](const auto& v) { return v.size(); }, values_);
    if (n != X_ + 1) throw Error(ErrorCode::DomainError, "coefficient array length must be X + 1");
  }

  const std::string& field_spec() const noexcept { return field_spec_; }
  std::uint64_t X() const noexcept { return X_; }
  CoeffKind kind() const noexcept { return kind_; }
  int width_bytes() const noexcept { return std::holds_alternative<Narrow>(values_) ? 8 : 16; }
  const std::variant<Narrow, Wide>& storage() const noexcept { return values_; }

  /// c(m) for 1 <= m <= X (index 0 holds 0).
  int128 operator[](std::uint64_t m) const {
    return std::visit([m](const auto& v) -> int128 { return v[m]; }, values_);
  }

  int128 at(std::uint64_t m) const {
    if (m < 1 || m > X_) throw Error(ErrorCode::OutOfRange, "index " + std::to_string(m) + " outside 1.." + std::to_string(X_));
    return (*this)[m];
  }

  /// c(m) as double; exact while |c(m)| < 2^53.
  double as_double(std::uint64_t m) const {
    return std::visit([m](const auto& v) { return static_cast<double>(v[m]); }, values_);
  }

  friend bool operator==(const CoeffTable& a, const CoeffTable& b) {
    return a.field_spec_ == b.field_spec_ && a.X_ == b.X_ && a.kind_ == b.kind_ && a.values_ == b.values_;
  }

 private:
  std::string field_spec_;
  std::uint64_t X_;
  CoeffKind kind_;
  std::variant<Narrow, Wide> values_;
};

namespace detail {

template <typename Int>
bool checked_add(Int& acc, Int v) {
  return !__builtin_add_overflow(acc, v, &acc);
}

// Returns false on overflow of Int.
template <typename Int>
bool run_sieve(std::vector<Int>& c, const PrimeIdealClassList& primes, CoeffKind kind) {
  const std::uint64_t X = c.size() - 1;
  std::fill(c.begin(), c.end(), Int{0});
  c[1] = 1;
  for (const auto& cls : primes.items) {
    const std::uint64_t N = cls.norm;
    const std::uint64_t top = X / N;
    for (int rep = 0; rep < cls.multiplicity; ++rep) {
      switch (kind) {
        case CoeffKind::IdealCount:
          for (std::uint64_t k = 1; k <= top; ++k) {
            if (!checked_add(c[k * N], c[k])) return false;
          }
          break;
        case CoeffKind::MoebiusSum:
          for (std::uint64_t k = top; k >= 1; --k) c[k * N] -= c[k];
          break;
        case CoeffKind::TotientSum: {
          const Int n = static_cast<Int>(N);
          for (std::uint64_t k = 1; k <= top; ++k) {
            Int scaled;
            if (__builtin_mul_overflow(c[k], n, &scaled)) return false;
            if (!checked_add(c[k * N], scaled)) return false;
          }
          for (std::uint64_t k = top; k >= 1; --k) c[k * N] -= c[k];
          break;
        }
      }
    }
  }
  return true;
}

inline void check_sieve_bound(std::uint64_t X) {
  if (X < 1) throw Error(ErrorCode::OutOfRange, "X must be >= 1");
  if (X > kSieveHardCap) throw Error(ErrorCode::Config, "X exceeds the hard cap 1e8");
}

}  // namespace detail

/// Builds one coefficient table from an already enumerated prime-ideal list.
inline CoeffTable build_table(const NumberField& K, const PrimeIdealClassList& primes, CoeffKind kind) {
  const std::uint64_t X = primes.X;
  detail::check_sieve_bound(X);
  {
    std::vector<std::int64_t> narrow(X + 1);
    if (detail::run_sieve(narrow, primes, kind)) return CoeffTable(K.spec(), X, kind, std::move(narrow));
  }
  std::vector<int128> wide(X + 1);
  if (detail::run_sieve(wide, primes, kind)) return CoeffTable(K.spec(), X, kind, std::move(wide));
  throw Error(ErrorCode::Overflow, "coefficients exceed 128 bits");
}

inline CoeffTable build_table(const NumberField& K, std::uint64_t X, CoeffKind kind) {
  detail::check_sieve_bound(X);
  return build_table(K, prime_ideals_up_to(K, X), kind);
}

/// The three tables of one field at one bound, sharing the prime enumeration.
struct FieldTables {
  PrimeIdealClassList primes;
  CoeffTable ideal_count;
  CoeffTable totient_sum;
  CoeffTable moebius_sum;

  std::uint64_t X() const { return primes.X; }
};

inline FieldTables build_tables(const NumberField& K, std::uint64_t X) {
  detail::check_sieve_bound(X);
  PrimeIdealClassList primes = prime_ideals_up_to(K, X);
  CoeffTable a = build_table(K, primes, CoeffKind::IdealCount);
  CoeffTable phi = build_table(K, primes, CoeffKind::TotientSum);
  CoeffTable mu = build_table(K, primes, CoeffKind::MoebiusSum);
  return FieldTables{std::move(primes), std::move(a), std::move(phi), std::move(mu)};
}

/// Prefix sum of the coefficients up to x: N(x) for IdealCount, Phi_K(x) for
/// TotientSum.
inline int128 summatory(const CoeffTable& table, std::uint64_t x) {
  if (x < 1 || x > table.X()) {
    throw Error(ErrorCode::OutOfRange, "x=" + std::to_string(x) + " outside 1.." + std::to_string(table.X()));
  }
  return std::visit(
      [x](const auto& v) {
        int128 s = 0;
        for (std::uint64_t m = 1; m <= x; ++m) s += v[m];
        return s;
      },
      table.storage());
}

struct SummatoryResult {
  std::uint64_t x = 0;
  int128 value = 0;
  double main_term = 0.0;
  double error = 0.0;              ///< value - main_term
  double normalized = 0.0;         ///< error / x^{2 - 1/n}
  double normalized_lindelof = 0.0;  ///< error / x^{3/2}
  double normalized_circle = 0.0;    ///< error / x^{3/2 - 1/(2n)}
};

/// Phi_K(x) against kappa/(2 zeta_K(2)) x^2 at each requested x.
inline std::vector<SummatoryResult> mertens_report(const CoeffTable& totient, const FieldInvariants& inv, int degree,
                                                   std::vector<std::uint64_t> xs) {
  if (totient.kind() != CoeffKind::TotientSum) throw Error(ErrorCode::DomainError, "mertens_report needs a TotientSum table");
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < 1 || xs[i] > totient.X()) {
      throw Error(ErrorCode::OutOfRange, "x=" + std::to_string(xs[i]) + " outside 1.." + std::to_string(totient.X()));
    }
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
  std::vector<SummatoryResult> sorted(xs.size());
  int128 running = 0;
  std::uint64_t m = 0;
  const double n = degree;
  for (std::size_t idx : order) {
    const std::uint64_t x = xs[idx];
    while (m < x) running += totient[++m];
    SummatoryResult r;
    r.x = x;
    r.value = running;
    const long double xl = static_cast<long double>(x);
    const long double main = static_cast<long double>(inv.mertens_constant) * xl * xl;
    r.main_term = static_cast<double>(main);
    r.error = static_cast<double>(static_cast<long double>(running) - main);
    r.normalized = r.error / std::pow(static_cast<double>(x), 2.0 - 1.0 / n);
    r.normalized_lindelof = r.error / std::pow(static_cast<double>(x), 1.5);
    r.normalized_circle = r.error / std::pow(static_cast<double>(x), 1.5 - 0.5 / n);
    sorted[idx] = r;
  }
  return sorted;
}

/// Max over integer x in each decade (10^k, 10^{k+1}] of |Phi_K(x) - c x^2| / x^{2-1/n},
/// for decades covering [lo, hi].
inline std::vector<double> mertens_decade_maxima(const CoeffTable& totient, const FieldInvariants& inv, int degree,
                                                 std::uint64_t lo, std::uint64_t hi) {
  if (hi > totient.X() || lo < 1 || lo >= hi) throw Error(ErrorCode::OutOfRange, "decade range outside table");
  std::vector<double> maxima;
  const double expo = 2.0 - 1.0 / degree;
  int128 running = 0;
  std::uint64_t decade_end = lo * 10;
  double current = 0;
  for (std::uint64_t x = 1; x <= hi; ++x) {
    running += totient[x];
    if (x < lo) continue;
    if (x > decade_end) {
      maxima.push_back(current);
      current = 0;
      decade_end *= 10;
    }
    const long double xl = static_cast<long double>(x);
    const long double err = static_cast<long double>(running) - static_cast<long double>(inv.mertens_constant) * xl * xl;
    current = std::max(current, static_cast<double>(std::fabs(err)) / std::pow(static_cast<double>(x), expo));
  }
  maxima.push_back(current);
  return maxima;
}

struct IdealCountSample {
  std::uint64_t x = 0;
  int128 value = 0;
  double error = 0.0;       ///< N(x) - kappa x
  double normalized = 0.0;  ///< error / x^{1 - 1/n}
};

/// N(x) = #{ideals of norm <= x} against kappa x.
inline std::vector<IdealCountSample> ideal_count_report(const CoeffTable& count, double kappa, int degree,
                                                        std::vector<std::uint64_t> xs) {
  if (count.kind() != CoeffKind::IdealCount) throw Error(ErrorCode::DomainError, "ideal_count_report needs an IdealCount table");
  std::sort(xs.begin(), xs.end());
  std::vector<IdealCountSample> out;
  int128 running = 0;
  std::uint64_t m = 0;
  for (std::uint64_t x : xs) {
    if (x < 1 || x > count.X()) throw Error(ErrorCode::OutOfRange, "x outside table");
    while (m < x) running += count[++m];
    const double err = static_cast<double>(running) - kappa * static_cast<double>(x);
    out.push_back({x, running, err, err / std::pow(static_cast<double>(x), 1.0 - 1.0 / degree)});
  }
  return out;
}

}  // namespace dzlab
