#pragma once

// Independent ground truth for the sieve: both routines bypass prime
// splitting and the Euler product entirely.

#include <cstdint>

#include "dzlab/splitting.hpp"

namespace dzlab {

/// a_K(m) = sum_{d | m} chi_D(d) for the quadratic field of discriminant D,
/// by trial division.
inline std::int64_t oracle_quadratic_count(std::int64_t D, std::uint64_t m) {
  std::int64_t total = 0;
  for (std::uint64_t d = 1; d * d <= m; ++d) {
    if (m % d != 0) continue;
    total += kronecker(D, d);
    if (d * d != m) total += kronecker(D, m / d);
  }
  return total;
}

/// Number of ideals of Z[i] with norm <= x: nonzero lattice points (a, b)
/// with a^2 + b^2 <= x, divided by the four units.
inline std::uint64_t oracle_gaussian_count(std::uint64_t x) {
  std::uint64_t points = 0;
  std::int64_t a = 0;
  while (static_cast<std::uint64_t>(a * a) <= x) ++a;
  const std::int64_t r = a - 1;
  std::int64_t b = r;
  // For each a in [-r, r] count b with a^2 + b^2 <= x.
  for (std::int64_t u = 0; u <= r; ++u) {
    while (b >= 0 && static_cast<std::uint64_t>(u * u + b * b) > x) --b;
    const std::uint64_t column = static_cast<std::uint64_t>(2 * b + 1);
    points += (u == 0 ? 1 : 2) * column;
  }
  return (points - 1) / 4;
}

}  // namespace dzlab
