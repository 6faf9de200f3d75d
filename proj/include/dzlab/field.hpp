#pragma once

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dzlab/error.hpp"
#include "dzlab/poly.hpp"

namespace dzlab {

enum class FieldKind { Rational, Quadratic, Monogenic };

struct Signature {
  int r1 = 0;  ///< real embeddings
  int r2 = 0;  ///< pairs of complex embeddings

  friend bool operator==(const Signature&, const Signature&) = default;
};

/// How irreducibility of a defining polynomial was established.
enum class IrreducibilityWitness { NotApplicable, NoRationalRootLowDegree, IrreducibleModPrime, FactorDegreeSieve };

/// A number field K given by an explicit presentation. Immutable once built.
class NumberField {
 public:
  FieldKind kind() const noexcept { return kind_; }
  int degree() const noexcept { return degree_; }
  Signature signature() const noexcept { return signature_; }
  std::int64_t discriminant() const noexcept { return discriminant_; }

  /// Squarefree d of Q(sqrt d); only meaningful for Quadratic.
  std::int64_t quadratic_d() const noexcept { return quadratic_d_; }

  /// Defining polynomial, highest degree first. x for Rational, x^2 - d for Quadratic.
  const std::vector<std::int64_t>& polynomial() const noexcept { return poly_; }

  /// True when disc(poly) is squarefree, so Z[theta] is certainly maximal.
  bool discriminant_squarefree() const noexcept { return disc_squarefree_; }

  /// Primes p with p^2 | disc(poly) (index may be divisible by these).
  const std::vector<std::uint64_t>& index_candidates() const noexcept { return index_candidates_; }

  IrreducibilityWitness irreducibility_witness() const noexcept { return witness_; }

  /// Canonical CLI spec string ("rational", "quad:-1", "poly:1,0,0,-2").
  const std::string& spec() const noexcept { return spec_; }

  /// The character chi_D governs splitting (Rational and Quadratic kinds).
  bool has_quadratic_character() const noexcept { return kind_ != FieldKind::Monogenic; }

  friend NumberField make_rational();
  friend NumberField make_quadratic(std::int64_t d);
  friend NumberField make_monogenic(const std::vector<std::int64_t>& coeffs);

 private:
  NumberField() = default;
  void check_signature() const {
    if (degree_ != signature_.r1 + 2 * signature_.r2) {
      throw Error(ErrorCode::DomainError, "signature does not satisfy n = r1 + 2 r2");
    }
  }

  FieldKind kind_ = FieldKind::Rational;
  int degree_ = 1;
  Signature signature_{1, 0};
  std::int64_t discriminant_ = 1;
  std::int64_t quadratic_d_ = 1;
  std::vector<std::int64_t> poly_{1, 0};
  bool disc_squarefree_ = true;
  std::vector<std::uint64_t> index_candidates_;
  IrreducibilityWitness witness_ = IrreducibilityWitness::NotApplicable;
  std::string spec_ = "rational";
};

namespace detail {

inline bool is_squarefree(std::int64_t v) {
  std::uint64_t a = static_cast<std::uint64_t>(v < 0 ? -v : v);
  for (std::uint64_t p = 2; p * p <= a; ++p) {
    if (a % (p * p) == 0) return false;
    if (a % p == 0) a /= p;
  }
  return true;
}

/// Primes p <= limit (found by trial division) with p^2 | v.
inline std::vector<std::uint64_t> square_prime_divisors(BigInt v, std::uint64_t limit = 10000000) {
  std::vector<std::uint64_t> out;
  v = abs(v);
  for (std::uint64_t p = 2; p <= limit && BigInt(p) * p <= v; ++p) {
    if (v % p != 0) continue;
    int e = 0;
    while (v % p == 0) {
      v /= p;
      ++e;
    }
    if (e >= 2) out.push_back(p);
  }
  return out;
}

inline std::string join_coeffs(const std::vector<std::int64_t>& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(c[i]);
  }
  return s;
}

}  // namespace detail

/// Q itself (n = 1): the baseline whose Mertens constant 3/pi^2 is classical.
inline NumberField make_rational() { return NumberField{}; }

inline NumberField make_quadratic(std::int64_t d) {
  if (d == 0 || d == 1) throw Error(ErrorCode::DisallowedValue, "d must not be 0 or 1");
  if (!detail::is_squarefree(d)) throw Error(ErrorCode::NotSquarefree, std::to_string(d) + " is not squarefree");
  NumberField K;
  K.kind_ = FieldKind::Quadratic;
  K.degree_ = 2;
  K.signature_ = d > 0 ? Signature{2, 0} : Signature{0, 1};
  const std::int64_t m4 = ((d % 4) + 4) % 4;
  K.discriminant_ = m4 == 1 ? d : 4 * d;
  K.quadratic_d_ = d;
  K.poly_ = {1, 0, -d};
  K.disc_squarefree_ = true;  // splitting is read from chi_D, never from the polynomial
  K.spec_ = "quad:" + std::to_string(d);
  K.check_signature();
  return K;
}

namespace detail {

inline std::set<int> subset_sums(const std::vector<int>& degrees) {
  std::set<int> sums{0};
  for (int d : degrees) {
    std::set<int> next = sums;
    for (int s : sums) next.insert(s + d);
    sums = std::move(next);
  }
  return sums;
}

// Irreducibility: a rational root disproves it; otherwise accept if the
// polynomial is irreducible modulo one of five good primes, or if the factor
// degrees possible modulo those primes share no proper degree.
inline IrreducibilityWitness decide_irreducible(const zpoly::Poly& f) {
  const int n = zpoly::degree(f);
  if (auto root = zpoly::find_rational_root(f)) {
    throw Error(ErrorCode::Reducible, "rational root " + root->str());
  }
  if (n <= 3) return IrreducibilityWitness::NoRationalRootLowDegree;
  std::set<int> common;
  for (int k = 1; k < n; ++k) common.insert(k);
  int used = 0;
  for (std::uint64_t p = 3; used < 5 && p < 10000; p += 2) {
    bool prime = true;
    for (std::uint64_t q = 3; q * q <= p; q += 2) {
      if (p % q == 0) {
        prime = false;
        break;
      }
    }
    if (!prime) continue;
    fpoly::Field F{p};
    fpoly::Poly fp = fpoly::reduce(F, f);
    if (fpoly::degree(fp) != n) continue;
    if (fpoly::degree(fpoly::gcd(F, fp, fpoly::derivative(F, fp))) > 0) continue;
    ++used;
    std::vector<int> degrees;
    for (auto [deg, count] : fpoly::distinct_degree_factorization(F, fpoly::monic(F, fp))) {
      for (int i = 0; i < count; ++i) degrees.push_back(deg);
    }
    if (degrees.size() == 1) return IrreducibilityWitness::IrreducibleModPrime;
    std::set<int> sums = subset_sums(degrees);
    std::set<int> kept;
    for (int k : common) {
      if (sums.count(k)) kept.insert(k);
    }
    common = std::move(kept);
    if (common.empty()) return IrreducibilityWitness::FactorDegreeSieve;
  }
  throw Error(ErrorCode::Undecided, "no rational root, but irreducibility not witnessed modulo five primes");
}

}  // namespace detail

/// K = Q[x]/(poly) for a monic irreducible integer polynomial, highest
/// coefficient first.
inline NumberField make_monogenic(const std::vector<std::int64_t>& coeffs) {
  if (coeffs.empty() || coeffs.front() != 1) throw Error(ErrorCode::NotMonic, "leading coefficient must be 1");
  if (coeffs.size() < 3) throw Error(ErrorCode::DisallowedValue, "degree must be at least 2");
  const zpoly::Poly f = zpoly::from_high_first(coeffs);
  NumberField K;
  K.kind_ = FieldKind::Monogenic;
  K.degree_ = zpoly::degree(f);
  K.witness_ = detail::decide_irreducible(f);
  const int real = zpoly::count_real_roots(f);
  K.signature_ = Signature{real, (K.degree_ - real) / 2};
  const BigInt disc = zpoly::discriminant(f);
  if (abs(disc) > BigInt(std::numeric_limits<std::int64_t>::max())) {
    throw Error(ErrorCode::Overflow, "polynomial discriminant exceeds 64 bits");
  }
  K.discriminant_ = disc.convert_to<std::int64_t>();
  K.index_candidates_ = detail::square_prime_divisors(disc);
  K.disc_squarefree_ = K.index_candidates_.empty();
  K.poly_ = coeffs;
  K.spec_ = "poly:" + detail::join_coeffs(coeffs);
  K.check_signature();
  return K;
}

namespace detail {

inline std::int64_t parse_int(std::string_view s, std::string_view whole) {
  if (s.empty()) throw Error(ErrorCode::BadSpec, "empty integer in '" + std::string(whole) + "'");
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') i = 1;
  if (i == s.size()) throw Error(ErrorCode::BadSpec, "bad integer in '" + std::string(whole) + "'");
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') throw Error(ErrorCode::BadSpec, "bad integer in '" + std::string(whole) + "'");
  }
  errno = 0;
  const std::string str(s);
  long long v = std::strtoll(str.c_str(), nullptr, 10);
  if (errno == ERANGE) throw Error(ErrorCode::BadSpec, "integer out of range in '" + std::string(whole) + "'");
  return v;
}

}  // namespace detail

/// Parses "rational", "quad:<d>" or "poly:<c_n>,...,<c_0>". No whitespace is
/// accepted anywhere.
inline NumberField parse_field_spec(std::string_view spec) {
  for (char c : spec) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      throw Error(ErrorCode::BadSpec, "whitespace in field spec '" + std::string(spec) + "'");
    }
  }
  if (spec == "rational") return make_rational();
  if (spec.starts_with("quad:")) return make_quadratic(detail::parse_int(spec.substr(5), spec));
  if (spec.starts_with("poly:")) {
    std::vector<std::int64_t> coeffs;
    std::string_view rest = spec.substr(5);
    while (true) {
      const auto comma = rest.find(',');
      coeffs.push_back(detail::parse_int(rest.substr(0, comma), spec));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return make_monogenic(coeffs);
  }
  throw Error(ErrorCode::BadSpec, "unknown field spec '" + std::string(spec) + "'");
}

}  // namespace dzlab

namespace dzlab {

enum class KappaMethod { ExactCharacterSeries, RegressionEstimate };

inline const char* to_string(KappaMethod m) {
  return m == KappaMethod::ExactCharacterSeries ? "ExactCharacterSeries" : "RegressionEstimate";
}

struct Kappa {
  double value = 0.0;
  KappaMethod method = KappaMethod::ExactCharacterSeries;
  double error_bar = 0.0;
};

/// Analytic constants of K: the residue kappa of zeta_K at s = 1, zeta_K(2),
/// and the Mertens constant kappa / (2 zeta_K(2)).
struct FieldInvariants {
  Kappa kappa;
  double zeta_2 = 0.0;
  double zeta_2_error = 0.0;
  double mertens_constant = 0.0;

  static FieldInvariants make(Kappa kappa, double zeta_2, double zeta_2_error) {
    if (!(kappa.value > 0)) throw Error(ErrorCode::DomainError, "kappa must be positive");
    if (!(zeta_2 > 1)) throw Error(ErrorCode::DomainError, "zeta_K(2) must exceed 1");
    return FieldInvariants{kappa, zeta_2, zeta_2_error, kappa.value / (2.0 * zeta_2)};
  }

  /// kappa / zeta_K(2): density of the limit measure against q dq.
  double limit_density() const { return kappa.value / zeta_2; }
};

}  // namespace dzlab
