#pragma once

// Invariant suite over one field and one sieve bound. Every module invariant
// that finishes in seconds is run and reported as a named pass/fail line.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "dzlab/cache.hpp"
#include "dzlab/field.hpp"
#include "dzlab/measure.hpp"
#include "dzlab/mellin.hpp"
#include "dzlab/oracles.hpp"
#include "dzlab/sieve.hpp"
#include "dzlab/splitting.hpp"
#include "dzlab/zeta.hpp"

namespace dzlab {

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::string field_spec;
  std::uint64_t X = 0;
  std::vector<CheckResult> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

namespace detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class Checker {
 public:
  explicit Checker(VerifyReport& report) : report_(report) {}

  /// Runs `body`, which returns (passed, detail); exceptions count as failures.
  void run(const std::string& module, const std::string& name,
           const std::function<std::pair<bool, std::string>()>& body) {
    CheckResult r{module, name, false, ""};
    try {
      auto [ok, detail] = body();
      r.passed = ok;
      r.detail = std::move(detail);
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    report_.checks.push_back(std::move(r));
  }

 private:
  VerifyReport& report_;
};

}  // namespace detail

/// Dirichlet convolution (a * b)(m) for m <= M.
inline std::vector<int128> dirichlet_convolve(const std::function<int128(std::uint64_t)>& a,
                                              const std::function<int128(std::uint64_t)>& b, std::uint64_t M) {
  std::vector<int128> out(M + 1, 0);
  for (std::uint64_t d = 1; d <= M; ++d) {
    const int128 ad = a(d);
    if (ad == 0) continue;
    for (std::uint64_t k = 1; d * k <= M; ++k) out[d * k] += ad * b(k);
  }
  return out;
}

inline VerifyReport verify_field(const NumberField& K, std::uint64_t X) {
  if (X < 1000) throw Error(ErrorCode::Config, "verify needs X >= 1000");
  VerifyReport report{K.spec(), X, {}};
  detail::Checker check(report);
  using detail::fmt;
  const int n = K.degree();
  const bool quadratic = K.kind() == FieldKind::Quadratic;
  const bool continuation = K.kind() != FieldKind::Monogenic;
  std::mt19937_64 rng(20240611);

  // field_core
  check.run("field_core", "signature satisfies n = r1 + 2 r2", [&] {
    const auto sig = K.signature();
    return std::pair{n == sig.r1 + 2 * sig.r2, "n=" + std::to_string(n) + " r1=" + std::to_string(sig.r1) +
                                                    " r2=" + std::to_string(sig.r2)};
  });
  if (quadratic) {
    const std::int64_t d = K.quadratic_d();
    check.run("field_core", "monogenic presentation x^2 - d agrees on (n, signature)", [&] {
      const NumberField M = make_monogenic({1, 0, -d});
      bool ok = M.degree() == n && M.signature() == K.signature();
      // disc(x^2 - d) = 4d equals D exactly when d = 2, 3 mod 4
      if (((d % 4) + 4) % 4 != 1) ok = ok && M.discriminant() == K.discriminant();
      return std::pair{ok, "disc(poly)=" + std::to_string(M.discriminant()) + " D=" + std::to_string(K.discriminant())};
    });
  }

  // prime_splitter
  const std::uint64_t split_bound = std::min<std::uint64_t>(X, 100000);
  check.run("prime_splitter", "sum e f = n for every p <= " + std::to_string(split_bound), [&] {
    std::size_t bad = 0, total = 0;
    for (std::uint64_t p : primes_up_to(split_bound)) {
      ++total;
      if (split_prime(K, p).degree_sum() != n) ++bad;
    }
    return std::pair{bad == 0, std::to_string(total) + " primes, " + std::to_string(bad) + " violations"};
  });
  if (quadratic && ((K.quadratic_d() % 4) + 4) % 4 != 1) {
    check.run("prime_splitter", "quadratic and monogenic paths agree on split shapes", [&] {
      const NumberField M = make_monogenic({1, 0, -K.quadratic_d()});
      std::size_t bad = 0;
      for (std::uint64_t p : primes_up_to(split_bound)) {
        if (split_prime(K, p).entries != split_prime(M, p).entries) ++bad;
      }
      return std::pair{bad == 0, std::to_string(bad) + " disagreements up to " + std::to_string(split_bound)};
    });
  }

  const FieldTables tables = build_tables(K, X);
  check.run("prime_splitter", "every listed norm is a prime power <= X with the right multiplicity", [&] {
    bool ok = true;
    for (const auto& it : tables.primes.items) {
      std::uint64_t v = it.norm;
      while (v % it.p == 0) v /= it.p;
      ok = ok && v == 1 && it.norm <= X && it.multiplicity >= 1;
    }
    return std::pair{ok, std::to_string(tables.primes.count()) + " prime ideals"};
  });

  // dirichlet_sieve
  const CoeffTable& a = tables.ideal_count;
  const CoeffTable& phi = tables.totient_sum;
  const CoeffTable& mu = tables.moebius_sum;
  check.run("dirichlet_sieve", "values[1] = 1, a_K >= 0, 0 <= S_phi(m) <= m a_K(m)", [&] {
    bool ok = a[1] == 1 && phi[1] == 1 && mu[1] == 1;
    for (std::uint64_t m = 1; m <= X; ++m) {
      ok = ok && a[m] >= 0 && phi[m] >= 0 && phi[m] <= static_cast<int128>(m) * a[m];
    }
    return std::pair{ok, std::string("width ") + std::to_string(phi.width_bytes()) + " bytes"};
  });
  const std::uint64_t conv_bound = std::min<std::uint64_t>(X, 10000);
  check.run("dirichlet_sieve", "sum_{d|m} S_mu(d) a_K(m/d) = [m = 1] for m <= " + std::to_string(conv_bound), [&] {
    const auto c = dirichlet_convolve([&](auto d) { return mu[d]; }, [&](auto k) { return a[k]; }, conv_bound);
    bool ok = c[1] == 1;
    for (std::uint64_t m = 2; m <= conv_bound; ++m) ok = ok && c[m] == 0;
    return std::pair{ok, std::string()};
  });
  check.run("dirichlet_sieve", "S_phi(m) = sum_{d|m} S_mu(d) (m/d) a_K(m/d) for m <= " + std::to_string(conv_bound), [&] {
    const auto c = dirichlet_convolve([&](auto d) { return mu[d]; },
                                      [&](auto k) { return static_cast<int128>(k) * a[k]; }, conv_bound);
    bool ok = true;
    for (std::uint64_t m = 1; m <= conv_bound; ++m) ok = ok && c[m] == phi[m];
    return std::pair{ok, std::string()};
  });
  check.run("dirichlet_sieve", "a_K multiplicative on 1000 random coprime pairs", [&] {
    std::uniform_int_distribution<std::uint64_t> dist(1, static_cast<std::uint64_t>(std::sqrt(static_cast<double>(X))));
    int tested = 0;
    bool ok = true;
    while (tested < 1000) {
      const std::uint64_t m = dist(rng), k = dist(rng);
      if (std::gcd(m, k) != 1 || m * k > X) continue;
      ok = ok && a[m * k] == a[m] * a[k];
      ++tested;
    }
    return std::pair{ok, std::string()};
  });
  if (quadratic) {
    const std::uint64_t bound = std::min<std::uint64_t>(X, 100000);
    check.run("dirichlet_sieve", "a_K(m) equals the divisor sum of chi_D for m <= " + std::to_string(bound), [&] {
      std::size_t bad = 0;
      for (std::uint64_t m = 1; m <= bound; ++m) bad += a[m] != oracle_quadratic_count(K.discriminant(), m);
      return std::pair{bad == 0, std::to_string(bad) + " mismatches"};
    });
  }
  if (quadratic && K.discriminant() == -4) {
    const std::uint64_t bound = std::min<std::uint64_t>(X, 10000);
    check.run("dirichlet_sieve", "N(x) equals the Gaussian lattice count for x <= " + std::to_string(bound), [&] {
      int128 running = 0;
      std::size_t bad = 0;
      for (std::uint64_t x = 1; x <= bound; ++x) {
        running += a[x];
        bad += running != oracle_gaussian_count(x);
      }
      return std::pair{bad == 0, std::to_string(bad) + " mismatches"};
    });
  }
  check.run("dirichlet_sieve", "Phi_K(x) is nondecreasing and matches summatory", [&] {
    int128 running = 0;
    bool ok = true;
    for (std::uint64_t x = 1; x <= X; ++x) {
      const int128 next = running + phi[x];
      ok = ok && next >= running;
      running = next;
    }
    ok = ok && running == summatory(phi, X);
    return std::pair{ok, "Phi_K(X)=" + to_string(running)};
  });

  // zeta_engine
  const FieldInvariants inv = compute_invariants(K, &a);
  check.run("dirichlet_sieve", "|N(x) - kappa x| / x^{1-1/n} stays bounded over decades", [&] {
    std::vector<std::uint64_t> xs;
    for (std::uint64_t x = 10000; x <= X; x *= 10) xs.push_back(x);
    if (xs.empty()) xs.push_back(X);
    double worst = 0;
    std::string detail;
    for (const auto& s : ideal_count_report(a, inv.kappa.value, n, xs)) {
      worst = std::max(worst, std::fabs(s.normalized));
      detail += "x=" + std::to_string(s.x) + ":" + fmt(s.normalized) + " ";
    }
    return std::pair{worst < 2.0, detail};
  });
  check.run("zeta_engine", "kappa > 0, zeta_K(2) > 1, mertens constant = kappa / (2 zeta_K(2))", [&] {
    const bool ok = inv.kappa.value > 0 && inv.zeta_2 > 1 && inv.mertens_constant == inv.kappa.value / (2.0 * inv.zeta_2);
    return std::pair{ok, "kappa=" + fmt(inv.kappa.value) + " (" + to_string(inv.kappa.method) + ") zeta_K(2)=" +
                             fmt(inv.zeta_2)};
  });
  if (continuation && X >= 100000) {
    check.run("zeta_engine", "kappa regression agrees with the character series within its bar", [&] {
      const Kappa reg = residue_kappa_regression(a, n);
      const double dev = std::fabs(reg.value - inv.kappa.value);
      return std::pair{dev <= reg.error_bar, "dev=" + fmt(dev) + " bar=" + fmt(reg.error_bar)};
    });
  }
  check.run("zeta_engine", "series and Euler product agree within tails at 20 points with Re(s) >= 2", [&] {
    std::uniform_real_distribution<double> re(2.0, 4.0), im(-10.0, 10.0);
    double worst = 0;
    bool ok = true;
    for (int i = 0; i < 20; ++i) {
      const Complex s(re(rng), im(rng));
      const ComplexValue ser = zeta_K_series(a, n, s, inv.kappa.value);
      const ComplexValue prod = euler_product(tables.primes, n, s);
      const double dev = std::abs(ser.value - prod.value);
      ok = ok && dev <= ser.abs_err + prod.abs_err + 1e-13;
      worst = std::max(worst, dev);
    }
    return std::pair{ok, "max |series - product| = " + fmt(worst)};
  });
  check.run("zeta_engine", "zeta_K(conj s) = conj zeta_K(s) exactly", [&] {
    const ZetaEvaluator z(K, &a, inv.kappa.value);
    bool ok = true;
    for (Complex s : {Complex(2.5, 3.0), Complex(1.7, -11.0), Complex(3.0, 0.5)}) {
      ok = ok && z(std::conj(s)).value == std::conj(z(s).value);
    }
    return std::pair{ok, std::string()};
  });
  check.run("zeta_engine", "zeta_K(2) equals the Euler product within tails", [&] {
    const ComplexValue prod = euler_product(tables.primes, n, Complex(2.0, 0.0));
    const double dev = std::fabs(prod.re() - inv.zeta_2);
    return std::pair{dev <= prod.abs_err + inv.zeta_2_error, "dev=" + fmt(dev) + " tail=" + fmt(prod.abs_err)};
  });
  if (continuation) {
    check.run("zeta_engine", "growth exponent profile nonnegative and nonincreasing within 0.05", [&] {
      const LindelofProfile prof = lindelof_profile(K, {0.0, 0.25, 0.5, 0.75, 1.0, 1.5}, 1e4, 600);
      std::string detail;
      for (const auto& p : prof.points) detail += fmt(p.sigma) + ":" + fmt(p.nu_hat) + " ";
      const bool ok = prof.nonnegative && prof.nonincreasing && prof.points.back().nu_hat <= 0.05;
      return std::pair{ok, detail};
    });
    check.run("zeta_engine", "functional equation defect < 1e-6", [&] {
      double worst = 0;
      for (Complex s : {Complex(0.25, 3.0), Complex(0.3, 0.0), Complex(0.7, 1.0)}) {
        worst = std::max(worst, functional_equation_check(K, s));
      }
      return std::pair{worst < 1e-6, "max defect " + fmt(worst)};
    });
  }

  // measure_lab
  const TestFunction ind = TestFunction::indicator(1.0, 2.0);
  const TestFunction bump = TestFunction::smooth_bump(1.0, 2.0);
  const TestFunction f2 = TestFunction::poly_bump(2);
  const std::vector<double> qs = {0.3, 0.1, 0.03, 0.01, 1e-3, 1e-4};
  check.run("measure_lab", "dilation covariance m_q(f_l) = l^-2 m_{l^2 q}(f) for l in {2, 1/3}", [&] {
    double worst = 0;
    for (const TestFunction& f : {ind, bump, f2}) {
      for (double l : {2.0, 1.0 / 3.0}) {
        const TestFunction g = f.scaled(l);
        for (double q : qs) {
          if (required_norm_bound(std::max(f.support_hi(), g.support_hi()), std::min(q, l * l * q)) > X) continue;
          const double lhs = m_q(phi, g, q), rhs = m_q(phi, f, l * l * q) / (l * l);
          worst = std::max(worst, std::fabs(lhs - rhs) / std::max(1e-300, std::fabs(rhs)));
        }
        const double ml = m_limit(inv, g), mr = m_limit(inv, f) / (l * l);
        worst = std::max(worst, std::fabs(ml - mr) / mr);
      }
    }
    return std::pair{worst < 1e-12, "max relative defect " + fmt(worst)};
  });
  check.run("measure_lab", "linearity and monotonicity of m_q", [&] {
    const TestFunction wide = TestFunction::indicator(0.5, 3.0);
    bool ok = true;
    double worst = 0;
    for (double q : qs) {
      if (required_norm_bound(3.0, q) > X) continue;
      auto combo = [&](double t) { return 2.0 * ind(t) - 0.5 * bump(t); };
      const double lhs = m_q_generic(phi, combo, 0.5, 2.0, q);
      const double rhs = 2.0 * m_q(phi, ind, q) - 0.5 * m_q(phi, bump, q);
      worst = std::max(worst, std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs)));
      ok = ok && m_q(phi, ind, q) <= m_q(phi, wide, q);
    }
    return std::pair{ok && worst < 1e-13, "linearity defect " + fmt(worst)};
  });
  check.run("measure_lab", "m_q(indicator(0+, b)) = q Phi_K(floor(b / sqrt q)) bit-exactly", [&] {
    bool ok = true;
    for (double q : qs) {
      const double b = 1.5;
      const std::uint64_t top = required_norm_bound(b, q);
      if (top > X || top < 1) continue;
      const double lhs = m_q(phi, TestFunction::indicator(1e-12, b), q);
      ok = ok && lhs == q * static_cast<double>(summatory(phi, top));
    }
    return std::pair{ok, std::string()};
  });
  if (quadratic) {
    const double q_lo = std::max(1e-5, std::pow(2.0 / static_cast<double>(X), 2));
    check.run("measure_lab", "smooth bump: q^{-1/2}|E| decays from the first to the last decade", [&] {
      const auto curve = error_curve(phi, inv, bump, geometric_grid(1e-1, q_lo, 48));
      double first = 0, last = 0, sup = 0;
      for (const auto& s : curve) {
        const double v = std::fabs(s.error_over_sqrt_q());
        sup = std::max(sup, v);
        if (s.q >= 1e-2) first = std::max(first, v);
        if (s.q <= 10 * q_lo) last = std::max(last, v);
      }
      return std::pair{std::isfinite(sup) && last < first,
                       "first decade max " + fmt(first) + ", last decade max " + fmt(last)};
    });
  }

  // mellin_engine
  const MellinContext ctx{K, &tables, inv};
  const double q0 = std::max(1e-9, std::pow(2.0 / static_cast<double>(X), 2));
  check.run("mellin_engine", "numeric transform matches 2 phi_K(s) I_f(s) within 1e-3", [&] {
    double worst = 0;
    for (const TestFunction& f : {ind, f2, TestFunction::poly_bump(3)}) {
      for (Complex s : {Complex(1.5, 0), Complex(2.0, 0), Complex(1.25, 1), Complex(2, 3)}) {
        const Complex c = mellin_closed(ctx, f, s).value.value;
        const Complex v = mellin_numeric(ctx, f, s, q0).value.value;
        worst = std::max(worst, std::abs(v - c) / std::abs(c));
      }
    }
    return std::pair{worst < 1e-3, "max relative defect " + fmt(worst)};
  });
  check.run("mellin_engine", "M_f(conj s) = conj M_f(s)", [&] {
    double worst = 0;
    for (Complex s : {Complex(1.5, 2.0), Complex(2.0, -7.0)}) {
      const Complex a1 = mellin_closed(ctx, f2, s).value.value;
      const Complex a2 = mellin_closed(ctx, f2, std::conj(s)).value.value;
      worst = std::max(worst, std::abs(a1 - std::conj(a2)) / std::abs(a1));
    }
    return std::pair{worst < 1e-14, fmt(worst)};
  });
  check.run("mellin_engine", "B(r+1, 2s) prod_{k=0}^{r} (2s+k) = r! for r <= 6", [&] {
    std::uniform_real_distribution<double> re(0.3, 4.0), im(-20.0, 20.0);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
      const Complex s(re(rng), im(rng));
      for (int r = 1; r <= 6; ++r) {
        Complex prod = beta(Complex(r + 1.0, 0), 2.0 * s);
        double fact = 1;
        for (int k = 0; k <= r; ++k) prod *= 2.0 * s + static_cast<double>(k);
        for (int k = 2; k <= r; ++k) fact *= k;
        worst = std::max(worst, std::abs(prod - fact) / fact);
      }
    }
    return std::pair{worst < 1e-12, fmt(worst)};
  });
  if (continuation) {
    check.run("mellin_engine", "Richardson limit of (s-1) M_f(s) at s -> 1+ is m(f) within 1e-4", [&] {
      const ResidueCheck rc = residue_check(ctx, f2);
      return std::pair{rc.defect < 1e-4, "limit " + fmt(rc.extrapolated) + " vs " + fmt(rc.m_limit)};
    });
    check.run("mellin_engine", "xi factor of M*(f, s) is symmetric under s -> 3/2 - s", [&] {
      const StarSymmetry st = mellin_star_symmetry(K, f2, Complex(0.7, 1.0));
      return std::pair{st.reflected_defect < 1e-5, "defect " + fmt(st.reflected_defect) +
                                                       " (s -> 1-s on the full M*: " + fmt(st.literal_defect) + ")"};
    });
  }

  // cli_report
  check.run("cli_report", "cache encode/decode reproduces identical tables", [&] {
    const FieldTables back = decode_cache(encode_cache(tables));
    const bool ok = back.ideal_count == a && back.totient_sum == phi && back.moebius_sum == mu &&
                    back.primes.items == tables.primes.items;
    return std::pair{ok, std::string()};
  });
  return report;
}

}  // namespace dzlab
