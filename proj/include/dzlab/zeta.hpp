#pragma once

// Evaluation of zeta_K and the ratio zeta_K(2s-1)/zeta_K(2s).
//
// Two routes:
//  * series: sum a_K(m) m^{-s} over the sieved table plus an Abel-summation
//    tail; any field, Re(s) > 1 only.
//  * continuation: zeta_K = zeta * L(s, chi_D) for Q and quadratic fields,
//    each factor written through Hurwitz zeta values evaluated by
//    Euler-Maclaurin summation; valid for every s != 1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "dzlab/error.hpp"
#include "dzlab/field.hpp"
#include "dzlab/numeric.hpp"
#include "dzlab/sieve.hpp"
#include "dzlab/splitting.hpp"

namespace dzlab {

/// A complex value with a best-effort (not rigorous) absolute error.
struct ComplexValue {
  Complex value{};
  double abs_err = 0.0;

  double re() const { return value.real(); }
  double im() const { return value.imag(); }

  friend ComplexValue operator*(const ComplexValue& a, const ComplexValue& b) {
    return {a.value * b.value, std::abs(a.value) * b.abs_err + std::abs(b.value) * a.abs_err + a.abs_err * b.abs_err};
  }
  friend ComplexValue operator/(const ComplexValue& a, const ComplexValue& b) {
    const double mb = std::abs(b.value);
    const double rel = a.abs_err / std::max(std::abs(a.value), 1e-300) + b.abs_err / mb;
    const Complex q = a.value / b.value;
    return {q, std::abs(q) * rel};
  }
};

// ---------------------------------------------------------------------------
// Hurwitz zeta

/// zeta(s, a) - 1/(s - 1) for a in (0, 1], by Euler-Maclaurin summation.
/// Regular at s = 1, where it equals -digamma(a).
inline ComplexValue hurwitz_regularized(Complex s, double a) {
  constexpr int kTerms = static_cast<int>(kBernoulliEven.size());
  const double reach = std::abs(s) + 2.0 * kTerms;
  const auto N = static_cast<long>(12 + std::ceil(reach / std::numbers::pi));
  CompensatedSum<Complex> head;
  for (long k = N - 1; k >= 0; --k) {
    const double base = static_cast<double>(k) + a;
    head.add(std::exp(-s * std::log(base)));
  }
  const double w = static_cast<double>(N) + a;
  const double L = std::log(w);
  const Complex w_neg_s = std::exp(-s * L);
  // ((N+a)^{1-s} - 1)/(s-1)
  Complex total = head.value() - L * expm1_over((1.0 - s) * L) + 0.5 * w_neg_s;
  // sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) * w^{-s-2j+1}
  Complex rising = s;        // s (s+1) ... (s + 2j - 2)
  Complex power = w_neg_s / w;  // w^{-s-1}
  double factorial = 2.0;    // (2j)!
  double last = 0.0;
  for (int j = 1; j <= kTerms; ++j) {
    const Complex term = kBernoulliEven[static_cast<std::size_t>(j - 1)] / factorial * rising * power;
    total += term;
    last = std::abs(term);
    rising *= (s + static_cast<double>(2 * j - 1)) * (s + static_cast<double>(2 * j));
    power /= w * w;
    factorial *= static_cast<double>((2 * j + 1) * (2 * j + 2));
  }
  const double roundoff = 1e-15 * (static_cast<double>(N) + std::abs(total));
  return {total, last + roundoff};
}

/// Riemann zeta(s), s != 1.
inline ComplexValue riemann_zeta(Complex s) {
  if (std::abs(s - 1.0) < 1e-9) throw Error(ErrorCode::PoleAt1, "zeta has a pole at s = 1");
  ComplexValue r = hurwitz_regularized(s, 1.0);
  r.value += 1.0 / (s - 1.0);
  return r;
}

/// L(s, chi_D) = |D|^{-s} sum_{a=1}^{|D|} chi_D(a) zeta(s, a/|D|); the pole
/// terms cancel because chi_D sums to zero over a period.
inline ComplexValue dirichlet_l(std::int64_t D, Complex s) {
  const std::int64_t q = D < 0 ? -D : D;
  if (q == 1) return riemann_zeta(s);
  CompensatedSum<Complex> sum;
  double err = 0;
  for (std::int64_t a = 1; a < q; ++a) {
    const int chi = kronecker(D, static_cast<std::uint64_t>(a));
    if (chi == 0) continue;
    ComplexValue h = hurwitz_regularized(s, static_cast<double>(a) / static_cast<double>(q));
    sum.add(static_cast<double>(chi) * h.value);
    err += h.abs_err;
  }
  const Complex scale = std::exp(-s * std::log(static_cast<double>(q)));
  return {scale * sum.value(), std::abs(scale) * err};
}

/// Alternating-series (eta function) evaluation of zeta(s) with Borwein's
/// acceleration; an independent check on `riemann_zeta` for moderate |Im s|.
inline Complex zeta_eta_accelerated(Complex s, int n = 60) {
  std::vector<double> d(static_cast<std::size_t>(n) + 1);
  double term = 1.0, acc = 1.0;
  d[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    term *= 4.0 * (n + i) * (n - i) / ((2.0 * i + 1.0) * (2.0 * i + 2.0));
    acc += term;
    d[static_cast<std::size_t>(i) + 1] = acc;
  }
  const double dn = d[static_cast<std::size_t>(n)];
  Complex sum = 0;
  for (int k = 0; k < n; ++k) {
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    sum += sign * (d[static_cast<std::size_t>(k)] - dn) * std::exp(-s * std::log(k + 1.0));
  }
  return -sum / (dn * (1.0 - std::exp((1.0 - s) * std::log(2.0))));
}

// ---------------------------------------------------------------------------
// zeta_K

/// zeta_K(s) by analytic continuation (Q and quadratic fields only).
inline ComplexValue zeta_K_quadratic(const NumberField& K, Complex s) {
  if (std::abs(s - 1.0) < 1e-9) throw Error(ErrorCode::PoleAt1, "zeta_K has a pole at s = 1");
  switch (K.kind()) {
    case FieldKind::Rational:
      return riemann_zeta(s);
    case FieldKind::Quadratic:
      return riemann_zeta(s) * dirichlet_l(K.discriminant(), s);
    case FieldKind::Monogenic:
      break;
  }
  throw Error(ErrorCode::DomainError, "continuation is only available for Q and quadratic fields");
}

/// Constant C in |N(x) - kappa x| <= C x^{1-1/n}, observed over [X/10, X].
inline double ideal_count_error_constant(const CoeffTable& count, double kappa, int degree) {
  const std::uint64_t X = count.X();
  const std::uint64_t lo = std::max<std::uint64_t>(1, X / 10);
  const double expo = 1.0 - 1.0 / degree;
  int128 running = 0;
  double c = 0;
  for (std::uint64_t x = 1; x <= X; ++x) {
    running += count[x];
    if (x < lo) continue;
    const double dev = std::fabs(static_cast<double>(running) - kappa * static_cast<double>(x));
    c = std::max(c, dev / std::pow(static_cast<double>(x), expo));
  }
  return c;
}

/// zeta_K(s) = sum a_K(m) m^{-s} over the table. Without `kappa` the result is
/// the bare partial sum with abs_err = kappa_hat X^{1-sigma} |s|/(sigma-1),
/// kappa_hat = N(X)/X. With `kappa` the Abel-summation tail
/// s kappa X^{1-s}/(s-1) - N(X) X^{-s} is added and abs_err bounds the rest
/// through the observed ideal-count error constant.
inline ComplexValue zeta_K_series(const CoeffTable& count, int degree, Complex s,
                                  std::optional<double> kappa = std::nullopt) {
  if (count.kind() != CoeffKind::IdealCount) throw Error(ErrorCode::DomainError, "series needs an IdealCount table");
  const double sigma = s.real();
  if (sigma <= 1.01) {
    throw Error(ErrorCode::DomainError, "series route needs Re(s) > 1.01; use zeta_K_quadratic for the strip");
  }
  const std::uint64_t X = count.X();
  CompensatedSum<Complex> sum;
  int128 n_of_x = 0;
  for (std::uint64_t m = X; m >= 1; --m) {
    const double c = count.as_double(m);
    n_of_x += count[m];
    if (c != 0.0) sum.add(c * std::exp(-s * std::log(static_cast<double>(m))));
  }
  const double Xd = static_cast<double>(X);
  const double NX = static_cast<double>(n_of_x);
  if (!kappa) {
    const double kappa_hat = NX / Xd;
    return {sum.value(), kappa_hat * std::pow(Xd, 1.0 - sigma) * std::abs(s) / (sigma - 1.0)};
  }
  const Complex x_neg_s = std::exp(-s * std::log(Xd));
  const Complex tail = s * (*kappa) * Xd * x_neg_s / (s - 1.0) - NX * x_neg_s;
  const double C = ideal_count_error_constant(count, *kappa, degree);
  const double expo = 1.0 - 1.0 / degree - sigma;
  const double err = std::abs(s) * C * std::pow(Xd, expo) / (-expo) + 1e-15 * std::abs(sum.value());
  return {sum.value() + tail, err};
}

/// prod over prime-ideal norms N <= X of (1 - N^{-s})^{-1}.
inline ComplexValue euler_product(const PrimeIdealClassList& primes, int degree, Complex s) {
  const double sigma = s.real();
  if (sigma <= 1.0) throw Error(ErrorCode::DomainError, "Euler product needs Re(s) > 1");
  CompensatedSum<Complex> log_sum;
  for (const auto& cls : primes.items) {
    const Complex term = std::exp(-s * std::log(static_cast<double>(cls.norm)));
    log_sum.add(-static_cast<double>(cls.multiplicity) * std::log(1.0 - term));
  }
  const Complex value = std::exp(log_sum.value());
  const double X = static_cast<double>(primes.X);
  // At most n prime ideals above each p > X; sum_{p > X} p^{-sigma} < X^{1-sigma}/((sigma-1) log X).
  const double tail = degree * std::pow(X, 1.0 - sigma) / ((sigma - 1.0) * std::log(X));
  return {value, std::abs(value) * 2.0 * tail};
}

/// Residue of zeta_K at s = 1. Q: exactly 1. Quadratic: L(1, chi_D) from the
/// period-blocked character series (Hurwitz values at s = 1). Otherwise the
/// least-squares slope of N(x) against x over [X/10, X].
inline Kappa residue_kappa_regression(const CoeffTable& count, int degree) {
  if (count.kind() != CoeffKind::IdealCount) throw Error(ErrorCode::DomainError, "regression needs an IdealCount table");
  const std::uint64_t X = count.X();
  if (X < 100) throw Error(ErrorCode::InsufficientData, "kappa regression needs X >= 100");
  const std::uint64_t lo = X / 10;
  long double sxy = 0, sxx = 0;
  int128 running = 0;
  for (std::uint64_t x = 1; x <= X; ++x) {
    running += count[x];
    if (x < lo) continue;
    const long double xl = static_cast<long double>(x);
    sxy += xl * static_cast<long double>(running);
    sxx += xl * xl;
  }
  const double kappa = static_cast<double>(sxy / sxx);
  const double C = ideal_count_error_constant(count, kappa, degree);
  // |N(x)/x - kappa| <= C x^{-1/n}; doubled and taken at the low end of the window.
  const double bar = 2.0 * C * std::pow(static_cast<double>(lo), -1.0 / degree);
  return Kappa{kappa, KappaMethod::RegressionEstimate, bar};
}

inline Kappa residue_kappa(const NumberField& K, const CoeffTable* count = nullptr) {
  switch (K.kind()) {
    case FieldKind::Rational:
      return Kappa{1.0, KappaMethod::ExactCharacterSeries, 0.0};
    case FieldKind::Quadratic: {
      const ComplexValue L = dirichlet_l(K.discriminant(), Complex(1.0, 0.0));
      return Kappa{L.re(), KappaMethod::ExactCharacterSeries, L.abs_err};
    }
    case FieldKind::Monogenic:
      break;
  }
  if (count == nullptr) throw Error(ErrorCode::DomainError, "kappa for this field needs an IdealCount table");
  return residue_kappa_regression(*count, K.degree());
}

/// Evaluates zeta_K by the best available route: continuation for Q and
/// quadratic fields, the tail-corrected series otherwise.
class ZetaEvaluator {
 public:
  ZetaEvaluator(const NumberField& K, const CoeffTable* count, std::optional<double> kappa = std::nullopt)
      : K_(K), count_(count), kappa_(kappa) {}

  const NumberField& field() const { return K_; }
  bool has_continuation() const { return K_.kind() != FieldKind::Monogenic; }

  ComplexValue operator()(Complex s) const {
    if (has_continuation()) return zeta_K_quadratic(K_, s);
    if (count_ == nullptr) throw Error(ErrorCode::DomainError, "series route needs an IdealCount table");
    return zeta_K_series(*count_, K_.degree(), s, kappa_);
  }

 private:
  const NumberField& K_;
  const CoeffTable* count_;
  std::optional<double> kappa_;
};

/// kappa, zeta_K(2) and the Mertens constant.
inline FieldInvariants compute_invariants(const NumberField& K, const CoeffTable* count) {
  const Kappa kappa = residue_kappa(K, count);
  const ComplexValue z2 = ZetaEvaluator(K, count, kappa.value)(Complex(2.0, 0.0));
  return FieldInvariants::make(kappa, z2.re(), z2.abs_err);
}

enum class RatioRoute { Auto, Series, Continuation };

/// phi_K(s) = zeta_K(2s-1) / zeta_K(2s).
inline ComplexValue phi_ratio(const NumberField& K, const CoeffTable* count, std::optional<double> kappa, Complex s,
                              RatioRoute route = RatioRoute::Auto) {
  auto eval = [&](Complex w) -> ComplexValue {
    const bool series = route == RatioRoute::Series || (route == RatioRoute::Auto && K.kind() == FieldKind::Monogenic);
    if (series) {
      if (count == nullptr) throw Error(ErrorCode::DomainError, "series route needs an IdealCount table");
      return zeta_K_series(*count, K.degree(), w, kappa);
    }
    return zeta_K_quadratic(K, w);
  };
  const ComplexValue num = eval(2.0 * s - 1.0);
  const ComplexValue den = eval(2.0 * s);
  if (std::abs(den.value) < 10.0 * den.abs_err) {
    throw Error(ErrorCode::DivisionNearZero, "|zeta_K(2s)| is within the noise of its evaluation");
  }
  return num / den;
}

// ---------------------------------------------------------------------------
// Growth along vertical lines

struct LindelofFit {
  double sigma = 0.0;
  double raw_slope = 0.0;  ///< 95th-quantile regression slope of log|zeta_K| on log t
  double nu_hat = 0.0;     ///< max(raw_slope, 0): exponents are nonnegative by definition
  double intercept = 0.0;
  std::size_t samples = 0;
};

/// Empirical growth exponent of zeta_K on Re(s) = sigma over t in [2, T],
/// fitted to the upper envelope by 95th-quantile regression on log-spaced t.
inline LindelofFit lindelof_probe(const NumberField& K, double sigma, double T, std::size_t samples) {
  if (K.kind() == FieldKind::Monogenic) throw Error(ErrorCode::DomainError, "growth probe needs the continuation route");
  if (!(T > 2.0) || T > 1e4 + 1e-9) throw Error(ErrorCode::Config, "T must lie in (2, 1e4]");
  if (samples < 8) throw Error(ErrorCode::InsufficientData, "growth probe needs >= 8 samples");
  std::vector<double> x(samples), y(samples);
  const double lt0 = std::log(2.0), lt1 = std::log(T);
  for (std::size_t i = 0; i < samples; ++i) {
    const double lt = lt0 + (lt1 - lt0) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const ComplexValue z = zeta_K_quadratic(K, Complex(sigma, std::exp(lt)));
    x[i] = lt;
    y[i] = std::log(std::max(std::abs(z.value), 1e-300));
  }
  const LineFit fit = quantile_regression(x, y, 0.95);
  return LindelofFit{sigma, fit.slope, std::max(fit.slope, 0.0), fit.intercept, samples};
}

struct LindelofProfile {
  std::vector<LindelofFit> points;  ///< ascending sigma
  bool nonnegative = true;          ///< raw slopes >= -tolerance
  bool nonincreasing = true;        ///< nu_hat(sigma_{j+1}) <= nu_hat(sigma_j) + tolerance
  double max_increase = 0.0;
  double convexity_defect = 0.0;    ///< largest excess of nu_hat over a chord
};

inline LindelofProfile lindelof_profile(const NumberField& K, std::vector<double> sigmas, double T, std::size_t samples,
                                        double tolerance = 0.05) {
  std::sort(sigmas.begin(), sigmas.end());
  LindelofProfile prof;
  for (double s : sigmas) prof.points.push_back(lindelof_probe(K, s, T, samples));
  for (std::size_t i = 0; i < prof.points.size(); ++i) {
    if (prof.points[i].raw_slope < -tolerance) prof.nonnegative = false;
    if (i + 1 < prof.points.size()) {
      const double inc = prof.points[i + 1].nu_hat - prof.points[i].nu_hat;
      prof.max_increase = std::max(prof.max_increase, inc);
      if (inc > tolerance) prof.nonincreasing = false;
    }
  }
  for (std::size_t i = 0; i < prof.points.size(); ++i) {
    for (std::size_t j = i + 2; j < prof.points.size(); ++j) {
      const auto& a = prof.points[i];
      const auto& b = prof.points[j];
      for (std::size_t k = i + 1; k < j; ++k) {
        const auto& m = prof.points[k];
        const double w = (m.sigma - a.sigma) / (b.sigma - a.sigma);
        const double chord = (1 - w) * a.nu_hat + w * b.nu_hat;
        prof.convexity_defect = std::max(prof.convexity_defect, m.nu_hat - chord);
      }
    }
  }
  return prof;
}

// ---------------------------------------------------------------------------
// Functional equation

/// log of Lambda(s) = 2^{-r2 s} |D|^{s/2} pi^{-ns/2} Gamma(s/2)^{r1} Gamma(s)^{r2}.
inline Complex log_gamma_factor(const NumberField& K, Complex s) {
  const auto [r1, r2] = K.signature();
  const double n = K.degree();
  const double absD = std::fabs(static_cast<double>(K.discriminant()));
  return -static_cast<double>(r2) * s * std::log(2.0) + 0.5 * s * std::log(absD) -
         0.5 * n * s * std::log(std::numbers::pi) + static_cast<double>(r1) * log_gamma(0.5 * s) +
         static_cast<double>(r2) * log_gamma(s);
}

/// Completed zeta xi_K(s) = Lambda(s) zeta_K(s).
inline ComplexValue completed_zeta(const NumberField& K, Complex s) {
  const ComplexValue z = zeta_K_quadratic(K, s);
  const Complex lam = std::exp(log_gamma_factor(K, s));
  return {lam * z.value, std::abs(lam) * z.abs_err + 1e-14 * std::abs(lam * z.value)};
}

/// |xi_K(s) - xi_K(1-s)| / max(|xi_K(s)|, |xi_K(1-s)|).
inline double functional_equation_check(const NumberField& K, Complex s) {
  if (std::abs(s) < 1e-3 || std::abs(s - 1.0) < 1e-3) {
    throw Error(ErrorCode::PoleProximity, "s and 1-s must stay 1e-3 away from 0 and 1");
  }
  const ComplexValue a = completed_zeta(K, s);
  const ComplexValue b = completed_zeta(K, 1.0 - s);
  return std::abs(a.value - b.value) / std::max(std::abs(a.value), std::abs(b.value));
}

}  // namespace dzlab
