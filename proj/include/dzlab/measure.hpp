#pragma once

// The measures m_q(f) = q sum_n phi_K(n) f(q^{1/2} N(n)), their limit
// m(f) = kappa/zeta_K(2) * int f(t) t dt, error curves and decay exponents.
//
// Sums are taken at norm level: S_phi(m) = sum of phi_K over ideals of norm m
// is exactly the TotientSum coefficient, so
//   m_q(f) = q * sum_{m <= support_hi / sqrt q} S_phi(m) f(sqrt(q) m).

#include <algorithm>
#include <climits>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dzlab/error.hpp"
#include "dzlab/field.hpp"
#include "dzlab/numeric.hpp"
#include "dzlab/sieve.hpp"

namespace dzlab {

inline constexpr int kSmoothnessNone = -1;
inline constexpr int kSmoothnessInfinite = INT_MAX;

/// One of the three test-function families, optionally dilated:
/// f_lambda(t) = f(lambda t).
class TestFunction {
 public:
  enum class Kind { Indicator, PolyBump, SmoothBump };

  /// Characteristic function of the closed interval [a, b].
  static TestFunction indicator(double a, double b) {
    if (!(a > 0 && b > a)) throw Error(ErrorCode::DomainError, "indicator needs 0 < a < b");
    return TestFunction(Kind::Indicator, a, b, 0);
  }
  /// F_r(t) = (1 - t)^r on (0, 1], 0 for t > 1.
  static TestFunction poly_bump(int r) {
    if (r < 1) throw Error(ErrorCode::DomainError, "poly bump needs r >= 1");
    return TestFunction(Kind::PolyBump, 0.0, 1.0, r);
  }
  /// exp(-1/((t-a)(b-t))) on (a, b), 0 outside.
  static TestFunction smooth_bump(double a, double b) {
    if (!(a > 0 && b > a)) throw Error(ErrorCode::DomainError, "smooth bump needs 0 < a < b");
    return TestFunction(Kind::SmoothBump, a, b, 0);
  }

  /// Parses "indicator:a,b", "polybump:r" or "smoothbump:a,b", with an
  /// optional "@lambda" dilation suffix.
  static TestFunction parse(std::string_view spec);

  /// t -> f(lambda t).
  TestFunction scaled(double lambda) const {
    if (!(lambda > 0)) throw Error(ErrorCode::DomainError, "dilation factor must be positive");
    TestFunction g = *this;
    g.lambda_ *= lambda;
    return g;
  }

  Kind kind() const noexcept { return kind_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  int r() const noexcept { return r_; }
  double lambda() const noexcept { return lambda_; }

  double operator()(double t) const { return base(lambda_ * t); }

  /// f(t) = 0 outside [support_lo, support_hi].
  double support_lo() const noexcept { return a_ / lambda_; }
  double support_hi() const noexcept { return b_ / lambda_; }

  /// Order of continuous differentiability on R_+: kSmoothnessNone for the
  /// indicator, r - 1 for F_r, kSmoothnessInfinite for the smooth bump.
  int smoothness_l() const noexcept {
    switch (kind_) {
      case Kind::Indicator: return kSmoothnessNone;
      case Kind::PolyBump: return r_ - 1;
      case Kind::SmoothBump: return kSmoothnessInfinite;
    }
    return kSmoothnessNone;
  }

  /// Points t > 0 where f fails to be smooth.
  std::vector<double> kinks() const {
    switch (kind_) {
      case Kind::Indicator: return {support_lo(), support_hi()};
      case Kind::PolyBump: return {support_hi()};
      case Kind::SmoothBump: return {};
    }
    return {};
  }

  std::string describe() const;

 private:
  TestFunction(Kind k, double a, double b, int r) : kind_(k), a_(a), b_(b), r_(r) {}

  double base(double t) const {
    switch (kind_) {
      case Kind::Indicator:
        return (t >= a_ && t <= b_) ? 1.0 : 0.0;
      case Kind::PolyBump: {
        if (t <= 0.0 || t > 1.0) return 0.0;
        double v = 1.0;
        for (int i = 0; i < r_; ++i) v *= 1.0 - t;
        return v;
      }
      case Kind::SmoothBump:
        if (t <= a_ || t >= b_) return 0.0;
        return std::exp(-1.0 / ((t - a_) * (b_ - t)));
    }
    return 0.0;
  }

  Kind kind_;
  double a_, b_;
  int r_;
  double lambda_ = 1.0;
};

namespace detail {

inline double parse_double(std::string_view s, std::string_view whole) {
  const std::string str(s);
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  if (str.empty() || end != str.c_str() + str.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::Config, "bad number in test function '" + std::string(whole) + "'");
  }
  return v;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline TestFunction TestFunction::parse(std::string_view spec) {
  std::string_view body = spec;
  double lambda = 1.0;
  if (const auto at = body.find('@'); at != std::string_view::npos) {
    lambda = detail::parse_double(body.substr(at + 1), spec);
    body = body.substr(0, at);
  }
  const auto colon = body.find(':');
  if (colon == std::string_view::npos) throw Error(ErrorCode::Config, "test function needs 'kind:args': " + std::string(spec));
  const std::string_view kind = body.substr(0, colon);
  const std::string_view args = body.substr(colon + 1);
  auto two = [&]() {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) throw Error(ErrorCode::Config, "expected 'a,b' in " + std::string(spec));
    return std::pair{detail::parse_double(args.substr(0, comma), spec), detail::parse_double(args.substr(comma + 1), spec)};
  };
  TestFunction f = [&]() {
    if (kind == "indicator") {
      auto [a, b] = two();
      return indicator(a, b);
    }
    if (kind == "smoothbump") {
      auto [a, b] = two();
      return smooth_bump(a, b);
    }
    if (kind == "polybump") {
      const double r = detail::parse_double(args, spec);
      if (r != std::floor(r)) throw Error(ErrorCode::Config, "poly bump order must be an integer");
      return poly_bump(static_cast<int>(r));
    }
    throw Error(ErrorCode::Config, "unknown test function kind '" + std::string(kind) + "'");
  }();
  return lambda == 1.0 ? f : f.scaled(lambda);
}

inline std::string TestFunction::describe() const {
  std::string s;
  switch (kind_) {
    case Kind::Indicator: s = "indicator:" + detail::format_double(a_) + "," + detail::format_double(b_); break;
    case Kind::PolyBump: s = "polybump:" + std::to_string(r_); break;
    case Kind::SmoothBump: s = "smoothbump:" + detail::format_double(a_) + "," + detail::format_double(b_); break;
  }
  if (lambda_ != 1.0) s += "@" + detail::format_double(lambda_);
  return s;
}

/// I_f(s) = int_0^inf f(t) t^{2s-1} dt. Closed forms for the indicator and
/// F_r (a Beta value); adaptive quadrature for the smooth bump.
inline Complex weighted_integral(const TestFunction& f, Complex s) {
  const Complex two_s = 2.0 * s;
  Complex base;
  switch (f.kind()) {
    case TestFunction::Kind::Indicator:
      base = (std::exp(two_s * std::log(f.b())) - std::exp(two_s * std::log(f.a()))) / two_s;
      break;
    case TestFunction::Kind::PolyBump:
      base = beta(Complex(f.r() + 1.0, 0.0), two_s);
      break;
    case TestFunction::Kind::SmoothBump: {
      const double a = f.a(), b = f.b();
      auto g = [&](double t) -> Complex {
        if (t <= a || t >= b) return 0.0;
        return std::exp(-1.0 / ((t - a) * (b - t)) + (two_s - 1.0) * std::log(t));
      };
      base = integrate(g, a, b, 1e-15, 1e-12).value;
      break;
    }
  }
  // int f(lambda t) t^{2s-1} dt = lambda^{-2s} int f(u) u^{2s-1} du
  return f.lambda() == 1.0 ? base : std::exp(-two_s * std::log(f.lambda())) * base;
}

/// m(f) = kappa/zeta_K(2) * int f(t) t dt.
inline double m_limit(const FieldInvariants& inv, const TestFunction& f) {
  double base = 0.0;
  switch (f.kind()) {
    case TestFunction::Kind::Indicator:
      base = 0.5 * (f.b() * f.b() - f.a() * f.a());
      break;
    case TestFunction::Kind::PolyBump:
      base = 1.0 / ((f.r() + 1.0) * (f.r() + 2.0));
      break;
    case TestFunction::Kind::SmoothBump: {
      const double a = f.a(), b = f.b();
      auto g = [&](double t) { return (t <= a || t >= b) ? 0.0 : std::exp(-1.0 / ((t - a) * (b - t))) * t; };
      base = integrate(g, a, b, 1e-16, 1e-12).value;
      break;
    }
  }
  return inv.limit_density() * base / (f.lambda() * f.lambda());
}

/// Largest norm m with f(sqrt(q) m) possibly nonzero, for f supported in
/// [0, hi].
inline std::uint64_t required_norm_bound(double hi, double q) {
  if (!(q > 0)) throw Error(ErrorCode::DomainError, "q must be positive");
  const double sq = std::sqrt(q);
  const double bound = hi / sq;
  if (bound > 1e18) throw TableTooSmallError(std::numeric_limits<std::uint64_t>::max(), 0);
  auto m = static_cast<std::uint64_t>(std::floor(bound));
  while (static_cast<double>(m + 1) * sq <= hi) ++m;
  return m;
}

/// m_q for any callable f supported in [lo, hi] (0 < lo < hi); generic form
/// used by the linearity and monotonicity checks.
template <typename F>
double m_q_generic(const CoeffTable& totient, F&& f, double lo, double hi, double q) {
  if (totient.kind() != CoeffKind::TotientSum) throw Error(ErrorCode::DomainError, "m_q needs a TotientSum table");
  const std::uint64_t m_hi = required_norm_bound(hi, q);
  if (m_hi > totient.X()) throw TableTooSmallError(m_hi, totient.X());
  const double sq = std::sqrt(q);
  std::uint64_t m_lo = static_cast<std::uint64_t>(std::max(1.0, std::floor(lo / sq) - 1.0));
  CompensatedSum<double> sum;
  for (std::uint64_t m = m_lo; m <= m_hi; ++m) {
    const double v = f(sq * static_cast<double>(m));
    if (v != 0.0) sum.add(totient.as_double(m) * v);
  }
  return q * sum.value();
}

inline double m_q(const CoeffTable& totient, const TestFunction& f, double q) {
  return m_q_generic(totient, f, f.support_lo(), f.support_hi(), q);
}

/// Evaluates q -> m_q(f) in O(r) per point for indicators and F_r through
/// prefix moments P_k(x) = sum_{m <= x} S_phi(m) m^k; smooth bumps fall back
/// to the direct sum.
class MeasureEvaluator {
 public:
  MeasureEvaluator(const CoeffTable& totient, TestFunction f, std::uint64_t max_norm)
      : totient_(totient), f_(f) {
    if (max_norm > totient.X()) throw TableTooSmallError(max_norm, totient.X());
    if (f.kind() == TestFunction::Kind::SmoothBump) return;
    const int kmax = f.kind() == TestFunction::Kind::PolyBump ? f.r() : 0;
    exact_.assign(max_norm + 1, 0);
    moments_.assign(static_cast<std::size_t>(kmax) + 1, std::vector<long double>(max_norm + 1, 0.0L));
    for (std::uint64_t m = 1; m <= max_norm; ++m) {
      exact_[m] = exact_[m - 1] + totient[m];
      const long double c = static_cast<long double>(totient[m]);
      long double pw = c;
      for (int k = 0; k <= kmax; ++k) {
        moments_[static_cast<std::size_t>(k)][m] = moments_[static_cast<std::size_t>(k)][m - 1] + pw;
        pw *= static_cast<long double>(m);
      }
    }
  }

  double operator()(double q) const {
    if (exact_.empty()) return m_q(totient_, f_, q);
    const std::uint64_t top = exact_.size() - 1;
    const double sq = std::sqrt(q);
    std::uint64_t m_hi = required_norm_bound(f_.support_hi(), q);
    if (m_hi > top) throw TableTooSmallError(m_hi, top);
    while (m_hi >= 1 && f_(sq * static_cast<double>(m_hi)) == 0.0) --m_hi;
    if (m_hi == 0) return 0.0;
    if (f_.kind() == TestFunction::Kind::Indicator) {
      auto m_lo = static_cast<std::uint64_t>(std::max(1.0, std::ceil(f_.support_lo() / sq)));
      while (m_lo > 1 && f_(sq * static_cast<double>(m_lo - 1)) != 0.0) --m_lo;
      while (m_lo <= m_hi && f_(sq * static_cast<double>(m_lo)) == 0.0) ++m_lo;
      if (m_lo > m_hi) return 0.0;
      return q * static_cast<double>(exact_[m_hi] - exact_[m_lo - 1]);
    }
    // (1 - lambda sqrt(q) m)^r = sum_k C(r,k) (-lambda sqrt q)^k m^k
    const long double x = -static_cast<long double>(f_.lambda()) * sq;
    long double total = 0.0L, coef = 1.0L, xp = 1.0L;
    for (int k = 0; k <= f_.r(); ++k) {
      total += coef * xp * moments_[static_cast<std::size_t>(k)][m_hi];
      coef = coef * (f_.r() - k) / (k + 1);
      xp *= x;
    }
    return static_cast<double>(static_cast<long double>(q) * total);
  }

  const TestFunction& function() const noexcept { return f_; }

 private:
  const CoeffTable& totient_;
  TestFunction f_;
  std::vector<int128> exact_;
  std::vector<std::vector<long double>> moments_;
};

struct MeasureSample {
  double q = 0.0;
  double m_q = 0.0;
  double m_limit = 0.0;
  double error = 0.0;  ///< m_q - m_limit

  double error_over_sqrt_q() const { return error / std::sqrt(q); }
};

/// Samples sorted by decreasing q.
inline std::vector<MeasureSample> error_curve(const CoeffTable& totient, const FieldInvariants& inv,
                                              const TestFunction& f, std::vector<double> q_grid) {
  std::sort(q_grid.begin(), q_grid.end(), std::greater<>());
  if (!q_grid.empty()) {
    const std::uint64_t need = required_norm_bound(f.support_hi(), q_grid.back());
    if (need > totient.X()) throw TableTooSmallError(need, totient.X());
  }
  const double limit = m_limit(inv, f);
  std::vector<MeasureSample> out;
  out.reserve(q_grid.size());
  for (double q : q_grid) {
    const double v = m_q(totient, f, q);
    out.push_back({q, v, limit, v - limit});
  }
  return out;
}

struct ExponentFit {
  double alpha_hat = 0.0;
  double std_error = 0.0;
  double q_min = 0.0;
  double q_max = 0.0;
  std::size_t n_points = 0;
};

/// Least-squares slope of log|E| against log q. Samples with
/// |E| < 1e-13 |m_limit| sit at the float floor and are dropped.
inline ExponentFit exponent_fit(const std::vector<MeasureSample>& samples) {
  std::vector<double> x, y;
  double qmin = std::numeric_limits<double>::infinity(), qmax = 0.0;
  for (const auto& s : samples) {
    if (s.error == 0.0 || std::fabs(s.error) < 1e-13 * std::fabs(s.m_limit)) continue;
    x.push_back(std::log(s.q));
    y.push_back(std::log(std::fabs(s.error)));
    qmin = std::min(qmin, s.q);
    qmax = std::max(qmax, s.q);
  }
  if (x.size() < 8) throw Error(ErrorCode::InsufficientData, "exponent fit needs >= 8 samples with nonzero error");
  const LineFit fit = least_squares(x, y);
  if (!(qmin < qmax)) throw Error(ErrorCode::InsufficientData, "exponent fit needs distinct q values");
  return ExponentFit{fit.slope, fit.slope_stderr, qmin, qmax, x.size()};
}

struct ScanSeries {
  double alpha = 0.0;
  std::vector<double> q;            ///< decreasing
  std::vector<double> running_max;  ///< max over the prefix of q^{-alpha}|E|
};

inline std::vector<ScanSeries> critical_exponent_scan(std::vector<MeasureSample> samples,
                                                      const std::vector<double>& alphas) {
  std::stable_sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.q > b.q; });
  std::vector<ScanSeries> out;
  for (double alpha : alphas) {
    ScanSeries series{alpha, {}, {}};
    double best = 0.0;
    for (const auto& s : samples) {
      best = std::max(best, std::pow(s.q, -alpha) * std::fabs(s.error));
      series.q.push_back(s.q);
      series.running_max.push_back(best);
    }
    out.push_back(std::move(series));
  }
  return out;
}

}  // namespace dzlab
