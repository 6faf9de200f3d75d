#pragma once

// Numerical building blocks shared by the zeta, measure and Mellin modules:
// compensated summation, complex log-gamma, Gauss-Kronrod quadrature, and
// the small regression fits used for exponent estimation.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "dzlab/error.hpp"

namespace dzlab {

using Complex = std::complex<double>;
using int128 = __int128;

inline std::string to_string(int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  std::string out;
  while (u != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

/// Neumaier's variant of Kahan summation; robust when addends span many
/// orders of magnitude or cancel.
template <typename T = double>
class CompensatedSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

namespace detail {

// Lanczos coefficients, g = 7, n = 9; relative error below 2e-15 for Re z >= 1/2.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// log(sin(pi z)) without overflow for large |Im z|; branch is irrelevant to callers.
inline Complex log_sin_pi(Complex z) {
  constexpr double pi = std::numbers::pi;
  if (std::abs(z.imag()) < 20.0) return std::log(std::sin(pi * z));
  const Complex i(0.0, 1.0);
  if (z.imag() > 0) {
    // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z})
    return std::log(Complex(0.0, 0.5)) - i * pi * z + std::log(1.0 - std::exp(2.0 * pi * i * z));
  }
  return std::conj(log_sin_pi(std::conj(z)));
}

}  // namespace detail

/// Complex log-gamma (Lanczos approximation with reflection). The imaginary
/// part is only determined modulo 2*pi.
inline Complex log_gamma(Complex z) {
  constexpr double pi = std::numbers::pi;
  if (z.real() < 0.5) {
    return std::log(pi) - detail::log_sin_pi(z) - log_gamma(1.0 - z);
  }
  z -= 1.0;
  Complex x = detail::kLanczos[0];
  for (std::size_t i = 1; i < detail::kLanczos.size(); ++i) {
    x += detail::kLanczos[i] / (z + static_cast<double>(i));
  }
  const Complex t = z + detail::kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

inline Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

/// Euler's Beta function B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b).
inline Complex beta(Complex a, Complex b) {
  return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

/// B_{2j} for j = 1..20.
inline constexpr std::array<double, 20> kBernoulliEven = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
};

/// expm1(z)/z, accurate near z = 0.
inline Complex expm1_over(Complex z) {
  if (std::abs(z) < 1e-4) {
    return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
  }
  return (std::exp(z) - 1.0) / z;
}

// ---------------------------------------------------------------------------
// Quadrature

template <typename T>
struct QuadResult {
  T value{};
  double abs_err = 0.0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

/// One 15-point Kronrod panel on [a, b]; the error is |K15 - G7|.
template <typename F>
auto gauss_kronrod15(F&& f, double a, double b) {
  using T = std::decay_t<decltype(f(a))>;
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  T fc = f(center);
  T kronrod = fc * detail::kKronrodWeights[7];
  T gauss = fc * detail::kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * detail::kKronrodNodes[j];
    T f1 = f(center - dx);
    T f2 = f(center + dx);
    kronrod += (f1 + f2) * detail::kKronrodWeights[j];
    if (j % 2 == 1) gauss += (f1 + f2) * detail::kGaussWeights[j / 2];
  }
  return QuadResult<T>{kronrod * half, std::abs((kronrod - gauss) * half)};
}

/// Adaptive Gauss-Kronrod with interval bisection. `f` may return double or
/// Complex.
template <typename F>
auto integrate(F&& f, double a, double b, double abs_tol = 1e-12, double rel_tol = 1e-12,
               int max_depth = 40) {
  using T = std::decay_t<decltype(f(a))>;
  struct Panel {
    double lo, hi;
    int depth;
    QuadResult<T> r;
  };
  std::vector<Panel> stack;
  stack.push_back({a, b, 0, gauss_kronrod15(f, a, b)});
  const double whole = std::abs(stack.back().r.value);
  CompensatedSum<T> total;
  double err = 0.0;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    const double width_share = (p.hi - p.lo) / (b - a);
    const double budget = std::max(abs_tol, rel_tol * whole) * width_share;
    if (p.r.abs_err <= budget || p.depth >= max_depth) {
      total.add(p.r.value);
      err += p.r.abs_err;
      continue;
    }
    const double mid = 0.5 * (p.lo + p.hi);
    stack.push_back({p.lo, mid, p.depth + 1, gauss_kronrod15(f, p.lo, mid)});
    stack.push_back({mid, p.hi, p.depth + 1, gauss_kronrod15(f, mid, p.hi)});
  }
  return QuadResult<T>{total.value(), err};
}

// ---------------------------------------------------------------------------
// Fitting

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope*x.
inline LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(ErrorCode::InsufficientData, "least squares needs >= 2 points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0) throw Error(ErrorCode::InsufficientData, "degenerate abscissae");
  LineFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      ss += r * r;
    }
    fit.slope_stderr = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

namespace detail {

// For a fixed slope the optimal intercept of the tau-quantile fit is the
// tau-quantile of the residuals; returns (loss, intercept).
inline std::pair<double, double> quantile_loss(std::span<const double> x, std::span<const double> y,
                                               double tau, double slope,
                                               std::vector<double>& scratch) {
  const std::size_t n = x.size();
  scratch.resize(n);
  for (std::size_t i = 0; i < n; ++i) scratch[i] = y[i] - slope * x[i];
  auto k = static_cast<std::size_t>(std::floor(tau * static_cast<double>(n - 1)));
  std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k), scratch.end());
  const double c = scratch[k];
  double loss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - slope * x[i] - c;
    loss += r >= 0 ? tau * r : (tau - 1.0) * r;
  }
  return {loss, c};
}

}  // namespace detail

/// Linear quantile regression (check-loss minimization). The loss is convex
/// in the slope, so a golden-section search over [slope_lo, slope_hi] with
/// the intercept profiled out is exact up to the search tolerance.
inline LineFit quantile_regression(std::span<const double> x, std::span<const double> y, double tau,
                                   double slope_lo = -10.0, double slope_hi = 10.0) {
  if (x.size() < 3 || y.size() != x.size()) {
    throw Error(ErrorCode::InsufficientData, "quantile regression needs >= 3 points");
  }
  std::vector<double> scratch;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = slope_lo, hi = slope_hi;
  double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
  double f1 = detail::quantile_loss(x, y, tau, m1, scratch).first;
  double f2 = detail::quantile_loss(x, y, tau, m2, scratch).first;
  while (hi - lo > 1e-9) {
    if (f1 <= f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - phi * (hi - lo);
      f1 = detail::quantile_loss(x, y, tau, m1, scratch).first;
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + phi * (hi - lo);
      f2 = detail::quantile_loss(x, y, tau, m2, scratch).first;
    }
  }
  LineFit fit;
  fit.n = x.size();
  fit.slope = 0.5 * (lo + hi);
  fit.intercept = detail::quantile_loss(x, y, tau, fit.slope, scratch).second;
  return fit;
}

/// Richardson extrapolation to h -> 0 of g sampled at h, h/r, h/r^2, ...
/// assuming an error expansion in integer powers of h.
template <typename T>
T richardson(std::vector<T> values, double ratio) {
  if (values.empty()) throw Error(ErrorCode::InsufficientData, "richardson needs samples");
  double factor = ratio;
  while (values.size() > 1) {
    std::vector<T> next;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      next.push_back((factor * values[i + 1] - values[i]) / (factor - 1.0));
    }
    values = std::move(next);
    factor *= ratio;
  }
  return values.front();
}

/// Geometric grid from `hi` down to `lo` (inclusive) with `per_decade` points
/// per factor of ten.
inline std::vector<double> geometric_grid(double hi, double lo, int per_decade) {
  if (!(hi > 0 && lo > 0 && per_decade > 0)) throw Error(ErrorCode::Config, "bad geometric grid");
  if (hi < lo) std::swap(hi, lo);
  const double decades = std::log10(hi / lo);
  const auto steps = static_cast<long>(std::llround(decades * per_decade));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps) + 1);
  for (long i = 0; i <= steps; ++i) {
    grid.push_back(hi * std::pow(10.0, -static_cast<double>(i) / per_decade));
  }
  grid.back() = lo;
  return grid;
}

}  // namespace dzlab
