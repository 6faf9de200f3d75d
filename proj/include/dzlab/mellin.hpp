#pragma once

// Mellin transform M_f(s) = int_0^inf m_q(f) q^{s-2} dq of the measures, its
// closed form 2 phi_K(s) I_f(s) with phi_K(s) = zeta_K(2s-1)/zeta_K(2s) and
// I_f(s) = int f(t) t^{2s-1} dt, decay along vertical lines, and truncated
// inversion.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "dzlab/error.hpp"
#include "dzlab/field.hpp"
#include "dzlab/measure.hpp"
#include "dzlab/numeric.hpp"
#include "dzlab/sieve.hpp"
#include "dzlab/zeta.hpp"

namespace dzlab {

/// Everything the transforms need about one field.
struct MellinContext {
  const NumberField& field;
  const FieldTables* tables = nullptr;  ///< required for m_q and for the series route
  FieldInvariants invariants;

  const CoeffTable& totient() const {
    if (tables == nullptr) throw Error(ErrorCode::DomainError, "coefficient tables are required here");
    return tables->totient_sum;
  }
  ComplexValue phi(Complex s) const {
    return phi_ratio(field, tables ? &tables->ideal_count : nullptr, invariants.kappa.value, s);
  }
};

enum class MellinMethod { NumericIntegral, ClosedForm };

inline const char* to_string(MellinMethod m) {
  return m == MellinMethod::NumericIntegral ? "NumericIntegral" : "ClosedForm";
}

struct MellinPoint {
  Complex s;
  ComplexValue value;
  MellinMethod method = MellinMethod::ClosedForm;
};

/// 2 phi_K(s) I_f(s).
inline MellinPoint mellin_closed(const MellinContext& ctx, const TestFunction& f, Complex s) {
  const ComplexValue phi = ctx.phi(s);
  const Complex I = weighted_integral(f, s);
  return {s, {2.0 * phi.value * I, 2.0 * std::abs(I) * phi.abs_err + 1e-13 * std::abs(2.0 * phi.value * I)},
          MellinMethod::ClosedForm};
}

/// int_0^{T*} m_q(f) q^{s-2} dq with T* = support_hi^2, integrated in
/// u = log q on panels cut at every q = (c/m)^2 where a kink c of f crosses a
/// norm m (so m_q(f) is smooth on each panel), plus a 0.05 cap on panel
/// width. Below q0 the measure is replaced by its limit, whose contribution
/// m(f) q0^{s-1}/(s-1) is exact; the remainder is estimated from E(q0).
inline MellinPoint mellin_numeric(const MellinContext& ctx, const TestFunction& f, Complex s, double q0 = 1e-9) {
  const double sigma = s.real();
  if (sigma < 1.1) throw Error(ErrorCode::DomainError, "numeric Mellin integral needs Re(s) >= 1.1");
  const double top = f.support_hi() * f.support_hi();
  if (!(q0 > 0 && q0 < top)) throw Error(ErrorCode::DomainError, "q0 must lie in (0, support_hi^2)");
  const MeasureEvaluator measure(ctx.totient(), f, required_norm_bound(f.support_hi(), q0));
  const double limit = m_limit(ctx.invariants, f);

  const double u0 = std::log(q0), u1 = std::log(top);
  std::vector<double> cuts{u0, u1};
  const auto steps = static_cast<long>(std::ceil((u1 - u0) / 0.05));
  for (long i = 1; i < steps; ++i) cuts.push_back(u0 + (u1 - u0) * static_cast<double>(i) / static_cast<double>(steps));
  for (double c : f.kinks()) {
    for (std::uint64_t m = 1;; ++m) {
      const double u = 2.0 * std::log(c / static_cast<double>(m));
      if (u <= u0) break;
      if (u < u1) cuts.push_back(u);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  auto g = [&](double u) -> Complex { return measure(std::exp(u)) * std::exp((s - 1.0) * u); };
  CompensatedSum<Complex> total;
  double quad_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] < 1e-13) continue;
    const auto r = gauss_kronrod15(g, cuts[i], cuts[i + 1]);
    total.add(r.value);
    quad_err += r.abs_err;
  }
  total.add(limit * std::exp((s - 1.0) * u0) / (s - 1.0));

  double e0 = 0.0;
  for (double k : {1.0, 1.5, 2.0, 3.0, 4.0}) e0 = std::max(e0, std::fabs(measure(k * q0) - limit));
  const double tail = 2.0 * e0 * std::pow(q0, sigma - 1.0) / (sigma - 1.0);
  return {s, {total.value(), quad_err + tail}, MellinMethod::NumericIntegral};
}

struct DecayProfile {
  double sigma = 0.0;
  std::vector<double> t;
  std::vector<double> abs_value;
  std::size_t skipped = 0;  ///< points dropped on DivisionNearZero
  double slope = 0.0;       ///< least-squares slope of log|M| on log t
  double slope_stderr = 0.0;
};

inline DecayProfile decay_profile(const MellinContext& ctx, const TestFunction& f, double sigma,
                                  const std::vector<double>& t_grid) {
  if (sigma < 0.6 || sigma > 2.0) throw Error(ErrorCode::DomainError, "decay profile needs sigma in [0.6, 2]");
  DecayProfile prof;
  prof.sigma = sigma;
  std::vector<double> lx, ly;
  for (double t : t_grid) {
    if (!(t > 0)) throw Error(ErrorCode::DomainError, "t grid must be positive");
    try {
      const double v = std::abs(mellin_closed(ctx, f, Complex(sigma, t)).value.value);
      prof.t.push_back(t);
      prof.abs_value.push_back(v);
      if (v > 0) {
        lx.push_back(std::log(t));
        ly.push_back(std::log(v));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DivisionNearZero) throw;
      ++prof.skipped;
    }
  }
  const LineFit fit = least_squares(lx, ly);
  prof.slope = fit.slope;
  prof.slope_stderr = fit.slope_stderr;
  return prof;
}

struct InverseResult {
  double value = 0.0;
  double tail_estimate = 0.0;
  double decay_slope = 0.0;  ///< fitted on [t_max/4, t_max]
};

/// (1/2 pi i) int_{b - i t_max}^{b + i t_max} M(s) q^{1-s} ds for M with
/// M(conj s) = conj M(s), by the trapezoid rule in t with step <= h.
/// The tail beyond t_max is estimated from the fitted power decay of |M|,
/// or, when the decay is too slow to integrate, from one integration by
/// parts against the oscillation q^{-it}.
template <typename M>
InverseResult inverse_mellin(M&& transform, double q, double b, double t_max, double h = 0.05) {
  if (!(q > 0 && t_max > 0 && h > 0)) throw Error(ErrorCode::DomainError, "bad inversion parameters");
  const auto n = static_cast<long>(std::ceil(t_max / h));
  const double step = t_max / static_cast<double>(n);
  const double lq = std::log(q);
  CompensatedSum<double> sum;
  std::vector<double> lt, lm;
  double late_max = 0.0;
  for (long k = 0; k <= n; ++k) {
    const double t = step * static_cast<double>(k);
    const Complex s(b, t);
    const Complex Ms = transform(s);
    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
    sum.add(w * (Ms * std::exp((1.0 - s) * lq)).real());
    if (t >= 0.25 * t_max && k % 10 == 0 && std::abs(Ms) > 0) {
      lt.push_back(std::log(t));
      lm.push_back(std::log(std::abs(Ms)));
    }
    if (t >= 0.5 * t_max) late_max = std::max(late_max, std::abs(Ms));
  }
  InverseResult out;
  out.value = step * sum.value() / std::numbers::pi;
  out.decay_slope = lt.size() >= 2 ? least_squares(lt, lm).slope : 0.0;
  const double scale = std::exp((1.0 - b) * lq) * late_max / std::numbers::pi;
  const double p = -out.decay_slope;
  double tail = std::numeric_limits<double>::infinity();
  if (p > 1.0) tail = t_max / (p - 1.0);
  if (std::fabs(lq) > 0) tail = std::min(tail, 2.0 / std::fabs(lq));
  out.tail_estimate = scale * tail;
  return out;
}

struct InversionCheck {
  double q = 0.0;
  double reconstructed = 0.0;
  double direct = 0.0;
  double defect = 0.0;  ///< |reconstructed - direct|
  double tail_estimate = 0.0;
  double decay_slope = 0.0;
};

/// Rebuilds m_q(f) from the closed-form transform on Re(s) = b and compares
/// with the direct sum.
inline InversionCheck inversion_check(const MellinContext& ctx, const TestFunction& f, double q, double b,
                                      double t_max, double rel_tol = 1e-3, double h = 0.05) {
  if (!(b > 1.1 && b <= 2.0)) throw Error(ErrorCode::DomainError, "inversion line needs b in (1.1, 2]");
  const double direct = q > f.support_hi() * f.support_hi() ? 0.0 : m_q(ctx.totient(), f, q);
  const InverseResult inv =
      inverse_mellin([&](Complex s) { return mellin_closed(ctx, f, s).value.value; }, q, b, t_max, h);
  if (inv.tail_estimate > rel_tol * std::max(std::fabs(direct), 1e-300)) {
    throw Error(ErrorCode::TailTooLarge, "estimated truncation tail exceeds the requested tolerance; raise t_max");
  }
  return {q, inv.value, direct, std::fabs(inv.value - direct), inv.tail_estimate, inv.decay_slope};
}

struct ResidueCheck {
  std::vector<double> offsets;  ///< s - 1
  std::vector<double> scaled;   ///< (s - 1) M_f(s)
  double extrapolated = 0.0;
  double m_limit = 0.0;
  double defect = 0.0;
};

/// (s-1) M_f(s) at s = 1 + h for h = 1e-2, 1e-3, 1e-4, Richardson-extrapolated
/// to h = 0 and compared with m(f).
inline ResidueCheck residue_check(const MellinContext& ctx, const TestFunction& f) {
  ResidueCheck rc;
  rc.offsets = {1e-2, 1e-3, 1e-4};
  for (double h : rc.offsets) rc.scaled.push_back(h * mellin_closed(ctx, f, Complex(1.0 + h, 0.0)).value.re());
  rc.extrapolated = richardson(rc.scaled, 10.0);
  rc.m_limit = m_limit(ctx.invariants, f);
  rc.defect = std::fabs(rc.extrapolated - rc.m_limit);
  return rc;
}

/// M*(f, s) = xi_K(2s - 1) I_f(s), the completed transform without the
/// factor 2 (continuation fields only).
inline Complex mellin_star(const NumberField& K, const TestFunction& f, Complex s) {
  return completed_zeta(K, 2.0 * s - 1.0).value * weighted_integral(f, s);
}

struct StarSymmetry {
  double reflected_defect = 0.0;  ///< xi_K(2s-1) against its value at s' = 3/2 - s
  double literal_defect = 0.0;    ///< M*(f, s) against M*(f, 1 - s), for the record
};

/// Since xi_K(w) = xi_K(1 - w), the xi factor of M*(f, s) is invariant under
/// s -> 3/2 - s; under s -> 1 - s it is not.
inline StarSymmetry mellin_star_symmetry(const NumberField& K, const TestFunction& f, Complex s) {
  const Complex a = mellin_star(K, f, s) / weighted_integral(f, s);
  const Complex s2 = 1.5 - s;
  const Complex b = mellin_star(K, f, s2) / weighted_integral(f, s2);
  const Complex full = mellin_star(K, f, s);
  const Complex lit = mellin_star(K, f, 1.0 - s);
  return {std::abs(a - b) / std::max(std::abs(a), std::abs(b)),
          std::abs(full - lit) / std::max(std::abs(full), std::abs(lit))};
}

}  // namespace dzlab
