#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dzlab/measure.hpp"
#include "dzlab/oracles.hpp"
#include "dzlab/sieve.hpp"
#include "dzlab/zeta.hpp"
#include "test_util.hpp"

using namespace dzlab;

namespace {

const FieldTables& gaussian_tables() {
  static const FieldTables t = build_tables(make_quadratic(-1), 200000);
  return t;
}

const FieldInvariants& gaussian_invariants() {
  static const FieldInvariants inv = compute_invariants(make_quadratic(-1), nullptr);
  return inv;
}

std::vector<MeasureSample> synthetic(double c, double alpha) {
  std::vector<MeasureSample> out;
  for (double q : geometric_grid(1e-1, 1e-5, 12)) out.push_back({q, 1.0 + c * std::pow(q, alpha), 1.0, c * std::pow(q, alpha)});
  return out;
}

}  // namespace

TEST(TestFunction, Shapes) {
  const auto ind = TestFunction::indicator(1, 2);
  EXPECT_EQ(ind(1.0), 1.0);
  EXPECT_EQ(ind(2.0), 1.0);
  EXPECT_EQ(ind(2.0000001), 0.0);
  EXPECT_EQ(ind.smoothness_l(), kSmoothnessNone);
  const auto f2 = TestFunction::poly_bump(2);
  EXPECT_DOUBLE_EQ(f2(0.5), 0.25);
  EXPECT_EQ(f2(1.5), 0.0);
  EXPECT_EQ(f2.smoothness_l(), 1);
  const auto sb = TestFunction::smooth_bump(1, 2);
  EXPECT_DOUBLE_EQ(sb(1.5), std::exp(-4.0));
  EXPECT_EQ(sb(1.0), 0.0);
  EXPECT_EQ(sb.smoothness_l(), kSmoothnessInfinite);
}

TEST(TestFunction, RejectsDegenerate) {
  EXPECT_DZ_ERROR(TestFunction::indicator(1, 1), ErrorCode::DomainError);
  EXPECT_DZ_ERROR(TestFunction::indicator(0, 1), ErrorCode::DomainError);
  EXPECT_DZ_ERROR(TestFunction::poly_bump(0), ErrorCode::DomainError);
}

TEST(TestFunction, ParseAndDescribe) {
  for (const char* spec : {"indicator:1,2", "polybump:3", "smoothbump:1,2", "indicator:0.5,1.5@2"}) {
    EXPECT_EQ(TestFunction::parse(spec).describe(), spec);
  }
  const auto g = TestFunction::parse("indicator:1,2@2");
  EXPECT_DOUBLE_EQ(g.support_hi(), 1.0);
  EXPECT_EQ(g(0.75), 1.0);
  EXPECT_DZ_ERROR(TestFunction::parse("indicator:1"), ErrorCode::Config);
  EXPECT_DZ_ERROR(TestFunction::parse("gauss:1,2"), ErrorCode::Config);
  EXPECT_DZ_ERROR(TestFunction::parse("polybump:2.5"), ErrorCode::Config);
}

TEST(Limit, GaussianIndicator) {
  EXPECT_NEAR(m_limit(gaussian_invariants(), TestFunction::indicator(1, 2)), 0.7819, 1e-4);
  const double density = gaussian_invariants().limit_density();
  EXPECT_NEAR(m_limit(gaussian_invariants(), TestFunction::poly_bump(2)), density / 12, 1e-15);
}

TEST(Limit, ScalingRule) {
  // int f(lambda t) t dt = lambda^{-2} int f(u) u du
  const auto f = TestFunction::smooth_bump(1, 2);
  EXPECT_NEAR(m_limit(gaussian_invariants(), f.scaled(2.0)), m_limit(gaussian_invariants(), f) / 4, 1e-15);
}

TEST(Measure, RationalHandEnumeration) {
  const FieldTables t = build_tables(make_rational(), 100);
  EXPECT_DOUBLE_EQ(m_q(t.totient_sum, TestFunction::indicator(1, 2), 0.25), 1.25);
  EXPECT_EQ(m_q(t.totient_sum, TestFunction::indicator(1, 2), 5.0), 0.0);
}

namespace {

// |(Z[i]/(alpha))^*| by brute force: the box {c + di : 0 <= c, d < N} covers
// each residue class mod alpha exactly N times.
std::int64_t gaussian_phi(std::int64_t a, std::int64_t b) {
  const std::int64_t N = a * a + b * b;
  auto divisible = [&](std::int64_t x, std::int64_t y) {
    // (x + yi) / (a + bi) = (x + yi)(a - bi) / N
    return (x * a + y * b) % N == 0 && (y * a - x * b) % N == 0;
  };
  std::int64_t units = 0;
  for (std::int64_t c = 0; c < N; ++c) {
    for (std::int64_t d = 0; d < N; ++d) {
      bool inv = false;
      for (std::int64_t e = 0; e < N && !inv; ++e) {
        for (std::int64_t f = 0; f < N && !inv; ++f) inv = divisible(c * e - d * f - 1, c * f + d * e);
      }
      units += inv;
    }
  }
  return units / N;
}

}  // namespace

TEST(Measure, GaussianAgainstIdealEnumeration) {
  // One generator a + bi (a > 0, b >= 0) per nonzero ideal of Z[i]; f(q^{1/2} N)
  // with f = 1_[1,2] selects norms in [q^{-1/2}, 2 q^{-1/2}].
  for (double q : {0.25, 1.0 / 16}) {
    const double lo = 1 / std::sqrt(q), hi = 2 / std::sqrt(q);
    double direct = 0.0;
    for (std::int64_t a = 1; a * a <= hi; ++a) {
      for (std::int64_t b = 0; a * a + b * b <= hi; ++b) {
        if (a * a + b * b >= lo) direct += static_cast<double>(gaussian_phi(a, b));
      }
    }
    EXPECT_DOUBLE_EQ(m_q(gaussian_tables().totient_sum, TestFunction::indicator(1, 2), q), q * direct) << q;
  }
  // q = 1/4: (1+i) and (2), phi = 1 + 2.
  EXPECT_DOUBLE_EQ(m_q(gaussian_tables().totient_sum, TestFunction::indicator(1, 2), 0.25), 0.75);
}

TEST(Measure, ZeroAboveSupport) {
  EXPECT_EQ(m_q(gaussian_tables().totient_sum, TestFunction::indicator(1, 2), 4.5), 0.0);
}

TEST(Measure, TableTooSmall) {
  EXPECT_DZ_ERROR(m_q(gaussian_tables().totient_sum, TestFunction::indicator(1, 2), 1e-12), ErrorCode::TableTooSmall);
  EXPECT_DZ_ERROR(m_q(gaussian_tables().ideal_count, TestFunction::indicator(1, 2), 0.1), ErrorCode::DomainError);
  EXPECT_EQ(required_norm_bound(2.0, 0.25), 4u);
  EXPECT_EQ(required_norm_bound(2.0, 1e-4), 200u);
}

TEST(Measure, FastEvaluatorMatchesDirectSum) {
  const auto& t = gaussian_tables();
  for (const auto& f : {TestFunction::indicator(1, 2), TestFunction::poly_bump(3), TestFunction::smooth_bump(1, 2)}) {
    const MeasureEvaluator ev(t.totient_sum, f, 200000);
    for (double q : {0.3, 0.01, 2.3e-4, 1e-4}) {
      const double direct = m_q(t.totient_sum, f, q);
      EXPECT_NEAR(ev(q), direct, 1e-10 * std::max(1.0, std::fabs(direct))) << f.describe() << " q=" << q;
    }
  }
}

TEST(ErrorCurve, SmoothBumpDecays) {
  const auto samples =
      error_curve(gaussian_tables().totient_sum, gaussian_invariants(), TestFunction::smooth_bump(1, 2), {1e-1, 1e-5});
  ASSERT_EQ(samples.size(), 2u);
  EXPECT_EQ(samples[0].q, 1e-1);
  EXPECT_LT(std::fabs(samples[1].error_over_sqrt_q()), 0.5 * std::fabs(samples[0].error_over_sqrt_q()));
}

TEST(ErrorCurve, LeadingZerosAboveSupport) {
  const auto samples =
      error_curve(gaussian_tables().totient_sum, gaussian_invariants(), TestFunction::indicator(1, 2), {9.0, 5.0, 0.1});
  EXPECT_EQ(samples[0].m_q, 0.0);
  EXPECT_EQ(samples[1].m_q, 0.0);
  EXPECT_DZ_ERROR(error_curve(gaussian_tables().totient_sum, gaussian_invariants(), TestFunction::indicator(1, 2), {1e-12}),
                  ErrorCode::TableTooSmall);
}

TEST(ErrorCurve, IndicatorChangesSign) {
  const auto samples = error_curve(gaussian_tables().totient_sum, gaussian_invariants(), TestFunction::indicator(1, 2),
                                   geometric_grid(1e-1, 1e-5, 48));
  EXPECT_EQ(samples.size(), 193u);
  bool pos = false, neg = false;
  for (const auto& s : samples) (s.error > 0 ? pos : neg) = true;
  EXPECT_TRUE(pos && neg);
}

TEST(ExponentFit, ExactPowerLaw) {
  const auto fit = exponent_fit(synthetic(0.3, 0.5));
  EXPECT_NEAR(fit.alpha_hat, 0.5, 1e-6);
  EXPECT_NEAR(fit.q_max, 1e-1, 1e-15);
  EXPECT_EQ(fit.n_points, 49u);
  EXPECT_DZ_ERROR(exponent_fit({}), ErrorCode::InsufficientData);
}

TEST(ExponentFit, GaussianIndicatorBand) {
  const auto samples = error_curve(gaussian_tables().totient_sum, gaussian_invariants(), TestFunction::indicator(1, 2),
                                   geometric_grid(1e-1, 1e-6, 48));
  const auto fit = exponent_fit(samples);
  EXPECT_GE(fit.alpha_hat, 0.20);
  EXPECT_LE(fit.alpha_hat, 0.55);
}

TEST(ExponentFit, GaussianPolyBumpNearOneHalfOrBetter) {
  const auto samples = error_curve(gaussian_tables().totient_sum, gaussian_invariants(), TestFunction::poly_bump(2),
                                   geometric_grid(1e-1, 1e-5, 24));
  EXPECT_GE(exponent_fit(samples).alpha_hat, 0.45);
}

TEST(Scan, SyntheticBelowAndAtCritical) {
  const auto series = critical_exponent_scan(synthetic(1.0, 0.5), {0.0, 0.4, 0.5});
  ASSERT_EQ(series.size(), 3u);
  // alpha = 0: running max of |E| stays at its first value for a decreasing error.
  EXPECT_DOUBLE_EQ(series[0].running_max.back(), series[0].running_max.front());
  // alpha = 0.4: q^{0.1} -> 0, so the running max never grows.
  EXPECT_DOUBLE_EQ(series[1].running_max.back(), std::pow(1e-1, 0.1));
  EXPECT_NEAR(series[2].running_max.back(), 1.0, 1e-12);
}

TEST(Scan, GaussianIndicatorAboveCriticalGrows) {
  const auto samples = error_curve(gaussian_tables().totient_sum, gaussian_invariants(), TestFunction::indicator(1, 2),
                                   geometric_grid(1e-2, 1e-6, 48));
  const auto series = critical_exponent_scan(samples, {0.75});
  EXPECT_GE(series[0].running_max.back(), 10.0 * series[0].running_max.front());
  for (std::size_t i = 1; i < series[0].running_max.size(); ++i) {
    EXPECT_GE(series[0].running_max[i], series[0].running_max[i - 1]);
  }
}
