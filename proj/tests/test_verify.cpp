#include <gtest/gtest.h>

#include <set>

#include "dzlab/verify.hpp"
#include "test_util.hpp"

using namespace dzlab;

TEST(Verify, GaussianAllPass) {
  const VerifyReport r = verify_field(make_quadratic(-1), 100000);
  EXPECT_EQ(r.field_spec, "quad:-1");
  EXPECT_GE(r.checks.size(), 20u);
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.module << ": " << c.name << " (" << c.detail << ")";
  EXPECT_TRUE(r.all_passed());
}

TEST(Verify, CoversEveryModule) {
  const VerifyReport r = verify_field(make_quadratic(5), 20000);
  std::set<std::string> modules;
  for (const auto& c : r.checks) modules.insert(c.module);
  for (const char* m : {"field_core", "prime_splitter", "dirichlet_sieve", "zeta_engine", "measure_lab", "mellin_engine"}) {
    EXPECT_TRUE(modules.count(m)) << m;
  }
  EXPECT_TRUE(r.all_passed());
}

TEST(Verify, PureCubicAllPass) {
  const VerifyReport r = verify_field(make_monogenic({1, 0, 0, -2}), 20000);
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.module << ": " << c.name << " (" << c.detail << ")";
}

TEST(Verify, RejectsTinyBound) { EXPECT_DZ_ERROR(verify_field(make_rational(), 10), ErrorCode::Config); }

TEST(Convolution, MoebiusInvertsOne) {
  const auto conv = dirichlet_convolve([](std::uint64_t) -> int128 { return 1; },
                                       [](std::uint64_t m) -> int128 {
                                         // classical mu by trial division
                                         int sign = 1;
                                         for (std::uint64_t p = 2; p * p <= m; ++p) {
                                           if (m % p) continue;
                                           m /= p;
                                           if (m % p == 0) return 0;
                                           sign = -sign;
                                         }
                                         return m > 1 ? -sign : sign;
                                       },
                                       100);
  EXPECT_EQ(conv[1], 1);
  for (std::uint64_t m = 2; m <= 100; ++m) EXPECT_EQ(conv[m], 0) << m;
}
