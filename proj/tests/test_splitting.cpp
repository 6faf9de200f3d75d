#include <gtest/gtest.h>

#include "dzlab/splitting.hpp"
#include "test_util.hpp"

using namespace dzlab;

TEST(Kronecker, GaussianCharacter) {
  EXPECT_EQ(kronecker(-4, 5), 1);
  EXPECT_EQ(kronecker(-4, 2), 0);
  EXPECT_EQ(kronecker(-4, 3), -1);
}

TEST(Kronecker, EvenDiscriminantsAndTwo) {
  // chi_5(2) = -1 (5 = 5 mod 8), chi_8 vanishes at 2, chi_{-3}(2) = -1.
  EXPECT_EQ(kronecker(5, 2), -1);
  EXPECT_EQ(kronecker(8, 2), 0);
  EXPECT_EQ(kronecker(-3, 2), -1);
  EXPECT_EQ(kronecker(-7, 2), 1);
  EXPECT_EQ(kronecker(1, 12), 1);
}

TEST(Split, GaussianSplitInertRamified) {
  const NumberField K = make_quadratic(-1);
  EXPECT_EQ(split_prime(K, 5).entries, (std::vector<SplitEntry>{{1, 1, 2}}));
  EXPECT_EQ(split_prime(K, 2).entries, (std::vector<SplitEntry>{{1, 2, 1}}));
  EXPECT_EQ(split_prime(K, 3).entries, (std::vector<SplitEntry>{{2, 1, 1}}));
}

TEST(Split, PureCubicAtFive) {
  const NumberField K = make_monogenic({1, 0, 0, -2});
  EXPECT_EQ(split_prime(K, 5).entries, (std::vector<SplitEntry>{{1, 1, 1}, {2, 1, 1}}));
  // 31 = 1 mod 3 and 2 is a cube mod 31 (4^3 = 64 = 2), so 31 splits completely.
  EXPECT_EQ(split_prime(K, 31).entries, (std::vector<SplitEntry>{{1, 1, 3}}));
  // 7 = 1 mod 3 but the cubes mod 7 are {0, 1, 6}, so 7 is inert.
  EXPECT_EQ(split_prime(K, 7).entries, (std::vector<SplitEntry>{{3, 1, 1}}));
}

TEST(Split, PureCubicRamifiedPrimesResolvedByDedekind) {
  const NumberField K = make_monogenic({1, 0, 0, -2});
  EXPECT_EQ(split_prime(K, 2).entries, (std::vector<SplitEntry>{{1, 3, 1}}));
  EXPECT_EQ(split_prime(K, 3).entries, (std::vector<SplitEntry>{{1, 3, 1}}));
}

TEST(Split, IndexDivisorIsReported) {
  // Z[sqrt(-3)] has index 2 in the maximal order, and Dedekind's test fails at 2.
  const NumberField K = make_monogenic({1, 0, 3});
  try {
    split_prime(K, 2);
    FAIL() << "expected IndexDivisor";
  } catch (const IndexDivisorError& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexDivisor);
    EXPECT_EQ(e.prime(), 2u);
  }
  EXPECT_EQ(split_prime(K, 7).entries, (std::vector<SplitEntry>{{1, 1, 2}}));
}

TEST(Split, RejectsComposite) { EXPECT_DZ_ERROR(split_prime(make_quadratic(-1), 9), ErrorCode::DomainError); }

TEST(PrimeIdeals, GaussianUpToTen) {
  const auto list = prime_ideals_up_to(make_quadratic(-1), 10);
  EXPECT_EQ(list.items, (std::vector<PrimeIdealNorm>{{2, 2, 1}, {3, 9, 1}, {5, 5, 2}}));
  EXPECT_EQ(list.count(), 4u);
}

TEST(PrimeIdeals, RationalUpToTen) {
  const auto list = prime_ideals_up_to(make_rational(), 10);
  EXPECT_EQ(list.items, (std::vector<PrimeIdealNorm>{{2, 2, 1}, {3, 3, 1}, {5, 5, 1}, {7, 7, 1}}));
}

TEST(PrimeIdeals, EmptyBelowTwo) {
  EXPECT_TRUE(prime_ideals_up_to(make_quadratic(-1), 1).items.empty());
}

TEST(PrimeIdeals, ExcludedPrimeIsSkipped) {
  const NumberField K = make_monogenic({1, 0, 3});
  EXPECT_DZ_ERROR(prime_ideals_up_to(K, 50), ErrorCode::IndexDivisor);
  const auto list = prime_ideals_up_to(K, 50, {2});
  for (const auto& it : list.items) EXPECT_NE(it.p, 2u);
}
