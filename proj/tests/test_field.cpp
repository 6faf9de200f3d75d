#include <gtest/gtest.h>

#include "dzlab/field.hpp"
#include "test_util.hpp"

using namespace dzlab;

TEST(Quadratic, GaussianDiscriminantAndSignature) {
  const NumberField K = make_quadratic(-1);
  EXPECT_EQ(K.kind(), FieldKind::Quadratic);
  EXPECT_EQ(K.discriminant(), -4);
  EXPECT_EQ(K.degree(), 2);
  EXPECT_EQ(K.signature(), (Signature{0, 1}));
  EXPECT_EQ(K.spec(), "quad:-1");
}

TEST(Quadratic, RealFieldDiscriminant) {
  const NumberField K = make_quadratic(5);
  EXPECT_EQ(K.discriminant(), 5);
  EXPECT_EQ(K.signature(), (Signature{2, 0}));
}

TEST(Quadratic, DiscriminantRuleModFour) {
  EXPECT_EQ(make_quadratic(2).discriminant(), 8);
  EXPECT_EQ(make_quadratic(-3).discriminant(), -3);
  EXPECT_EQ(make_quadratic(3).discriminant(), 12);
  EXPECT_EQ(make_quadratic(-5).discriminant(), -20);
  EXPECT_EQ(make_quadratic(13).discriminant(), 13);
}

TEST(Quadratic, RejectsBadParameters) {
  EXPECT_DZ_ERROR(make_quadratic(12), ErrorCode::NotSquarefree);
  EXPECT_DZ_ERROR(make_quadratic(-4), ErrorCode::NotSquarefree);
  EXPECT_DZ_ERROR(make_quadratic(0), ErrorCode::DisallowedValue);
  EXPECT_DZ_ERROR(make_quadratic(1), ErrorCode::DisallowedValue);
}

TEST(Monogenic, PureCubic) {
  const NumberField K = make_monogenic({1, 0, 0, -2});
  EXPECT_EQ(K.kind(), FieldKind::Monogenic);
  EXPECT_EQ(K.degree(), 3);
  EXPECT_EQ(K.signature(), (Signature{1, 1}));
  EXPECT_EQ(K.discriminant(), -108);
  EXPECT_EQ(K.index_candidates(), (std::vector<std::uint64_t>{2, 3}));
  EXPECT_FALSE(K.discriminant_squarefree());
}

TEST(Monogenic, MatchesQuadraticPresentation) {
  const NumberField K = make_monogenic({1, 0, 1});
  EXPECT_EQ(K.degree(), 2);
  EXPECT_EQ(K.signature(), (Signature{0, 1}));
  EXPECT_EQ(K.discriminant(), -4);
}

TEST(Monogenic, RejectsReducibleAndNonMonic) {
  EXPECT_DZ_ERROR(make_monogenic({1, 0, -1}), ErrorCode::Reducible);
  EXPECT_DZ_ERROR(make_monogenic({1, 0, 0, -8}), ErrorCode::Reducible);
  EXPECT_DZ_ERROR(make_monogenic({1, 0, -5, 0, 4}), ErrorCode::Reducible);
  EXPECT_DZ_ERROR(make_monogenic({2, 0, 1}), ErrorCode::NotMonic);
}

TEST(Monogenic, QuarticSignature) {
  // x^4 - 2: two real roots, one complex pair.
  const NumberField K = make_monogenic({1, 0, 0, 0, -2});
  EXPECT_EQ(K.signature(), (Signature{2, 1}));
  EXPECT_EQ(K.discriminant(), -2048);
}

TEST(Monogenic, IrreducibilityWitnesses) {
  EXPECT_EQ(make_monogenic({1, 0, 0, -2}).irreducibility_witness(), IrreducibilityWitness::NoRationalRootLowDegree);
  EXPECT_EQ(make_monogenic({1, 0, 0, 0, -2}).irreducibility_witness(), IrreducibilityWitness::IrreducibleModPrime);
  // x^4 + 1 is irreducible over Q but splits into factors of degree <= 2 modulo every prime.
  EXPECT_DZ_ERROR(make_monogenic({1, 0, 0, 0, 1}), ErrorCode::Undecided);
  // (x^2 + 1)(x^2 + 2) has no rational root; the mod-p degrees cannot rule out 2 + 2.
  EXPECT_DZ_ERROR(make_monogenic({1, 0, 3, 0, 2}), ErrorCode::Undecided);
}

TEST(SpecParser, RoundTripsCanonicalSpecs) {
  for (const char* spec : {"rational", "quad:-1", "quad:5", "poly:1,0,0,-2"}) {
    EXPECT_EQ(parse_field_spec(spec).spec(), spec);
  }
  EXPECT_EQ(parse_field_spec("rational").degree(), 1);
}

TEST(SpecParser, RejectsMalformed) {
  EXPECT_DZ_ERROR(parse_field_spec("quad:"), ErrorCode::BadSpec);
  EXPECT_DZ_ERROR(parse_field_spec("quad: -1"), ErrorCode::BadSpec);
  EXPECT_DZ_ERROR(parse_field_spec("cubic:2"), ErrorCode::BadSpec);
  EXPECT_DZ_ERROR(parse_field_spec("poly:1,,2"), ErrorCode::BadSpec);
  EXPECT_DZ_ERROR(parse_field_spec("quad:12"), ErrorCode::NotSquarefree);
}

TEST(Invariants, MertensConstant) {
  const FieldInvariants inv = FieldInvariants::make(Kappa{0.5, KappaMethod::ExactCharacterSeries, 0.0}, 2.0, 0.0);
  EXPECT_DOUBLE_EQ(inv.mertens_constant, 0.125);
  EXPECT_DOUBLE_EQ(inv.limit_density(), 0.25);
  EXPECT_DZ_ERROR(FieldInvariants::make(Kappa{0.0, KappaMethod::ExactCharacterSeries, 0.0}, 2.0, 0.0),
                  ErrorCode::DomainError);
}
