#include <gtest/gtest.h>

#include <random>

#include "abelcensus/invariants.hpp"
#include "test_util.hpp"

using namespace abelcensus;

TEST(Invariants, C6DiscriminantExponents) {
  auto gs = GroupStructure::build(AbelianGroup::cyclic(6));
  ParamVector x({Rational(3), Rational(4), Rational(5)});
  const auto& lat = gs->lattice();
  EXPECT_EQ(x_of_subgroup(*gs, lat.cyclic_of(1), x), Rational(5));
  EXPECT_EQ(x_of_subgroup(*gs, lat.cyclic_of(2), x), Rational(4));
  EXPECT_EQ(x_of_subgroup(*gs, lat.cyclic_of(3), x), Rational(3));
  EXPECT_EQ(x_of_subgroup(*gs, lat.trivial(), x), Rational(0));
}

TEST(Invariants, XOfSubgroupMatchesBruteForce) {
  std::mt19937 rng(7);
  for (const auto& g : all_abelian_groups(36)) {
    auto gs = GroupStructure::build(g);
    std::vector<Rational> v;
    for (int i = 0; i < gs->class_count(); ++i) v.emplace_back(1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 3));
    ParamVector x(v);
    auto og = testutil::oracle_group(*gs);
    auto par = testutil::oracle_params(*gs, x);
    for (int h = 0; h < gs->lattice().size(); ++h) {
      auto ref = oracle::x_of(og, testutil::oracle_mask(*gs, gs->lattice()[h].elements), par);
      auto got = x_of_subgroup(*gs, h, x);
      EXPECT_EQ(got.numerator(), ref.numerator()) << g.name();
      EXPECT_EQ(got.denominator(), ref.denominator()) << g.name();
      EXPECT_EQ(scaled_x_of_subgroup(*gs, h, x), (got * x.denominator()).numerator());
    }
  }
}

TEST(Invariants, BetaIntegralityOnRandomClosedSets) {
  std::mt19937 rng(11);
  auto groups = all_abelian_groups(36);
  for (int trial = 0; trial < 100; ++trial) {
    const auto& g = groups[rng() % groups.size()];
    auto gs = GroupStructure::build(g);
    std::vector<Element> lambda;
    oracle::Q ref = 0;
    auto og = testutil::oracle_group(*gs);
    for (const auto& pc : gs->classes()) {
      if (rng() % 2) continue;
      for (auto e : pc.members) {
        lambda.push_back(e);
        // 1/phi(order) from the oracle group arithmetic.
        int o = og.order(oracle::to_oracle(og, g, e));
        int phi = 0;
        for (int k = 1; k <= o; ++k) phi += std::gcd(k, o) == 1;
        ref += oracle::Q(1, phi);
      }
    }
    ASSERT_EQ(ref.denominator(), 1);
    EXPECT_EQ(beta_of_class_set(*gs, lambda), ref.numerator()) << g.name();
  }
}

TEST(Invariants, BetaOfSingleClassIsOne) {
  for (const auto& g : all_abelian_groups(36)) {
    auto gs = GroupStructure::build(g);
    for (const auto& pc : gs->classes()) EXPECT_EQ(beta_of_class_set(*gs, pc.members), 1);
  }
}

TEST(Invariants, BetaRejectsOpenSets) {
  auto gs = GroupStructure::build(AbelianGroup::cyclic(6));
  EXPECT_THROW(beta_of_class_set(*gs, {1}), ValidationError);
  EXPECT_THROW(beta_of_class_set(*gs, {0, 3}), ValidationError);
}

TEST(Invariants, ValidateOmega) {
  auto gs = GroupStructure::build(AbelianGroup::cyclic(6));
  EXPECT_THROW(validate_omega(*gs, {0}), ValidationError);
  EXPECT_THROW(validate_omega(*gs, {1}), ValidationError);
  auto om = validate_omega(*gs, {1, 5});
  EXPECT_EQ(om.classes, (std::vector<int>{2}));
  auto v4 = GroupStructure::build(AbelianGroup::make({2, 2}));
  // A single element of order 2 is a whole class.
  EXPECT_EQ(validate_omega(*v4, {1}).classes, (std::vector<int>{0}));
  EXPECT_THROW(OmegaSet::from_classes(*v4, {3}), ValidationError);
}

TEST(Invariants, XiClassesAndBetaAggregate) {
  auto gs = GroupStructure::build(AbelianGroup::make({2, 2}));
  auto om = OmegaSet::from_classes(*gs, {1, 2});
  EXPECT_EQ(xi_classes(*gs, om), (std::vector<int>{1, 2}));
  auto ba = beta_aggregate(*gs, ParamVector({Rational(1), Rational(2), Rational(2)}), om);
  EXPECT_EQ(ba.x0, Rational(1));
  EXPECT_EQ(ba.beta, 1);

  auto c4 = GroupStructure::build(AbelianGroup::cyclic(4));
  // Omega = generators of C4: only that class lies above it.
  auto om4 = OmegaSet::from_classes(*c4, {1});
  EXPECT_EQ(xi_classes(*c4, om4), (std::vector<int>{1}));
  // Omega = {g^2}: every class lies above it.
  auto om2 = OmegaSet::from_classes(*c4, {0});
  EXPECT_EQ(xi_classes(*c4, om2), (std::vector<int>{0, 1}));
  EXPECT_THROW(beta_aggregate(*c4, ParamVector::ones(2), om2), UndefinedError);
}

TEST(Invariants, OmegaOfType) {
  auto g = AbelianGroup::cyclic(4);
  EXPECT_EQ(omega_of_type(g, 2, 2), (std::vector<Element>{1, 3}));
  EXPECT_EQ(omega_of_type(g, 2, 1), (std::vector<Element>{2}));
  EXPECT_EQ(omega_of_prime(g, 2), (std::vector<Element>{1, 2, 3}));
  EXPECT_TRUE(omega_of_prime(g, 3).empty());
  EXPECT_THROW(omega_of_type(g, 4, 1), ValidationError);
}

TEST(Invariants, ParamVectorValidation) {
  EXPECT_THROW(ParamVector({Rational(1), Rational(0)}), ValidationError);
  EXPECT_THROW(ParamVector(std::vector<Rational>{}), ValidationError);
  ParamVector x({Rational(1, 2), Rational(2, 3)});
  EXPECT_EQ(x.denominator(), 6);
  EXPECT_EQ(x.scaled(0), 3);
  EXPECT_EQ(x.scaled(1), 4);
  EXPECT_EQ(x.scaled_by(Rational(3)).denominator(), 2);
}
