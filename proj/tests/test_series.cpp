#include <gtest/gtest.h>

#include "abelcensus/series.hpp"
#include "test_util.hpp"

using namespace abelcensus;

namespace {

struct Setup {
  std::shared_ptr<const GroupStructure> gs;
  EnumContext ctx;
};

Setup v4(std::vector<Rational> x) {
  auto gs = GroupStructure::build(AbelianGroup::make({2, 2}));
  auto omega = validate_omega(*gs, {2, 3});
  return {gs, EnumContext(gs, ParamVector(std::move(x)), omega)};
}

std::uint64_t total(const CoefficientMap& m) {
  std::uint64_t s = 0;
  for (auto& [d, c] : m) s += c;
  return s;
}

}  // namespace

TEST(Series, MuCoefficientAtThree) {
  auto s = v4({1, 1, 1});
  auto mu = mu_series(s.ctx, 1, Bound::integer(100));
  EXPECT_EQ(mu.at(IndexValue({{3, 1}})), 2u);
  EXPECT_EQ(mu.at(IndexValue::one()), 0u);
  auto mu0 = mu_series(s.ctx, 0, Bound::integer(100));
  EXPECT_EQ(mu0.at(IndexValue::one()), 1u);
  EXPECT_EQ(mu0.at(IndexValue({{3, 1}})), 1u);
  EXPECT_TRUE(mu0.warning.has_value());
}

TEST(Series, MuAndPiMatchEnumerationPerSlice) {
  struct G {
    AbelianGroup g;
    std::vector<Element> omega;
  };
  for (const auto& [g, om] : std::vector<G>{{AbelianGroup::cyclic(2), {}},
                                            {AbelianGroup::cyclic(6), {}},
                                            {AbelianGroup::cyclic(6), {3}},
                                            {AbelianGroup::make({2, 2}), {2, 3}},
                                            {AbelianGroup::make({3, 3}), {1, 2}},
                                            {AbelianGroup::cyclic(4), {2}}}) {
    auto gs = GroupStructure::build(g);
    EnumContext ctx(gs, ParamVector::ones(gs->class_count()), validate_omega(*gs, om));
    const auto X = Bound::integer(20000);
    for (int gamma = 0; gamma <= (om.empty() ? 0 : 3); ++gamma) {
      SliceSelect sel = om.empty() ? SliceSelect{} : SliceSelect::of(gamma);
      EXPECT_EQ(mu_series(ctx, gamma, X).coefficients, count_by_index(ctx, X, CountMode::hom, sel))
          << g.name() << " gamma " << gamma;
      auto pi = pi_series(ctx, gamma, X);
      EXPECT_EQ(pi.coefficients, count_by_index(ctx, X, CountMode::sur, sel));
      EXPECT_EQ(pi_series_moebius(ctx, gs->lattice().whole(), gamma, X).coefficients, pi.coefficients)
          << g.name() << " gamma " << gamma;
    }
  }
}

TEST(Series, SumsMatchBruteForce) {
  auto s = v4({1, 2, 3});
  const std::uint64_t X = 50;
  auto ref = oracle::brute_census(testutil::oracle_group(*s.gs), testutil::oracle_params(*s.gs, s.ctx.x()),
                                  testutil::oracle_mask(*s.gs, s.ctx.omega().elements), X);
  for (int gamma = 0; gamma <= 2; ++gamma) {
    auto it = ref.by_slice.find(1 + gamma);
    std::uint64_t hom = it == ref.by_slice.end() ? 0 : it->second.second;
    std::uint64_t sur = it == ref.by_slice.end() ? 0 : it->second.first;
    EXPECT_EQ(mu_series(s.ctx, gamma, Bound::integer(X)).sum(), hom) << gamma;
    EXPECT_EQ(pi_series_moebius(s.ctx, s.gs->lattice().whole(), gamma, Bound::integer(X)).sum(), sur) << gamma;
  }
}

TEST(Series, MuDominatesPi) {
  auto s = v4({1, 2, 2});
  const auto X = Bound::integer(100000);
  for (int gamma = 0; gamma <= 3; ++gamma)
    EXPECT_TRUE(violations_geq(mu_series(s.ctx, gamma, X), pi_series(s.ctx, gamma, X)).empty()) << gamma;
}

TEST(Series, PsiBoundsPiFromAbove) {
  auto s = v4({1, 1, 1});
  const auto X = Bound::integer(10000);
  for (int gamma = 1; gamma <= 3; ++gamma) {
    auto pi = pi_series(s.ctx, gamma, X);
    auto psi = psi_series(s.ctx, gamma, X);
    EXPECT_TRUE(violations_geq(psi, pi).empty()) << gamma;
    EXPECT_GT(pi.sum(), 0u);
  }
}

TEST(Series, TauBoundsPiFromBelow) {
  auto s = v4({1, 1, 1});
  const auto X = Bound::integer(10000);
  for (int gamma = 1; gamma <= 3; ++gamma) {
    auto tau = tau_series(s.ctx, gamma, X);
    EXPECT_TRUE(violations_geq(pi_series(s.ctx, gamma, X), tau).empty()) << gamma;
    EXPECT_GT(tau.sum(), 0u) << gamma;
  }
}

TEST(Series, TauUndefinedWhenExtraSlotsAreCostly) {
  auto s = v4({1, 2, 2});
  EXPECT_THROW(tau_series(s.ctx, 1, Bound::integer(1000)), Error);
}

TEST(Series, PsiNeedsOmega) {
  auto gs = GroupStructure::build(AbelianGroup::cyclic(2));
  EnumContext ctx(gs, ParamVector::ones(1), OmegaSet::none());
  EXPECT_THROW(psi_series(ctx, 1, Bound::integer(100)), DomainError);
  EXPECT_THROW(mu_series(ctx, -1, Bound::integer(100)), ValidationError);
}

TEST(Series, WithinTrivialSubgroupIsOne) {
  auto s = v4({1, 1, 1});
  auto m = mu_series_within(s.ctx, 0, 0, Bound::integer(1000));
  EXPECT_EQ(m.dump(), "1\t1\n");
}

TEST(Series, DumpFormat) {
  auto gs = GroupStructure::build(AbelianGroup::cyclic(2));
  EnumContext ctx(gs, ParamVector::ones(1), OmegaSet::none());
  auto pi = pi_series(ctx, 0, Bound::integer(8));
  EXPECT_EQ(pi.dump(), "2:1\t3\n2:1,3:1\t3\n3:1\t1\n5:1\t1\n7:1\t1\n");
  EXPECT_EQ(total(pi.coefficients), 9u);
}
