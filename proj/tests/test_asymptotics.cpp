#include <gtest/gtest.h>

#include <cmath>

#include "abelcensus/asymptotics.hpp"

using namespace abelcensus;

namespace {

struct V4 {
  std::shared_ptr<const GroupStructure> gs = GroupStructure::build(AbelianGroup::make({2, 2}));
  OmegaSet omega = validate_omega(*gs, {2, 3});
  ParamVector x(Rational t) const { return ParamVector({Rational(1), t, t}); }
};

std::vector<Bound> quarter_decades(int lo, int hi) {
  std::vector<Bound> out;
  for (int k = 4 * lo; k <= 4 * hi; ++k) out.push_back(Bound(10, 1, k, 4));
  return out;
}

SingularityData sd(Rational sigma0, std::int64_t pole, int logs) {
  SingularityData s;
  s.sigma0 = sigma0;
  s.pole_order = pole;
  s.log_power = logs;
  return s;
}

}  // namespace

TEST(Asymptotics, DelangeShapes) {
  EXPECT_EQ(delange_shape(sd(1, 1, 0)).str(), "C*x^1");
  auto s2 = delange_shape(sd(1, 2, 0));
  EXPECT_EQ(s2.log_power, 1);
  EXPECT_EQ(s2.str(), "C*x^1*(log x)^1");
  auto s3 = delange_shape(sd(1, 0, 1));
  EXPECT_EQ(s3.log_power, -1);
  EXPECT_EQ(s3.loglog_power, 0);
  EXPECT_EQ(s3.str(), "C*x^1*(log x)^-1");
  EXPECT_TRUE(delange_shape(sd(1, 0, 0)).bounded);
  EXPECT_EQ(delange_shape(sd(Rational(1, 2), 1, 2)).str(), "C*x^1/2*(log log x)^2");
  ASSERT_TRUE(delange_shape(sd(1, 3, 0)).gamma_value.has_value());
  EXPECT_DOUBLE_EQ(*delange_shape(sd(1, 3, 0)).gamma_value, 2.0);
}

TEST(Asymptotics, KleinFourSingularities) {
  V4 v;
  for (int gamma = 1; gamma <= 3; ++gamma) {
    auto big = singularity_data(*v.gs, v.x(2), v.omega, gamma);
    EXPECT_EQ(big.case_tag, 1);
    EXPECT_EQ(big.sigma0, Rational(1));
    EXPECT_EQ(big.pole_order, 1);
    EXPECT_EQ(delange_shape(big).str(), "C*x^1");

    auto one = singularity_data(*v.gs, v.x(1), v.omega, gamma);
    EXPECT_EQ(one.case_tag, 2);
    EXPECT_EQ(one.pole_order, 1);
    EXPECT_EQ(one.log_power, gamma);
    EXPECT_EQ(delange_shape(one).loglog_power, gamma);
    EXPECT_EQ(delange_shape(one).log_power, 0);

    auto small = singularity_data(*v.gs, v.x(Rational(1, 2)), v.omega, gamma);
    EXPECT_EQ(small.case_tag, 2);
    EXPECT_EQ(small.sigma0, Rational(2));
    EXPECT_EQ(small.pole_order, 0);
    EXPECT_EQ(small.log_power, gamma);
    EXPECT_EQ(delange_shape(small).log_power, -1);
    EXPECT_EQ(small.loglog_candidates, (std::vector<int>{gamma, gamma - 1}));
    EXPECT_TRUE(small.loglog_ambiguous);
  }
  // No surjection avoids Omega everywhere, so the gamma = 0 slice is empty.
  auto empty = singularity_data(*v.gs, v.x(2), v.omega, 0);
  EXPECT_EQ(empty.case_tag, 0);
  EXPECT_TRUE(delange_shape(empty).bounded);
}

TEST(Asymptotics, EmptyOmegaIsPoleCase) {
  auto gs = GroupStructure::build(AbelianGroup::cyclic(6));
  auto s = singularity_data(*gs, ParamVector({Rational(3), Rational(4), Rational(5)}), OmegaSet::none(), 0);
  EXPECT_EQ(s.case_tag, 1);
  EXPECT_EQ(s.sigma0, Rational(1, 3));
  EXPECT_EQ(s.pole_order, 1);
  EXPECT_THROW(singularity_data(*gs, ParamVector::ones(3), OmegaSet::none(), -1), ValidationError);
}

TEST(Asymptotics, GammaBelowGammaXIsOutOfDomain) {
  auto gs = GroupStructure::build(AbelianGroup::make({2, 2, 2, 2, 2}));
  const auto& g = gs->group();
  std::vector<Rational> v(gs->class_count(), Rational(2));
  v[gs->class_of(g.generator(0))] = 1;
  v[gs->class_of(g.generator(1))] = 1;
  std::vector<Element> om;
  for (Element e = 1; e < g.order(); ++e)
    if (e != g.generator(0)) om.push_back(e);
  auto omega = validate_omega(*gs, om);
  ParamVector x(v);
  auto sc = structure_constants(*gs, x, omega);
  ASSERT_GT(sc.gamma, 0);
  EXPECT_THROW(singularity_data(*gs, x, omega, sc.gamma - 1), DomainError);
  auto s = singularity_data(*gs, x, omega, sc.gamma + 1);
  EXPECT_EQ(s.log_power, sc.gamma + 1 - sc.delta);
}

TEST(Asymptotics, FitsExactPowerLaw) {
  std::vector<double> X, N;
  for (int k = 8; k <= 28; ++k) {
    X.push_back(std::pow(10.0, k / 4.0));
    N.push_back(std::floor(X.back()));
  }
  auto f = fit_exponents(X, N);
  EXPECT_NEAR(f.sigma, 1.0, 0.01);
  EXPECT_NEAR(f.sigma_only, 1.0, 0.01);
  EXPECT_NEAR(f.log_power, 0.0, 0.05);
  EXPECT_LT(f.rms, 1e-3);
  EXPECT_EQ(f.points, X.size());
}

TEST(Asymptotics, FitsLogFactor) {
  std::vector<double> X, N;
  for (int k = 8; k <= 28; ++k) {
    X.push_back(std::pow(10.0, k / 4.0));
    N.push_back(std::floor(X.back() * std::log(X.back())));
  }
  auto f = fit_exponents(X, N);
  EXPECT_NEAR(f.log_power, 1.0, 0.1);
  EXPECT_NEAR(f.sigma, 1.0, 0.01);
  EXPECT_GT(f.sigma_only, 1.0);
}

TEST(Asymptotics, FitRejectsThinData) {
  std::vector<double> X{10, 100, 1000, 10000}, N{10, 100, 1000, 10000};
  EXPECT_THROW(fit_exponents(X, N), ValidationError);
  std::vector<double> X2, N2;
  for (int k = 0; k < 10; ++k) {
    X2.push_back(1000 + 100 * k);
    N2.push_back(X2.back());
  }
  EXPECT_THROW(fit_exponents(X2, N2), ValidationError);
  EXPECT_THROW(fit_exponents(X2, std::vector<double>(3, 1.0)), ValidationError);
}

TEST(Asymptotics, QuadraticCensusGrowsLinearly) {
  auto gs = GroupStructure::build(AbelianGroup::cyclic(2));
  EnumContext ctx(gs, ParamVector::ones(1), OmegaSet::none());
  auto t = enumerate_census(ctx, quarter_decades(2, 6));
  auto f = fit_exponents(t);
  EXPECT_NEAR(f.sigma, 1.0, 0.05);
  EXPECT_EQ(table_column(t, CountMode::sur, {}).back(), static_cast<double>(t.total(t.size() - 1).sur));
}

TEST(Asymptotics, RatioOfEqualSlicesIsOne) {
  std::vector<double> a{200, 400, 800, 1600, 3200, 6400};
  auto r = ratio_R(a, a);
  for (auto& v : r.ratios) EXPECT_DOUBLE_EQ(*v, 1.0);
  EXPECT_EQ(r.trend, Trend::bounded_positive);
}

TEST(Asymptotics, RatioTrends) {
  std::vector<double> den{1000, 2000, 4000, 8000, 16000, 32000, 64000, 128000};
  std::vector<double> dec, inc;
  for (std::size_t i = 0; i < den.size(); ++i) {
    dec.push_back(den[i] / double(1 + i));
    inc.push_back(den[i] * double(1 + i));
  }
  EXPECT_EQ(ratio_R(dec, den).trend, Trend::to_zero);
  EXPECT_EQ(ratio_R(inc, den).trend, Trend::growing);
  EXPECT_STREQ(trend_name(Trend::to_zero), "to_zero");
}

TEST(Asymptotics, RatioErrors) {
  std::vector<double> z(6, 0), one(6, 500);
  EXPECT_THROW(ratio_R(one, z), UndefinedError);
  std::vector<double> tail{500, 500, 500, 500, 500, 0};
  EXPECT_THROW(ratio_R(one, tail), ValidationError);
  std::vector<double> tiny{1, 2, 3, 4, 5, 6};
  EXPECT_THROW(ratio_R(one, tiny), ValidationError);
  EXPECT_THROW(ratio_R(one, std::vector<double>(3, 1)), ValidationError);
}

TEST(Asymptotics, RatioFromCensusTable) {
  V4 v;
  EnumContext ctx(v.gs, v.x(1), v.omega);
  std::vector<Bound> cps;
  for (int k = 2; k <= 10; ++k) cps.push_back(Bound(10, 1, k, 2));
  auto t = enumerate_census(ctx, cps);
  auto r = ratio_R(1, 1, t, {.windows = 3, .min_denominator = 1});
  for (auto& q : r.ratios)
    if (q) EXPECT_DOUBLE_EQ(*q, 1.0);
}

TEST(Asymptotics, ScalingInvariance) {
  auto c2 = GroupStructure::build(AbelianGroup::cyclic(2));
  EnumContext q(c2, ParamVector::ones(1), OmegaSet::none());
  EXPECT_TRUE(scaling_check(q, Rational(1), {Bound::integer(1000)}));
  EXPECT_TRUE(scaling_check(q, Rational(2), {Bound::integer(1000)}));
  auto c6 = GroupStructure::build(AbelianGroup::cyclic(6));
  EnumContext s(c6, ParamVector({Rational(5), Rational(4), Rational(3)}), OmegaSet::none());
  EXPECT_TRUE(scaling_check(s, Rational(1, 2), {Bound::integer(1000)}));
  V4 v;
  EnumContext w(v.gs, v.x(2), v.omega);
  EXPECT_TRUE(scaling_check(w, Rational(1, 3), {Bound::integer(100), Bound::integer(10000)}));
}
