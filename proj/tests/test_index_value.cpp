#include <gtest/gtest.h>

#include "abelcensus/index_value.hpp"

using namespace abelcensus;

TEST(Bound, ParseForms) {
  EXPECT_EQ(Bound::parse("1000").str(), "1000");
  EXPECT_EQ(Bound::parse("1e6").str(), "1000000");
  EXPECT_EQ(Bound::parse("2.5e3").str(), "2500");
  EXPECT_EQ(Bound::parse("10^6").str(), "1000000");
  EXPECT_EQ(Bound::parse("10^1/3").str(), "10^1/3");
  EXPECT_EQ(Bound::parse("10^(2/6)").str(), "10^1/3");
  EXPECT_EQ(Bound::parse("1000/7").str(), "1000/7");
  EXPECT_THROW(Bound::parse("abc"), ValidationError);
  EXPECT_THROW(Bound::parse(""), ValidationError);
  EXPECT_THROW(Bound::parse("1/2"), ValidationError);
  EXPECT_THROW(Bound::parse("0"), ValidationError);
}

TEST(Bound, ValueEquality) {
  EXPECT_EQ(Bound::parse("1e4"), Bound(10, 1, 4, 1));
  EXPECT_EQ(Bound(100, 1, 1, 2), Bound::integer(10));
  EXPECT_TRUE(Bound::parse("10^1/2") < Bound::parse("4"));
  EXPECT_TRUE(Bound::parse("3") < Bound::parse("10^1/2"));
  EXPECT_FALSE(Bound::parse("10") < Bound::parse("10"));
}

TEST(Bound, ThresholdIsExact) {
  // T < threshold(D)  iff  T < X^D, checked by brute force on small cases.
  const char* bounds[] = {"10", "17/3", "10^1/2", "2^5/3", "7^2/3", "1000/7"};
  for (const char* b : bounds) {
    auto X = Bound::parse(b);
    for (std::int64_t D : {1, 2, 3, 6}) {
      auto thr = X.threshold(D);
      // X^D = (num/den)^(en*D/ed); T < X^D  iff  T^ed * den^(en*D) < num^(en*D).
      for (std::int64_t T = 1; T < 4000; ++T) {
        using boost::multiprecision::pow;
        const auto e = static_cast<unsigned>(X.exp_num() * D);
        BigInt lhs = pow(BigInt(T), static_cast<unsigned>(X.exp_den())) * pow(X.base_den(), e);
        BigInt rhs = pow(X.base_num(), e);
        EXPECT_EQ(BigInt(T) < thr, lhs < rhs) << b << " D=" << D << " T=" << T;
      }
    }
  }
}

TEST(Bound, PowAndHalved) {
  auto X = Bound::integer(1000);
  EXPECT_EQ(X.pow(Rational(2)), Bound::integer(1000000));
  EXPECT_EQ(X.pow(Rational(1, 3)), Bound::integer(10));
  EXPECT_EQ(X.halved(), Bound::integer(500));
  EXPECT_EQ(Bound::parse("10^1/2").halved(), Bound(10, 4, 1, 2));
  EXPECT_NEAR(Bound::parse("10^1/3").value(), 2.15443469, 1e-6);
}

TEST(Bound, IrootCeil) {
  for (std::int64_t n = 1; n < 3000; ++n)
    for (std::int64_t m = 1; m <= 4; ++m) {
      BigInt r = iroot_ceil(BigInt(n), m);
      using boost::multiprecision::pow;
      EXPECT_GE(pow(r, static_cast<unsigned>(m)), n);
      EXPECT_LT(pow(r - 1, static_cast<unsigned>(m)), n);
    }
}

TEST(IndexValue, MergeAndOrder) {
  IndexValue a({{3, 1}, {2, 1}, {3, 2}});
  EXPECT_EQ(a.str(), "2:1,3:3");
  EXPECT_EQ(IndexValue::one().str(), "1");
  EXPECT_EQ(a.times(IndexValue({{5, 1}})).str(), "2:1,3:3,5:1");
  EXPECT_EQ(a.scaled_value(), BigInt(54));
  EXPECT_TRUE(IndexValue::one() < a);
  EXPECT_EQ(IndexValue({{2, 0}}), IndexValue::one());
}

TEST(Saturation, MulAndPow) {
  EXPECT_TRUE(sat_mul(U128(10), U128(20), U128(150)) == U128(150));
  EXPECT_TRUE(sat_mul(U128(10), U128(12), U128(150)) == U128(120));
  EXPECT_TRUE(sat_pow(U128(3), 4, U128(1000)) == U128(81));
  EXPECT_TRUE(sat_pow(U128(3), 40, U128(1000)) == U128(1000));
  U128 big = U128(1) << 120;
  EXPECT_TRUE(sat_mul(big, big, U128(7) << 124) == U128(7) << 124);
}
