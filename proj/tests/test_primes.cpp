#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "abelcensus/primes.hpp"
#include "oracles.hpp"

using namespace abelcensus;

namespace {

// Plain sieve of Eratosthenes over a byte array.
std::vector<std::uint32_t> plain_sieve(std::uint32_t n) {
  std::vector<char> comp(n + 1, 0);
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = std::uint64_t(i) * i; j <= n; j += i) comp[j] = 1;
  }
  return out;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("abelcensus_test_" + name);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST(Primes, SmallLimits) {
  EXPECT_TRUE(sieve_primes(1).empty());
  EXPECT_TRUE(sieve_primes(0).empty());
  EXPECT_EQ(sieve_primes(2), (std::vector<std::uint32_t>{2}));
  EXPECT_EQ(sieve_primes(10), (std::vector<std::uint32_t>{2, 3, 5, 7}));
  EXPECT_EQ(sieve_primes(11), (std::vector<std::uint32_t>{2, 3, 5, 7, 11}));
}

TEST(Primes, MatchesTrialDivision) {
  std::vector<std::uint32_t> ref;
  for (auto p : oracle::primes_upto(5000)) ref.push_back(static_cast<std::uint32_t>(p));
  EXPECT_EQ(sieve_primes(5000), ref);
}

TEST(Primes, MatchesPlainSieveAcrossSegments) {
  for (std::uint32_t n : {65535u, 65536u, 65537u, 262147u, 1000000u}) EXPECT_EQ(sieve_primes(n), plain_sieve(n)) << n;
}

TEST(Primes, OneMillionHas78498) {
  auto t = PrimeTable::build(1'000'000);
  EXPECT_EQ(t.size(), 78498u);
  EXPECT_EQ(t.count_upto(100), 25u);
  EXPECT_EQ(t.count_upto(7), 4u);
}

TEST(Primes, ResidueTags) {
  auto t = PrimeTable::build(100);
  auto r = t.residues(4);
  ASSERT_EQ(r.size(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(r[i], t[i] % 4);
}

TEST(Primes, BadTableFailsValidation) {
  PrimeTable t(std::vector<std::uint32_t>{2, 3, 5}, 10);
  EXPECT_THROW(t.validate(), InvariantError);
}

TEST(Primes, CacheRoundTrip) {
  SieveCache cache(temp_dir("roundtrip"));
  auto a = cache.load_or_build(100000);
  ASSERT_TRUE(std::filesystem::exists(cache.path_for(100000)));
  auto b = cache.load(100000);
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->primes(), a.primes());
  EXPECT_FALSE(cache.load(1000).has_value());
}

TEST(Primes, CorruptCacheIsRebuilt) {
  SieveCache cache(temp_dir("corrupt"));
  cache.load_or_build(10000);
  {
    std::fstream f(cache.path_for(10000), std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(48);
    const char junk[4] = {1, 2, 3, 4};
    f.write(junk, 4);
  }
  EXPECT_FALSE(cache.load(10000).has_value());
  auto t = cache.load_or_build(10000);
  EXPECT_EQ(t.size(), 1229u);
  EXPECT_TRUE(cache.load(10000).has_value());
}

TEST(Primes, TruncatedCacheIsRebuilt) {
  SieveCache cache(temp_dir("truncated"));
  cache.load_or_build(10000);
  std::filesystem::resize_file(cache.path_for(10000), 20);
  EXPECT_FALSE(cache.load(10000).has_value());
  EXPECT_EQ(cache.load_or_build(10000).size(), 1229u);
}
