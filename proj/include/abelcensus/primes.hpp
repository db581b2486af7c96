#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "abelcensus/errors.hpp"

namespace abelcensus {

/// Primes <= limit by a segmented, odd-only sieve of Eratosthenes.
inline std::vector<std::uint32_t> sieve_primes(std::uint64_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  if (limit > 0xFFFFFFFFull) throw ResourceError("sieve limit exceeds 2^32");
  out.push_back(2);
  if (limit < 3) return out;

  // Base primes up to sqrt(limit).
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(limit))) + 1;
  std::vector<char> small(root + 1, 1);
  std::vector<std::uint32_t> base;
  for (std::uint64_t i = 3; i <= root; i += 2) {
    if (!small[i]) continue;
    base.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= root; j += 2 * i) small[j] = 0;
  }

  out.reserve(static_cast<std::size_t>(limit / std::max(1.0, std::log(static_cast<double>(limit)) - 1.1)) + 16);
  // Segment holds odd numbers lo, lo+2, ..., lo + 2*(kSeg-1).
  constexpr std::uint64_t kSeg = 1u << 18;
  std::vector<char> seg(kSeg);
  for (std::uint64_t lo = 3; lo <= limit; lo += 2 * kSeg) {
    const std::uint64_t hi = std::min(limit, lo + 2 * kSeg - 2);
    const std::uint64_t n = (hi - lo) / 2 + 1;
    std::fill(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(n), 1);
    for (std::uint32_t p : base) {
      const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
      if (pp > hi) break;
      std::uint64_t start = std::max(pp, (lo + p - 1) / p * p);
      if (start % 2 == 0) start += p;
      for (std::uint64_t j = (start - lo) / 2; j < n; j += p) seg[j] = 0;
    }
    for (std::uint64_t j = 0; j < n; ++j)
      if (seg[j]) out.push_back(static_cast<std::uint32_t>(lo + 2 * j));
  }
  return out;
}

/// Known values of pi(10^k), k = 1..9, used to validate sieve output.
inline std::optional<std::uint64_t> known_prime_count(std::uint64_t limit) {
  static constexpr std::uint64_t kCounts[] = {4,      25,      168,      1229,      9592,
                                              78498,  664579,  5761455,  50847534};
  std::uint64_t pow10 = 10;
  for (auto c : kCounts) {
    if (pow10 == limit) return c;
    pow10 *= 10;
  }
  return std::nullopt;
}

/// Sorted prime list with residue lookups modulo a fixed modulus.
class PrimeTable {
 public:
  PrimeTable() = default;
  PrimeTable(std::vector<std::uint32_t> primes, std::uint64_t limit)
      : primes_(std::move(primes)), limit_(limit) {}

  static PrimeTable build(std::uint64_t limit) {
    PrimeTable t(sieve_primes(limit), limit);
    t.validate();
    return t;
  }

  const std::vector<std::uint32_t>& primes() const { return primes_; }
  std::size_t size() const { return primes_.size(); }
  std::uint32_t operator[](std::size_t i) const { return primes_[i]; }
  std::uint64_t limit() const { return limit_; }

  /// Number of primes <= n (n must not exceed limit()).
  std::size_t count_upto(std::uint64_t n) const {
    return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), n) - primes_.begin());
  }

  /// Residue of each prime modulo m, in table order.
  std::vector<std::uint32_t> residues(std::uint32_t m) const {
    std::vector<std::uint32_t> r(primes_.size());
    for (std::size_t i = 0; i < primes_.size(); ++i) r[i] = primes_[i] % m;
    return r;
  }

  /// Checks the count against pi(10^k) when the limit is a power of ten.
  void validate() const {
    if (auto c = known_prime_count(limit_); c && *c != primes_.size())
      throw InvariantError("prime table for limit " + std::to_string(limit_) + " has " +
                           std::to_string(primes_.size()) + " primes, expected " + std::to_string(*c));
  }

 private:
  std::vector<std::uint32_t> primes_;
  std::uint64_t limit_ = 0;
};

namespace detail {

inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ull) {
  auto* b = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= b[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

/// Disk cache for prime tables. File layout: magic, version, limit, count,
/// checksum (FNV-1a of the prime array), then the primes as uint32.
class SieveCache {
 public:
  static constexpr std::uint64_t kMagic = 0x4142434553564531ull;  // "ABCESVE1"
  static constexpr std::uint64_t kVersion = 1;

  explicit SieveCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  /// Directory from ABELCENSUS_CACHE_DIR, if set.
  static std::optional<SieveCache> from_env() {
    if (const char* d = std::getenv("ABELCENSUS_CACHE_DIR"); d && *d) return SieveCache(d);
    return std::nullopt;
  }

  std::filesystem::path path_for(std::uint64_t limit) const {
    return dir_ / ("primes_" + std::to_string(limit) + ".bin");
  }

  /// Loads a table with exactly this limit, or sieves and stores it. A file
  /// that fails any check is ignored and rewritten.
  PrimeTable load_or_build(std::uint64_t limit) const {
    if (auto t = load(limit)) return std::move(*t);
    PrimeTable t = PrimeTable::build(limit);
    store(t);
    return t;
  }

  std::optional<PrimeTable> load(std::uint64_t limit) const {
    std::ifstream in(path_for(limit), std::ios::binary);
    if (!in) return std::nullopt;
    std::uint64_t hdr[5];
    if (!in.read(reinterpret_cast<char*>(hdr), sizeof hdr)) return std::nullopt;
    if (hdr[0] != kMagic || hdr[1] != kVersion || hdr[2] != limit) return std::nullopt;
    if (hdr[3] > limit) return std::nullopt;
    std::vector<std::uint32_t> primes(hdr[3]);
    if (!in.read(reinterpret_cast<char*>(primes.data()),
                 static_cast<std::streamsize>(primes.size() * sizeof(std::uint32_t))))
      return std::nullopt;
    if (detail::fnv1a(primes.data(), primes.size() * sizeof(std::uint32_t)) != hdr[4]) return std::nullopt;
    if (auto c = known_prime_count(limit); c && *c != primes.size()) return std::nullopt;
    return PrimeTable(std::move(primes), limit);
  }

  void store(const PrimeTable& t) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    const auto final_path = path_for(t.limit());
    const auto tmp = final_path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) return;  // caching is best-effort
      const auto& p = t.primes();
      std::uint64_t hdr[5] = {kMagic, kVersion, t.limit(), p.size(),
                              detail::fnv1a(p.data(), p.size() * sizeof(std::uint32_t))};
      out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
      out.write(reinterpret_cast<const char*>(p.data()),
                static_cast<std::streamsize>(p.size() * sizeof(std::uint32_t)));
      if (!out) return;
    }
    std::filesystem::rename(tmp, final_path, ec);
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace abelcensus
