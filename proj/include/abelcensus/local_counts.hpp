#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "abelcensus/arith.hpp"
#include "abelcensus/errors.hpp"
#include "abelcensus/group_structure.hpp"

namespace abelcensus {

/// Minimal finite quotient of Z_p^* through which every homomorphism to G
/// factors, as a product of cyclic groups.
///
///   p tame (p does not divide |G|):  C_gcd(p-1, exp G)
///   p odd, p | |G|:                  C_gcd(p-1, exp G) x C_{p^v}
///   p = 2 | |G|:                     C_2 x C_{2^v}
///
/// where v is the p-adic valuation of exp G. Trivial factors are dropped.
struct LocalUnitModel {
  std::uint64_t p = 0;
  bool wild = false;
  std::vector<std::int64_t> cyclic_orders;
};

inline LocalUnitModel local_model(std::uint64_t p, const AbelianGroup& g) {
  LocalUnitModel m;
  m.p = p;
  const std::int64_t e = g.exponent();
  m.wild = g.order() % static_cast<std::int64_t>(p) == 0;
  auto push = [&](std::int64_t n) {
    if (n > 1) m.cyclic_orders.push_back(n);
  };
  if (p == 2) {
    if (m.wild) {
      push(2);
      push(ipow(2, valuation(e, 2)));
    }
  } else {
    push(std::gcd(static_cast<std::int64_t>((p - 1) % static_cast<std::uint64_t>(e)), e));
    if (m.wild) push(ipow(static_cast<std::int64_t>(p), valuation(e, static_cast<std::int64_t>(p))));
  }
  return m;
}

/// |Hom(model, H)| = prod over cyclic factors C_n of #{h in H : n*h = 0}.
inline std::uint64_t hom_count(const LocalUnitModel& m, const GroupStructure& gs, int sid) {
  std::uint64_t total = 1;
  for (auto n : m.cyclic_orders) {
    std::uint64_t c = 0;
    for (Element h : gs.lattice()[sid].members) c += (n % gs.group().element_order(h) == 0);
    total *= c;
  }
  return total;
}

/// Surjection counts onto every subgroup, by inclusion-exclusion over the
/// subgroup lattice: sur(H) = hom(H) - sum_{K < H} sur(K).
inline std::vector<std::uint64_t> sur_counts_all(const LocalUnitModel& m, const GroupStructure& gs) {
  const auto& lat = gs.lattice();
  std::vector<std::int64_t> sur(lat.size(), 0);
  for (int h = 0; h < lat.size(); ++h) {
    std::int64_t s = static_cast<std::int64_t>(hom_count(m, gs, h));
    for (int k = 0; k < h; ++k)
      if (lat[k].order < lat[h].order && lat.contains(h, k)) s -= sur[k];
    if (s < 0) throw InvariantError("negative surjection count");
    sur[h] = s;
  }
  return {sur.begin(), sur.end()};
}

inline std::uint64_t hom_count(std::uint64_t p, int sid, const GroupStructure& gs) {
  return hom_count(local_model(p, gs.group()), gs, sid);
}

/// |Sur(Z_p^*, H)|.
inline std::uint64_t sur_count(std::uint64_t p, int sid, const GroupStructure& gs) {
  return sur_counts_all(local_model(p, gs.group()), gs)[sid];
}

/// Subgroups that occur as the image of some local homomorphism at p.
inline std::vector<int> attainable_images(std::uint64_t p, const GroupStructure& gs) {
  auto sur = sur_counts_all(local_model(p, gs.group()), gs);
  std::vector<int> out;
  for (int h = 0; h < static_cast<int>(sur.size()); ++h)
    if (sur[h] > 0) out.push_back(h);
  return out;
}

/// Attainable images at a prime dividing |G|.
inline std::vector<int> wild_images(std::uint64_t p, const GroupStructure& gs) {
  if (gs.group().order() % static_cast<std::int64_t>(p) != 0)
    throw DomainError("wild_images: " + std::to_string(p) + " does not divide |G|");
  return attainable_images(p, gs);
}

/// Precomputed surjection counts: tame primes are keyed by gcd(p-1, exp G),
/// which depends only on p mod |G|; wild primes are keyed by p.
/// Built once, read-only afterwards.
class SurTable {
 public:
  explicit SurTable(const GroupStructure& gs) : gs_(&gs) {
    const std::int64_t e = gs.group().exponent();
    for (auto d : divisors(e)) {
      LocalUnitModel m;
      if (d > 1) m.cyclic_orders.push_back(d);
      tame_.emplace(d, sur_counts_all(m, gs));
    }
    for (auto [p, k] : factorize(gs.group().order()))
      wild_.emplace(static_cast<std::uint64_t>(p),
                    sur_counts_all(local_model(static_cast<std::uint64_t>(p), gs.group()), gs));
  }

  const std::vector<std::uint64_t>& for_prime(std::uint64_t p) const {
    if (auto it = wild_.find(p); it != wild_.end()) return it->second;
    return tame_by_gcd(tame_key(p));
  }
  std::int64_t tame_key(std::uint64_t p) const {
    const std::int64_t e = gs_->group().exponent();
    return std::gcd(static_cast<std::int64_t>((p - 1) % static_cast<std::uint64_t>(e)), e);
  }
  const std::vector<std::uint64_t>& tame_by_gcd(std::int64_t g) const { return tame_.at(g); }
  const std::map<std::int64_t, std::vector<std::uint64_t>>& tame_classes() const { return tame_; }
  const std::map<std::uint64_t, std::vector<std::uint64_t>>& wild_primes() const { return wild_; }

 private:
  const GroupStructure* gs_;
  std::map<std::int64_t, std::vector<std::uint64_t>> tame_;
  std::map<std::uint64_t, std::vector<std::uint64_t>> wild_;
};

}  // namespace abelcensus
