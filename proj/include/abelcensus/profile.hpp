#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "abelcensus/errors.hpp"
#include "abelcensus/group_structure.hpp"
#include "abelcensus/index_value.hpp"
#include "abelcensus/invariants.hpp"
#include "abelcensus/local_counts.hpp"

namespace abelcensus {

/// Finite map prime -> nontrivial local image (subgroup id). Primes not in
/// the map carry the trivial image.
class RamificationProfile {
 public:
  RamificationProfile() = default;
  RamificationProfile(std::initializer_list<std::pair<const std::uint64_t, int>> init) {
    for (auto [p, h] : init) assign(p, h);
  }

  void assign(std::uint64_t p, int sid) {
    if (!is_prime_small(p)) throw ValidationError("profile key " + std::to_string(p) + " is not prime");
    if (sid == 0)
      map_.erase(p);
    else
      map_[p] = sid;
  }
  const std::map<std::uint64_t, int>& assignments() const { return map_; }
  bool empty() const { return map_.empty(); }

 private:
  std::map<std::uint64_t, int> map_;
};

/// theta_x as an index value: p -> D * x(H_p).
inline IndexValue theta(const RamificationProfile& prof, const GroupStructure& gs, const ParamVector& x) {
  std::vector<IndexValue::Entry> e;
  for (auto [p, h] : prof.assignments()) e.emplace_back(p, scaled_x_of_subgroup(gs, h, x));
  return IndexValue(std::move(e));
}

struct GammaIndicator {
  int gamma_tame = 0;       // Omega-meeting images at primes not dividing |G|
  bool wild_meets = false;  // some prime dividing |G| has an Omega-meeting image
  /// 1_(Omega, gamma).
  bool flag(int gamma) const {
    if (gamma == 0) return gamma_tame == 0 && !wild_meets;
    return gamma_tame == gamma;
  }
  /// Slice the profile is counted in: gamma_tame, or nullopt for the
  /// unsliced bucket (wild Omega-meeting image and no tame one).
  std::optional<int> slice() const {
    if (wild_meets && gamma_tame == 0) return std::nullopt;
    return gamma_tame;
  }
};

inline GammaIndicator indicator_gamma(const RamificationProfile& prof, const GroupStructure& gs,
                                      const OmegaSet& omega) {
  GammaIndicator g;
  for (auto [p, h] : prof.assignments()) {
    if (!omega.meets(gs.lattice()[h])) continue;
    if (gs.group().order() % static_cast<std::int64_t>(p) == 0)
      g.wild_meets = true;
    else
      ++g.gamma_tame;
  }
  return g;
}

/// Number of homomorphisms with exactly these local images.
inline std::uint64_t weight(const RamificationProfile& prof, const GroupStructure& gs) {
  std::uint64_t w = 1;
  for (auto [p, h] : prof.assignments()) {
    std::uint64_t s = sur_count(p, h, gs);
    if (s == 0) return 0;
    if (__builtin_mul_overflow(w, s, &w)) throw ResourceError("profile weight overflows 64 bits");
  }
  return w;
}

/// True iff the local images jointly generate G.
inline bool is_generating(const RamificationProfile& prof, const GroupStructure& gs) {
  int j = 0;
  for (auto [p, h] : prof.assignments()) j = gs.lattice().join(j, h);
  return j == gs.lattice().whole();
}

}  // namespace abelcensus
