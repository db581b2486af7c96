#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "abelcensus/errors.hpp"
#include "abelcensus/group_structure.hpp"
#include "abelcensus/invariants.hpp"
#include "abelcensus/local_counts.hpp"
#include "abelcensus/primes.hpp"
#include "abelcensus/profile.hpp"

namespace abelcensus {

/// A hypothetical surjection described by its local images: one attainable
/// image per prime dividing |G|, plus cyclic images at unnamed tame primes.
struct GeneratingFamily {
  std::vector<std::pair<std::uint64_t, int>> wild;  // (p, image) for p | |G|, p increasing
  std::vector<int> tame_slots;                      // cyclic subgroup ids, sorted

  friend bool operator==(const GeneratingFamily&, const GeneratingFamily&) = default;
};

inline int family_join(const GroupStructure& gs, const GeneratingFamily& fam) {
  int j = 0;
  for (auto [p, h] : fam.wild) j = gs.lattice().join(j, h);
  for (int h : fam.tame_slots) j = gs.lattice().join(j, h);
  return j;
}

/// Whether a tame slot with image H counts towards delta: H meets Omega and
/// x(H) > x_1, the global minimum parameter.
inline bool costly_slot(const GroupStructure& gs, int sid, const ParamVector& x, const OmegaSet& omega) {
  return omega.meets(gs.lattice()[sid]) && x_of_subgroup(gs, sid, x) > x.min();
}

inline int delta_of_family(const GroupStructure& gs, const GeneratingFamily& fam, const ParamVector& x,
                           const OmegaSet& omega) {
  if (family_join(gs, fam) != gs.lattice().whole())
    throw ValidationError("family does not generate G");
  int d = 0;
  for (int h : fam.tame_slots) d += costly_slot(gs, h, x, omega);
  return d;
}

inline int gamma_of_family(const GroupStructure& gs, const GeneratingFamily& fam, const OmegaSet& omega) {
  int g = 0;
  for (int h : fam.tame_slots) g += omega.meets(gs.lattice()[h]);
  return g;
}

struct StructureLimits {
  std::size_t max_wild_joins = 100000;
  std::size_t max_compositions = 1000000;
  /// Primes scanned when realizing a witness at actual primes.
  std::uint64_t prime_scan_limit = 10'000'000;
};

namespace detail {

/// Subgroups reachable as the joint image of the wild primes, each with one
/// realizing choice of images (lexicographically least by prime order).
inline std::map<int, std::vector<std::pair<std::uint64_t, int>>> wild_joins(const GroupStructure& gs,
                                                                           const StructureLimits& lim,
                                                                           bool avoid_omega = false,
                                                                           const OmegaSet* omega = nullptr) {
  std::map<int, std::vector<std::pair<std::uint64_t, int>>> cur{{0, {}}};
  for (auto [p, k] : factorize(gs.group().order())) {
    const auto up = static_cast<std::uint64_t>(p);
    std::map<int, std::vector<std::pair<std::uint64_t, int>>> next;
    for (int img : wild_images(up, gs)) {
      if (avoid_omega && omega->meets(gs.lattice()[img])) continue;
      for (auto& [j, choice] : cur) {
        int nj = gs.lattice().join(j, img);
        if (next.contains(nj)) continue;
        auto c = choice;
        c.emplace_back(up, img);
        next.emplace(nj, std::move(c));
        if (next.size() > lim.max_wild_joins) throw ResourceError("too many wild image joins");
      }
    }
    cur = std::move(next);
  }
  return cur;
}

inline std::vector<int> free_cyclic(const GroupStructure& gs, const OmegaSet& omega) {
  std::vector<int> out;
  for (int h : gs.cyclic_subgroups())
    if (!omega.meets(gs.lattice()[h])) out.push_back(h);
  return out;
}

}  // namespace detail

/// Some surjection has every local image disjoint from Omega.
inline bool omega_free_generating(const GroupStructure& gs, const OmegaSet& omega, const StructureLimits& lim = {}) {
  for (auto& [w, choice] : detail::wild_joins(gs, lim, true, &omega))
    if (family_join(gs, GeneratingFamily{choice, detail::free_cyclic(gs, omega)}) == gs.lattice().whole())
      return true;
  return false;
}

struct StructureConstants {
  int delta = 0;
  int gamma = 0;
  GeneratingFamily witness;
};

/// delta_x and gamma_x with a minimizing witness.
///
/// Non-Omega cyclic slots are free, so they are all included up front; the
/// search then adds Omega-meeting cyclic slots one at a time, costing (1,1)
/// in (delta, gamma) when the slot is costly and (0,1) otherwise. A
/// lexicographic Dijkstra over joint images yields the exact minimum.
inline StructureConstants structure_constants(const GroupStructure& gs, const ParamVector& x,
                                              const OmegaSet& omega, const StructureLimits& lim = {}) {
  if (x.size() != gs.class_count()) throw ValidationError("parameter count does not match class count");
  const auto& lat = gs.lattice();
  auto free = detail::free_cyclic(gs, omega);
  std::vector<int> omega_cyclic;
  for (int h : gs.cyclic_subgroups())
    if (omega.meets(lat[h])) omega_cyclic.push_back(h);

  using Cost = std::pair<int, int>;
  const Cost kInf{1 << 29, 1 << 29};
  std::vector<Cost> best(lat.size(), kInf);
  std::vector<int> prev(lat.size(), -1), via(lat.size(), -1);
  std::map<int, int> start_wild;  // start join -> wild join it came from
  auto wj = detail::wild_joins(gs, lim);
  using Item = std::tuple<int, int, int>;  // delta, gamma, subgroup
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (auto& [w, choice] : wj) {
    int j = w;
    for (int h : free) j = lat.join(j, h);
    if (auto it = start_wild.find(j); it != start_wild.end()) {
      // Prefer the largest wild image: fewer tame slots in the witness.
      if (lat[w].order > lat[it->second].order) it->second = w;
      continue;
    }
    start_wild[j] = w;
    best[j] = {0, 0};
    pq.emplace(0, 0, j);
  }
  while (!pq.empty()) {
    auto [d, g, j] = pq.top();
    pq.pop();
    if (Cost{d, g} != best[j]) continue;
    if (j == lat.whole()) break;
    for (int h : omega_cyclic) {
      int nj = lat.join(j, h);
      if (nj == j) continue;
      Cost c{d + (costly_slot(gs, h, x, omega) ? 1 : 0), g + 1};
      if (c < best[nj]) {
        best[nj] = c;
        prev[nj] = j;
        via[nj] = h;
        pq.emplace(c.first, c.second, nj);
      }
    }
  }
  const int whole = lat.whole();
  if (best[whole] == kInf) throw InvariantError("no generating family found");

  StructureConstants out;
  out.delta = best[whole].first;
  out.gamma = best[whole].second;
  std::vector<int> omega_slots;
  int j = whole;
  while (prev[j] != -1) {
    omega_slots.push_back(via[j]);
    j = prev[j];
  }
  out.witness.wild = wj.at(start_wild.at(j));
  // Keep only the free slots the witness actually needs.
  std::vector<int> keep = free;
  for (std::size_t i = keep.size(); i-- > 0;) {
    GeneratingFamily trial{out.witness.wild, {}};
    for (std::size_t k = 0; k < keep.size(); ++k)
      if (k != i) trial.tame_slots.push_back(keep[k]);
    trial.tame_slots.insert(trial.tame_slots.end(), omega_slots.begin(), omega_slots.end());
    if (family_join(gs, trial) == whole) keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(i));
  }
  out.witness.tame_slots = keep;
  out.witness.tame_slots.insert(out.witness.tame_slots.end(), omega_slots.begin(), omega_slots.end());
  std::sort(out.witness.tame_slots.begin(), out.witness.tame_slots.end());
  if (delta_of_family(gs, out.witness, x, omega) != out.delta ||
      gamma_of_family(gs, out.witness, omega) != out.gamma)
    throw InvariantError("witness does not reproduce delta/gamma");
  return out;
}

inline int delta_x(const GroupStructure& gs, const ParamVector& x, const OmegaSet& omega) {
  return structure_constants(gs, x, omega).delta;
}
inline int gamma_x(const GroupStructure& gs, const ParamVector& x, const OmegaSet& omega) {
  return structure_constants(gs, x, omega).gamma;
}

/// Compositions gamma = n_1 + ... + n_u (u = number of xi classes) for which
/// some wild joint image, all non-xi cyclic subgroups and the xi subgroups
/// with n_k > 0 generate G. Listed in lexicographic order.
inline std::vector<std::vector<int>> admissible_partitions(const GroupStructure& gs, const OmegaSet& omega,
                                                           int gamma, const StructureLimits& lim = {}) {
  if (omega.empty()) throw DomainError("admissible partitions need a nonempty omega");
  if (gamma < 0) throw ValidationError("gamma must be >= 0");
  const auto& lat = gs.lattice();
  auto xi = xi_classes(gs, omega);
  const int u = static_cast<int>(xi.size());
  std::vector<int> base_joins;
  {
    auto free = detail::free_cyclic(gs, omega);
    for (auto& [w, choice] : detail::wild_joins(gs, lim)) {
      int j = w;
      for (int h : free) j = lat.join(j, h);
      base_joins.push_back(j);
    }
    std::sort(base_joins.begin(), base_joins.end());
    base_joins.erase(std::unique(base_joins.begin(), base_joins.end()), base_joins.end());
  }
  std::map<std::vector<bool>, bool> memo;
  auto admissible = [&](const std::vector<int>& n) {
    std::vector<bool> support(u);
    for (int k = 0; k < u; ++k) support[k] = n[k] > 0;
    if (auto it = memo.find(support); it != memo.end()) return it->second;
    bool ok = false;
    for (int j : base_joins) {
      int jj = j;
      for (int k = 0; k < u; ++k)
        if (support[k]) jj = lat.join(jj, gs.classes()[xi[k]].subgroup);
      if (jj == lat.whole()) {
        ok = true;
        break;
      }
    }
    memo.emplace(support, ok);
    return ok;
  };
  std::vector<std::vector<int>> out;
  std::vector<int> n(u, 0);
  std::size_t visited = 0;
  auto rec = [&](auto&& self, int k, int left) -> void {
    if (++visited > lim.max_compositions) throw ResourceError("too many compositions of gamma");
    if (k == u - 1) {
      n[k] = left;
      if (admissible(n)) out.push_back(n);
      return;
    }
    for (int v = left; v >= 0; --v) {
      n[k] = v;
      self(self, k + 1, left - v);
    }
  };
  if (u > 0) rec(rec, 0, gamma);
  std::sort(out.begin(), out.end());
  return out;
}

/// True iff the smallest parameter on xi classes equals the global minimum.
inline bool conjecture_classifier(const GroupStructure& gs, const ParamVector& x, const OmegaSet& omega) {
  if (omega.empty()) throw DomainError("classifier is not applicable to an empty omega");
  auto xi = xi_classes(gs, omega);
  Rational m = x[xi.front()];
  for (int i : xi) m = std::min(m, x[i]);
  return m == x.min();
}

/// Concrete profile realizing a family: wild images at their primes and tame
/// slots at the smallest distinct primes congruent to 1 mod |G|.
inline RamificationProfile realize_family(const GroupStructure& gs, const GeneratingFamily& fam,
                                          std::uint64_t after = 1, const StructureLimits& lim = {}) {
  RamificationProfile prof;
  for (auto [p, h] : fam.wild) prof.assign(p, h);
  const auto n = static_cast<std::uint64_t>(gs.group().order());
  std::uint64_t p = (after / n) * n + 1;
  std::size_t placed = 0;
  for (; placed < fam.tame_slots.size() && p <= lim.prime_scan_limit; p += n) {
    if (p <= after || !is_prime_small(p)) continue;
    prof.assign(p, fam.tame_slots[placed++]);
  }
  if (placed < fam.tame_slots.size())
    throw ResourceError("could not realize witness below prime scan limit " + std::to_string(lim.prime_scan_limit));
  return prof;
}

/// delta of a concrete profile: tame primes whose image meets Omega with
/// x(H) > x_1. Requires the profile to be surjective.
inline int delta_of_profile(const RamificationProfile& prof, const GroupStructure& gs, const ParamVector& x,
                            const OmegaSet& omega) {
  if (weight(prof, gs) == 0 || !is_generating(prof, gs))
    throw ValidationError("profile is not a surjection");
  int d = 0;
  for (auto [p, h] : prof.assignments())
    if (gs.group().order() % static_cast<std::int64_t>(p) != 0 && costly_slot(gs, h, x, omega)) ++d;
  return d;
}

struct TauWitness {
  GeneratingFamily family;
  std::vector<int> partition;  // n_k per xi class
};

/// A family with delta = delta_x and exactly gamma Omega-meeting tame slots,
/// built from the minimal witness by adding cheap slots of the xi class with
/// the smallest parameter. Throws UndefinedError when none exists.
inline TauWitness tau_witness(const GroupStructure& gs, const ParamVector& x, const OmegaSet& omega, int gamma,
                              const StructureLimits& lim = {}) {
  auto sc = structure_constants(gs, x, omega, lim);
  auto xi = xi_classes(gs, omega);
  TauWitness tw;
  if (omega.empty()) {
    if (gamma != 0) throw UndefinedError("witness not found: omega is empty and gamma > 0");
    tw.family = sc.witness;
    return tw;
  }
  if (gamma < sc.gamma) throw UndefinedError("witness not found: gamma < gamma_x");
  if (gamma == 0) {
    if (sc.delta != 0) throw UndefinedError("witness not found");
    for (auto& [w, choice] : detail::wild_joins(gs, lim, true, &omega)) {
      GeneratingFamily f{choice, detail::free_cyclic(gs, omega)};
      if (family_join(gs, f) == gs.lattice().whole()) {
        tw.family = f;
        tw.partition.assign(xi.size(), 0);
        return tw;
      }
    }
    throw UndefinedError("witness not found: no Omega-free generating family");
  }
  tw.family = sc.witness;
  if (gamma > sc.gamma) {
    int k1 = xi.front();
    for (int i : xi)
      if (x[i] < x[k1]) k1 = i;
    if (x[k1] != x.min())
      throw UndefinedError("witness not found: extra Omega slots would raise delta");
    for (int i = sc.gamma; i < gamma; ++i) tw.family.tame_slots.push_back(gs.classes()[k1].subgroup);
    std::sort(tw.family.tame_slots.begin(), tw.family.tame_slots.end());
  }
  tw.partition.assign(xi.size(), 0);
  for (int h : tw.family.tame_slots) {
    if (!omega.meets(gs.lattice()[h])) continue;
    int cls = gs.class_of_subgroup(h);
    auto it = std::find(xi.begin(), xi.end(), cls);
    if (it == xi.end()) throw InvariantError("Omega slot outside xi");
    ++tw.partition[static_cast<std::size_t>(it - xi.begin())];
  }
  if (delta_of_family(gs, tw.family, x, omega) != sc.delta || gamma_of_family(gs, tw.family, omega) != gamma)
    throw InvariantError("tau witness has wrong delta/gamma");
  return tw;
}

inline std::string subgroup_text(const GroupStructure& gs, int sid) {
  const auto& s = gs.lattice()[sid];
  std::string out = "<";
  for (std::size_t i = 0; i < s.generators.size(); ++i) {
    if (i) out += ',';
    out += gs.group().format(s.generators[i]);
  }
  return out + ">";
}

/// Deterministic text block describing the structure constants.
inline std::string structure_report(const GroupStructure& gs, const ParamVector& x, const OmegaSet& omega,
                                    const std::vector<int>& gammas = {}) {
  std::ostringstream os;
  const auto& g = gs.group();
  os << "group " << g.name() << " order " << g.order() << " exponent " << g.exponent() << "\n";
  for (const auto& pc : gs.classes()) {
    os << "class " << pc.index + 1 << " {";
    for (std::size_t i = 0; i < pc.members.size(); ++i) os << (i ? "," : "") << g.format(pc.members[i]);
    os << "} order " << gs.lattice()[pc.subgroup].order << " x " << rational_text(x[pc.index]) << "\n";
  }
  os << "omega";
  for (int i : omega.classes) os << ' ' << i + 1;
  os << "\nxi";
  for (int i : xi_classes(gs, omega)) os << ' ' << i + 1;
  auto sc = structure_constants(gs, x, omega);
  os << "\ndelta_x " << sc.delta << "\ngamma_x " << sc.gamma << "\nwitness";
  for (auto [p, h] : sc.witness.wild) os << ' ' << p << "->" << subgroup_text(gs, h);
  for (int h : sc.witness.tame_slots) os << " tame->" << subgroup_text(gs, h);
  os << "\n";
  if (!omega.empty()) {
    os << "classifier " << (conjecture_classifier(gs, x, omega) ? "true" : "false") << "\n";
    for (int gm : gammas) {
      os << "admissible gamma=" << gm << ":";
      for (auto& part : admissible_partitions(gs, omega, gm)) {
        os << " (";
        for (std::size_t i = 0; i < part.size(); ++i) os << (i ? "," : "") << part[i];
        os << ")";
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace abelcensus
