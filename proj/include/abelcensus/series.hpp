#pragma once

// Truncated generating series built from Euler factors, independently of the
// profile enumerator: mu (homomorphisms), pi (surjections, by Moebius
// inversion over the subgroup lattice), and the upper and lower comparison
// series psi and tau.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "abelcensus/enumerator.hpp"
#include "abelcensus/errors.hpp"
#include "abelcensus/index_value.hpp"
#include "abelcensus/invariants.hpp"
#include "abelcensus/local_counts.hpp"
#include "abelcensus/primes.hpp"
#include "abelcensus/structure.hpp"

namespace abelcensus {

enum class SeriesTag { mu, pi, psi, tau };

inline const char* tag_name(SeriesTag t) {
  switch (t) {
    case SeriesTag::mu: return "mu";
    case SeriesTag::pi: return "pi";
    case SeriesTag::psi: return "psi";
    case SeriesTag::tau: return "tau";
  }
  return "?";
}

/// Coefficients d -> a_d for d < X, exact.
struct GeneratingSeries {
  CoefficientMap coefficients;
  Bound bound;
  SeriesTag tag = SeriesTag::mu;
  std::optional<std::string> warning;

  std::uint64_t at(const IndexValue& d) const {
    auto it = coefficients.find(d);
    return it == coefficients.end() ? 0 : it->second;
  }
  std::uint64_t sum() const {
    std::uint64_t s = 0;
    for (auto& [d, c] : coefficients) s += c;
    return s;
  }

  /// One line per nonzero coefficient: "p:e,p:e<TAB>a_d", sorted by the
  /// exponent map (prime, then exponent).
  std::string dump() const {
    std::string out;
    for (auto& [d, c] : coefficients)
      if (c) out += d.str() + '\t' + std::to_string(c) + '\n';
    return out;
  }
};

/// Every d with a_d > 0 in `a` has a_d >= b_d, and vice versa for entries of
/// `b`: returns the indices where a_d < b_d.
inline std::vector<IndexValue> violations_geq(const GeneratingSeries& a, const GeneratingSeries& b) {
  std::vector<IndexValue> out;
  for (auto& [d, c] : b.coefficients)
    if (a.at(d) < c) out.push_back(d);
  return out;
}

namespace detail {

template <class Mag>
struct Term {
  IndexValue iv;
  __int128 coef = 0;
};

/// Truncated series keyed by the D-scaled index T, with signed coefficients
/// so that Moebius combinations can pass through negative intermediates.
template <class Mag>
class TruncSeries {
 public:
  explicit TruncSeries(Mag thr) : thr_(thr) {}
  static TruncSeries unit(Mag thr) {
    TruncSeries s(thr);
    if (Mag(1) < thr) s.terms_.emplace(Mag(1), Term<Mag>{IndexValue::one(), 1});
    return s;
  }
  static TruncSeries single(Mag thr, Mag T, IndexValue iv) {
    TruncSeries s(thr);
    if (T < thr) s.terms_.emplace(T, Term<Mag>{std::move(iv), 1});
    return s;
  }

  const Mag& thr() const { return thr_; }
  std::map<Mag, Term<Mag>>& terms() { return terms_; }
  const std::map<Mag, Term<Mag>>& terms() const { return terms_; }

  void add(const Mag& T, const IndexValue& iv, __int128 c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.try_emplace(T, Term<Mag>{iv, 0});
    it->second.coef += c;
  }
  void add(const TruncSeries& o, __int128 scale = 1) {
    for (auto& [T, t] : o.terms_) add(T, t.iv, t.coef * scale);
  }

  /// Terms T * p^c * (coef * sur) for every option, computed from the
  /// current terms only.
  std::vector<std::pair<Mag, Term<Mag>>> extensions(std::uint64_t p, const std::vector<ImageOption>& opts) const {
    std::vector<std::pair<Mag, Term<Mag>>> out;
    if (opts.empty()) return out;
    std::int64_t cmin = opts.front().c;
    for (auto& o : opts) cmin = std::min(cmin, o.c);
    const Mag pm = static_cast<Mag>(p);
    const Mag pmin = sat_pow(pm, cmin, thr_);
    for (auto& [T, t] : terms_) {
      if (sat_mul(T, pmin, thr_) >= thr_) break;
      for (auto& o : opts) {
        Mag T2 = sat_mul(T, sat_pow(pm, o.c, thr_), thr_);
        if (T2 >= thr_) continue;
        out.push_back({T2, Term<Mag>{t.iv.times(IndexValue({{p, o.c}})), t.coef * static_cast<__int128>(o.sur)}});
      }
    }
    return out;
  }
  void absorb(std::vector<std::pair<Mag, Term<Mag>>>& adds) {
    for (auto& [T, t] : adds) add(T, t.iv, t.coef);
  }
  /// Multiplies by the Euler factor 1 + sum_opts sur * p^c.
  void euler(std::uint64_t p, const std::vector<ImageOption>& opts) {
    auto adds = extensions(p, opts);
    absorb(adds);
  }
  bool can_extend(std::uint64_t p, std::int64_t cmin) const {
    return !terms_.empty() && sat_mul(terms_.begin()->first, sat_pow(static_cast<Mag>(p), cmin, thr_), thr_) < thr_;
  }

  TruncSeries times(const TruncSeries& o) const {
    TruncSeries r(thr_);
    for (auto& [Ta, a] : terms_) {
      for (auto& [Tb, b] : o.terms_) {
        Mag T = sat_mul(Ta, Tb, thr_);
        if (T >= thr_) break;
        r.add(T, a.iv.times(b.iv), a.coef * b.coef);
      }
    }
    return r;
  }

  CoefficientMap to_map() const {
    CoefficientMap m;
    for (auto& [T, t] : terms_) {
      if (t.coef < 0) throw InvariantError("negative coefficient in generating series");
      if (t.coef > static_cast<__int128>(UINT64_MAX)) throw ResourceError("coefficient overflows 64 bits");
      if (t.coef) m.emplace(t.iv, static_cast<std::uint64_t>(t.coef));
    }
    return m;
  }

 private:
  Mag thr_;
  std::map<Mag, Term<Mag>> terms_;
};

template <class Pred>
std::vector<ImageOption> filter_nontrivial(const std::vector<ImageOption>& opts, Pred keep) {
  std::vector<ImageOption> out;
  for (auto& o : opts)
    if (o.sid != 0 && keep(o)) out.push_back(o);
  return out;
}

/// Shared setup for Euler-product series: threshold, magnitude type, tame
/// prime list.
struct EulerSetup {
  BigInt thr;
  std::vector<std::uint32_t> tame;
};

inline EulerSetup euler_setup(const EnumContext& ctx, const Bound& X) {
  EulerSetup s;
  s.thr = X.threshold(ctx.D());
  const std::uint64_t limit = prime_limit_for(ctx, s.thr, 100'000'000);
  for (auto p : sieve_primes(std::max<std::uint64_t>(limit, 2)))
    if (!ctx.is_wild(p)) s.tame.push_back(p);
  return s;
}

/// mu restricted to local images inside subgroup `within`, sliced by gamma
/// (nullopt: no slicing, every homomorphism).
template <class Mag>
TruncSeries<Mag> mu_within(const EnumContext& ctx, const EulerSetup& es, int within, std::optional<int> gamma) {
  const auto& lat = ctx.gs().lattice();
  const Mag thr = to_mag<Mag>(es.thr);
  auto inside = [&](const ImageOption& o) { return lat.contains(within, o.sid); };
  const bool omega_empty = ctx.omega().empty();
  const int layers = (gamma && !omega_empty) ? *gamma + 1 : 1;
  const bool restrict_wild = gamma && *gamma == 0 && !omega_empty;
  const bool layered = gamma && *gamma > 0 && !omega_empty;

  std::vector<TruncSeries<Mag>> L(layers, TruncSeries<Mag>(thr));
  L[0] = TruncSeries<Mag>::unit(thr);
  for (auto& [p, opts] : ctx.wild()) {
    auto use = filter_nontrivial(opts, [&](const ImageOption& o) {
      return inside(o) && !(restrict_wild && o.meets);
    });
    L[0].euler(p, use);
  }
  std::map<const std::vector<ImageOption>*, std::pair<std::vector<ImageOption>, std::vector<ImageOption>>> split;
  for (std::uint32_t p : es.tame) {
    if (!L[0].can_extend(p, ctx.cmin_tame()) &&
        std::none_of(L.begin() + 1, L.end(), [&](auto& s) { return s.can_extend(p, ctx.cmin_tame()); }))
      break;
    const auto& opts = ctx.tame_options(p);
    auto it = split.find(&opts);
    if (it == split.end()) {
      auto avoid = filter_nontrivial(opts, [&](const ImageOption& o) {
        return inside(o) && (omega_empty || !gamma || !o.meets);
      });
      auto meet = filter_nontrivial(opts, [&](const ImageOption& o) { return inside(o) && o.meets; });
      it = split.emplace(&opts, std::make_pair(std::move(avoid), std::move(meet))).first;
    }
    const auto& [avoid, meet] = it->second;
    if (!layered) {
      L[0].euler(p, avoid);
      continue;
    }
    std::vector<std::vector<std::pair<Mag, Term<Mag>>>> adds(layers);
    for (int k = 0; k < layers; ++k) {
      auto a = L[k].extensions(p, avoid);
      adds[k].insert(adds[k].end(), a.begin(), a.end());
      if (k + 1 < layers) {
        auto m = L[k].extensions(p, meet);
        adds[k + 1].insert(adds[k + 1].end(), m.begin(), m.end());
      }
    }
    for (int k = 0; k < layers; ++k) L[k].absorb(adds[k]);
  }
  return std::move(L.back());
}

/// Moebius function mu_lattice(H, G) of the subgroup lattice, for every H.
inline std::vector<std::int64_t> lattice_moebius_to_top(const SubgroupLattice& lat, int top) {
  std::vector<std::int64_t> m(lat.size(), 0);
  m[top] = 1;
  for (int h = lat.size() - 1; h >= 0; --h) {
    if (h == top || !lat.contains(top, h)) continue;
    std::int64_t s = 0;
    for (int k = h + 1; k < lat.size(); ++k)
      if (lat.contains(top, k) && lat.contains(k, h) && lat[k].order > lat[h].order) s += m[k];
    m[h] = -s;
  }
  return m;
}

template <class Mag>
TruncSeries<Mag> pi_within(const EnumContext& ctx, const EulerSetup& es, int top, std::optional<int> gamma) {
  const auto& lat = ctx.gs().lattice();
  auto mob = lattice_moebius_to_top(lat, top);
  TruncSeries<Mag> r(to_mag<Mag>(es.thr));
  for (int h = 0; h < lat.size(); ++h)
    if (mob[h] != 0) r.add(mu_within<Mag>(ctx, es, h, gamma), mob[h]);
  return r;
}

}  // namespace detail

inline std::optional<int> slice_arg(const EnumContext& ctx, int gamma) {
  if (gamma < 0) throw ValidationError("gamma must be >= 0");
  if (ctx.omega().empty()) return std::nullopt;
  return gamma;
}

/// mu_gamma by Euler-factor convolution. With empty Omega every gamma gives
/// the full homomorphism series.
inline GeneratingSeries mu_series(const EnumContext& ctx, int gamma, const Bound& X) {
  auto es = detail::euler_setup(ctx, X);
  GeneratingSeries s{{}, X, SeriesTag::mu, std::nullopt};
  s.coefficients = with_magnitude(es.thr, [&](auto tag) {
    using Mag = decltype(tag);
    return detail::mu_within<Mag>(ctx, es, ctx.gs().lattice().whole(), slice_arg(ctx, gamma)).to_map();
  });
  if (!ctx.omega().empty() && gamma == 0)
    s.warning = "wild factor taken as a product over primes dividing |G|";
  return s;
}

/// mu restricted to local images inside subgroup `h`.
inline GeneratingSeries mu_series_within(const EnumContext& ctx, int h, int gamma, const Bound& X) {
  auto es = detail::euler_setup(ctx, X);
  GeneratingSeries s{{}, X, SeriesTag::mu, std::nullopt};
  s.coefficients = with_magnitude(es.thr, [&](auto tag) {
    using Mag = decltype(tag);
    return detail::mu_within<Mag>(ctx, es, h, slice_arg(ctx, gamma)).to_map();
  });
  return s;
}

/// pi_gamma from the profile enumerator (surjections only).
inline GeneratingSeries pi_series(const EnumContext& ctx, int gamma, const Bound& X, const EnumOptions& opt = {}) {
  GeneratingSeries s{{}, X, SeriesTag::pi, std::nullopt};
  SliceSelect sel = ctx.omega().empty() ? SliceSelect{} : SliceSelect::of(gamma);
  s.coefficients = count_by_index(ctx, X, CountMode::sur, sel, opt);
  return s;
}

/// pi_gamma for surjections onto subgroup `h`, by Moebius inversion of the
/// Euler-product series over the subgroup lattice. Independent of the
/// enumerator.
inline GeneratingSeries pi_series_moebius(const EnumContext& ctx, int h, int gamma, const Bound& X) {
  auto es = detail::euler_setup(ctx, X);
  GeneratingSeries s{{}, X, SeriesTag::pi, std::nullopt};
  s.coefficients = with_magnitude(es.thr, [&](auto tag) {
    using Mag = decltype(tag);
    return detail::pi_within<Mag>(ctx, es, h, slice_arg(ctx, gamma)).to_map();
  });
  return s;
}

/// psi_gamma: full wild factor, times the Omega-avoiding tame Euler product,
/// times the sum over admissible partitions of products of gamma single-prime
/// Omega factors distributed over the xi classes.
inline GeneratingSeries psi_series(const EnumContext& ctx, int gamma, const Bound& X) {
  if (ctx.omega().empty()) throw DomainError("psi is defined for nonempty omega");
  const auto& gs = ctx.gs();
  auto parts = admissible_partitions(gs, ctx.omega(), gamma);
  GeneratingSeries s{{}, X, SeriesTag::psi, std::nullopt};
  if (parts.empty()) {
    s.warning = "no admissible partition for gamma=" + std::to_string(gamma);
    return s;
  }
  auto xi = xi_classes(gs, ctx.omega());
  const int u = static_cast<int>(xi.size());
  auto es = detail::euler_setup(ctx, X);
  s.coefficients = with_magnitude(es.thr, [&](auto tag) {
    using Mag = decltype(tag);
    using detail::TruncSeries;
    const Mag thr = detail::to_mag<Mag>(es.thr);
    // Base: wild factor and Omega-avoiding tame factor.
    auto base = TruncSeries<Mag>::unit(thr);
    for (auto& [p, opts] : ctx.wild())
      base.euler(p, detail::filter_nontrivial(opts, [](auto&) { return true; }));
    // E[k][n]: sum over n distinct tame primes with image H_xi_k.
    std::vector<std::vector<TruncSeries<Mag>>> E(u, std::vector<TruncSeries<Mag>>(gamma + 1, TruncSeries<Mag>(thr)));
    for (int k = 0; k < u; ++k) E[k][0] = TruncSeries<Mag>::unit(thr);
    for (std::uint32_t p : es.tame) {
      if (!base.can_extend(p, ctx.cmin_tame())) break;
      const auto& opts = ctx.tame_options(p);
      base.euler(p, detail::filter_nontrivial(opts, [](const ImageOption& o) { return !o.meets; }));
      for (int k = 0; k < u; ++k) {
        const int sid = gs.classes()[xi[k]].subgroup;
        auto one = detail::filter_nontrivial(opts, [&](const ImageOption& o) { return o.sid == sid; });
        if (one.empty()) continue;
        for (int n = gamma; n >= 1; --n) {
          auto adds = E[k][n - 1].extensions(p, one);
          E[k][n].absorb(adds);
        }
      }
    }
    TruncSeries<Mag> omega_part(thr);
    for (auto& part : parts) {
      auto prod = TruncSeries<Mag>::unit(thr);
      for (int k = 0; k < u; ++k)
        if (part[k] > 0) prod = prod.times(E[k][part[k]]);
      omega_part.add(prod);
    }
    return base.times(omega_part).to_map();
  });
  return s;
}

/// Data describing the anchor of a tau series.
struct TauAnchor {
  RamificationProfile rho0;  // wild images and Omega-free tame images
  std::uint64_t q = 1;       // largest prime where rho0 is nontrivial
  std::vector<int> partition;
};

inline TauAnchor tau_anchor(const GroupStructure& gs, const ParamVector& x, const OmegaSet& omega, int gamma) {
  auto tw = tau_witness(gs, x, omega, gamma);
  GeneratingFamily base{tw.family.wild, {}};
  for (int h : tw.family.tame_slots)
    if (!omega.meets(gs.lattice()[h])) base.tame_slots.push_back(h);
  TauAnchor a;
  a.rho0 = realize_family(gs, base);
  a.partition = tw.partition;
  for (auto [p, h] : a.rho0.assignments()) a.q = std::max(a.q, p);
  return a;
}

/// tau_gamma: anchored at d0 = theta(rho0); gamma further primes p > q with
/// p = 1 mod |G|, the smallest n_1 carrying H_xi_1, the next n_2 carrying
/// H_xi_2, and so on, each with a single fixed surjection; every other tame
/// prime p > q may carry an Omega-free cyclic image.
inline GeneratingSeries tau_series(const EnumContext& ctx, int gamma, const Bound& X) {
  const auto& gs = ctx.gs();
  auto anchor = tau_anchor(gs, ctx.x(), ctx.omega(), gamma);
  auto xi = xi_classes(gs, ctx.omega());
  std::vector<int> block_sid;  // subgroup for the (k+1)-th Omega prime
  for (std::size_t k = 0; k < anchor.partition.size(); ++k)
    for (int i = 0; i < anchor.partition[k]; ++i) block_sid.push_back(gs.classes()[xi[k]].subgroup);
  GeneratingSeries s{{}, X, SeriesTag::tau, std::nullopt};
  auto es = detail::euler_setup(ctx, X);
  const auto n = static_cast<std::uint64_t>(gs.group().order());
  s.coefficients = with_magnitude(es.thr, [&](auto tag) {
    using Mag = decltype(tag);
    using detail::TruncSeries;
    const Mag thr = detail::to_mag<Mag>(es.thr);
    IndexValue d0 = theta(anchor.rho0, gs, ctx.x());
    Mag T0 = 1;
    for (auto& [p, e] : d0.exponents()) T0 = sat_mul(T0, sat_pow(static_cast<Mag>(p), e, thr), thr);
    std::vector<TruncSeries<Mag>> L(gamma + 1, TruncSeries<Mag>(thr));
    L[0] = TruncSeries<Mag>::single(thr, T0, d0);
    for (std::uint32_t p : es.tame) {
      if (p <= anchor.q) continue;
      if (std::none_of(L.begin(), L.end(), [&](auto& sr) { return sr.can_extend(p, ctx.cmin_tame()); })) break;
      const auto& opts = ctx.tame_options(p);
      auto avoid = detail::filter_nontrivial(opts, [](const ImageOption& o) { return !o.meets; });
      std::vector<std::vector<std::pair<Mag, detail::Term<Mag>>>> adds(gamma + 1);
      for (int k = 0; k <= gamma; ++k) {
        auto a = L[k].extensions(p, avoid);
        adds[k].insert(adds[k].end(), a.begin(), a.end());
        if (k < gamma && p % n == 1) {
          const int sid = block_sid[k];
          std::vector<ImageOption> one{{sid, ctx.c_of(sid), 1, true}};
          auto m = L[k].extensions(p, one);
          adds[k + 1].insert(adds[k + 1].end(), m.begin(), m.end());
        }
      }
      for (int k = 0; k <= gamma; ++k) L[k].absorb(adds[k]);
    }
    return L[gamma].to_map();
  });
  return s;
}

}  // namespace abelcensus
