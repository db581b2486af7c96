#pragma once

// Depth-first enumeration of ramification profiles below a bound.
//
// Profiles are built prime by prime: first a root layer choosing an image at
// every prime dividing |G| (the trivial image included), then tame primes in
// increasing order, each either skipped or given a nontrivial cyclic image.
// Every node of the tree is itself a profile and is visited once. A branch is
// cut as soon as the partial index times p^(c_min) reaches the threshold.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <thread>
#include <vector>

#include "abelcensus/errors.hpp"
#include "abelcensus/group_structure.hpp"
#include "abelcensus/index_value.hpp"
#include "abelcensus/invariants.hpp"
#include "abelcensus/local_counts.hpp"
#include "abelcensus/primes.hpp"
#include "abelcensus/profile.hpp"

namespace abelcensus {

struct ImageOption {
  int sid = 0;
  std::int64_t c = 0;     // D * x(H)
  std::uint64_t sur = 0;  // Sur_p(H)
  bool meets = false;     // H meets Omega
};

/// Everything the enumeration needs about (G, x, Omega), precomputed once.
/// Immutable and shareable across worker threads.
class EnumContext {
 public:
  EnumContext(std::shared_ptr<const GroupStructure> gs, ParamVector x, OmegaSet omega)
      : gs_(std::move(gs)), x_(std::move(x)), omega_(std::move(omega)), sur_(*gs_) {
    if (x_.size() != gs_->class_count())
      throw ValidationError("parameter count " + std::to_string(x_.size()) + " != class count " +
                            std::to_string(gs_->class_count()));
    const auto& lat = gs_->lattice();
    c_.resize(lat.size());
    meets_.resize(lat.size());
    for (int h = 0; h < lat.size(); ++h) {
      c_[h] = scaled_x_of_subgroup(*gs_, h, x_);
      meets_[h] = omega_.meets(lat[h]);
    }
    const std::int64_t e = gs_->group().exponent();
    std::map<std::int64_t, int> by_gcd;
    for (const auto& [g, sur] : sur_.tame_classes()) {
      std::vector<ImageOption> opts;
      for (int h = 1; h < lat.size(); ++h)
        if (sur[h] > 0) opts.push_back({h, c_[h], sur[h], static_cast<bool>(meets_[h])});
      std::stable_sort(opts.begin(), opts.end(), [](auto& a, auto& b) { return a.c < b.c; });
      by_gcd[g] = static_cast<int>(tame_.size());
      tame_.push_back(std::move(opts));
    }
    tame_by_residue_.resize(static_cast<std::size_t>(e));
    for (std::int64_t r = 0; r < e; ++r) tame_by_residue_[r] = by_gcd.at(std::gcd(r, e));
    cmin_tame_ = 0;
    for (auto& opts : tame_)
      for (auto& o : opts) cmin_tame_ = cmin_tame_ ? std::min(cmin_tame_, o.c) : o.c;
    if (cmin_tame_ <= 0) throw InvariantError("no tame local images");
    for (const auto& [p, sur] : sur_.wild_primes()) {
      std::vector<ImageOption> opts;
      for (int h = 0; h < lat.size(); ++h)
        if (sur[h] > 0) opts.push_back({h, c_[h], sur[h], static_cast<bool>(meets_[h])});
      wild_.emplace_back(p, std::move(opts));
    }
    // Join table over all subgroups x attainable images.
    std::vector<int> images;
    for (auto& opts : tame_)
      for (auto& o : opts) images.push_back(o.sid);
    for (auto& [p, opts] : wild_)
      for (auto& o : opts) images.push_back(o.sid);
    std::sort(images.begin(), images.end());
    images.erase(std::unique(images.begin(), images.end()), images.end());
    slot_.assign(lat.size(), -1);
    for (std::size_t i = 0; i < images.size(); ++i) slot_[images[i]] = static_cast<int>(i);
    nslots_ = static_cast<int>(images.size());
    join_.resize(static_cast<std::size_t>(lat.size()) * nslots_);
    for (int a = 0; a < lat.size(); ++a)
      for (std::size_t i = 0; i < images.size(); ++i) join_[a * nslots_ + i] = lat.join(a, images[i]);
  }

  const GroupStructure& gs() const { return *gs_; }
  std::shared_ptr<const GroupStructure> gs_ptr() const { return gs_; }
  const ParamVector& x() const { return x_; }
  const OmegaSet& omega() const { return omega_; }
  const SurTable& sur_table() const { return sur_; }
  std::int64_t D() const { return x_.denominator(); }
  std::int64_t c_of(int sid) const { return c_[sid]; }
  bool meets(int sid) const { return meets_[sid]; }

  const std::vector<ImageOption>& tame_options(std::uint64_t p) const {
    const auto e = static_cast<std::uint64_t>(gs_->group().exponent());
    return tame_[tame_by_residue_[(p - 1) % e]];
  }
  std::int64_t cmin_tame() const { return cmin_tame_; }
  const std::vector<std::pair<std::uint64_t, std::vector<ImageOption>>>& wild() const { return wild_; }
  bool is_wild(std::uint64_t p) const {
    return gs_->group().order() % static_cast<std::int64_t>(p) == 0;
  }
  /// Join of any subgroup with an attainable local image.
  int join(int a, int image) const { return join_[a * nslots_ + slot_[image]]; }

 private:
  std::shared_ptr<const GroupStructure> gs_;
  ParamVector x_;
  OmegaSet omega_;
  SurTable sur_;
  std::vector<std::int64_t> c_;
  std::vector<char> meets_;
  std::vector<std::vector<ImageOption>> tame_;
  std::vector<int> tame_by_residue_;
  std::int64_t cmin_tame_ = 0;
  std::vector<std::pair<std::uint64_t, std::vector<ImageOption>>> wild_;
  std::vector<int> slot_;
  int nslots_ = 0;
  std::vector<int> join_;
};

struct PathEntry {
  std::uint64_t p = 0;
  std::int64_t c = 0;
  int sid = 0;
};

template <class Mag>
struct Node {
  Mag T = 1;  // D-scaled index prod p^c
  int join = 0;
  std::uint64_t weight = 1;
  int gamma = 0;
  bool wild_meets = false;
};

/// Bucket code for a node: 0 for the unsliced bucket, 1 + gamma otherwise.
template <class Mag>
int slice_code(const Node<Mag>& n) {
  return (n.wild_meets && n.gamma == 0) ? 0 : 1 + n.gamma;
}

struct CensusCounts {
  std::uint64_t sur = 0;
  std::uint64_t hom = 0;

  CensusCounts& operator+=(const CensusCounts& o) {
    if (__builtin_add_overflow(sur, o.sur, &sur) || __builtin_add_overflow(hom, o.hom, &hom))
      throw ResourceError("census count overflows 64 bits");
    return *this;
  }
  friend bool operator==(const CensusCounts&, const CensusCounts&) = default;
};

/// Per-bucket counts: cells[s] with s = slice code.
using SliceCounts = std::vector<CensusCounts>;

inline void add_into(SliceCounts& into, const SliceCounts& from) {
  if (into.size() < from.size()) into.resize(from.size());
  for (std::size_t s = 0; s < from.size(); ++s) into[s] += from[s];
}

/// Counts nodes into checkpoint bins: bin k holds indices in
/// [thr[k-1], thr[k]).
template <class Mag>
class BinningVisitor {
 public:
  BinningVisitor(const std::vector<Mag>* thr, int whole) : thr_(thr), whole_(whole), bins_(thr->size()) {}

  void on_node(const Node<Mag>& n, std::span<const PathEntry>) {
    auto k = static_cast<std::size_t>(std::upper_bound(thr_->begin(), thr_->end(), n.T) - thr_->begin());
    if (k == thr_->size()) return;
    auto& cells = bins_[k];
    const auto s = static_cast<std::size_t>(slice_code(n));
    if (cells.size() <= s) cells.resize(s + 1);
    CensusCounts add{n.join == whole_ ? n.weight : 0, n.weight};
    cells[s] += add;
  }

  std::vector<SliceCounts>& bins() { return bins_; }
  void merge(const BinningVisitor& o) {
    for (std::size_t k = 0; k < bins_.size(); ++k) add_into(bins_[k], o.bins_[k]);
  }

 private:
  const std::vector<Mag>* thr_;
  int whole_;
  std::vector<SliceCounts> bins_;
};

struct CollectKey {
  int join = 0;
  int slice = 0;  // slice code
  friend auto operator<=>(const CollectKey&, const CollectKey&) = default;
};

using CoefficientMap = std::map<IndexValue, std::uint64_t>;

/// Collects homomorphism counts per index value, split by joint image and
/// slice.
template <class Mag>
class IndexCollector {
 public:
  void on_node(const Node<Mag>& n, std::span<const PathEntry> path) {
    std::vector<IndexValue::Entry> e;
    e.reserve(path.size());
    for (auto& pe : path) e.emplace_back(pe.p, pe.c);
    auto& slot = data_[CollectKey{n.join, slice_code(n)}][IndexValue(std::move(e))];
    if (__builtin_add_overflow(slot, n.weight, &slot)) throw ResourceError("coefficient overflows 64 bits");
  }
  void merge(const IndexCollector& o) {
    for (auto& [k, m] : o.data_) {
      auto& dst = data_[k];
      for (auto& [iv, c] : m) {
        auto& slot = dst[iv];
        if (__builtin_add_overflow(slot, c, &slot)) throw ResourceError("coefficient overflows 64 bits");
      }
    }
  }
  std::map<CollectKey, CoefficientMap>& data() { return data_; }

 private:
  std::map<CollectKey, CoefficientMap> data_;
};

namespace detail {

template <class Mag>
Mag to_mag(const BigInt& v) {
  if constexpr (std::is_same_v<Mag, BigInt>) {
    return v;
  } else {
    U128 r = 0;
    for (int i = static_cast<int>(boost::multiprecision::msb(v)); i >= 0; --i)
      r = (r << 1) | static_cast<U128>(boost::multiprecision::bit_test(v, static_cast<unsigned>(i)));
    return r;
  }
}

inline BigInt iroot_floor(const BigInt& n, std::int64_t m) { return iroot_ceil(n + 1, m) - 1; }

struct WorkUnit {
  int wild = 0;       // index into the wild-node list
  bool bare = false;  // the wild node itself, no tame primes
  std::size_t i0 = 0, i1 = 0;
};

template <class Mag>
struct WildNode {
  Node<Mag> node;
  std::vector<PathEntry> path;
};

template <class Mag, class Visitor>
class Walker {
 public:
  Walker(const EnumContext& ctx, const std::vector<std::uint32_t>& tame, const Mag& thr, Visitor& vis)
      : ctx_(ctx), tame_(tame), thr_(thr), vis_(vis) {}

  void run(const WildNode<Mag>& w, const WorkUnit& u) {
    path_ = w.path;
    if (u.bare) {
      vis_.on_node(w.node, path_);
      return;
    }
    for (std::size_t i = u.i0; i < u.i1; ++i) branch(i, w.node);
  }

 private:
  // All children of `n` whose first new tame prime is tame_[i].
  void branch(std::size_t i, const Node<Mag>& n) {
    const std::uint64_t p = tame_[i];
    const Mag pm = static_cast<Mag>(p);
    for (const auto& o : ctx_.tame_options(p)) {
      Mag T = sat_mul(n.T, sat_pow(pm, o.c, thr_), thr_);
      if (T >= thr_) break;
      Node<Mag> child{T, ctx_.join(n.join, o.sid), 0, n.gamma + (o.meets ? 1 : 0), n.wild_meets};
      if (__builtin_mul_overflow(n.weight, o.sur, &child.weight))
        throw ResourceError("profile weight overflows 64 bits");
      path_.push_back({p, o.c, o.sid});
      vis_.on_node(child, path_);
      descend(i + 1, child);
      path_.pop_back();
    }
  }

  void descend(std::size_t start, const Node<Mag>& n) {
    const std::int64_t cmin = ctx_.cmin_tame();
    for (std::size_t i = start; i < tame_.size(); ++i) {
      if (sat_mul(n.T, sat_pow(static_cast<Mag>(tame_[i]), cmin, thr_), thr_) >= thr_) break;
      branch(i, n);
    }
  }

  const EnumContext& ctx_;
  const std::vector<std::uint32_t>& tame_;
  const Mag& thr_;
  Visitor& vis_;
  std::vector<PathEntry> path_;
};

}  // namespace detail

struct EnumOptions {
  unsigned threads = 1;
  /// Stop after this many work units in this call (resource cap).
  std::optional<std::size_t> max_units;
  /// Prime table to use; built on demand when null or too short.
  const PrimeTable* primes = nullptr;
  std::uint64_t prime_cap = 1'000'000'000;
};

/// Saved progress of a census run: finished work units and the bins they
/// produced. Units are identified by their position in a deterministic list.
struct CensusProgress {
  std::size_t total_units = 0;
  std::set<std::size_t> done;
  std::vector<SliceCounts> bins;
};

/// Generic parallel driver: enumerates every profile with index below the
/// largest of `thresholds`, handing nodes to per-worker visitors built by
/// `make`, and returns the merged visitor.
template <class Mag, class Visitor>
class Enumeration {
 public:
  Enumeration(const EnumContext& ctx, std::vector<Mag> thresholds, const PrimeTable& primes)
      : ctx_(ctx), thr_(std::move(thresholds)), main_(thr_.back()) {
    // Root layer: every combination of wild images, primes increasing.
    std::vector<detail::WildNode<Mag>> nodes{{Node<Mag>{}, {}}};
    for (const auto& [p, opts] : ctx.wild()) {
      std::vector<detail::WildNode<Mag>> next;
      for (const auto& w : nodes)
        for (const auto& o : opts) {
          detail::WildNode<Mag> c = w;
          c.node.T = sat_mul(w.node.T, sat_pow(static_cast<Mag>(p), o.c, main_), main_);
          if (c.node.T >= main_) continue;
          c.node.join = ctx.join(w.node.join, o.sid);
          if (__builtin_mul_overflow(w.node.weight, o.sur, &c.node.weight))
            throw ResourceError("profile weight overflows 64 bits");
          c.node.wild_meets = w.node.wild_meets || o.meets;
          if (o.sid != 0) c.path.push_back({p, o.c, o.sid});
          next.push_back(std::move(c));
        }
      nodes = std::move(next);
    }
    wild_ = std::move(nodes);
    for (std::uint32_t p : primes.primes())
      if (!ctx.is_wild(p)) tame_.push_back(p);
    // Work units: per wild node, the bare node and then ranges of the first
    // tame prime, singletons first and growing chunks after.
    for (std::size_t w = 0; w < wild_.size(); ++w) {
      units_.push_back({static_cast<int>(w), true, 0, 0});
      const Mag& T = wild_[w].node.T;
      std::size_t n = 0;
      while (n < tame_.size() &&
             sat_mul(T, sat_pow(static_cast<Mag>(tame_[n]), ctx.cmin_tame(), main_), main_) < main_)
        ++n;
      if (n == tame_.size() &&
          sat_mul(T, sat_pow(static_cast<Mag>(primes.limit() + 1), ctx.cmin_tame(), main_), main_) < main_)
        throw InvariantError("prime table too short for bound");
      std::size_t i = 0;
      while (i < n) {
        std::size_t len = i < 64 ? 1 : std::max<std::size_t>(1, i / 16);
        std::size_t j = std::min(n, i + len);
        units_.push_back({static_cast<int>(w), false, i, j});
        i = j;
      }
    }
  }

  std::size_t unit_count() const { return units_.size(); }
  const std::vector<Mag>& thresholds() const { return thr_; }

  /// Runs the units not in `skip` (at most `max_units` of them, in id order)
  /// and returns the merged visitor plus the ids that ran.
  template <class Make>
  std::pair<Visitor, std::vector<std::size_t>> run(Make make, unsigned threads,
                                                   const std::set<std::size_t>& skip,
                                                   std::optional<std::size_t> max_units) {
    std::vector<std::size_t> todo;
    for (std::size_t u = 0; u < units_.size(); ++u)
      if (!skip.contains(u)) todo.push_back(u);
    if (max_units && todo.size() > *max_units) todo.resize(*max_units);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, todo.size()))));
    std::vector<Visitor> visitors;
    for (unsigned t = 0; t < threads; ++t) visitors.push_back(make());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto work = [&](unsigned t) {
      try {
        detail::Walker<Mag, Visitor> walker(ctx_, tame_, main_, visitors[t]);
        for (;;) {
          std::size_t k = next.fetch_add(1);
          if (k >= todo.size()) break;
          const auto& u = units_[todo[k]];
          walker.run(wild_[u.wild], u);
        }
      } catch (...) {
        std::lock_guard lk(error_mu);
        if (!error) error = std::current_exception();
        next.store(todo.size());
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    for (unsigned t = 1; t < threads; ++t) visitors[0].merge(visitors[t]);
    return {std::move(visitors[0]), std::move(todo)};
  }

 private:
  const EnumContext& ctx_;
  std::vector<Mag> thr_;
  Mag main_;
  std::vector<detail::WildNode<Mag>> wild_;
  std::vector<std::uint32_t> tame_;
  std::vector<detail::WorkUnit> units_;
};

/// Largest prime any profile below `thr` can use, capped.
inline std::uint64_t prime_limit_for(const EnumContext& ctx, const BigInt& thr, std::uint64_t cap) {
  if (thr <= 1) return 1;
  BigInt L = detail::iroot_floor(thr - 1, ctx.cmin_tame());
  if (L > cap)
    throw ResourceError("bound needs primes up to " + L.str() + ", above the cap of " + std::to_string(cap));
  return static_cast<std::uint64_t>(L);
}

/// Calls f(Mag tag) with U128 when every threshold fits in 127 bits and with
/// BigInt otherwise. Both paths are exact.
template <class F>
decltype(auto) with_magnitude(const BigInt& main_threshold, F&& f) {
  if (boost::multiprecision::msb(main_threshold) < 126) return f(U128{});
  return f(BigInt{});
}

/// Counts at each checkpoint (cumulative), per slice.
class CensusTable {
 public:
  CensusTable() = default;
  CensusTable(std::vector<Bound> checkpoints, std::vector<SliceCounts> cumulative, bool complete)
      : checkpoints_(std::move(checkpoints)), cells_(std::move(cumulative)), complete_(complete) {}

  const std::vector<Bound>& checkpoints() const { return checkpoints_; }
  std::size_t size() const { return checkpoints_.size(); }
  bool complete() const { return complete_; }

  /// Largest gamma with a nonzero cell anywhere.
  int max_gamma() const {
    int g = -1;
    for (auto& cells : cells_)
      for (std::size_t s = 1; s < cells.size(); ++s)
        if (cells[s].hom) g = std::max(g, static_cast<int>(s) - 1);
    return g;
  }
  CensusCounts slice(std::size_t k, int gamma) const { return cell(k, 1 + static_cast<std::size_t>(gamma)); }
  CensusCounts unsliced(std::size_t k) const { return cell(k, 0); }
  CensusCounts total(std::size_t k) const {
    CensusCounts t;
    for (auto& c : cells_[k]) t += c;
    return t;
  }
  const std::vector<SliceCounts>& cells() const { return cells_; }

  friend bool operator==(const CensusTable& a, const CensusTable& b) {
    if (a.checkpoints_ != b.checkpoints_ || a.complete_ != b.complete_) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
      std::size_t n = std::max(a.cells_[k].size(), b.cells_[k].size());
      for (std::size_t s = 0; s < n; ++s)
        if (!(a.cell(k, s) == b.cell(k, s))) return false;
    }
    return true;
  }

 private:
  CensusCounts cell(std::size_t k, std::size_t s) const {
    return s < cells_[k].size() ? cells_[k][s] : CensusCounts{};
  }

  std::vector<Bound> checkpoints_;
  std::vector<SliceCounts> cells_;
  bool complete_ = true;
};

namespace detail {

inline std::vector<Bound> sorted_checkpoints(std::vector<Bound> cps) {
  if (cps.empty()) throw ValidationError("no checkpoints");
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  return cps;
}

/// Runs a visitor-based enumeration over all profiles with theta below the
/// largest checkpoint, choosing the magnitude type and the prime table.
template <template <class> class VisitorT, class MakeArgs, class Finish>
auto run_enumeration(const EnumContext& ctx, const std::vector<Bound>& cps, const EnumOptions& opt,
                     const std::set<std::size_t>& skip, MakeArgs make_args, Finish finish) {
  std::vector<BigInt> thr;
  for (auto& b : cps) thr.push_back(b.threshold(ctx.D()));
  const std::uint64_t limit = prime_limit_for(ctx, thr.back(), opt.prime_cap);
  std::optional<PrimeTable> own;
  const PrimeTable* primes = opt.primes;
  if (!primes || primes->limit() < limit) {
    own = PrimeTable::build(std::max<std::uint64_t>(limit, 2));
    primes = &*own;
  }
  return with_magnitude(thr.back(), [&](auto tag) {
    using Mag = decltype(tag);
    std::vector<Mag> t;
    for (auto& v : thr) t.push_back(to_mag<Mag>(v));
    Enumeration<Mag, VisitorT<Mag>> en(ctx, std::move(t), *primes);
    auto [vis, ran] = en.run([&] { return make_args(en); }, opt.threads, skip, opt.max_units);
    return finish(vis, ran, en.unit_count());
  });
}

}  // namespace detail

/// Exact Hom/Sur counts per checkpoint and slice. With `progress`, finished
/// units are skipped and the new ones are recorded there; the table is
/// marked incomplete when the unit cap stopped the run early.
inline CensusTable enumerate_census(const EnumContext& ctx, std::vector<Bound> checkpoints,
                                    const EnumOptions& opt = {}, CensusProgress* progress = nullptr) {
  auto cps = detail::sorted_checkpoints(std::move(checkpoints));
  const int whole = ctx.gs().lattice().whole();
  static const std::set<std::size_t> kNone;
  const auto& skip = progress ? progress->done : kNone;
  return detail::run_enumeration<BinningVisitor>(
      ctx, cps, opt, skip,
      [&](auto& en) {
        using Vis = BinningVisitor<std::decay_t<decltype(en.thresholds().front())>>;
        return Vis(&en.thresholds(), whole);
      },
      [&](auto& vis, const std::vector<std::size_t>& ran, std::size_t total) {
        std::vector<SliceCounts> bins = std::move(vis.bins());
        bool complete = true;
        if (progress) {
          if (progress->total_units && progress->total_units != total)
            throw ValidationError("resume state does not match this configuration");
          progress->total_units = total;
          progress->bins.resize(bins.size());
          for (std::size_t k = 0; k < bins.size(); ++k) add_into(progress->bins[k], bins[k]);
          progress->done.insert(ran.begin(), ran.end());
          bins = progress->bins;
          complete = progress->done.size() == total;
        } else {
          complete = ran.size() == total;
        }
        for (std::size_t k = 1; k < bins.size(); ++k) add_into(bins[k], bins[k - 1]);
        return CensusTable(cps, std::move(bins), complete);
      });
}

/// Homomorphism counts per index value below X, split by joint image and
/// slice code.
inline std::map<CollectKey, CoefficientMap> collect_by_index(const EnumContext& ctx, const Bound& X,
                                                             const EnumOptions& opt = {}) {
  static const std::set<std::size_t> kNone;
  return detail::run_enumeration<IndexCollector>(
      ctx, {X}, opt, kNone,
      [](auto& en) {
        using Vis = IndexCollector<std::decay_t<decltype(en.thresholds().front())>>;
        return Vis{};
      },
      [&](auto& vis, const std::vector<std::size_t>& ran, std::size_t total) {
        if (ran.size() != total) throw ResourceError("coefficient collection stopped by the unit cap");
        return std::move(vis.data());
      });
}

enum class CountMode { hom, sur };

/// Which slices to include: a gamma value, every slice, or the unsliced bucket.
struct SliceSelect {
  enum Kind { gamma, all, unsliced } kind = all;
  int value = 0;
  static SliceSelect of(int g) { return {gamma, g}; }
  bool accepts(int code) const {
    switch (kind) {
      case all: return true;
      case unsliced: return code == 0;
      case gamma: return code == 1 + value;
    }
    return false;
  }
};

/// Coefficient map d -> a_d (hom) or b_d (sur) over the selected slices.
inline CoefficientMap count_by_index(const EnumContext& ctx, const Bound& X, CountMode mode, SliceSelect sel,
                                     const EnumOptions& opt = {}) {
  CoefficientMap out;
  const int whole = ctx.gs().lattice().whole();
  for (auto& [key, m] : collect_by_index(ctx, X, opt)) {
    if (!sel.accepts(key.slice)) continue;
    if (mode == CountMode::sur && key.join != whole) continue;
    for (auto& [iv, c] : m) out[iv] += c;
  }
  return out;
}

}  // namespace abelcensus
