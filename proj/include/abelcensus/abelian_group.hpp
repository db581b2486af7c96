#pragma once

#include <algorithm>
#include <bitset>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "abelcensus/arith.hpp"
#include "abelcensus/errors.hpp"

namespace abelcensus {

/// Largest group order the element-mask representation supports.
inline constexpr int kMaxGroupOrder = 256;

using ElementMask = std::bitset<kMaxGroupOrder>;

/// Element of G as an index into the canonical enumeration.
using Element = int;

/// Finite abelian group in invariant-factor form d1 | d2 | ... | dk.
///
/// Elements are exponent tuples (a1, ..., ak) with 0 <= ai < di, stored as
/// the mixed-radix index a1 + d1*(a2 + d2*(a3 + ...)). The canonical element
/// order is that index order, i.e. tuples compared from the last coordinate
/// to the first. With this convention the named generators g1 = (1,0,..),
/// g2 = (0,1,..), ... come out in increasing order, so g1 < g2 < g1*g2 in
/// C2 x C2. The identity is element 0.
class AbelianGroup {
 public:
  /// Builds a group from arbitrary factors >= 2, normalizing to invariant
  /// factors through the primary decomposition (Smith normal form).
  static AbelianGroup make(std::span<const std::int64_t> factors) {
    if (factors.empty()) throw ValidationError("group needs at least one factor");
    std::int64_t order = 1;
    for (auto d : factors) {
      if (d < 2) throw ValidationError("invalid factor " + std::to_string(d) + " (must be >= 2)");
      order *= d;
      if (order > kMaxGroupOrder)
        throw ResourceError("group order exceeds " + std::to_string(kMaxGroupOrder));
    }
    // Collect prime-power parts per prime, then rebuild invariant factors.
    std::map<std::int64_t, std::vector<int>> powers;
    for (auto d : factors)
      for (auto [p, e] : factorize(d)) powers[p].push_back(e);
    std::size_t k = 0;
    for (auto& [p, es] : powers) {
      std::sort(es.begin(), es.end(), std::greater<>());
      k = std::max(k, es.size());
    }
    std::vector<std::int64_t> inv(k, 1);
    for (auto& [p, es] : powers)
      for (std::size_t i = 0; i < es.size(); ++i) inv[k - 1 - i] *= ipow(p, es[i]);
    return AbelianGroup(std::move(inv));
  }

  static AbelianGroup make(std::initializer_list<std::int64_t> factors) {
    std::vector<std::int64_t> v(factors);
    return make(std::span<const std::int64_t>(v));
  }

  static AbelianGroup cyclic(std::int64_t n) { return make({n}); }

  const std::vector<std::int64_t>& invariant_factors() const { return factors_; }
  int order() const { return order_; }
  std::int64_t exponent() const { return factors_.back(); }
  int rank() const { return static_cast<int>(factors_.size()); }
  bool is_cyclic() const { return factors_.size() == 1; }

  Element identity() const { return 0; }
  Element add(Element a, Element b) const { return add_[a * order_ + b]; }
  Element neg(Element a) const { return neg_[a]; }
  Element multiple(Element a, std::int64_t k) const {
    std::int64_t idx = 0;
    for (std::size_t i = factors_.size(); i-- > 0;) {
      std::int64_t d = factors_[i];
      std::int64_t c = ((coords_[a][i] * (k % d)) % d + d) % d;
      idx = idx * d + c;
    }
    return static_cast<Element>(idx);
  }
  /// Order r(g) of an element.
  int element_order(Element a) const { return orders_[a]; }

  const std::vector<std::int64_t>& coords(Element a) const { return coords_[a]; }
  Element from_coords(std::span<const std::int64_t> c) const {
    if (c.size() != factors_.size()) throw ValidationError("coordinate tuple has wrong length");
    std::int64_t idx = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      std::int64_t d = factors_[i];
      idx = idx * d + ((c[i] % d) + d) % d;
    }
    return static_cast<Element>(idx);
  }
  /// The named generator g_{i+1} = (0,..,1,..,0).
  Element generator(std::size_t i) const {
    std::vector<std::int64_t> c(factors_.size(), 0);
    c.at(i) = 1;
    return from_coords(c);
  }

  ElementMask all_elements() const {
    ElementMask m;
    for (int i = 0; i < order_; ++i) m.set(i);
    return m;
  }

  /// "C2xC4" style name.
  std::string name() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? "xC" : "C") << factors_[i];
    return os.str();
  }

  /// "(a1,a2,...)" rendering of an element.
  std::string format(Element a) const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? "," : "") << coords_[a][i];
    os << ')';
    return os.str();
  }

  friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) {
    return a.factors_ == b.factors_;
  }

 private:
  explicit AbelianGroup(std::vector<std::int64_t> factors) : factors_(std::move(factors)) {
    std::int64_t n = 1;
    for (auto d : factors_) n *= d;
    order_ = static_cast<int>(n);
    coords_.resize(order_);
    for (int idx = 0; idx < order_; ++idx) {
      std::int64_t r = idx;
      coords_[idx].resize(factors_.size());
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        coords_[idx][i] = r % factors_[i];
        r /= factors_[i];
      }
    }
    add_.resize(static_cast<std::size_t>(order_) * order_);
    std::vector<std::int64_t> c(factors_.size());
    for (int a = 0; a < order_; ++a)
      for (int b = 0; b < order_; ++b) {
        for (std::size_t i = 0; i < factors_.size(); ++i) c[i] = coords_[a][i] + coords_[b][i];
        add_[a * order_ + b] = static_cast<std::uint16_t>(from_coords(c));
      }
    neg_.resize(order_);
    orders_.resize(order_);
    for (int a = 0; a < order_; ++a) {
      neg_[a] = multiple(a, -1);
      int r = 1;
      for (Element x = a; x != 0; x = add(x, a)) ++r;
      orders_[a] = r;
    }
  }

  std::vector<std::int64_t> factors_;
  int order_ = 1;
  std::vector<std::vector<std::int64_t>> coords_;
  std::vector<std::uint16_t> add_;
  std::vector<Element> neg_;
  std::vector<int> orders_;
};

/// Every abelian group of order <= max_order, once each, ordered by order and
/// then by invariant factors.
inline std::vector<AbelianGroup> all_abelian_groups(int max_order) {
  std::vector<AbelianGroup> out;
  // Partitions of e, largest part first.
  auto partitions = [](int e) {
    std::vector<std::vector<int>> res;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int left, int maxpart) -> void {
      if (left == 0) {
        res.push_back(cur);
        return;
      }
      for (int part = std::min(left, maxpart); part >= 1; --part) {
        cur.push_back(part);
        self(self, left - part, part);
        cur.pop_back();
      }
    };
    rec(rec, e, e);
    return res;
  };
  for (int n = 2; n <= max_order; ++n) {
    auto fac = factorize(n);
    std::vector<std::vector<std::int64_t>> lists{{}};
    for (auto [p, e] : fac) {
      std::vector<std::vector<std::int64_t>> next;
      for (auto& base : lists)
        for (auto& part : partitions(e)) {
          auto l = base;
          for (int k : part) l.push_back(ipow(p, k));
          next.push_back(std::move(l));
        }
      lists = std::move(next);
    }
    std::vector<AbelianGroup> level;
    for (auto& l : lists) level.push_back(AbelianGroup::make(std::span<const std::int64_t>(l)));
    std::sort(level.begin(), level.end(), [](const AbelianGroup& a, const AbelianGroup& b) {
      return a.invariant_factors() < b.invariant_factors();
    });
    for (auto& g : level) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace abelcensus
