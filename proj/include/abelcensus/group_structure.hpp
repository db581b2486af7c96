#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "abelcensus/abelian_group.hpp"
#include "abelcensus/errors.hpp"

namespace abelcensus {

struct Subgroup {
  int id = 0;
  ElementMask elements;
  std::vector<Element> members;     // increasing
  std::vector<Element> generators;  // a minimal generating set
  int order = 1;
  bool cyclic = true;
};

struct LatticeLimits {
  std::size_t max_subgroups = 10000;
};

/// All subgroups of G, found by closing generator sets and deduplicating on
/// the element set. Ids are sorted by (order, member list); id 0 is the
/// trivial subgroup and the last id is G itself.
class SubgroupLattice {
 public:
  SubgroupLattice() = default;

  static SubgroupLattice build(const AbelianGroup& g, LatticeLimits limits = {}) {
    SubgroupLattice lat;
    lat.group_ = &g;
    std::vector<Subgroup> found;
    std::unordered_map<ElementMask, int> index;
    Subgroup triv;
    triv.elements.set(0);
    found.push_back(triv);
    index.emplace(triv.elements, 0);
    // Breadth-first by number of generators, so the first generating set that
    // reaches a subgroup is minimal.
    std::vector<int> frontier{0};
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int sid : frontier) {
        for (Element e = 1; e < g.order(); ++e) {
          if (found[sid].elements.test(e)) continue;
          ElementMask m = extend(g, found[sid].elements, e);
          if (index.contains(m)) continue;
          if (found.size() >= limits.max_subgroups)
            throw ResourceError("subgroup lattice of " + g.name() + " exceeds cap of " +
                                std::to_string(limits.max_subgroups));
          Subgroup s;
          s.elements = m;
          s.generators = found[sid].generators;
          s.generators.push_back(e);
          index.emplace(m, static_cast<int>(found.size()));
          next.push_back(static_cast<int>(found.size()));
          found.push_back(std::move(s));
        }
      }
      frontier = std::move(next);
    }
    for (auto& s : found) {
      for (int e = 0; e < g.order(); ++e)
        if (s.elements.test(e)) s.members.push_back(e);
      s.order = static_cast<int>(s.members.size());
      s.cyclic = s.generators.size() <= 1;
    }
    std::sort(found.begin(), found.end(), [](const Subgroup& a, const Subgroup& b) {
      if (a.order != b.order) return a.order < b.order;
      return a.members < b.members;
    });
    for (std::size_t i = 0; i < found.size(); ++i) {
      found[i].id = static_cast<int>(i);
      lat.index_.emplace(found[i].elements, static_cast<int>(i));
    }
    lat.subgroups_ = std::move(found);
    return lat;
  }

  /// Subgroup generated by `base` (a subgroup) together with element e.
  static ElementMask extend(const AbelianGroup& g, const ElementMask& base, Element e) {
    std::vector<Element> elems;
    for (int x = 0; x < g.order(); ++x)
      if (base.test(x)) elems.push_back(x);
    ElementMask out = base;
    Element step = e;
    for (int k = 1; k < g.element_order(e); ++k) {
      for (Element x : elems) out.set(g.add(x, step));
      step = g.add(step, e);
    }
    return out;
  }

  int size() const { return static_cast<int>(subgroups_.size()); }
  const Subgroup& operator[](int id) const { return subgroups_[id]; }
  const std::vector<Subgroup>& all() const { return subgroups_; }
  int trivial() const { return 0; }
  int whole() const { return size() - 1; }

  std::optional<int> find(const ElementMask& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// True iff subgroup `small` is contained in subgroup `big`.
  bool contains(int big, int small) const {
    return (subgroups_[small].elements & ~subgroups_[big].elements).none();
  }

  int join(int a, int b) const {
    if (contains(a, b)) return a;
    if (contains(b, a)) return b;
    ElementMask m = subgroups_[a].elements;
    for (Element e : subgroups_[b].generators)
      if (!m.test(e)) m = extend(*group_, m, e);
    return *find(m);
  }

  /// Subgroup generated by a set of elements.
  int generated(std::span<const Element> elems) const {
    ElementMask m;
    m.set(0);
    for (Element e : elems)
      if (!m.test(e)) m = extend(*group_, m, e);
    return *find(m);
  }

  int cyclic_of(Element e) const {
    Element one[] = {e};
    return generated(one);
  }

  /// Rebinds the group pointer after the owning structure moved.
  void rebind(const AbelianGroup* g) { group_ = g; }

 private:
  const AbelianGroup* group_ = nullptr;
  std::vector<Subgroup> subgroups_;
  std::unordered_map<ElementMask, int> index_;
};

/// An equivalence class of non-identity elements under invertible powering:
/// the generators of one nontrivial cyclic subgroup.
struct PowerClass {
  int index = 0;                 // 0-based; user-facing numbering is index + 1
  std::vector<Element> members;  // increasing
  int subgroup = 0;              // id of the cyclic subgroup the class generates
};

/// G together with its subgroup lattice, power classes and class poset.
/// Immutable once built; share it by const reference or shared_ptr.
class GroupStructure {
 public:
  static std::shared_ptr<const GroupStructure> build(AbelianGroup g, LatticeLimits limits = {}) {
    auto gs = std::shared_ptr<GroupStructure>(new GroupStructure(std::move(g)));
    gs->lattice_ = SubgroupLattice::build(gs->group_, limits);
    gs->lattice_.rebind(&gs->group_);
    gs->init_classes();
    return gs;
  }

  const AbelianGroup& group() const { return group_; }
  const SubgroupLattice& lattice() const { return lattice_; }
  const std::vector<PowerClass>& classes() const { return classes_; }
  int class_count() const { return static_cast<int>(classes_.size()); }

  /// Class of a non-identity element; -1 for the identity.
  int class_of(Element e) const { return class_of_element_[e]; }
  /// Class whose generated subgroup is the given cyclic subgroup; -1 otherwise.
  int class_of_subgroup(int sid) const { return class_of_subgroup_[sid]; }

  /// Omega_i <= Omega_j iff H_i is contained in H_j.
  bool class_leq(int i, int j) const { return leq_[i * class_count() + j]; }

  /// Classes contained in H that are maximal there under the class order.
  const std::vector<int>& maximal_classes(int sid) const { return maximal_[sid]; }

  const std::vector<int>& cyclic_subgroups() const { return cyclic_; }

 private:
  explicit GroupStructure(AbelianGroup g) : group_(std::move(g)) {}

  void init_classes() {
    const int n = group_.order();
    class_of_element_.assign(n, -1);
    class_of_subgroup_.assign(lattice_.size(), -1);
    for (const auto& s : lattice_.all()) {
      if (!s.cyclic || s.order == 1) continue;
      cyclic_.push_back(s.id);
      PowerClass pc;
      pc.subgroup = s.id;
      for (Element e : s.members)
        if (group_.element_order(e) == s.order) pc.members.push_back(e);
      classes_.push_back(std::move(pc));
    }
    std::sort(classes_.begin(), classes_.end(), [&](const PowerClass& a, const PowerClass& b) {
      int oa = lattice_[a.subgroup].order, ob = lattice_[b.subgroup].order;
      if (oa != ob) return oa < ob;
      return a.members.front() < b.members.front();
    });
    const int l = class_count();
    for (int i = 0; i < l; ++i) {
      classes_[i].index = i;
      class_of_subgroup_[classes_[i].subgroup] = i;
      for (Element e : classes_[i].members) class_of_element_[e] = i;
    }
    leq_.assign(static_cast<std::size_t>(l) * l, false);
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j)
        leq_[i * l + j] = lattice_.contains(classes_[j].subgroup, classes_[i].subgroup);
    maximal_.resize(lattice_.size());
    for (const auto& s : lattice_.all()) {
      std::vector<int> inside;
      for (int i = 0; i < l; ++i)
        if (lattice_.contains(s.id, classes_[i].subgroup)) inside.push_back(i);
      for (int i : inside) {
        bool maximal = true;
        for (int j : inside)
          if (j != i && class_leq(i, j)) maximal = false;
        if (maximal) maximal_[s.id].push_back(i);
      }
    }
  }

  AbelianGroup group_;
  SubgroupLattice lattice_;
  std::vector<PowerClass> classes_;
  std::vector<int> class_of_element_;
  std::vector<int> class_of_subgroup_;
  std::vector<bool> leq_;
  std::vector<std::vector<int>> maximal_;
  std::vector<int> cyclic_;
};

}  // namespace abelcensus
