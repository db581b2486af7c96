#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "abelcensus/arith.hpp"
#include "abelcensus/errors.hpp"
#include "abelcensus/group_structure.hpp"

namespace abelcensus {

/// Positive rational parameters x_1..x_l, one per power class, with their
/// least common denominator D so that D*x is integral.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(std::vector<Rational> values) : values_(std::move(values)) {
    if (values_.empty()) throw ValidationError("parameter vector is empty");
    denominator_ = 1;
    for (const auto& v : values_) {
      if (v <= 0) throw ValidationError("parameters must be positive");
      denominator_ = std::lcm(denominator_, v.denominator());
    }
  }
  static ParamVector ones(int l) { return ParamVector(std::vector<Rational>(l, Rational(1))); }

  int size() const { return static_cast<int>(values_.size()); }
  const Rational& operator[](int i) const { return values_[i]; }
  const std::vector<Rational>& values() const { return values_; }
  std::int64_t denominator() const { return denominator_; }
  /// D * x_i as an integer.
  std::int64_t scaled(int i) const {
    return (values_[i] * denominator_).numerator();
  }
  Rational min() const { return *std::min_element(values_.begin(), values_.end()); }

  ParamVector scaled_by(const Rational& a) const {
    std::vector<Rational> v = values_;
    for (auto& x : v) x *= a;
    return ParamVector(std::move(v));
  }

  friend bool operator==(const ParamVector& a, const ParamVector& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<Rational> values_;
  std::int64_t denominator_ = 1;
};

/// A subset of G closed under invertible powering, held as whole classes.
struct OmegaSet {
  std::vector<int> classes;  // 0-based class indices, increasing
  ElementMask elements;

  bool empty() const { return classes.empty(); }
  bool contains_class(int i) const {
    return std::binary_search(classes.begin(), classes.end(), i);
  }
  bool meets(const Subgroup& h) const { return (h.elements & elements).any(); }

  static OmegaSet none() { return {}; }
  static OmegaSet from_classes(const GroupStructure& gs, std::vector<int> idx) {
    OmegaSet o;
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    for (int i : idx) {
      if (i < 0 || i >= gs.class_count())
        throw ValidationError("class index " + std::to_string(i + 1) + " out of range");
      for (Element e : gs.classes()[i].members) o.elements.set(e);
    }
    o.classes = std::move(idx);
    return o;
  }
};

/// Checks that an element set is a union of whole power classes without the
/// identity and returns its class-index form.
inline OmegaSet validate_omega(const GroupStructure& gs, const std::vector<Element>& elems) {
  ElementMask m;
  for (Element e : elems) {
    if (e < 0 || e >= gs.group().order()) throw ValidationError("element out of range");
    m.set(e);
  }
  if (m.test(0)) throw ValidationError("omega must not contain the identity");
  std::vector<int> idx;
  for (const auto& pc : gs.classes()) {
    std::size_t hit = 0;
    for (Element e : pc.members) hit += m.test(e);
    if (hit == 0) continue;
    if (hit != pc.members.size())
      throw ValidationError("omega is not closed under invertible powering (class " +
                            std::to_string(pc.index + 1) + " only partly included)");
    idx.push_back(pc.index);
  }
  return OmegaSet::from_classes(gs, std::move(idx));
}

/// x(H): sum of the parameters of the maximal classes contained in H.
/// Zero for the trivial subgroup.
inline Rational x_of_subgroup(const GroupStructure& gs, int sid, const ParamVector& x) {
  if (x.size() != gs.class_count())
    throw ValidationError("parameter count " + std::to_string(x.size()) + " != class count " +
                          std::to_string(gs.class_count()));
  Rational s = 0;
  for (int i : gs.maximal_classes(sid)) s += x[i];
  return s;
}

/// D * x(H) as an integer.
inline std::int64_t scaled_x_of_subgroup(const GroupStructure& gs, int sid, const ParamVector& x) {
  std::int64_t s = 0;
  for (int i : gs.maximal_classes(sid)) s += x.scaled(i);
  return s;
}

/// beta(L) = sum over g in L of 1/phi(r(g)). Always an integer for closed L.
inline std::int64_t beta_of_class_set(const GroupStructure& gs, const std::vector<Element>& lambda) {
  ElementMask m;
  for (Element e : lambda) m.set(e);
  if (m.test(0)) throw ValidationError("beta: set contains the identity");
  for (Element e : lambda)
    for (Element f : gs.classes()[gs.class_of(e)].members)
      if (!m.test(f)) throw ValidationError("beta: set is not closed under invertible powering");
  Rational sum = 0;
  for (int e = 1; e < gs.group().order(); ++e)
    if (m.test(e)) sum += Rational(1, euler_phi(gs.group().element_order(e)));
  if (sum.denominator() != 1) throw InvariantError("beta is not an integer");
  return sum.numerator();
}

/// Classes whose generated subgroup contains a class of Omega, increasing.
inline std::vector<int> xi_classes(const GroupStructure& gs, const OmegaSet& omega) {
  std::vector<int> by_poset, by_meet;
  for (int i = 0; i < gs.class_count(); ++i) {
    bool above = std::any_of(omega.classes.begin(), omega.classes.end(),
                             [&](int j) { return gs.class_leq(j, i); });
    if (above) by_poset.push_back(i);
    if (omega.meets(gs.lattice()[gs.classes()[i].subgroup])) by_meet.push_back(i);
  }
  if (by_poset != by_meet) throw InvariantError("xi characterizations disagree");
  return by_poset;
}

struct BetaAggregate {
  Rational x0;
  std::int64_t beta = 0;
};

/// x0 = min parameter over classes outside xi; beta = sum of beta(Omega_i)
/// over those classes attaining x0.
inline BetaAggregate beta_aggregate(const GroupStructure& gs, const ParamVector& x,
                                    const OmegaSet& omega) {
  auto xi = xi_classes(gs, omega);
  std::optional<Rational> x0;
  for (int i = 0; i < gs.class_count(); ++i)
    if (!std::binary_search(xi.begin(), xi.end(), i)) x0 = x0 ? std::min(*x0, x[i]) : x[i];
  if (!x0) throw UndefinedError("x0 undefined: every class lies above omega");
  BetaAggregate out{*x0, 0};
  for (int i = 0; i < gs.class_count(); ++i)
    if (!std::binary_search(xi.begin(), xi.end(), i) && x[i] == *x0)
      out.beta += beta_of_class_set(gs, gs.classes()[i].members);
  return out;
}

/// Elements of inertia type q^l in the regular representation:
/// those whose order is exactly divisible by q^l.
inline std::vector<Element> omega_of_type(const AbelianGroup& g, std::int64_t q, int l) {
  if (!is_prime_small(static_cast<std::uint64_t>(q))) throw ValidationError("q must be prime");
  if (l < 1) throw ValidationError("l must be >= 1");
  std::vector<Element> out;
  for (Element e = 1; e < g.order(); ++e)
    if (valuation(g.element_order(e), q) == l) out.push_back(e);
  return out;
}

/// Union of omega_of_type over all l >= 1.
inline std::vector<Element> omega_of_prime(const AbelianGroup& g, std::int64_t q) {
  std::vector<Element> out;
  for (Element e = 1; e < g.order(); ++e)
    if (g.element_order(e) % q == 0) out.push_back(e);
  return out;
}

}  // namespace abelcensus
