#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "abelcensus/arith.hpp"
#include "abelcensus/errors.hpp"

namespace abelcensus {

using BigInt = boost::multiprecision::cpp_int;
using U128 = unsigned __int128;

/// min(a * b, cap), without overflow. Requires cap > 0.
inline U128 sat_mul(U128 a, U128 b, U128 cap) {
  if (a == 0 || b == 0) return 0;
  if (a >= cap || b >= cap || a > (cap - 1) / b) return cap;
  U128 r = a * b;
  return r < cap ? r : cap;
}

inline BigInt sat_mul(const BigInt& a, const BigInt& b, const BigInt& cap) {
  BigInt r = a * b;
  return r < cap ? r : cap;
}

/// min(b^e, cap).
template <class Mag>
Mag sat_pow(Mag b, std::int64_t e, const Mag& cap) {
  Mag r = 1;
  while (e > 0) {
    if (e & 1) r = sat_mul(r, b, cap);
    e >>= 1;
    if (e) b = sat_mul(b, b, cap);
    if (r == cap) return cap;
  }
  return r;
}

/// Natural log of a positive big integer.
inline long double big_log(const BigInt& n) {
  const auto bits = static_cast<long>(boost::multiprecision::msb(n));
  if (bits < 60) return logl(n.convert_to<long double>());
  const long shift = bits - 60;
  BigInt top = n >> static_cast<unsigned>(shift);
  return logl(top.convert_to<long double>()) + static_cast<long double>(shift) * logl(2.0L);
}

/// Smallest r >= 0 with r^m >= n.
inline BigInt iroot_ceil(const BigInt& n, std::int64_t m) {
  if (n <= 0) return 0;
  if (m == 1) return n;
  // Newton iteration from an overestimate converges to floor(n^(1/m)).
  const auto bits = static_cast<std::int64_t>(boost::multiprecision::msb(n)) + 1;
  BigInt x = BigInt(1) << static_cast<unsigned>((bits + m - 1) / m);
  for (;;) {
    BigInt y = ((m - 1) * x + n / boost::multiprecision::pow(x, static_cast<unsigned>(m - 1))) / m;
    if (y >= x) break;
    x = y;
  }
  while (boost::multiprecision::pow(x, static_cast<unsigned>(m)) > n) --x;
  while (boost::multiprecision::pow(x, static_cast<unsigned>(m)) < n) ++x;
  return x;
}

/// A positive bound X = (num/den)^(exp_num/exp_den) held exactly.
class Bound {
 public:
  Bound() = default;
  Bound(BigInt num, BigInt den, std::int64_t exp_num, std::int64_t exp_den) {
    if (num <= 0 || den <= 0 || exp_num <= 0 || exp_den <= 0)
      throw ValidationError("bound must be positive with positive exponent");
    BigInt g = boost::multiprecision::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
    std::int64_t h = std::gcd(exp_num, exp_den);
    en_ = exp_num / h;
    ed_ = exp_den / h;
    if (ed_ == 1 && en_ > 1 && static_cast<std::int64_t>(boost::multiprecision::msb(num_)) * en_ < 256) {
      num_ = boost::multiprecision::pow(num_, static_cast<unsigned>(en_));
      den_ = boost::multiprecision::pow(den_, static_cast<unsigned>(en_));
      en_ = 1;
    }
    if (log() < -1e-12L) throw ValidationError("bound must be >= 1");
  }
  static Bound integer(std::uint64_t n) { return Bound(BigInt(n), 1, 1, 1); }

  /// Accepts "1000", "1e6", "2.5e3", "10^6", "10^1/3", "10^(1/3)", "1000/7".
  static Bound parse(const std::string& text) {
    std::string s;
    for (char c : text)
      if (c != ' ' && c != '(' && c != ')') s += c;
    if (s.empty()) throw ValidationError("empty bound");
    auto parse_uint = [&](const std::string& t) {
      if (t.empty() || !std::all_of(t.begin(), t.end(), ::isdigit))
        throw ValidationError("malformed bound '" + text + "'");
      return BigInt(t);
    };
    auto parse_i64 = [&](const std::string& t) {
      BigInt v = parse_uint(t);
      if (v > 1000000000) throw ValidationError("bound exponent too large in '" + text + "'");
      return static_cast<std::int64_t>(v);
    };
    if (auto caret = s.find('^'); caret != std::string::npos) {
      BigInt base = parse_uint(s.substr(0, caret));
      std::string e = s.substr(caret + 1);
      std::int64_t en = 1, ed = 1;
      if (auto sl = e.find('/'); sl != std::string::npos) {
        en = parse_i64(e.substr(0, sl));
        ed = parse_i64(e.substr(sl + 1));
      } else {
        en = parse_i64(e);
      }
      return Bound(base, 1, en, ed);
    }
    if (auto epos = s.find_first_of("eE"); epos != std::string::npos) {
      std::string mant = s.substr(0, epos);
      std::int64_t ex = parse_i64(s.substr(epos + 1));
      std::string digits;
      std::int64_t frac = 0;
      if (auto dot = mant.find('.'); dot != std::string::npos) {
        digits = mant.substr(0, dot) + mant.substr(dot + 1);
        frac = static_cast<std::int64_t>(mant.size() - dot - 1);
      } else {
        digits = mant;
      }
      BigInt m = parse_uint(digits);
      if (ex >= frac) return Bound(m * boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(ex - frac)), 1, 1, 1);
      return Bound(m, boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac - ex)), 1, 1);
    }
    if (auto sl = s.find('/'); sl != std::string::npos)
      return Bound(parse_uint(s.substr(0, sl)), parse_uint(s.substr(sl + 1)), 1, 1);
    return Bound(parse_uint(s), 1, 1, 1);
  }

  const BigInt& base_num() const { return num_; }
  const BigInt& base_den() const { return den_; }
  std::int64_t exp_num() const { return en_; }
  std::int64_t exp_den() const { return ed_; }

  long double log() const {
    return (static_cast<long double>(en_) / ed_) *
           (big_log(num_) - big_log(den_));
  }
  double value() const { return static_cast<double>(expl(log())); }

  /// X^a for a positive rational a.
  Bound pow(const Rational& a) const {
    if (a <= 0) throw ValidationError("bound power must be positive");
    return Bound(num_, den_, en_ * a.numerator(), ed_ * a.denominator());
  }

  /// X / 2, as (num^n / (den^n * 2^m))^(1/m).
  Bound halved() const {
    BigInt n = boost::multiprecision::pow(num_, static_cast<unsigned>(en_));
    BigInt d = boost::multiprecision::pow(den_, static_cast<unsigned>(en_)) * (BigInt(1) << static_cast<unsigned>(ed_));
    return Bound(n, d, 1, ed_);
  }

  /// Smallest integer r such that, for every integer T >= 0,
  /// T < r  iff  T < X^D.  Here T is the D-scaled index prod p^(D x(H)).
  BigInt threshold(std::int64_t D) const {
    const auto e = static_cast<unsigned>(en_ * D);
    BigInt a = boost::multiprecision::pow(num_, e);
    BigInt b = boost::multiprecision::pow(den_, e);
    BigInt q = (a + b - 1) / b;
    return iroot_ceil(q, ed_);
  }

  /// Canonical text: an integer when exact, otherwise base^(n/m).
  std::string str() const {
    std::ostringstream os;
    if (ed_ == 1 && den_ == 1 && en_ * boost::multiprecision::msb(num_) < 200) {
      os << boost::multiprecision::pow(num_, static_cast<unsigned>(en_));
      return os.str();
    }
    os << num_;
    if (den_ != 1) os << '/' << den_;
    if (en_ != 1 || ed_ != 1) {
      os << '^' << en_;
      if (ed_ != 1) os << '/' << ed_;
    }
    return os.str();
  }

  /// Equal real values; different representations of one value compare equal.
  friend bool operator==(const Bound& a, const Bound& b) { return !(a < b) && !(b < a); }
  /// Exact comparison of the real values.
  friend bool operator<(const Bound& a, const Bound& b) {
    // (an/ad)^(p/q) < (bn/bd)^(r/s)  <=>  (an/ad)^(p s) < (bn/bd)^(r q)
    const auto ea = static_cast<unsigned>(a.en_ * b.ed_);
    const auto eb = static_cast<unsigned>(b.en_ * a.ed_);
    using boost::multiprecision::pow;
    return pow(a.num_, ea) * pow(b.den_, eb) < pow(b.num_, eb) * pow(a.den_, ea);
  }

 private:
  BigInt num_ = 1, den_ = 1;
  std::int64_t en_ = 1, ed_ = 1;
};

/// An element d of the index set: prod p^(e_p / D), held as the map
/// p -> e_p of D-scaled integer exponents. The log is of the scaled value
/// prod p^(e_p).
class IndexValue {
 public:
  using Entry = std::pair<std::uint64_t, std::int64_t>;

  IndexValue() = default;
  /// Entries in any order; repeated primes are merged.
  explicit IndexValue(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end());
    for (auto& [p, e] : entries) {
      if (e == 0) continue;
      if (!exps_.empty() && exps_.back().first == p)
        exps_.back().second += e;
      else
        exps_.emplace_back(p, e);
    }
    for (auto& [p, e] : exps_) log_ += static_cast<long double>(e) * logl(static_cast<long double>(p));
  }

  static IndexValue one() { return {}; }

  const std::vector<Entry>& exponents() const { return exps_; }
  bool is_one() const { return exps_.empty(); }
  long double log_scaled() const { return log_; }

  IndexValue times(const IndexValue& o) const {
    std::vector<Entry> all = exps_;
    all.insert(all.end(), o.exps_.begin(), o.exps_.end());
    return IndexValue(std::move(all));
  }

  /// prod p^e_p, exactly.
  BigInt scaled_value() const {
    BigInt r = 1;
    for (auto& [p, e] : exps_) r *= boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(e));
    return r;
  }

  /// "p:e,p:e" sorted by prime; "1" for the empty product.
  std::string str() const {
    if (exps_.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(exps_[i].first) + ':' + std::to_string(exps_[i].second);
    }
    return s;
  }

  friend bool operator==(const IndexValue& a, const IndexValue& b) { return a.exps_ == b.exps_; }
  friend bool operator<(const IndexValue& a, const IndexValue& b) { return a.exps_ < b.exps_; }

 private:
  std::vector<Entry> exps_;
  long double log_ = 0;
};

}  // namespace abelcensus
