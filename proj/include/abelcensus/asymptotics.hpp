#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "abelcensus/enumerator.hpp"
#include "abelcensus/errors.hpp"
#include "abelcensus/invariants.hpp"
#include "abelcensus/structure.hpp"

namespace abelcensus {

/// Location and type of the leading singularity of the counting series.
struct SingularityData {
  Rational sigma0;             // abscissa 1/x_1
  std::int64_t pole_order = 0; // beta, or 0
  int log_power = 0;           // gamma - delta_x in the log case, else 0
  int case_tag = 1;            // 1: pole only; 2: logarithmic factor present; 0: slice is empty
  /// log log exponents consistent with the available statements; two entries
  /// when they disagree.
  std::vector<int> loglog_candidates;
  bool loglog_ambiguous = false;
};

inline SingularityData singularity_data(const GroupStructure& gs, const ParamVector& x, const OmegaSet& omega,
                                        int gamma) {
  if (gamma < 0) throw ValidationError("gamma must be >= 0");
  SingularityData sd;
  const Rational x1 = x.min();
  sd.sigma0 = 1 / x1;
  std::optional<StructureConstants> sc;
  if (!omega.empty()) {
    sc = structure_constants(gs, x, omega);
    if (gamma < sc->gamma)
      throw DomainError("gamma=" + std::to_string(gamma) + " is below gamma_x=" + std::to_string(sc->gamma));
    if (gamma == 0 && !omega_free_generating(gs, omega)) {
      // No surjection avoids Omega at every prime.
      sd.case_tag = 0;
      sd.sigma0 = 0;
      sd.loglog_candidates = {0};
      return sd;
    }
  }
  bool case1 = omega.empty();
  if (!case1) {
    auto xi = xi_classes(gs, omega);
    Rational mxi = x[xi.front()];
    for (int i : xi) mxi = std::min(mxi, x[i]);
    case1 = mxi > x1;
  }
  if (case1) {
    auto ba = beta_aggregate(gs, x, omega);
    sd.case_tag = 1;
    sd.pole_order = ba.beta;
    sd.log_power = 0;
    sd.loglog_candidates = {0};
    return sd;
  }
  auto ba = beta_aggregate(gs, x, omega);
  sd.case_tag = 2;
  sd.log_power = gamma - sc->delta;
  sd.pole_order = ba.x0 == x1 ? ba.beta : 0;
  if (sd.pole_order > 0) {
    sd.loglog_candidates = {sd.log_power};
  } else {
    // The beta = 0 branch lowers the log log exponent by one relative to the
    // pole branch; both readings are reported.
    sd.loglog_candidates = {sd.log_power, std::max(0, sd.log_power - 1)};
    sd.loglog_ambiguous = sd.loglog_candidates[0] != sd.loglog_candidates[1];
  }
  return sd;
}

/// N(X) ~ C * X^x_exponent * (log X)^log_power * (log log X)^loglog_power.
struct AsymptoticShape {
  Rational x_exponent;
  std::int64_t log_power = 0;
  int loglog_power = 0;
  bool bounded = false;
  std::string constant;          // symbolic descriptor
  std::optional<double> gamma_value;  // Gamma(beta) when it enters the constant

  std::string str() const {
    if (bounded) return "bounded";
    std::ostringstream os;
    os << "C*x^" << rational_text(x_exponent);
    if (log_power) os << "*(log x)^" << log_power;
    if (loglog_power) os << "*(log log x)^" << loglog_power;
    return os.str();
  }
};

inline AsymptoticShape delange_shape(const SingularityData& sd) {
  AsymptoticShape s;
  s.x_exponent = sd.sigma0;
  if (sd.pole_order > 0) {
    s.log_power = sd.pole_order - 1;
    s.loglog_power = sd.log_power;
    s.gamma_value = std::tgamma(static_cast<double>(sd.pole_order));
    s.constant = "g(sigma0)/Gamma(" + std::to_string(sd.pole_order) + ")";
  } else if (sd.log_power >= 1) {
    s.log_power = -1;
    s.loglog_power = sd.log_power - 1;
    s.constant = std::to_string(sd.log_power) + "*g_" + std::to_string(sd.log_power) + "(sigma0)";
  } else {
    s.bounded = true;
    s.x_exponent = 0;
    s.constant = "eventually constant";
  }
  return s;
}

struct FitResult {
  double sigma = 0;      // exponent of X
  double log_power = 0;  // exponent of log X
  double intercept = 0;
  double sigma_only = 0;  // exponent of X with the log term dropped
  std::vector<double> residuals;
  double rms = 0;
  /// Largest deviation of sigma over sliding windows of the checkpoints.
  double stability = 0;
  std::size_t points = 0;
};

namespace detail {

inline Eigen::VectorXd lsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  return A.colPivHouseholderQr().solve(b);
}

inline Eigen::VectorXd fit3(const std::vector<double>& lx, const std::vector<double>& ln, std::size_t from,
                            std::size_t to) {
  const auto n = static_cast<Eigen::Index>(to - from);
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = lx[from + static_cast<std::size_t>(i)];
    A(i, 0) = 1;
    A(i, 1) = l;
    A(i, 2) = std::log(l);
    b(i) = ln[from + static_cast<std::size_t>(i)];
  }
  return lsq(A, b);
}

}  // namespace detail

/// Least-squares fit of log N = a + sigma log X + lambda log log X.
/// Needs at least 8 points with N > 0 and X > e spanning 3 decades.
inline FitResult fit_exponents(const std::vector<double>& X, const std::vector<double>& N) {
  if (X.size() != N.size()) throw ValidationError("fit: size mismatch");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < X.size(); ++i)
    if (N[i] > 0 && X[i] > std::exp(1.0)) pts.emplace_back(std::log(X[i]), std::log(N[i]));
  std::sort(pts.begin(), pts.end());
  if (pts.size() < 8) throw ValidationError("fit: need at least 8 checkpoints with nonzero counts");
  if ((pts.back().first - pts.front().first) / std::log(10.0) < 3 - 1e-9)
    throw ValidationError("fit: checkpoints must span at least 3 decades");
  std::vector<double> lx, ln;
  for (auto& [a, b] : pts) {
    lx.push_back(a);
    ln.push_back(b);
  }
  FitResult r;
  r.points = pts.size();
  auto c = detail::fit3(lx, ln, 0, lx.size());
  r.intercept = c(0);
  r.sigma = c(1);
  r.log_power = c(2);
  double ss = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    double res = ln[i] - (c(0) + c(1) * lx[i] + c(2) * std::log(lx[i]));
    r.residuals.push_back(res);
    ss += res * res;
  }
  r.rms = std::sqrt(ss / static_cast<double>(lx.size()));
  {
    const auto n = static_cast<Eigen::Index>(lx.size());
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      A(i, 0) = 1;
      A(i, 1) = lx[static_cast<std::size_t>(i)];
      b(i) = ln[static_cast<std::size_t>(i)];
    }
    r.sigma_only = detail::lsq(A, b)(1);
  }
  const std::size_t w = std::max<std::size_t>(6, lx.size() / 2);
  for (std::size_t s = 0; s + w <= lx.size(); ++s) {
    auto cw = detail::fit3(lx, ln, s, s + w);
    r.stability = std::max(r.stability, std::abs(cw(1) - r.sigma));
  }
  return r;
}

/// Column of a census table as doubles: selected slices, sur or hom.
inline std::vector<double> table_column(const CensusTable& t, CountMode mode, SliceSelect sel) {
  std::vector<double> out;
  for (std::size_t k = 0; k < t.size(); ++k) {
    double v = 0;
    for (std::size_t s = 0; s < t.cells()[k].size(); ++s) {
      if (!sel.accepts(static_cast<int>(s))) continue;
      const auto& c = t.cells()[k][s];
      v += static_cast<double>(mode == CountMode::sur ? c.sur : c.hom);
    }
    out.push_back(v);
  }
  return out;
}

inline std::vector<double> table_bounds(const CensusTable& t) {
  std::vector<double> out;
  for (auto& b : t.checkpoints()) out.push_back(b.value());
  return out;
}

inline FitResult fit_exponents(const CensusTable& t, CountMode mode = CountMode::sur, SliceSelect sel = {}) {
  return fit_exponents(table_bounds(t), table_column(t, mode, sel));
}

enum class Trend { to_zero, bounded_positive, growing };

inline const char* trend_name(Trend t) {
  switch (t) {
    case Trend::to_zero: return "to_zero";
    case Trend::bounded_positive: return "bounded_positive";
    case Trend::growing: return "growing";
  }
  return "?";
}

struct RatioOptions {
  int windows = 4;
  double zero_factor = 0.5;  // last window below this times the first: candidate for to_zero
  double grow_factor = 2.0;  // last window above this times the first: candidate for growing
  /// Checkpoints whose denominator count is below this are left out of the
  /// windows; tiny counts make the ratio mostly noise.
  double min_denominator = 100;
};

struct RatioResult {
  std::vector<std::optional<double>> ratios;  // per checkpoint; empty where the denominator is 0
  std::vector<double> window_means;
  Trend trend = Trend::bounded_positive;
};

/// Finite-X ratios N1/N2 and their trend. to_zero requires the window means
/// to decrease strictly and the last to fall below zero_factor times the
/// first; growing is the mirror image; anything else is bounded_positive.
inline RatioResult ratio_R(const std::vector<double>& N1, const std::vector<double>& N2,
                           const RatioOptions& opt = {}) {
  if (N1.size() != N2.size()) throw ValidationError("ratio: size mismatch");
  if (opt.windows < 3) throw ValidationError("ratio: need at least 3 windows");
  RatioResult r;
  std::vector<double> valid;
  for (std::size_t k = 0; k < N1.size(); ++k) {
    if (N2[k] > 0) {
      r.ratios.push_back(N1[k] / N2[k]);
      if (N2[k] >= opt.min_denominator) valid.push_back(N1[k] / N2[k]);
    } else {
      r.ratios.push_back(std::nullopt);
    }
  }
  if (std::none_of(r.ratios.begin(), r.ratios.end(), [](auto& v) { return v.has_value(); }))
    throw UndefinedError("ratio undefined: denominator is zero at every checkpoint");
  if (!r.ratios.back()) throw ValidationError("ratio: denominator is zero at the largest checkpoint");
  const auto W = static_cast<std::size_t>(opt.windows);
  if (valid.size() < W) throw ValidationError("ratio: fewer usable checkpoints than windows");
  for (std::size_t w = 0; w < W; ++w) {
    std::size_t a = w * valid.size() / W, b = (w + 1) * valid.size() / W;
    double s = 0;
    for (std::size_t i = a; i < b; ++i) s += valid[i];
    r.window_means.push_back(s / static_cast<double>(b - a));
  }
  bool dec = true, inc = true;
  for (std::size_t w = 1; w < W; ++w) {
    dec = dec && r.window_means[w] < r.window_means[w - 1];
    inc = inc && r.window_means[w] > r.window_means[w - 1];
  }
  const double first = r.window_means.front(), last = r.window_means.back();
  if (dec && last < opt.zero_factor * first)
    r.trend = Trend::to_zero;
  else if (inc && last > opt.grow_factor * first)
    r.trend = Trend::growing;
  else
    r.trend = Trend::bounded_positive;
  return r;
}

inline RatioResult ratio_R(int gamma1, int gamma2, const CensusTable& t, const RatioOptions& opt = {},
                           CountMode mode = CountMode::sur) {
  return ratio_R(table_column(t, mode, SliceSelect::of(gamma1)), table_column(t, mode, SliceSelect::of(gamma2)), opt);
}

/// Census with parameters a*x and bound X^a equals the census with x and X,
/// in every slice, exactly.
inline bool scaling_check(const EnumContext& ctx, const Rational& a, const std::vector<Bound>& checkpoints,
                          const EnumOptions& opt = {}) {
  EnumContext scaled(ctx.gs_ptr(), ctx.x().scaled_by(a), ctx.omega());
  std::vector<Bound> cps2;
  for (auto& b : checkpoints) cps2.push_back(b.pow(a));
  auto t1 = enumerate_census(ctx, checkpoints, opt);
  auto t2 = enumerate_census(scaled, cps2, opt);
  if (t1.size() != t2.size()) return false;
  for (std::size_t k = 0; k < t1.size(); ++k) {
    std::size_t n = std::max(t1.cells()[k].size(), t2.cells()[k].size());
    for (std::size_t s = 0; s < n; ++s) {
      auto c1 = s < t1.cells()[k].size() ? t1.cells()[k][s] : CensusCounts{};
      auto c2 = s < t2.cells()[k].size() ? t2.cells()[k][s] : CensusCounts{};
      if (!(c1 == c2)) return false;
    }
  }
  return true;
}

}  // namespace abelcensus
