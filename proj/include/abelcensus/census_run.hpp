#pragma once

// Config-driven census runs: parsing, orchestration, resume state and the
// CSV/JSON/manifest writers.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "abelcensus/asymptotics.hpp"
#include "abelcensus/enumerator.hpp"
#include "abelcensus/errors.hpp"
#include "abelcensus/group_structure.hpp"
#include "abelcensus/invariants.hpp"
#include "abelcensus/primes.hpp"
#include "abelcensus/structure.hpp"

namespace abelcensus {

inline constexpr const char* kVersion = "1.0.0";

struct RunConfig {
  std::vector<std::int64_t> group;
  std::vector<Rational> params;  // one per class; empty means all ones
  std::vector<int> omega;        // 1-based class indices
  int gamma_lo = 0;
  int gamma_hi = 0;
  Bound bound = Bound::integer(1);
  std::vector<Bound> checkpoints;  // empty: halving schedule from the bound
  CountMode mode = CountMode::sur;
  unsigned threads = 1;
  std::string out = "census_out";
  std::optional<std::string> cache;
  std::optional<std::string> resume;
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline std::int64_t parse_int(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw ValidationError("malformed " + what + " '" + s + "'");
  }
  if (pos != s.size()) throw ValidationError("malformed " + what + " '" + s + "'");
  return v;
}

inline Rational parse_rational(const std::string& s) {
  auto sl = s.find('/');
  std::int64_t n = parse_int(trim(s.substr(0, sl)), "rational");
  std::int64_t d = sl == std::string::npos ? 1 : parse_int(trim(s.substr(sl + 1)), "rational");
  if (d == 0) throw ValidationError("malformed rational '" + s + "': zero denominator");
  Rational r(n, d);
  if (r <= 0) throw ValidationError("parameter '" + s + "' is not positive");
  return r;
}

/// "decades:LO..HI/N" gives 10^(k/N) for k = LO*N..HI*N.
inline std::vector<Bound> parse_checkpoints(const std::string& v) {
  std::vector<Bound> out;
  if (v.rfind("decades:", 0) == 0) {
    std::string spec = v.substr(8);
    auto sl = spec.find('/');
    auto dots = spec.find("..");
    if (dots == std::string::npos) throw ValidationError("checkpoints: expected decades:LO..HI/N");
    std::int64_t n = sl == std::string::npos ? 1 : parse_int(spec.substr(sl + 1), "checkpoint step");
    std::int64_t lo = parse_int(spec.substr(0, dots), "checkpoint range");
    std::int64_t hi = parse_int(spec.substr(dots + 2, sl == std::string::npos ? std::string::npos : sl - dots - 2),
                                "checkpoint range");
    if (n < 1 || lo < 0 || hi < lo || (hi - lo) * n > 1000) throw ValidationError("checkpoints: bad decade range");
    for (std::int64_t k = lo * n; k <= hi * n; ++k)
      out.push_back(k == 0 ? Bound::integer(1) : Bound(10, 1, k, n));
    return out;
  }
  for (auto& part : split(v, ',')) out.push_back(Bound::parse(part));
  return out;
}

}  // namespace detail

/// Sets one config key from its text value.
inline void set_config_key(RunConfig& c, const std::string& key, const std::string& val) {
  if (key == "group") {
    c.group.clear();
    for (auto& f : detail::split(val, ',')) c.group.push_back(detail::parse_int(f, "group factor"));
    if (c.group.empty()) throw ValidationError("empty group");
  } else if (key == "params") {
    c.params.clear();
    for (auto& f : detail::split(val, ',')) c.params.push_back(detail::parse_rational(f));
  } else if (key == "omega") {
    c.omega.clear();
    if (!val.empty() && val != "none")
      for (auto& f : detail::split(val, ',')) c.omega.push_back(static_cast<int>(detail::parse_int(f, "class index")));
  } else if (key == "gamma") {
    auto dots = val.find("..");
    if (dots == std::string::npos) {
      c.gamma_lo = c.gamma_hi = static_cast<int>(detail::parse_int(val, "gamma"));
    } else {
      c.gamma_lo = static_cast<int>(detail::parse_int(detail::trim(val.substr(0, dots)), "gamma"));
      c.gamma_hi = static_cast<int>(detail::parse_int(detail::trim(val.substr(dots + 2)), "gamma"));
    }
    if (c.gamma_lo < 0 || c.gamma_hi < c.gamma_lo || c.gamma_hi > 64)
      throw ValidationError("bad gamma range '" + val + "'");
  } else if (key == "bound") {
    c.bound = Bound::parse(val);
  } else if (key == "checkpoints") {
    c.checkpoints = detail::parse_checkpoints(val);
  } else if (key == "mode") {
    if (val == "sur") c.mode = CountMode::sur;
    else if (val == "hom") c.mode = CountMode::hom;
    else throw ValidationError("mode must be sur or hom");
  } else if (key == "threads") {
    auto t = detail::parse_int(val, "thread count");
    if (t < 1 || t > 1024) throw ValidationError("thread count out of range");
    c.threads = static_cast<unsigned>(t);
  } else if (key == "out") {
    if (val.empty()) throw ValidationError("empty output path");
    c.out = val;
  } else if (key == "cache") {
    c.cache = val;
  } else if (key == "resume") {
    c.resume = val;
  } else {
    throw ValidationError("unknown key '" + key + "'");
  }
}

/// key=value lines; '#' starts a comment. With `require`, the keys group
/// and bound must be present. `seen` collects the keys that were set.
inline RunConfig parse_config(const std::string& text, bool require = true, std::set<std::string>* seen_out = nullptr) {
  RunConfig c;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) { throw ValidationError("line " + std::to_string(lineno) + ": " + msg); };
    auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key=value");
    std::string key = detail::trim(line.substr(0, eq)), val = detail::trim(line.substr(eq + 1));
    if (!seen.insert(key).second) fail("duplicate key '" + key + "'");
    try {
      set_config_key(c, key, val);
    } catch (const ValidationError& e) {
      fail(e.what());
    }
  }
  if (require)
    for (const char* req : {"group", "bound"})
      if (!seen.contains(req))
        throw ValidationError("line " + std::to_string(lineno + 1) + ": missing key '" + req + "'");
  if (seen_out) *seen_out = std::move(seen);
  return c;
}

/// Everything derived from a config that the runs need.
struct ResolvedRun {
  RunConfig config;
  std::shared_ptr<const GroupStructure> gs;
  ParamVector x;
  OmegaSet omega;
  std::vector<Bound> checkpoints;  // ascending, ends at the bound
};

inline ResolvedRun resolve(const RunConfig& c) {
  ResolvedRun r{c, GroupStructure::build(AbelianGroup::make(c.group)), ParamVector::ones(1), OmegaSet::none(), {}};
  const int l = r.gs->class_count();
  if (l == 0) throw ValidationError("group must be nontrivial");
  if (c.params.empty()) {
    r.x = ParamVector::ones(l);
  } else if (c.params.size() == 1) {
    r.x = ParamVector(std::vector<Rational>(l, c.params[0]));
  } else if (static_cast<int>(c.params.size()) == l) {
    r.x = ParamVector(c.params);
  } else {
    throw ValidationError("params has " + std::to_string(c.params.size()) + " entries; the group has " +
                          std::to_string(l) + " power classes");
  }
  std::vector<int> idx;
  for (int i : c.omega) idx.push_back(i - 1);
  r.omega = OmegaSet::from_classes(*r.gs, idx);
  std::vector<Bound> cps = c.checkpoints;
  if (cps.empty()) {
    Bound b = c.bound;
    for (int i = 0; i < 30 && Bound::integer(2) < b; ++i) {
      cps.push_back(b);
      b = b.halved();
    }
    if (cps.empty()) cps.push_back(c.bound);
  }
  for (auto& b : cps)
    if (c.bound < b) throw ValidationError("checkpoint " + b.str() + " exceeds the bound");
  cps.push_back(c.bound);
  r.checkpoints = detail::sorted_checkpoints(std::move(cps));
  return r;
}

/// Canonical text of the fields that change the output; threads, paths and
/// the cache are left out.
inline std::string canonical_config(const ResolvedRun& r) {
  std::ostringstream os;
  os << "group=" << r.gs->group().name() << "\nparams=";
  for (int i = 0; i < r.x.size(); ++i) os << (i ? "," : "") << rational_text(r.x[i]);
  os << "\nomega=";
  for (std::size_t i = 0; i < r.omega.classes.size(); ++i) os << (i ? "," : "") << r.omega.classes[i] + 1;
  os << "\ngamma=" << r.config.gamma_lo << ".." << r.config.gamma_hi << "\nbound=" << r.config.bound.str()
     << "\ncheckpoints=";
  for (std::size_t i = 0; i < r.checkpoints.size(); ++i) os << (i ? "," : "") << r.checkpoints[i].str();
  os << "\nmode=" << (r.config.mode == CountMode::sur ? "sur" : "hom") << "\n";
  return os.str();
}

inline std::string config_hash(const ResolvedRun& r) {
  auto s = canonical_config(r);
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << detail::fnv1a(s.data(), s.size());
  return os.str();
}

struct RunOptions {
  std::optional<std::size_t> max_units;  // resource cap on work units in this call
  bool timing = false;
  std::optional<unsigned> threads;  // overrides the config
};

struct RunOutput {
  std::string csv;
  std::string json;
  std::string manifest;
  bool complete = true;
  std::string hash;
};

inline std::string census_csv(const CensusTable& t, int gamma_hi) {
  std::ostringstream os;
  os << "X,gamma,count_sur,count_hom,unsliced_sur\n";
  const int top = std::max(gamma_hi, t.max_gamma());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto X = t.checkpoints()[k].str();
    const auto u = t.unsliced(k).sur;
    for (int g = 0; g <= top; ++g) {
      auto c = t.slice(k, g);
      os << X << ',' << g << ',' << c.sur << ',' << c.hom << ',' << u << '\n';
    }
    auto tot = t.total(k);
    os << X << ",all," << tot.sur << ',' << tot.hom << ',' << u << '\n';
  }
  return os.str();
}

namespace detail {

inline nlohmann::ordered_json classes_json(const GroupStructure& gs, const ParamVector& x) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& pc : gs.classes()) {
    nlohmann::ordered_json c;
    c["index"] = pc.index + 1;
    std::vector<std::string> m;
    for (auto e : pc.members) m.push_back(gs.group().format(e));
    c["members"] = m;
    c["order"] = gs.lattice()[pc.subgroup].order;
    c["param"] = rational_text(x[pc.index]);
    c["x_subgroup"] = rational_text(x_of_subgroup(gs, pc.subgroup, x));
    arr.push_back(std::move(c));
  }
  return arr;
}

inline nlohmann::ordered_json singularity_json(const ResolvedRun& r) {
  auto arr = nlohmann::ordered_json::array();
  for (int g = r.config.gamma_lo; g <= r.config.gamma_hi; ++g) {
    nlohmann::ordered_json j;
    j["gamma"] = g;
    try {
      auto sd = singularity_data(*r.gs, r.x, r.omega, g);
      auto sh = delange_shape(sd);
      j["sigma0"] = rational_text(sd.sigma0);
      j["pole_order"] = sd.pole_order;
      j["log_power"] = sd.log_power;
      j["case"] = sd.case_tag;
      j["loglog_candidates"] = sd.loglog_candidates;
      j["loglog_ambiguous"] = sd.loglog_ambiguous;
      j["shape"] = sh.str();
      j["constant"] = sh.constant;
    } catch (const Error& e) {
      j["error"] = e.what();
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

inline nlohmann::ordered_json structure_json(const ResolvedRun& r) {
  nlohmann::ordered_json j;
  try {
    auto sc = structure_constants(*r.gs, r.x, r.omega);
    j["delta_x"] = sc.delta;
    j["gamma_x"] = sc.gamma;
    std::vector<int> gammas;
    for (int g = r.config.gamma_lo; g <= r.config.gamma_hi; ++g) gammas.push_back(g);
    j["report"] = structure_report(*r.gs, r.x, r.omega, gammas);
    if (!r.omega.empty()) j["classifier"] = conjecture_classifier(*r.gs, r.x, r.omega);
  } catch (const Error& e) {
    j["error"] = e.what();
  }
  return j;
}

inline nlohmann::ordered_json fit_json(const CensusTable& t, CountMode mode, SliceSelect sel) {
  nlohmann::ordered_json j;
  try {
    auto f = fit_exponents(t, mode, sel);
    j["sigma"] = f.sigma;
    j["log_power"] = f.log_power;
    j["sigma_only"] = f.sigma_only;
    j["rms"] = f.rms;
    j["stability"] = f.stability;
    j["points"] = f.points;
    j["residuals"] = f.residuals;
  } catch (const Error& e) {
    j["error"] = e.what();
  }
  return j;
}

}  // namespace detail

/// Analysis block: structure constants, singularity data, fits and ratios.
inline nlohmann::ordered_json census_analysis(const ResolvedRun& r, const CensusTable& t) {
  nlohmann::ordered_json j;
  j["structure"] = detail::structure_json(r);
  j["singularity"] = detail::singularity_json(r);
  auto fits = nlohmann::ordered_json::array();
  {
    auto f = detail::fit_json(t, r.config.mode, SliceSelect{});
    f["slice"] = "all";
    fits.push_back(std::move(f));
  }
  if (!r.omega.empty())
    for (int g = r.config.gamma_lo; g <= r.config.gamma_hi; ++g) {
      auto f = detail::fit_json(t, r.config.mode, SliceSelect::of(g));
      f["slice"] = g;
      fits.push_back(std::move(f));
    }
  j["fits"] = fits;
  auto ratios = nlohmann::ordered_json::array();
  if (!r.omega.empty())
    for (int g = r.config.gamma_lo; g < r.config.gamma_hi; ++g) {
      nlohmann::ordered_json q;
      q["gamma1"] = g;
      q["gamma2"] = g + 1;
      try {
        auto rr = ratio_R(g, g + 1, t, {}, r.config.mode);
        auto vals = nlohmann::ordered_json::array();
        for (auto& v : rr.ratios) vals.push_back(v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json());
        q["ratios"] = vals;
        q["window_means"] = rr.window_means;
        q["trend"] = trend_name(rr.trend);
      } catch (const Error& e) {
        q["error"] = e.what();
      }
      ratios.push_back(std::move(q));
    }
  j["ratios"] = ratios;
  return j;
}

namespace detail {

inline nlohmann::json progress_json(const CensusProgress& p, const std::string& hash) {
  nlohmann::json j;
  j["config_hash"] = hash;
  j["total_units"] = p.total_units;
  j["done"] = std::vector<std::size_t>(p.done.begin(), p.done.end());
  auto bins = nlohmann::json::array();
  for (auto& b : p.bins) {
    auto row = nlohmann::json::array();
    for (auto& c : b) row.push_back({c.sur, c.hom});
    bins.push_back(row);
  }
  j["bins"] = bins;
  return j;
}

/// Loads saved progress; anything unreadable or for another config is
/// ignored.
inline std::optional<CensusProgress> load_progress(const std::filesystem::path& path, const std::string& hash) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    auto j = nlohmann::json::parse(in);
    if (j.at("config_hash").get<std::string>() != hash) return std::nullopt;
    CensusProgress p;
    p.total_units = j.at("total_units").get<std::size_t>();
    for (auto& d : j.at("done")) p.done.insert(d.get<std::size_t>());
    for (auto& row : j.at("bins")) {
      SliceCounts sc;
      for (auto& c : row) sc.push_back({c.at(0).get<std::uint64_t>(), c.at(1).get<std::uint64_t>()});
      p.bins.push_back(std::move(sc));
    }
    return p;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline void write_file(const std::filesystem::path& path, const std::string& data) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write " + tmp);
    out << data;
    if (!out) throw ResourceError("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

inline std::filesystem::path resume_path(const RunConfig& c) {
  return c.resume ? std::filesystem::path(*c.resume) : std::filesystem::path(c.out) / "resume.json";
}

/// Runs the census for a config. Saved progress for the same config is
/// picked up from the resume file; when the unit cap stops the run, the
/// progress is saved there and the partial output is returned with
/// complete = false.
inline RunOutput run_census(const RunConfig& cfg, const RunOptions& ro = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = resolve(cfg);
  RunOutput out;
  out.hash = config_hash(r);
  EnumContext ctx(r.gs, r.x, r.omega);

  EnumOptions opt;
  opt.threads = ro.threads.value_or(cfg.threads);
  opt.max_units = ro.max_units;
  std::optional<SieveCache> cache = cfg.cache ? std::optional<SieveCache>(SieveCache(*cfg.cache)) : SieveCache::from_env();
  std::optional<PrimeTable> primes;
  if (cache) {
    auto need = prime_limit_for(ctx, r.checkpoints.back().threshold(ctx.D()), opt.prime_cap);
    std::uint64_t lim = 10;
    while (lim < need) lim *= 10;
    primes = cache->load_or_build(lim);
    opt.primes = &*primes;
  }

  const auto state = resume_path(cfg);
  CensusProgress progress = detail::load_progress(state, out.hash).value_or(CensusProgress{});
  auto table = enumerate_census(ctx, r.checkpoints, opt, &progress);
  out.complete = table.complete();

  out.csv = census_csv(table, cfg.gamma_hi);
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["config_hash"] = out.hash;
  j["complete"] = out.complete;
  j["group"] = r.gs->group().name();
  j["mode"] = cfg.mode == CountMode::sur ? "sur" : "hom";
  j["classes"] = detail::classes_json(*r.gs, r.x);
  std::vector<int> om;
  for (int i : r.omega.classes) om.push_back(i + 1);
  j["omega"] = om;
  if (out.complete) {
    auto a = census_analysis(r, table);
    for (auto& [k, v] : a.items()) j[k] = v;
  } else {
    j["units_done"] = progress.done.size();
    j["units_total"] = progress.total_units;
  }
  out.json = j.dump(2) + "\n";

  nlohmann::ordered_json m;
  m["version"] = kVersion;
  m["config_hash"] = out.hash;
  m["config"] = canonical_config(r);
  m["classes"] = detail::classes_json(*r.gs, r.x);
  m["structure"] = detail::structure_json(r);
  m["singularity"] = detail::singularity_json(r);
  m["complete"] = out.complete;
  if (ro.timing)
    m["timing_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.manifest = m.dump(2) + "\n";

  std::filesystem::create_directories(cfg.out);
  if (out.complete) {
    std::error_code ec;
    std::filesystem::remove(state, ec);
  } else {
    if (state.has_parent_path()) std::filesystem::create_directories(state.parent_path());
    detail::write_file(state, detail::progress_json(progress, out.hash).dump() + "\n");
  }
  return out;
}

/// Writes census.csv, census.json and manifest.json into the output directory.
inline void write_outputs(const RunConfig& cfg, const RunOutput& o) {
  std::filesystem::path dir(cfg.out);
  std::filesystem::create_directories(dir);
  detail::write_file(dir / "census.csv", o.csv);
  detail::write_file(dir / "census.json", o.json);
  detail::write_file(dir / "manifest.json", o.manifest);
}

}  // namespace abelcensus
