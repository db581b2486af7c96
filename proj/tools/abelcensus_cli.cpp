#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "abelcensus/abelcensus.hpp"

using namespace abelcensus;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;

const char* const kKeys[] = {"group", "params", "omega", "gamma",  "bound", "checkpoints",
                             "mode",  "threads", "out",  "cache", "resume"};

struct ConfigFlags {
  std::string file;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", file, "config file (key=value lines)");
    for (const char* k : kKeys) app->add_option(std::string("--") + k, values[k], std::string("overrides ") + k);
  }

  RunConfig load(std::initializer_list<const char*> required) const {
    std::string text;
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw ValidationError("cannot read config " + file);
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    std::set<std::string> seen;
    RunConfig c = parse_config(text, false, &seen);
    for (auto& [k, v] : values) {
      if (v.empty()) continue;
      try {
        set_config_key(c, k, v);
      } catch (const ValidationError& e) {
        throw ValidationError("--" + k + ": " + e.what());
      }
      seen.insert(k);
    }
    for (const char* r : required)
      if (!seen.contains(r)) throw ValidationError(std::string("missing key '") + r + "'");
    return c;
  }
};

int cmd_census(const ConfigFlags& f, std::optional<std::size_t> max_units, bool timing) {
  auto cfg = f.load({"group", "bound"});
  RunOptions ro;
  ro.max_units = max_units;
  ro.timing = timing;
  auto out = run_census(cfg, ro);
  write_outputs(cfg, out);
  std::cout << "config " << out.hash << (out.complete ? " complete" : " partial") << " -> " << cfg.out << "\n";
  if (!out.complete) {
    std::cout << "resume state saved to " << resume_path(cfg).string() << "\n";
    return kExitResource;
  }
  return kExitOk;
}

int cmd_constants(const ConfigFlags& f) {
  auto cfg = f.load({"group"});
  auto r = resolve(cfg);
  std::vector<int> gammas;
  for (int g = cfg.gamma_lo; g <= cfg.gamma_hi; ++g) gammas.push_back(g);
  std::cout << structure_report(*r.gs, r.x, r.omega, gammas);
  for (int g : gammas) {
    std::cout << "gamma " << g << ": ";
    try {
      auto sd = singularity_data(*r.gs, r.x, r.omega, g);
      std::cout << "sigma0 " << rational_text(sd.sigma0) << " pole " << sd.pole_order << " log_power " << sd.log_power
                << " shape " << delange_shape(sd).str();
      if (sd.loglog_ambiguous) std::cout << " (log log exponent ambiguous)";
    } catch (const Error& e) {
      std::cout << "n/a: " << e.what();
    }
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_series(const ConfigFlags& f, const std::string& kind, int gamma, const std::string& output) {
  auto cfg = f.load({"group", "bound"});
  auto r = resolve(cfg);
  EnumContext ctx(r.gs, r.x, r.omega);
  const Bound& X = cfg.bound;
  GeneratingSeries s;
  if (kind == "mu") s = mu_series(ctx, gamma, X);
  else if (kind == "pi") s = pi_series(ctx, gamma, X, {.threads = cfg.threads});
  else if (kind == "pi-moebius") s = pi_series_moebius(ctx, r.gs->lattice().whole(), gamma, X);
  else if (kind == "psi") s = psi_series(ctx, gamma, X);
  else if (kind == "tau") s = tau_series(ctx, gamma, X);
  else throw ValidationError("unknown series kind '" + kind + "'");
  if (s.warning) std::cerr << "warning: " << *s.warning << "\n";
  if (output.empty()) {
    std::cout << s.dump();
  } else {
    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write " + output);
    out << s.dump();
  }
  return kExitOk;
}

int cmd_verify(const ConfigFlags& f) {
  auto cfg = f.load({"group", "bound"});
  auto r = resolve(cfg);
  EnumContext ctx(r.gs, r.x, r.omega);
  const Bound& X = cfg.bound;
  EnumOptions opt{.threads = cfg.threads};
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : " (" + detail + ")") << "\n";
    failures += !ok;
  };
  const int top = r.omega.empty() ? 0 : cfg.gamma_hi;
  for (int g = r.omega.empty() ? 0 : cfg.gamma_lo; g <= top; ++g) {
    const std::string tag = "gamma=" + std::to_string(g);
    SliceSelect sel = r.omega.empty() ? SliceSelect{} : SliceSelect::of(g);
    auto hom = count_by_index(ctx, X, CountMode::hom, sel, opt);
    report("mu equals enumerated hom counts " + tag, mu_series(ctx, g, X).coefficients == hom);
    auto pi = pi_series(ctx, g, X, opt);
    report("pi by Moebius equals enumerated sur counts " + tag,
           pi_series_moebius(ctx, r.gs->lattice().whole(), g, X).coefficients == pi.coefficients);
    if (!r.omega.empty()) {
      try {
        auto v = violations_geq(psi_series(ctx, g, X), pi);
        report("psi >= pi " + tag, v.empty(), std::to_string(v.size()) + " violations");
      } catch (const Error& e) {
        std::cout << "SKIP psi >= pi " << tag << " (" << e.what() << ")\n";
      }
      try {
        auto v = violations_geq(pi, tau_series(ctx, g, X));
        report("tau <= pi " + tag, v.empty(), std::to_string(v.size()) + " violations");
      } catch (const Error& e) {
        std::cout << "SKIP tau <= pi " << tag << " (" << e.what() << ")\n";
      }
    }
  }
  auto t = enumerate_census(ctx, r.checkpoints, opt);
  bool partition = true;
  for (std::size_t k = 0; k < t.size(); ++k) {
    CensusCounts s = t.unsliced(k);
    for (int g = 0; g <= t.max_gamma(); ++g) s += t.slice(k, g);
    partition = partition && s == t.total(k);
  }
  report("slices partition the totals", partition);
  report("scaling by 2 leaves every slice unchanged", scaling_check(ctx, Rational(2), r.checkpoints, opt));
  return failures ? kExitVerifyFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting abelian number fields by parametric ramification invariants"};
  app.require_subcommand(1);

  ConfigFlags census_flags, constants_flags, series_flags, verify_flags;
  std::optional<std::size_t> max_units;
  bool timing = false;
  auto* census = app.add_subcommand("census", "run a census and write CSV/JSON/manifest");
  census_flags.attach(census);
  census->add_option("--max-units", max_units, "stop after this many work units (partial output, exit 3)");
  census->add_flag("--timing", timing, "record wall time in the manifest");

  auto* constants = app.add_subcommand("constants", "print structure constants and singularity data");
  constants_flags.attach(constants);

  std::string kind = "pi", output;
  int gamma = 0;
  auto* series = app.add_subcommand("series", "dump truncated series coefficients");
  series_flags.attach(series);
  series->add_option("--kind", kind, "mu | pi | pi-moebius | psi | tau");
  series->add_option("--slice", gamma, "gamma slice");
  series->add_option("-o,--output", output, "write to file instead of stdout");

  auto* verify = app.add_subcommand("verify", "cross-check series, enumeration and scaling");
  verify_flags.attach(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*census) return cmd_census(census_flags, max_units, timing);
    if (*constants) return cmd_constants(constants_flags);
    if (*series) return cmd_series(series_flags, kind, gamma, output);
    if (*verify) return cmd_verify(verify_flags);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
