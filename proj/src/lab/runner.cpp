#include "tnls/lab/scenarios.hpp"

#include <fftw3.h>

#include <chrono>
#include <cmath>

#include "tnls/errors.hpp"

namespace tnls::lab {

Check check_less(const std::string& name, double value, double bound) {
  return {name, value, bound, "<", value < bound};
}

Check check_greater(const std::string& name, double value, double bound) {
  return {name, value, bound, ">", value > bound};
}

Check check_true(const std::string& name, bool ok) { return {name, ok ? 1.0 : 0.0, 1.0, "==", ok}; }

bool ScenarioResult::passed() const noexcept {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

nlohmann::ordered_json fit_json(const LinearFit& fit) {
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"slope_stderr", fit.slope_stderr},
          {"rms_residual", fit.rms_residual},
          {"r_squared", fit.r_squared},
          {"points", fit.n},
          {"residuals", fit.residuals}};
}

namespace {

nlohmann::ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

ScenarioResult dispatch(const Config& config, OutputDir& out, int threads, const std::string& verb) {
  if (!verb.empty()) {
    if (verb == "make") return run_profiles_make(config, out, threads);
    if (verb == "extinction") return run_extinction(config, out, threads);
    if (verb == "kernel") return run_profiles_kernel(config, out, threads);
    if (verb == "extract") return run_profiles_extract(config, out, threads);
    throw ConfigError("profiles", "unknown verb '" + verb + "' (make, extinction, kernel, extract)");
  }
  switch (config.scenario()) {
    case Scenario::evolve: return run_evolve(config, out, threads);
    case Scenario::trapping: return run_trapping(config, out, threads);
    case Scenario::strichartz: return run_strichartz(config, out, threads);
    case Scenario::bilinear: return run_bilinear(config, out, threads);
    case Scenario::extinction: return run_extinction(config, out, threads);
    case Scenario::profile_suite: return run_profile_suite(config, out, threads);
    case Scenario::stability: return run_stability(config, out, threads);
    case Scenario::blowup_probe: return run_blowup_probe(config, out, threads);
    case Scenario::ground_state: return run_ground_state(config, out, threads);
    case Scenario::norms: return run_norms(config, out, threads);
  }
  throw ConfigError("scenario", "unhandled scenario");
}

}  // namespace

RunSummary run_scenario(const Config& config, const std::string& out_dir, int threads, const std::string& verb) {
  OutputDir out(out_dir);
  const auto start = std::chrono::steady_clock::now();
  ScenarioResult res = dispatch(config, out, threads, verb);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string name = verb.empty() ? to_string(config.scenario()) : "profiles " + verb;
  const TorusGeometry g = config.geometry();
  nlohmann::ordered_json report;
  report["tool"] = "torus-nls";
  report["version"] = kVersion;
  report["fftw"] = std::string(fftw_version);
  report["scenario"] = name;
  report["seed"] = config.has_seed() ? nlohmann::ordered_json(config.seed()) : nlohmann::ordered_json(nullptr);
  report["grid"] = {{"lambda", g.lambda()}, {"grid", g.grid()}};
  report["config"] = config.echo();
  report["results"] = res.results;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const Check& c : res.checks) {
    checks.push_back({{"name", c.name},
                      {"value", json_number(c.value)},
                      {"relation", c.relation},
                      {"bound", json_number(c.bound)},
                      {"passed", c.passed}});
  }
  report["checks"] = checks;
  report["passed"] = res.passed();
  out.json("report.json", report, "report");

  // Wall-clock differs between runs, so it lives outside the reproducible files.
  out.add("timing.json", "timing (not reproducible)");
  write_json(out.path("timing.json"), nlohmann::ordered_json{{"scenario", name}, {"seconds", seconds},
                                                              {"threads", threads}});
  out.write_manifest({{"tool", "torus-nls"}, {"version", kVersion}, {"scenario", name}, {"passed", res.passed()}});
  return {report, res.passed(), seconds};
}

}  // namespace tnls::lab
