#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "tnls/critical_norms.hpp"
#include "tnls/errors.hpp"
#include "tnls/evolution.hpp"
#include "tnls/field_io.hpp"
#include "tnls/invariants.hpp"
#include "tnls/lab/initial_data.hpp"
#include "tnls/lab/scenarios.hpp"

namespace tnls::lab {

namespace {

const SobolevConstants& base_constants() {
  static const SobolevConstants c = compute_sobolev_constants();
  return c;
}

SobolevConstants constants_for(const Config& config, const TorusGeometry& geometry) {
  const SobolevConstants& c = base_constants();
  return with_c_star(c, default_c_star(geometry, c, config.real("trapping", "c_star_safety")));
}

std::string snapshot_name(std::size_t j) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "snapshots/snap_%05zu.tnls", j);
  return buf;
}

void write_trajectory(OutputDir& out, const TrajectoryRecord& traj) {
  nlohmann::ordered_json doc;
  doc["mu"] = traj.mu;
  doc["c_star"] = traj.c_star;
  doc["lambda"] = traj.geometry.lambda();
  doc["grid"] = traj.geometry.grid();
  doc["halt_reason"] = to_string(traj.halt_reason);
  doc["times"] = traj.times;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (std::size_t j = 0; j < traj.snapshots.size(); ++j) {
    const std::string name = snapshot_name(j);
    out.add(name, "snapshot");
    write_snapshot(out.path(name), inverse_transform(traj.snapshots[j]));
    files.push_back(name);
  }
  doc["snapshots"] = files;
  out.json("trajectory.json", doc, "trajectory index");
}

TrajectoryRecord load_trajectory(const std::string& dir, const SobolevConstants& constants) {
  namespace fs = std::filesystem;
  const auto doc = read_json((fs::path(dir) / "trajectory.json").string());
  TrajectoryRecord traj;
  traj.mu = doc.at("mu").get<int>();
  traj.c_star = doc.at("c_star").get<double>();
  traj.times = doc.at("times").get<std::vector<double>>();
  const auto files = doc.at("snapshots").get<std::vector<std::string>>();
  if (files.size() != traj.times.size()) {
    throw IoError(dir, "trajectory.json lists " + std::to_string(files.size()) + " snapshots for " +
                           std::to_string(traj.times.size()) + " times");
  }
  const SobolevConstants c = with_c_star(constants, traj.c_star);
  for (std::size_t j = 0; j < files.size(); ++j) {
    const PhysicalField f = read_snapshot((fs::path(dir) / files[j]).string());
    if (j == 0) traj.geometry = f.geometry();
    traj.snapshots.push_back(forward_transform(f));
    traj.diagnostics.push_back(diagnose(traj.snapshots.back(), traj.times[j], traj.mu, c));
  }
  if (traj.snapshots.empty()) throw IoError(dir, "trajectory has no snapshots");
  return traj;
}

double relative_drift(const TrajectoryRecord& traj, double Diagnostics::*field) {
  const double x0 = traj.diagnostics.front().*field;
  double worst = 0.0;
  for (const auto& d : traj.diagnostics) worst = std::max(worst, std::abs(d.*field - x0));
  return x0 != 0.0 ? worst / std::abs(x0) : worst;
}

bool diagnostics_finite(const TrajectoryRecord& traj) {
  for (const auto& d : traj.diagnostics) {
    for (double v : {d.mass, d.energy, d.e_star, d.e_star_star, d.hdot1, d.h1_star}) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

nlohmann::ordered_json trapping_json(const TrappingReport& r) {
  nlohmann::ordered_json j;
  j["variant"] = to_string(r.variant);
  j["delta0"] = r.delta0;
  j["delta_bar"] = r.delta_bar ? nlohmann::ordered_json(*r.delta_bar) : nlohmann::ordered_json(nullptr);
  j["preconditions_ok"] = r.preconditions_ok;
  j["precondition_failure"] = r.precondition_failure;
  j["initial_norm_ratio"] = r.initial_norm_ratio;
  j["initial_energy_ratio"] = r.initial_energy_ratio;
  j["samples"] = r.samples.size();
  j["first_failure_time"] =
      r.first_failure_time ? nlohmann::ordered_json(*r.first_failure_time) : nlohmann::ordered_json(nullptr);
  j["passed"] = r.passed();
  return j;
}

void require_focusing(const Config& config, const char* scenario) {
  if (config.integer("evolution", "mu") != -1) {
    throw ConfigError("mu", std::string(scenario) + " requires the focusing equation, mu = -1");
  }
}

}  // namespace

ScenarioResult run_evolve(const Config& config, OutputDir& out, int) {
  const TorusGeometry g = config.geometry();
  const EvolutionParams params = config.evolution();
  const SobolevConstants constants = constants_for(config, g);
  const PhysicalField u0 = make_initial_data(config, g);
  const TrajectoryRecord traj = evolve(u0, params, constants);

  ScenarioResult res;
  out.csv("diagnostics.csv", diagnostics_table(traj), "diagnostics");
  if (config.flag("evolution", "write_snapshots")) write_trajectory(out, traj);

  res.results["halt_reason"] = to_string(traj.halt_reason);
  res.results["samples"] = traj.times.size();
  res.results["final_time"] = traj.times.back();
  res.results["c_star"] = constants.c_star;
  const double drift_tol = config.real("evolve", "drift_tolerance");
  nlohmann::ordered_json drift;
  const std::pair<const char*, double Diagnostics::*> quantities[] = {
      {"mass", &Diagnostics::mass},
      {"energy", &Diagnostics::energy},
      {"e_star", &Diagnostics::e_star},
      {"e_star_star", &Diagnostics::e_star_star}};
  for (const auto& [name, member] : quantities) {
    const double d = relative_drift(traj, member);
    drift[name] = d;
    res.checks.push_back(check_less(std::string("drift_") + name, d, drift_tol));
  }
  res.results["relative_drift"] = drift;
  res.checks.push_back(check_true("completed", traj.halt_reason == HaltReason::completed));

  if (config.flag("evolve", "exact_check")) {
    if (config.text("data", "kind") != "single_mode") {
      throw ConfigError("exact_check", "the closed form is only available for single_mode data");
    }
    const auto n = config.integers("data", "mode");
    const Mode m{{int(n[0]), int(n[1]), int(n[2]), int(n[3])}};
    const Vec4 w = frequency(g, m);
    const double A = config.real("data", "amplitude");
    const double rate = dispersion(g, m) + params.mu * A * A;
    double worst = 0.0;
    for (std::size_t j = 0; j < traj.snapshots.size(); ++j) {
      const PhysicalField u = inverse_transform(traj.snapshots[j]);
      for (std::size_t i = 0; i < u.size(); ++i) {
        const Vec4 x = u.point(i);
        const double phase = w[0] * x[0] + w[1] * x[1] + w[2] * x[2] + w[3] * x[3] - rate * traj.times[j];
        worst = std::max(worst, std::abs(u[i] - A * std::polar(1.0, phase)));
      }
    }
    res.results["max_exact_deviation"] = worst;
    res.checks.push_back(check_less("exact_deviation", worst, config.real("evolve", "exact_tolerance")));
  }
  return res;
}

ScenarioResult run_trapping(const Config& config, OutputDir& out, int) {
  require_focusing(config, "trapping");
  const TorusGeometry g = config.geometry();
  const EvolutionParams params = config.evolution();
  const SobolevConstants constants = constants_for(config, g);
  const PhysicalField u0 = make_initial_data(config, g);
  const TrajectoryRecord traj = evolve(u0, params, constants);
  out.csv("diagnostics.csv", diagnostics_table(traj), "diagnostics");

  ScenarioResult res;
  res.results["halt_reason"] = to_string(traj.halt_reason);
  res.results["final_time"] = traj.times.back();
  res.results["c_star"] = constants.c_star;
  res.results["E_W"] = constants.E_W;
  res.results["W_hdot1"] = std::sqrt(constants.W_hdot1_sq);
  CsvTable table{{"variant", "t", "y", "energy", "coercivity", "below_threshold", "coercive", "energy_bound"}, {}};
  const double delta0 = config.real("trapping", "delta0");
  nlohmann::ordered_json variants = nlohmann::ordered_json::array();
  for (TrappingVariant v : {TrappingVariant::star, TrappingVariant::star_star}) {
    const TrappingReport r = trapping_along_flow(traj, constants, v, delta0);
    variants.push_back(trapping_json(r));
    for (const auto& s : r.samples) {
      table.rows.push_back({v == TrappingVariant::star ? 0.0 : 1.0, s.t, s.y, s.energy, s.coercivity,
                            s.below_threshold ? 1.0 : 0.0, s.coercive ? 1.0 : 0.0, s.energy_bound ? 1.0 : 0.0});
    }
    const std::string name = to_string(v);
    res.checks.push_back(check_true(name + "_preconditions", r.preconditions_ok));
    res.checks.push_back(check_greater(name + "_delta_bar", r.delta_bar.value_or(0.0), 0.0));
    res.checks.push_back(check_true(name + "_all_samples", r.preconditions_ok && !r.first_failure_time));
  }
  res.results["variants"] = variants;
  res.checks.push_back(check_true("completed", traj.halt_reason == HaltReason::completed));
  out.csv("trapping.csv", table, "trapping samples (variant 0 = star, 1 = star_star)");
  return res;
}

ScenarioResult run_blowup_probe(const Config& config, OutputDir& out, int) {
  require_focusing(config, "blowup_probe");
  const TorusGeometry g = config.geometry();
  const EvolutionParams params = config.evolution();
  const SobolevConstants constants = constants_for(config, g);
  const PhysicalField u0 = make_initial_data(config, g);
  const TrajectoryRecord traj = evolve(u0, params, constants);
  out.csv("diagnostics.csv", diagnostics_table(traj), "diagnostics");

  // Longest run of strictly increasing Hdot1 samples.
  std::size_t best = 1, run = 1, best_end = 0;
  for (std::size_t j = 1; j < traj.diagnostics.size(); ++j) {
    run = traj.diagnostics[j].hdot1 > traj.diagnostics[j - 1].hdot1 ? run + 1 : 1;
    if (run > best) {
      best = run;
      best_end = j;
    }
  }
  double peak = 0.0;
  for (const auto& d : traj.diagnostics) peak = std::max(peak, d.hdot1);
  const double h0 = traj.diagnostics.front().hdot1;

  ScenarioResult res;
  res.results["halt_reason"] = to_string(traj.halt_reason);
  res.results["final_time"] = traj.times.back();
  res.results["initial_hdot1"] = h0;
  res.results["peak_hdot1"] = peak;
  res.results["growth_ratio"] = h0 > 0.0 ? peak / h0 : 0.0;
  res.results["initial_hdot1_over_W"] = h0 / std::sqrt(constants.W_hdot1_sq);
  res.results["longest_growth_run"] = best;
  res.results["growth_run_end_time"] = traj.times[best_end];
  res.results["growth_phase"] = best >= static_cast<std::size_t>(config.integer("blowup_probe", "growth_samples"));
  // Exploratory: only a clean halt is asserted.
  res.checks.push_back(check_true("clean_halt", traj.halt_reason != HaltReason::non_finite && diagnostics_finite(traj)));
  return res;
}

ScenarioResult run_stability(const Config& config, OutputDir& out, int) {
  const TorusGeometry g = config.geometry();
  const EvolutionParams params = config.evolution();
  const SobolevConstants constants = constants_for(config, g);
  const double eps = config.real("stability", "epsilon");
  const SpectralField u0 = forward_transform(make_initial_data(config, g));
  int band = *std::min_element(g.grid().begin(), g.grid().end()) / 3;
  if (config.integer("data", "band") > 0) band = static_cast<int>(config.integer("data", "band"));
  // Perturbation direction from the seed stream, offset so it differs from random_h1 data.
  const SpectralField v = random_h1_data(g, band, 1.0, config.seed() ^ 0x9e3779b97f4a7c15ULL);
  const SpectralField u1 = u0 + cplx(eps) * v;

  const TrajectoryRecord a = evolve(u0, params, constants);
  const TrajectoryRecord b = evolve(u1, params, constants);
  double dist = 0.0;
  bool identical = a.snapshots.size() == b.snapshots.size();
  CsvTable table{{"t", "h1_distance"}, {}};
  for (std::size_t j = 0; j < std::min(a.snapshots.size(), b.snapshots.size()); ++j) {
    const double d = h1_norm(a.snapshots[j] - b.snapshots[j]);
    identical = identical && a.snapshots[j].coefficients() == b.snapshots[j].coefficients();
    dist = std::max(dist, d);
    table.rows.push_back({a.times[j], d});
  }
  out.csv("distance.csv", table, "H1 distance between the two runs");

  EvolutionParams coarse = params;
  const int factor = static_cast<int>(config.integer("stability", "coarse_factor"));
  coarse.dt = params.dt * factor;
  coarse.snapshot_stride = std::max(1, params.snapshot_stride / factor);
  const TrajectoryRecord c = evolve(u0, coarse, constants);
  const double residual = duhamel_residual(c, params.dealias);
  double coarse_dist = 0.0;
  std::size_t matched = 0;
  for (std::size_t j = 0; j < c.times.size(); ++j) {
    for (std::size_t k = 0; k < a.times.size(); ++k) {
      if (std::abs(a.times[k] - c.times[j]) <= 1e-9 * std::max(1.0, a.times[k])) {
        coarse_dist = std::max(coarse_dist, h1_norm(a.snapshots[k] - c.snapshots[j]));
        ++matched;
        break;
      }
    }
  }

  ScenarioResult res;
  res.results["epsilon"] = eps;
  res.results["sup_h1_distance"] = dist;
  res.results["distance_over_epsilon"] = eps > 0.0 ? dist / eps : 0.0;
  res.results["coarse_dt"] = coarse.dt;
  res.results["coarse_duhamel_residual"] = residual;
  res.results["coarse_sup_h1_distance"] = coarse_dist;
  res.results["coarse_matched_samples"] = matched;
  const double C = residual > 0.0 ? coarse_dist / residual : (coarse_dist > 0.0 ? HUGE_VAL : 0.0);
  res.results["coarse_constant"] = C;
  if (eps > 0.0) {
    res.checks.push_back(check_less("distance_over_epsilon", dist / eps, config.real("stability", "distance_factor")));
  } else {
    res.checks.push_back(check_true("identical_trajectories", identical));
  }
  res.checks.push_back(check_greater("coarse_matched_samples", static_cast<double>(matched), 0.0));
  res.checks.push_back(check_less("coarse_constant", C, config.real("stability", "c_max")));
  return res;
}

ScenarioResult run_ground_state(const Config& config, OutputDir& out, int) {
  const double tol = config.real("ground_state", "tolerance");
  const double rel = config.real("ground_state", "relation_tolerance");
  const SobolevConstants c = compute_sobolev_constants(tol);
  std::vector<double> radii;
  for (int i = 1; i <= 4000; ++i) radii.push_back(0.0125 * i);
  for (int i = 1; i <= 400; ++i) radii.push_back(50.0 * std::pow(1e4, i / 400.0));
  const GroundStateResidual gr = verify_ground_state_equation(radii);
  const double oracle = 32.0 * kPi * kPi / 3.0;
  const double hdot_err = std::abs(c.W_hdot1_sq / oracle - 1.0);
  const double relation = std::abs(4.0 * c.E_W * c.C4_fourth() - 1.0);

  nlohmann::ordered_json doc;
  doc["W_hdot1_sq"] = c.W_hdot1_sq;
  doc["C4"] = c.C4;
  doc["E_W"] = c.E_W;
  doc["relations_ok"] = c.relations_hold(rel);
  doc["tolerance"] = c.tolerance;
  out.json("ground_state.json", doc, "ground-state constants");

  ScenarioResult res;
  res.results = doc;
  res.results["W_l4_fourth"] = c.W_l4_fourth;
  res.results["C4_fourth"] = c.C4_fourth();
  res.results["inverse_C4_sq"] = 1.0 / (c.C4 * c.C4);
  res.results["quadrature_error"] = c.quadrature_error;
  res.results["closed_form_hdot1_sq"] = oracle;
  res.results["elliptic_residual"] = gr.max_abs_residual;
  res.results["elliptic_residual_radius"] = gr.at_radius;
  res.checks.push_back(check_less("hdot1_sq_vs_closed_form", hdot_err, rel));
  res.checks.push_back(check_less("four_E_W_C4_fourth_minus_1", relation, rel));
  res.checks.push_back(check_true("relations_ok", c.relations_hold(rel)));
  res.checks.push_back(check_less("elliptic_residual", gr.max_abs_residual, config.real("ground_state", "residual_tolerance")));
  return res;
}

ScenarioResult run_norms(const Config& config, OutputDir& out, int) {
  const TorusGeometry g = config.geometry();
  const SobolevConstants constants = constants_for(config, g);
  TrajectoryRecord traj;
  const std::string& dir = config.text("norms", "trajectory");
  if (!dir.empty()) {
    traj = load_trajectory(dir, constants);
  } else {
    traj = evolve(make_initial_data(config, g), config.evolution(), constants);
  }
  const ShellTable table = shell_table(traj);
  const double len = config.real("norms", "window");
  const double t0 = traj.times.front(), t1 = traj.times.back();
  CsvTable csv{{"window_start", "window_end", "z", "z_prime", "x1_proxy", "y1_proxy"}, {}};
  nlohmann::ordered_json shells = nlohmann::ordered_json::array();
  for (double a = t0; a < t1 || (a == t0 && t1 == t0);) {
    const double b = std::min(t1, a + len);
    const TimeWindow w{a, b};
    const NormReport z = z_norm(table, w);
    TrajectoryRecord sub;
    sub.geometry = traj.geometry;
    sub.mu = traj.mu;
    sub.c_star = traj.c_star;
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
      if (traj.times[j] >= a - 1e-12 && traj.times[j] <= b + 1e-12) {
        sub.times.push_back(traj.times[j]);
        sub.snapshots.push_back(traj.snapshots[j]);
      }
    }
    double y1 = std::numeric_limits<double>::quiet_NaN(), x1 = y1;
    if (sub.snapshots.size() >= 8) {
      y1 = y1_proxy(sub);
      x1 = x1_proxy(sub);
    }
    csv.rows.push_back({a, b, z.value, z_prime(z.value, x1), x1, y1});
    nlohmann::ordered_json entry{{"window_start", a}, {"window_end", b}, {"z", z.value}};
    nlohmann::ordered_json per = nlohmann::ordered_json::object();
    for (const auto& [N, v] : z.shell_contributions) per[std::to_string(N)] = v;
    entry["shell_contributions"] = per;
    shells.push_back(entry);
    if (b >= t1) break;
    a = b;
  }
  out.csv("norms.csv", csv, "critical norms per window");
  out.json("shells.json", shells, "per-shell Z contributions");
  ScenarioResult res;
  res.results["windows"] = csv.rows.size();
  res.results["samples"] = traj.times.size();
  res.results["proxies_available"] = traj.times.size() >= 8;
  bool finite = true;
  for (const auto& row : csv.rows) finite = finite && std::isfinite(row[2]);
  res.checks.push_back(check_true("z_finite", finite));
  return res;
}

}  // namespace tnls::lab
