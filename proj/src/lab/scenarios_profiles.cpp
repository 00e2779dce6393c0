#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tnls/errors.hpp"
#include "tnls/evolution.hpp"
#include "tnls/field_io.hpp"
#include "tnls/invariants.hpp"
#include "tnls/lab/initial_data.hpp"
#include "tnls/lab/scenarios.hpp"
#include "tnls/lab/sweep.hpp"
#include "tnls/profiles.hpp"

namespace tnls::lab {

namespace {

nlohmann::ordered_json vec_json(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

std::string numbered(const char* stem, std::size_t j) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%02zu.tnls", stem, j);
  return buf;
}

}  // namespace

ScenarioResult run_extinction(const Config& config, OutputDir& out, int threads) {
  const TorusGeometry g = config.geometry();
  const EuclideanProfile phi = profile_by_name(config.text("extinction", "profile"), 1.0, config.real("data", "width"));
  const auto Ns = config.reals("extinction", "N");
  const auto Ts = config.reals("extinction", "T");
  const auto grids = config.integers("extinction", "grids");
  ExtinctionOptions opt;
  opt.samples_per_period = static_cast<int>(config.integer("extinction", "samples"));
  opt.window_samples = opt.samples_per_period;

  const auto curves = parallel_cells<std::vector<ExtinctionPoint>>(Ns.size(), threads, [&](std::size_t i) {
    TorusGeometry gi = g;
    if (!grids.empty()) {
      const int G = static_cast<int>(grids[i]);
      gi = g.with_grid({G, G, G, G});
    }
    return tnls::run_extinction(phi, Ns[i], Ts, gi, opt);
  });

  CsvTable table{{"N", "T", "z_value"}, {}};
  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  ScenarioResult res;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    for (const auto& p : curves[i]) {
      table.rows.push_back({p.N, p.T, p.z_value});
      nlohmann::ordered_json per = nlohmann::ordered_json::object();
      for (const auto& [K, v] : p.shell_contributions) per[std::to_string(K)] = v;
      points.push_back({{"N", p.N},
                        {"T", p.T},
                        {"grid", grids.empty() ? g.grid()[0] : grids[i]},
                        {"window", {p.window.t_start, p.window.t_end}},
                        {"z_value", p.z_value},
                        {"shell_contributions", per}});
    }
    // Strictly decreasing in T (after sorting by T).
    std::vector<std::pair<double, double>> tz;
    for (const auto& p : curves[i]) tz.emplace_back(p.T, p.z_value);
    std::sort(tz.begin(), tz.end());
    for (std::size_t k = 1; k < tz.size(); ++k) {
      res.checks.push_back(check_less("N" + format_double(Ns[i]) + "_z(T=" + format_double(tz[k].first) +
                                          ")_below_z(T=" + format_double(tz[k - 1].first) + ")",
                                      tz[k].second, tz[k - 1].second));
    }
  }
  // N-stability at equal T.
  const double factor = config.real("extinction", "stability_factor");
  for (std::size_t k = 0; k < Ts.size() && Ns.size() >= 2; ++k) {
    double lo = HUGE_VAL, hi = 0.0;
    for (std::size_t i = 0; i < Ns.size(); ++i) {
      lo = std::min(lo, curves[i][k].z_value);
      hi = std::max(hi, curves[i][k].z_value);
    }
    if (hi == 0.0) continue;
    // Only windows that are non-empty for every N are comparable.
    bool all_open = true;
    for (std::size_t i = 0; i < Ns.size(); ++i) all_open = all_open && curves[i][k].window.length() > 0.0;
    if (!all_open) continue;
    res.checks.push_back(check_less("N_spread_at_T=" + format_double(Ts[k]), hi / lo, factor + 1e-12));
  }
  out.csv("extinction.csv", table, "extinction curve N,T,z_value");
  res.results["points"] = points;
  res.results["recurrence_period"] = recurrence_period(g) ? nlohmann::ordered_json(*recurrence_period(g))
                                                          : nlohmann::ordered_json(nullptr);
  return res;
}

ScenarioResult run_profile_suite(const Config& config, OutputDir& out, int) {
  const TorusGeometry g = config.geometry();
  const EuclideanProfile phi = profile_by_name(config.text("profile_suite", "profile"), 1.0, config.real("data", "width"));
  auto frame = [&](const std::string& s) {
    return Frame::geometric(config.real("profile_suite", s + "_N0"), config.real("profile_suite", s + "_ratio"),
                            config.real("profile_suite", s + "_t_scale"), config.real("profile_suite", s + "_t_power"));
  };
  const Frame a = frame("a"), b = frame("b");
  const int prefix = static_cast<int>(config.integer("profile_suite", "prefix"));
  const FrameComparison cmp = frames_orthogonal(a, b, prefix, config.real("profile_suite", "threshold"), g);
  const bool want_orth = config.text("profile_suite", "expect") == "orthogonal";
  if (want_orth != cmp.orthogonal) {
    std::string trace;
    for (double v : cmp.trace) trace += (trace.empty() ? "" : ", ") + format_double(v);
    throw ConfigError("expect", std::string("frames are ") + (cmp.orthogonal ? "orthogonal" : "equivalent") +
                                    " but " + config.text("profile_suite", "expect") +
                                    " was requested; divergence trace: [" + trace + "]");
  }
  const int mu = static_cast<int>(config.integer("evolution", "mu"));
  const ChartMap chart = ChartMap::for_geometry(g);
  auto build = [&](const FrameElement& e) {
    return translate_modulate(forward_transform(make_profile_on_torus(phi, e.N, g, chart)), e.t, e.x);
  };

  const int pairs = static_cast<int>(config.integer("profile_suite", "pairs"));
  CsvTable table{{"k", "N_a", "N_b", "h1_inner_ratio", "l4_mass_ratio", "energy_decoupling"}, {}};
  std::vector<double> h1_ratios;
  SpectralField last_f, last_g;
  for (int k = 1; k <= pairs; ++k) {
    const FrameElement ea = a.at(k), eb = b.at(k);
    const SpectralField f = build(ea), h = build(eb);
    const double h1r = std::abs(profile_inner_h1(f, h)) / (h1_norm(f) * h1_norm(h));
    const PhysicalField pf = inverse_transform(f), ph = inverse_transform(h);
    double cross = 0.0;
    for (std::size_t i = 0; i < pf.size(); ++i) cross += std::norm(pf[i]) * std::norm(ph[i]);
    cross *= g.cell_volume();
    const double l4r = cross / std::sqrt(l4_fourth(pf) * l4_fourth(ph));
    const double ef = energy(pf, mu), eh = energy(ph, mu), es = energy(pf + ph, mu);
    const double dec = std::abs(es - ef - eh) / (std::abs(ef) + std::abs(eh));
    table.rows.push_back({double(k), ea.N, eb.N, h1r, l4r, dec});
    h1_ratios.push_back(h1r);
    last_f = f;
    last_g = h;
  }
  out.csv("profile_suite.csv", table, "linear decoupling along the frames");

  ScenarioResult res;
  res.results["orthogonal"] = cmp.orthogonal;
  res.results["divergence_trace"] = cmp.trace;
  res.results["h1_inner_ratios"] = h1_ratios;
  if (want_orth) {
    bool decreasing = true;
    for (std::size_t k = 1; k < h1_ratios.size(); ++k) decreasing = decreasing && h1_ratios[k] < h1_ratios[k - 1];
    res.checks.push_back(check_true("h1_inner_strictly_decreasing", decreasing));

    // Short nonlinear runs of the last pair.
    EvolutionParams p = config.evolution();
    p.t_end = config.real("profile_suite", "nonlinear_t");
    p.dt = std::min(p.dt, p.t_end);
    p.snapshot_stride = 1;
    const SobolevConstants c = compute_sobolev_constants();
    const TrajectoryRecord ua = evolve(last_f, p, c), ub = evolve(last_g, p, c);
    double worst = 0.0;
    for (std::size_t j = 0; j < std::min(ua.snapshots.size(), ub.snapshots.size()); ++j) {
      const cplx hd = profile_inner_h1(ua.snapshots[j], ub.snapshots[j]) - l2_inner(ua.snapshots[j], ub.snapshots[j]);
      worst = std::max(worst, std::abs(hd) / (hdot1_norm(ua.snapshots[j]) * hdot1_norm(ub.snapshots[j])));
    }
    res.results["nonlinear_cross_hdot1_ratio"] = worst;
    res.checks.push_back(check_less("nonlinear_cross_hdot1_ratio", worst, config.real("profile_suite", "nonlinear_tolerance")));
  } else {
    const double lo = *std::min_element(h1_ratios.begin(), h1_ratios.end());
    res.results["min_h1_inner_ratio"] = lo;
    res.checks.push_back(check_greater("h1_inner_bounded_below", lo, 0.05));
  }
  return res;
}

ScenarioResult run_profiles_make(const Config& config, OutputDir& out, int) {
  const TorusGeometry g = config.geometry();
  const PhysicalField f = make_initial_data(config, g);
  out.add("field.tnls", "profile field");
  write_snapshot(out.path("field.tnls"), f);
  const SpectralField s = forward_transform(f);
  ScenarioResult res;
  res.results["field"] = {{"l1", lp_norm(f, 1.0)}, {"l2", l2_norm(s)}, {"hdot1", hdot1_norm(s)},
                          {"h1", h1_norm(s)}, {"l4", l4_norm(f)}, {"linf", linf_norm(f)}};
  const std::string& kind = config.text("data", "kind");
  if (kind == "torus_bubble") {
    const EuclideanProfile phi = profile_by_name(config.text("data", "profile"), config.real("data", "amplitude"),
                                                 config.real("data", "width"));
    const double N = config.real("data", "N"), scaling = config.real("data", "scaling");
    res.results["profile"] = {{"name", phi.name()}, {"hdot1", phi.hdot1()}, {"l1", phi.l1()},
                              {"l2", phi.l2()}, {"l4", phi.l4()}};
    const double transfer = h1_norm(s) / (std::abs(scaling) * phi.hdot1());
    res.results["transfer_ratio"] = transfer;
    res.checks.push_back(check_less("transfer_ratio", transfer, 3.0));
    if (std::isfinite(phi.l1())) {
      const double bound = std::abs(scaling) * phi.l1() / (N * N * N);
      res.results["l1_bound"] = bound;
      res.checks.push_back({"l1_collapse", lp_norm(f, 1.0), bound, "<=", lp_norm(f, 1.0) <= bound});
    }
  }
  return res;
}

ScenarioResult run_profiles_kernel(const Config& config, OutputDir& out, int) {
  const auto Ms = config.integers("kernel", "M");
  auto Ss = config.reals("kernel", "S");
  const int ts = static_cast<int>(config.integer("kernel", "time_samples"));
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  std::vector<double> constants;
  ScenarioResult res;
  for (std::size_t i = 0; i < Ms.size(); ++i) {
    const int M = static_cast<int>(Ms[i]);
    const double S = Ss.empty() ? static_cast<double>(M) : Ss[i];
    const KernelReport r = kernel_sup_bound_check(M, S, ts);
    const double counted = kernel_origin_by_counts(M);
    constants.push_back(r.constant);
    reports.push_back({{"M", M},
                       {"S", S},
                       {"origin_value", r.origin_value},
                       {"origin_by_counts", counted},
                       {"sup", r.sup},
                       {"refined_sup", r.refined_sup},
                       {"refinement_change", std::abs(r.refined_sup - r.sup) / r.sup},
                       {"constant", r.constant},
                       {"bound_scale", std::pow(double(M), 4) / (S * S)},
                       {"argmax_x", vec_json(r.argmax_x)},
                       {"argmax_t", r.argmax_t},
                       {"space_grid", r.space_grid},
                       {"time_samples", r.time_samples}});
    res.checks.push_back(check_less("M" + std::to_string(M) + "_origin_vs_counts",
                                    std::abs(r.origin_value - counted) / counted, 1e-12));
    res.checks.push_back({"M" + std::to_string(M) + "_sup_below_origin", r.sup, r.origin_value, "<=",
                          std::max(r.sup, r.refined_sup) <= r.origin_value * (1.0 + 1e-12)});
  }
  out.json("kernel.json", reports, "kernel reports");
  res.results["reports"] = reports;
  if (constants.size() >= 2) {
    const double spread = *std::max_element(constants.begin(), constants.end()) /
                          *std::min_element(constants.begin(), constants.end());
    res.results["constant_spread"] = spread;
    res.checks.push_back(check_less("constant_spread", spread, config.real("kernel", "agreement_factor") + 1e-12));
  }
  return res;
}

ScenarioResult run_profiles_extract(const Config& config, OutputDir& out, int) {
  const std::string& input = config.text("extract", "input");
  const PhysicalField f = input.empty() ? make_initial_data(config, config.geometry()) : read_snapshot(input);
  ExtractionOptions opt;
  opt.max_profiles = static_cast<int>(config.integer("extract", "max_profiles"));
  opt.z_tolerance = config.real("extract", "z_tolerance");
  opt.candidate_times = config.reals("extract", "candidate_times");
  opt.z_window = {0.0, config.real("extract", "z_window")};
  opt.z_samples = static_cast<int>(config.integer("extract", "z_samples"));
  const ExtractionResult r = extract_bubbles(f, opt);

  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (std::size_t j = 0; j < r.profiles.size(); ++j) {
    const auto& p = r.profiles[j];
    const std::string name = numbered("profile", j);
    out.add(name, "extracted profile");
    write_snapshot(out.path(name), inverse_transform(p.field));
    list.push_back({{"file", name},
                    {"N", p.N_estimate},
                    {"shell", p.shell},
                    {"t_star", p.t_star},
                    {"x_star", vec_json(p.x_star)},
                    {"window_radius", p.window_radius},
                    {"hdot1", hdot1_norm(p.field)}});
  }
  out.add("remainder.tnls", "remainder");
  write_snapshot(out.path("remainder.tnls"), inverse_transform(r.remainder));
  nlohmann::ordered_json doc{{"profiles", list},
                             {"remainder_z", r.remainder_z},
                             {"complete", r.complete},
                             {"residuals", {{"l2", r.residuals.l2}, {"hdot1", r.residuals.hdot1}, {"l4", r.residuals.l4}}}};
  out.json("extraction.json", doc, "extracted profiles");
  ScenarioResult res;
  res.results = doc;
  res.checks.push_back(check_true("complete", r.complete));
  res.checks.push_back(check_less("remainder_z", r.remainder_z, opt.z_tolerance));
  return res;
}

}  // namespace tnls::lab
