#include "tnls/lab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tnls/errors.hpp"

namespace tnls::lab {

namespace {

using K = ValueKind;

std::vector<KeySpec> build_schema() {
  return {
      {"", "scenario", K::text, "evolve", "scenario name; the CLI positional argument overrides it"},
      {"", "seed", K::integer, std::nullopt, "u64 seed, required whenever random data is requested"},
      {"", "description", K::text, "", "free text echoed into reports"},

      {"geometry", "lambda", K::reals, "1", "side lengths, one value or four"},
      {"geometry", "grid", K::integers, "16", "samples per axis, even and >= 8, one value or four"},

      {"evolution", "mu", K::integer, "1", "+1 defocusing, -1 focusing, 0 linear"},
      {"evolution", "dt", K::real, "1e-3", "time step"},
      {"evolution", "t_end", K::real, "0.1", "final time"},
      {"evolution", "snapshot_stride", K::integer, "10", "steps between recorded samples"},
      {"evolution", "dealias", K::text, "pad3_2", "pad3_2 or none"},
      {"evolution", "blowup_threshold", K::real, std::nullopt, "Hdot1 level that halts the run (default 10 x H1(u0))"},
      {"evolution", "write_snapshots", K::flag, "false", "write binary snapshots of every sample"},

      {"data", "kind", K::text, "single_mode", "constant, single_mode, random_h1, torus_bubble, sum_of_bubbles"},
      {"data", "amplitude", K::real, "1", "amplitude for constant, single_mode and bubble data"},
      {"data", "mode", K::integers, "[1, 0, 0, 0]", "integer frequency for single_mode"},
      {"data", "band", K::integer, "0", "random_h1: |n_i| <= band; 0 means grid / 3"},
      {"data", "norm", K::real, "1", "random_h1: H1 norm of the sample"},
      {"data", "profile", K::text, "ground_state", "bubble profile: ground_state or gaussian"},
      {"data", "width", K::real, "1", "gaussian profile width"},
      {"data", "N", K::real, "16", "torus_bubble concentration scale"},
      {"data", "center", K::reals, "0", "torus_bubble center"},
      {"data", "scaling", K::real, "1", "multiplies the bubble data (0.9 sub-threshold, 1.2 super-threshold)"},
      {"data", "scaling_mode", K::text, "amplitude",
       "amplitude: multiply by scaling; hdot1: rescale so ||f||_Hdot1 = scaling ||W||_Hdot1(R^4)"},
      {"data", "Ns", K::reals, "", "sum_of_bubbles: scales"},
      {"data", "centers", K::reals, "", "sum_of_bubbles: four coordinates per bubble"},
      {"data", "amplitudes", K::reals, "", "sum_of_bubbles: amplitudes (default all 1)"},

      {"evolve", "exact_check", K::flag, "false", "compare single_mode runs with the closed-form plane wave"},
      {"evolve", "exact_tolerance", K::real, "1e-9", "max pointwise deviation allowed by exact_check"},
      {"evolve", "drift_tolerance", K::real, "1e-6", "relative drift allowed for M, E, E_*, E_**"},

      {"trapping", "delta0", K::real, "0.01", "margin delta_0 of the sub-threshold hypotheses"},
      {"trapping", "c_star_safety", K::real, "1.05", "c_* as a multiple of its lower bound"},

      {"blowup_probe", "growth_samples", K::integer, "3", "consecutive increasing Hdot1 samples that count as growth"},

      {"strichartz", "p", K::reals, "4", "exponents, each > 3"},
      {"strichartz", "N", K::integers, "[2, 4, 8, 16]", "dyadic shells"},
      {"strichartz", "seeds", K::integer, "2", "independent samples per shell"},
      {"strichartz", "data", K::text, "coherent", "coherent, random_phase or single_mode"},
      {"strichartz", "samples_factor", K::real, "1", "time samples per half period, in units of N^2"},
      {"strichartz", "slope_tolerance", K::real, "0.15", "allowed distance of the fitted slope from 2 - 6/p"},
      {"strichartz", "refined_slack", K::real, "2", "factor over the constant fitted on the first seed"},

      {"bilinear", "N1", K::integers, "[8, 64, 512]", "high frequencies"},
      {"bilinear", "N2", K::integers, "[2, 4, 8]", "low frequencies, paired with N1"},
      {"bilinear", "modes", K::integer, "48", "random modes per factor"},
      {"bilinear", "seeds", K::integer, "4", "samples per pair"},
      {"bilinear", "residual_tolerance", K::real, "0.2", "allowed relative regression residual"},
      {"bilinear", "confidence", K::real, "0.95", "one-sided confidence for kappa > 0"},

      {"extinction", "profile", K::text, "ground_state", "ground_state or gaussian"},
      {"extinction", "N", K::reals, "[64]", "bubble scales"},
      {"extinction", "T", K::reals, "[4, 16, 64]", "window parameters, each >= 1"},
      {"extinction", "grids", K::integers, "", "grid per N (default geometry.grid)"},
      {"extinction", "samples", K::integer, "96", "time samples per recurrence"},
      {"extinction", "stability_factor", K::real, "2", "allowed ratio between N values at equal T"},

      {"profile_suite", "profile", K::text, "ground_state", "ground_state or gaussian"},
      {"profile_suite", "pairs", K::integer, "5", "frame elements k = 1..pairs to compare"},
      {"profile_suite", "prefix", K::integer, "8", "prefix length for the orthogonality verdict"},
      {"profile_suite", "threshold", K::real, "2", "divergence threshold"},
      {"profile_suite", "expect", K::text, "orthogonal", "orthogonal or equivalent"},
      {"profile_suite", "a_N0", K::real, "4", "frame a: N_k = a_N0 a_ratio^k"},
      {"profile_suite", "a_ratio", K::real, "1.4142135623730951", ""},
      {"profile_suite", "a_t_scale", K::real, "0", "frame a: t_k = a_t_scale k^a_t_power / N_k^2"},
      {"profile_suite", "a_t_power", K::real, "0", ""},
      {"profile_suite", "b_N0", K::real, "4", "frame b, same parametrisation"},
      {"profile_suite", "b_ratio", K::real, "1", ""},
      {"profile_suite", "b_t_scale", K::real, "0", ""},
      {"profile_suite", "b_t_power", K::real, "0", ""},
      {"profile_suite", "nonlinear_t", K::real, "0.01", "nonlinear comparison horizon"},
      {"profile_suite", "nonlinear_tolerance", K::real, "0.1", "cross Hdot1 inner product bound at the last pair"},

      {"stability", "epsilon", K::real, "1e-3", "perturbation size in H1"},
      {"stability", "distance_factor", K::real, "10", "allowed sup distance in units of epsilon"},
      {"stability", "coarse_factor", K::integer, "10", "coarse run uses dt x coarse_factor"},
      {"stability", "c_max", K::real, "10", "allowed distance / (residual + epsilon) for the coarse run"},

      {"ground_state", "tolerance", K::real, "1e-12", "quadrature tolerance"},
      {"ground_state", "relation_tolerance", K::real, "1e-8", "tolerance of the constant relations"},
      {"ground_state", "residual_tolerance", K::real, "1e-10", "tolerance of the elliptic residual"},

      {"norms", "trajectory", K::text, "", "directory written by evolve (default: evolve from this config)"},
      {"norms", "window", K::real, "1", "length of consecutive windows covering the run"},

      {"kernel", "M", K::integers, "[4, 8, 16]", "kernel orders"},
      {"kernel", "S", K::reals, "", "window parameter per M (default S = M)"},
      {"kernel", "time_samples", K::integer, "64", "time samples on [S M^-2, 1/S]"},
      {"kernel", "agreement_factor", K::real, "4", "allowed spread of the constants"},

      {"extract", "input", K::text, "", "snapshot to decompose (default: the [data] field)"},
      {"extract", "max_profiles", K::integer, "4", ""},
      {"extract", "z_tolerance", K::real, "1e-3", ""},
      {"extract", "candidate_times", K::reals, "[0]", ""},
      {"extract", "z_window", K::real, "0.05", "remainder Z-norm window [0, z_window]"},
      {"extract", "z_samples", K::integer, "9", ""},
  };
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> list_items(const std::string& text) {
  std::string s = trim(text);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw std::invalid_argument("unterminated list");
    s = s.substr(1, s.size() - 2);
  }
  for (char& c : s) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string item; in >> item;) out.push_back(item);
  return out;
}

double parse_real(const std::string& s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("'" + s + "' is not a finite number");
  }
  return v;
}

std::int64_t parse_integer(const std::string& s) {
  std::int64_t v = 0;
  const char* begin = s.data() + (s.size() > 1 && s[0] == '+' ? 1 : 0);
  const auto [p, ec] = std::from_chars(begin, s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw std::invalid_argument("'" + s + "' is not an integer");
  return v;
}

Value parse_value(ValueKind kind, const std::string& text) {
  switch (kind) {
    case K::real: return parse_real(trim(text));
    case K::integer: return parse_integer(trim(text));
    case K::text: {
      std::string s = trim(text);
      if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
      return s;
    }
    case K::flag: {
      std::string s = trim(text);
      std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
      if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
      if (s == "false" || s == "no" || s == "off" || s == "0") return false;
      throw std::invalid_argument("'" + s + "' is not a boolean");
    }
    case K::reals: {
      std::vector<double> out;
      for (const auto& item : list_items(text)) out.push_back(parse_real(item));
      return out;
    }
    case K::integers: {
      std::vector<std::int64_t> out;
      for (const auto& item : list_items(text)) out.push_back(parse_integer(item));
      return out;
    }
  }
  return 0.0;
}

const KeySpec* find_spec(const std::string& section, const std::string& key) {
  for (const auto& s : schema()) {
    if (s.section == section && s.key == key) return &s;
  }
  return nullptr;
}

bool known_section(const std::string& section) {
  for (const auto& s : schema()) {
    if (s.section == section) return true;
  }
  return false;
}

const std::vector<std::pair<Scenario, std::string>>& scenario_names() {
  static const std::vector<std::pair<Scenario, std::string>> names{
      {Scenario::evolve, "evolve"},         {Scenario::trapping, "trapping"},
      {Scenario::strichartz, "strichartz"}, {Scenario::bilinear, "bilinear"},
      {Scenario::extinction, "extinction"}, {Scenario::profile_suite, "profile_suite"},
      {Scenario::stability, "stability"},   {Scenario::blowup_probe, "blowup_probe"},
      {Scenario::ground_state, "ground_state"}, {Scenario::norms, "norms"},
  };
  return names;
}

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(key, message);
}

nlohmann::ordered_json to_json(const Value& v) {
  return std::visit([](const auto& x) { return nlohmann::ordered_json(x); }, v);
}

}  // namespace

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> s = build_schema();
  return s;
}

std::string to_string(Scenario s) {
  for (const auto& [v, name] : scenario_names()) {
    if (v == s) return name;
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& name) {
  std::string n = name;
  std::replace(n.begin(), n.end(), '-', '_');
  for (const auto& [v, s] : scenario_names()) {
    if (s == n) return v;
  }
  throw ConfigError("scenario", "unknown scenario '" + name + "'");
}

Config Config::parse(std::string_view text, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::string section;
  std::size_t line_no = 0;
  std::set<std::pair<std::string, std::string>> seen;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[' && t.find('=') == std::string::npos) {
      if (t.back() != ']') throw ConfigError("", where + ": unterminated section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      if (!known_section(section)) throw ConfigError(section, where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("", where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError("", where + ": missing key before '='");
    const KeySpec* spec = find_spec(section, key);
    const std::string qualified = section.empty() ? key : section + "." + key;
    if (spec == nullptr) throw ConfigError(key, where + ": unknown key '" + qualified + "'");
    if (!seen.insert({section, key}).second) throw ConfigError(key, where + ": duplicate key '" + qualified + "'");
    try {
      cfg.values_[{section, key}] = parse_value(spec->kind, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, where + ": " + e.what());
    }
    cfg.raw_[{section, key}] = value;
  }
  cfg.fill_and_validate();
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void Config::set(const std::string& section, const std::string& key, const std::string& text) {
  const KeySpec* spec = find_spec(section, key);
  if (spec == nullptr) throw ConfigError(key, "unknown key");
  try {
    values_[{section, key}] = parse_value(spec->kind, text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
  raw_[{section, key}] = text;
  fill_and_validate();
}

void Config::fill_and_validate() {
  for (const auto& spec : schema()) {
    const auto id = std::make_pair(spec.section, spec.key);
    if (values_.count(id) == 0 && spec.fallback) values_[id] = parse_value(spec.kind, *spec.fallback);
  }
  scenario_ = scenario_from_string(text("", "scenario"));
  seed_.reset();
  if (provided("", "seed")) {
    const auto s = integer("", "seed");
    require(s >= 0, "seed", "must be a non-negative integer");
    seed_ = static_cast<std::uint64_t>(s);
  }

  const auto lam = reals("geometry", "lambda");
  require(lam.size() == 1 || lam.size() == 4, "lambda", "expects one value or four");
  for (double l : lam) require(l > 0.0, "lambda", "side lengths must be positive");
  const auto grid = integers("geometry", "grid");
  require(grid.size() == 1 || grid.size() == 4, "grid", "expects one value or four");
  for (auto g : grid) {
    require(g >= 8 && g % 2 == 0, "grid", "must be even and >= 8, got " + std::to_string(g));
    require(g <= 1024, "grid", "larger than 1024 per axis is not supported");
  }

  const auto mu = integer("evolution", "mu");
  require(mu == -1 || mu == 0 || mu == 1, "mu", "must be -1, 0 or 1");
  require(real("evolution", "dt") > 0.0, "dt", "must be positive");
  require(real("evolution", "t_end") >= 0.0, "t_end", "must be non-negative");
  require(real("evolution", "dt") <= real("evolution", "t_end") * (1.0 + 1e-12), "dt", "must not exceed t_end");
  require(integer("evolution", "snapshot_stride") >= 1, "snapshot_stride", "must be >= 1");
  const auto& dealias = text("evolution", "dealias");
  require(dealias == "pad3_2" || dealias == "none", "dealias", "must be pad3_2 or none");
  if (provided("evolution", "blowup_threshold")) {
    require(real("evolution", "blowup_threshold") > 0.0, "blowup_threshold", "must be positive");
  }

  static const std::set<std::string> kinds{"constant", "single_mode", "random_h1", "torus_bubble", "sum_of_bubbles"};
  require(kinds.count(text("data", "kind")) == 1, "kind", "unknown initial data '" + text("data", "kind") + "'");
  require(integers("data", "mode").size() == 4, "mode", "expects four integers");
  require(integer("data", "band") >= 0, "band", "must be >= 0");
  require(real("data", "norm") >= 0.0, "norm", "must be >= 0");
  require(real("data", "N") >= 1.0, "N", "must be >= 1");
  require(real("data", "width") > 0.0, "width", "must be positive");
  const auto center = reals("data", "center");
  require(center.size() == 1 || center.size() == 4, "center", "expects one value or four");
  static const std::set<std::string> profiles{"ground_state", "gaussian"};
  for (const char* sec : {"data", "extinction", "profile_suite"}) {
    require(profiles.count(text(sec, "profile")) == 1, "profile", "must be ground_state or gaussian");
  }
  const auto& smode = text("data", "scaling_mode");
  require(smode == "amplitude" || smode == "hdot1", "scaling_mode", "must be amplitude or hdot1");
  const auto Ns = reals("data", "Ns");
  const auto centers = reals("data", "centers");
  require(centers.size() == 4 * Ns.size(), "centers", "needs four coordinates per entry of Ns");
  const auto amps = reals("data", "amplitudes");
  require(amps.empty() || amps.size() == Ns.size(), "amplitudes", "needs one entry per entry of Ns");
  for (double n : Ns) require(n >= 1.0, "Ns", "scales must be >= 1");

  require(real("trapping", "delta0") > 0.0 && real("trapping", "delta0") < 1.0, "delta0", "must lie in (0, 1)");
  require(real("trapping", "c_star_safety") >= 1.0, "c_star_safety", "must be >= 1");
  require(integer("blowup_probe", "growth_samples") >= 2, "growth_samples", "must be >= 2");

  for (double p : reals("strichartz", "p")) require(p > 3.0, "p", "Strichartz exponents need p > 3");
  for (auto n : integers("strichartz", "N")) require(n >= 1 && (n & (n - 1)) == 0, "N", "shells must be powers of two");
  require(integer("strichartz", "seeds") >= 1, "seeds", "must be >= 1");
  static const std::set<std::string> sdata{"coherent", "random_phase", "single_mode"};
  require(sdata.count(text("strichartz", "data")) == 1, "data", "must be coherent, random_phase or single_mode");
  require(real("strichartz", "samples_factor") > 0.0, "samples_factor", "must be positive");

  const auto n1 = integers("bilinear", "N1"), n2 = integers("bilinear", "N2");
  require(n1.size() == n2.size(), "N2", "needs one entry per entry of N1");
  for (std::size_t i = 0; i < n1.size(); ++i) {
    require(n2[i] >= 1, "N2", "must be >= 1");
    require(n1[i] >= n2[i], "N1", "bilinear pairs need N1 >= N2");
  }
  require(integer("bilinear", "modes") >= 1, "modes", "must be >= 1");
  require(integer("bilinear", "seeds") >= 1, "seeds", "must be >= 1");
  const double conf = real("bilinear", "confidence");
  require(conf > 0.5 && conf < 1.0, "confidence", "must lie in (0.5, 1)");

  for (double T : reals("extinction", "T")) require(T >= 1.0, "T", "window parameters must be >= 1");
  for (double N : reals("extinction", "N")) require(N >= 1.0, "N", "scales must be >= 1");
  const auto egrids = integers("extinction", "grids");
  require(egrids.empty() || egrids.size() == reals("extinction", "N").size(), "grids", "needs one grid per N");
  for (auto g : egrids) require(g >= 8 && g % 2 == 0, "grids", "must be even and >= 8");
  require(integer("extinction", "samples") >= 8, "samples", "must be >= 8");

  require(integer("profile_suite", "pairs") >= 2, "pairs", "must be >= 2");
  require(integer("profile_suite", "prefix") >= 8, "prefix", "must be >= 8");
  const auto& expect = text("profile_suite", "expect");
  require(expect == "orthogonal" || expect == "equivalent", "expect", "must be orthogonal or equivalent");
  for (const char* k : {"a_N0", "b_N0", "a_ratio", "b_ratio"}) require(real("profile_suite", k) >= 1.0, k, "must be >= 1");

  require(real("stability", "epsilon") >= 0.0, "epsilon", "must be >= 0");
  require(integer("stability", "coarse_factor") >= 1, "coarse_factor", "must be >= 1");

  require(real("ground_state", "tolerance") > 0.0, "tolerance", "must be positive");

  require(real("norms", "window") > 0.0 && real("norms", "window") <= 1.0, "window", "must lie in (0, 1]");

  for (auto m : integers("kernel", "M")) require(m >= 1 && m <= 32, "M", "kernel orders must lie in [1, 32]");
  const auto S = reals("kernel", "S");
  require(S.empty() || S.size() == integers("kernel", "M").size(), "S", "needs one entry per M");
  require(integer("kernel", "time_samples") >= 1, "time_samples", "must be >= 1");

  require(integer("extract", "max_profiles") >= 0, "max_profiles", "must be >= 0");
  require(integer("extract", "z_samples") >= 2, "z_samples", "must be >= 2");
  require(real("extract", "z_window") > 0.0, "z_window", "must be positive");
}

bool Config::provided(const std::string& section, const std::string& key) const {
  return raw_.count({section, key}) == 1;
}

const Value& Config::lookup(const std::string& section, const std::string& key) const {
  const auto it = values_.find({section, key});
  if (it == values_.end()) throw ConfigError(key, "no value and no default");
  return it->second;
}

double Config::real(const std::string& section, const std::string& key) const {
  const Value& v = lookup(section, key);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

std::int64_t Config::integer(const std::string& section, const std::string& key) const {
  return std::get<std::int64_t>(lookup(section, key));
}

const std::string& Config::text(const std::string& section, const std::string& key) const {
  return std::get<std::string>(lookup(section, key));
}

bool Config::flag(const std::string& section, const std::string& key) const {
  return std::get<bool>(lookup(section, key));
}

std::vector<double> Config::reals(const std::string& section, const std::string& key) const {
  return std::get<std::vector<double>>(lookup(section, key));
}

std::vector<std::int64_t> Config::integers(const std::string& section, const std::string& key) const {
  return std::get<std::vector<std::int64_t>>(lookup(section, key));
}

Vec4 Config::vec4(const std::string& section, const std::string& key) const {
  const auto v = reals(section, key);
  if (v.size() == 1) return {v[0], v[0], v[0], v[0]};
  if (v.size() != 4) throw ConfigError(key, "expects one value or four");
  return {v[0], v[1], v[2], v[3]};
}

std::uint64_t Config::seed() const {
  if (!seed_) throw ConfigError("seed", "a seed is required for random data (set `seed` or pass --seed)");
  return *seed_;
}

TorusGeometry Config::geometry() const {
  const Vec4 lam = vec4("geometry", "lambda");
  const auto g = integers("geometry", "grid");
  const Index4 grid = g.size() == 1 ? Index4{int(g[0]), int(g[0]), int(g[0]), int(g[0])}
                                    : Index4{int(g[0]), int(g[1]), int(g[2]), int(g[3])};
  return TorusGeometry(lam, grid);
}

EvolutionParams Config::evolution() const {
  EvolutionParams p;
  p.mu = static_cast<int>(integer("evolution", "mu"));
  p.dt = real("evolution", "dt");
  p.t_end = real("evolution", "t_end");
  p.snapshot_stride = static_cast<int>(integer("evolution", "snapshot_stride"));
  p.dealias = text("evolution", "dealias") == "none" ? Dealias::none : Dealias::pad3_2;
  if (provided("evolution", "blowup_threshold")) p.blowup_threshold = real("evolution", "blowup_threshold");
  return p;
}

nlohmann::ordered_json Config::echo() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& spec : schema()) {
    const auto it = values_.find({spec.section, spec.key});
    nlohmann::ordered_json v = it == values_.end() ? nlohmann::ordered_json(nullptr) : to_json(it->second);
    // Broadcast scalars are echoed as the four values actually used.
    const bool four = spec.key == "lambda" || spec.key == "grid" || spec.key == "center";
    if (four && v.is_array() && v.size() == 1) v = nlohmann::ordered_json::array({v[0], v[0], v[0], v[0]});
    if (spec.section.empty()) {
      out[spec.key] = v;
    } else {
      out[spec.section][spec.key] = v;
    }
  }
  return out;
}

std::string schema_reference() {
  std::ostringstream out;
  std::string section = "\x01";
  for (const auto& s : schema()) {
    if (s.section != section) {
      section = s.section;
      out << (section.empty() ? "(top level)" : "[" + section + "]") << "\n";
    }
    out << "  " << s.key << " = " << (s.fallback ? (s.fallback->empty() ? "(empty)" : *s.fallback) : "(unset)");
    if (!s.doc.empty()) out << "    # " << s.doc;
    out << "\n";
  }
  return out.str();
}

}  // namespace tnls::lab
