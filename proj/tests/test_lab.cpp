#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "tnls/errors.hpp"
#include "tnls/field_io.hpp"
#include "tnls/lab/config.hpp"
#include "tnls/lab/export.hpp"
#include "tnls/lab/initial_data.hpp"
#include "tnls/lab/regression.hpp"
#include "tnls/lab/scenarios.hpp"
#include "tnls/lab/sweep.hpp"

using namespace tnls;
using namespace tnls::lab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tnls_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string config_error_key(const std::string& text) {
  try {
    Config::parse(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<accepted>";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config defaults") {
  const auto c = Config::parse("scenario = evolve\n[geometry]\ngrid = 8\n");
  CHECK(c.scenario() == Scenario::evolve);
  CHECK(c.real("evolution", "dt") == 1e-3);
  CHECK(c.evolution().dt == 1e-3);
  CHECK(c.geometry().grid() == Index4{8, 8, 8, 8});
  CHECK(c.geometry().lambda() == Vec4{1, 1, 1, 1});
  CHECK(c.evolution().dealias == Dealias::pad3_2);
  const auto echo = c.echo();
  CHECK(echo["evolution"]["dt"].get<double>() == 1e-3);
  CHECK(echo["geometry"]["grid"].size() == 4);
}

TEST_CASE("config lists and comments") {
  const auto c = Config::parse(
      "# comment\nscenario = profile-suite\n[geometry]\nlambda = [1, 2, 1.5, 1]\ngrid = 8 10 8 12  # inline\n");
  CHECK(c.scenario() == Scenario::profile_suite);
  CHECK(c.geometry().lambda() == Vec4{1, 2, 1.5, 1});
  CHECK(c.geometry().grid() == Index4{8, 10, 8, 12});
}

TEST_CASE("config validation names the key") {
  CHECK(config_error_key("[geometry]\ngrid = 9\n") == "grid");
  CHECK(config_error_key("[geometry]\ngrid = [8, 8, 7, 8]\n") == "grid");
  CHECK(config_error_key("[evolution]\ndtt = 0.1\n") == "dtt");
  CHECK(config_error_key("[evolution]\nmu = 3\n") == "mu");
  CHECK(config_error_key("[evolution]\ndealias = cubic\n") == "dealias");
  CHECK(config_error_key("[evolution]\ndt = 1\nt_end = 0.5\n") == "dt");
  CHECK(config_error_key("[nowhere]\nx = 1\n") == "nowhere");
  CHECK(config_error_key("[strichartz]\np = [4, 3]\n") == "p");
  CHECK(config_error_key("[bilinear]\nN1 = [2]\nN2 = [8]\n") == "N1");
  CHECK(config_error_key("scenario = dance\n") == "scenario");
  CHECK(config_error_key("[evolution]\ndt = 1e-3\ndt = 2e-3\n") == "dt");
  CHECK(config_error_key("seed = 4\n[data]\nkind = random_h1\n") == "<accepted>");

  // The seed may still arrive from the command line, so it is demanded when the data is built.
  const auto unseeded = Config::parse("[geometry]\ngrid = 8\n[data]\nkind = random_h1\n");
  try {
    make_initial_data(unseeded, unseeded.geometry());
    FAIL("random data built without a seed");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "seed");
  }
}

TEST_CASE("config syntax errors carry the line") {
  try {
    Config::parse("[geometry]\nlambda 1\n", "demo.ini");
    FAIL("accepted a line without '='");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("demo.ini:2") != std::string::npos);
  }
  CHECK_THROWS_AS(Config::load("/nonexistent/config.ini"), IoError);
}

TEST_CASE("config overrides revalidate") {
  auto c = Config::parse("[geometry]\ngrid = 8\n");
  c.set("evolution", "dt", "2e-3");
  CHECK(c.evolution().dt == 2e-3);
  CHECK_THROWS_AS(c.set("geometry", "grid", "11"), ConfigError);
  CHECK(schema_reference().find("snapshot_stride") != std::string::npos);
}

TEST_CASE("shortest decimal encoding") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-310, 105.27578027825058}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("CSV roundtrip is exact") {
  const auto dir = scratch("csv");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  CsvTable t{{"t", "mass", "energy"}, {}};
  for (int i = 0; i < 50; ++i) t.rows.push_back({u(rng), u(rng) * 1e-9, u(rng) / 7});
  write_csv((dir / "a.csv").string(), t);
  const auto back = read_csv((dir / "a.csv").string());
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK_THROWS_AS(read_csv((dir / "missing.csv").string()), IoError);
}

TEST_CASE("snapshot roundtrip is bitwise and the layout is fixed") {
  const auto dir = scratch("snap");
  const TorusGeometry g({1, 2, 0.5, 1.25}, {8, 8, 10, 8});
  const auto f = testsupport::random_physical(g, 12);
  const auto path = (dir / "f.tnls").string();
  write_snapshot(path, f);
  const auto back = read_snapshot(path);
  CHECK(back.geometry() == g);
  CHECK(back.samples() == f.samples());
  CHECK(fs::file_size(path) == 4 + 4 + 16 + 32 + 16 * g.size());
  const std::string bytes = slurp(path);
  CHECK(bytes.substr(0, 4) == "TNLS");
  CHECK(static_cast<unsigned char>(bytes[4]) == kSnapshotVersion);

  std::ofstream(dir / "bad.tnls") << "NOPE";
  CHECK_THROWS_AS(read_snapshot((dir / "bad.tnls").string()), IoError);
}

TEST_CASE("least squares") {
  const auto fit = ols({1, 2, 3, 4}, {3, 5, 7, 9});
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.rms_residual < 1e-12);
  CHECK(fit.r_squared == doctest::Approx(1.0));

  const auto ll = loglog_fit({2, 4, 8, 16}, {1.0, std::sqrt(2.0), 2.0, std::sqrt(8.0)});
  CHECK(ll.slope == doctest::Approx(0.5));

  // y = x + noise: the t-based bound sits below the slope by t * stderr.
  const auto noisy = ols({0, 1, 2, 3, 4, 5}, {0.1, 0.9, 2.2, 2.8, 4.1, 5.0});
  CHECK(noisy.slope_lower_bound(0.95) < noisy.slope);
  CHECK(noisy.slope_lower_bound(0.95) > noisy.slope - 3 * noisy.slope_stderr);
  CHECK_THROWS_AS(ols({1}, {1}), DomainError);
  CHECK_THROWS_AS(ols({1, 1}, {1, 2}), DomainError);
  CHECK_THROWS_AS(loglog_fit({1, 2}, {0, 1}), DomainError);
}

TEST_CASE("parallel cells keep index order") {
  const auto out = parallel_cells<int>(20, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
  CHECK_THROWS_AS(parallel_cells<int>(5, 2, [](std::size_t i) -> int {
                    if (i == 3) throw DomainError("boom");
                    return 0;
                  }),
                  DomainError);
}

TEST_CASE("initial data catalog") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto a = random_h1_data(g, 2, 1.0, 42);
  const auto b = random_h1_data(g, 2, 1.0, 42);
  CHECK(a.coefficients() == b.coefficients());
  CHECK(h1_norm(a) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(random_h1_data(g, 2, 1.0, 43).coefficients() != a.coefficients());

  const auto wave = single_mode_data(g, Mode{{1, 0, 0, 0}}, 0.5);
  CHECK(std::abs(forward_transform(wave).coefficient(Mode{{1, 0, 0, 0}}) - 0.5) < 1e-14);

  const auto c = Config::parse("[geometry]\nlambda = 2\ngrid = 32\n[data]\nkind = torus_bubble\nN = 16\nscaling = 0.5\n");
  const auto bubble = make_initial_data(c, c.geometry());
  CHECK(bubble[0].real() == doctest::Approx(0.5 * 16.0));
  CHECK_THROWS_AS(profile_by_name("sombrero", 1.0, 1.0), ConfigError);
}

TEST_CASE("harmonic helpers") {
  const Vec4 lam{1, 1, 1, 1};
  const auto u1 = random_shell_wave(lam, 16, 12, 1);
  CHECK(u1.modes.size() == 12);
  double l2 = 0.0;
  for (const auto& c : u1.coefficients) l2 += std::norm(c);
  CHECK(l2 == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& m : u1.modes) CHECK(shell_of(Mode{m}).N == 16);

  const SparseWave zero{u1.modes, std::vector<cplx>(u1.modes.size())};
  CHECK(bilinear_product_norm(lam, random_shell_wave(lam, 64, 8, 2), zero) == 0.0);

  // A single mode times a single mode has modulus product |c1 c2| everywhere.
  const SparseWave one{{{1, 0, 0, 0}}, {cplx(1.0)}};
  CHECK(bilinear_product_norm(lam, one, one) == doctest::Approx(1.0).epsilon(1e-14));

  const auto s = strichartz_data(TorusGeometry::cube(1.0, 24), 8, "coherent", 5);
  CHECK(l2_norm(s) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l2_norm(lp_project(s, {8})) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scenario preconditions") {
  const auto dir = scratch("pre");
  auto trap = Config::parse("scenario = trapping\n[geometry]\ngrid = 8\n[evolution]\nmu = 1\n");
  CHECK_THROWS_AS(run_scenario(trap, (dir / "t").string()), ConfigError);
  auto probe = Config::parse("scenario = blowup_probe\n[geometry]\ngrid = 8\n[evolution]\nmu = 0\n");
  CHECK_THROWS_AS(run_scenario(probe, (dir / "b").string()), ConfigError);
}

TEST_CASE("ground-state scenario report") {
  const auto dir = scratch("gs");
  const auto c = Config::parse("scenario = ground_state\n");
  const auto sum = run_scenario(c, dir.string());
  CHECK(sum.passed);
  const auto gs = read_json((dir / "ground_state.json").string());
  for (const char* key : {"W_hdot1_sq", "C4", "E_W", "relations_ok", "tolerance"}) CHECK(gs.contains(key));
  CHECK(gs["relations_ok"].get<bool>());
  const auto report = read_json((dir / "report.json").string());
  CHECK(report["config"] == c.echo());
  CHECK(report.contains("version"));
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("evolve scenario is deterministic") {
  const std::string text =
      "scenario = evolve\nseed = 77\n[geometry]\ngrid = 8\n[evolution]\nmu = -1\ndt = 1e-3\nt_end = 0.01\n"
      "snapshot_stride = 5\nwrite_snapshots = true\n[data]\nkind = random_h1\nnorm = 0.5\n";
  const auto c = Config::parse(text);
  const auto a = scratch("det_a"), b = scratch("det_b");
  run_scenario(c, a.string());
  run_scenario(c, b.string());
  int compared = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file() || e.path().filename() == "timing.json") continue;
    const auto rel = fs::relative(e.path(), a);
    CHECK(slurp(e.path()) == slurp(b / rel));
    ++compared;
  }
  CHECK(compared >= 4);
  const auto diag = read_csv((a / "diagnostics.csv").string());
  CHECK(diag.header == std::vector<std::string>{"t", "mass", "energy", "e_star", "e_star_star", "hdot1", "h1_star"});
}
