#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "tnls/lab/config.hpp"
#include "tnls/lab/export.hpp"
#include "tnls/lab/regression.hpp"

namespace tnls::lab {

inline constexpr const char* kVersion = "0.1.0";

/// One declared tolerance check. `relation` is "<", "<=", ">" or "==".
struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  std::string relation;
  bool passed = false;
};

Check check_less(const std::string& name, double value, double bound);
Check check_greater(const std::string& name, double value, double bound);
Check check_true(const std::string& name, bool ok);

struct ScenarioResult {
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::vector<Check> checks;
  bool passed() const noexcept;
};

nlohmann::ordered_json fit_json(const LinearFit& fit);

// Scenario bodies. Each writes its data files into `out` and returns results and checks.
ScenarioResult run_evolve(const Config& config, OutputDir& out, int threads);
ScenarioResult run_trapping(const Config& config, OutputDir& out, int threads);
ScenarioResult run_blowup_probe(const Config& config, OutputDir& out, int threads);
ScenarioResult run_stability(const Config& config, OutputDir& out, int threads);
ScenarioResult run_ground_state(const Config& config, OutputDir& out, int threads);
ScenarioResult run_norms(const Config& config, OutputDir& out, int threads);
ScenarioResult run_strichartz(const Config& config, OutputDir& out, int threads);
ScenarioResult run_bilinear(const Config& config, OutputDir& out, int threads);
ScenarioResult run_extinction(const Config& config, OutputDir& out, int threads);
ScenarioResult run_profile_suite(const Config& config, OutputDir& out, int threads);

// `profiles` verbs.
ScenarioResult run_profiles_make(const Config& config, OutputDir& out, int threads);
ScenarioResult run_profiles_kernel(const Config& config, OutputDir& out, int threads);
ScenarioResult run_profiles_extract(const Config& config, OutputDir& out, int threads);

struct RunSummary {
  nlohmann::ordered_json report;
  bool passed = false;
  double seconds = 0.0;
};

/// Runs the config's scenario (or a `profiles` verb when `verb` is non-empty) and writes
/// report.json, timing.json and manifest.json next to the scenario's own files.
RunSummary run_scenario(const Config& config, const std::string& out_dir, int threads = 1,
                        const std::string& verb = "");

// Harmonic-analysis cells, exposed for tests.

struct StrichartzCell {
  std::int64_t N = 0;
  std::uint64_t seed = 0;
  std::vector<double> lp;  // ||P_N e^{it Lap} f||_{L^p([-1,1] x T^4)} per exponent
  double l2 = 0.0;         // ||f||_2
  double h1 = 0.0;         // ||f||_{H1}
  double z = 0.0;          // Z-norm on [0, 1]
  double concentration = 0.0;  // N^{-1} sup |P_N e^{it Lap} f| over the samples
  std::size_t samples = 0;
};

/// Shell-N data of the requested kind ("coherent", "random_phase", "single_mode"), unit L^2.
SpectralField strichartz_data(const TorusGeometry& geometry, std::int64_t N, const std::string& kind,
                              std::uint64_t seed);

/// Requires a cubic torus: the time integrals use the recurrence of the free flow.
StrichartzCell strichartz_cell(double lambda, std::int64_t N, const std::vector<double>& exponents,
                               const std::string& kind, std::uint64_t seed, double samples_factor);

struct SparseWave {
  std::vector<Index4> modes;
  std::vector<cplx> coefficients;
};

/// `count` distinct random modes of shell N with Gaussian coefficients, unit L^2 on the torus.
SparseWave random_shell_wave(const Vec4& lambda, std::int64_t N, int count, std::uint64_t seed);

/// ||u1 u2||_{L^2([0, 1] x T^4)} for free waves, summed exactly in Fourier space.
double bilinear_product_norm(const Vec4& lambda, const SparseWave& u1, const SparseWave& u2);

/// sum_{xi in Z^4, |xi|^2 <= 4M^2} eta(|xi| / M) via the four-square counts r_4(q).
double kernel_origin_by_counts(int M);

}  // namespace tnls::lab
