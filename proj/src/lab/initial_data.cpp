#include "tnls/lab/initial_data.hpp"

#include <cmath>
#include <random>

#include "tnls/errors.hpp"

namespace tnls::lab {

PhysicalField single_mode_data(const TorusGeometry& geometry, const Mode& mode, cplx amplitude) {
  const Vec4 w = frequency(geometry, mode);
  PhysicalField out(geometry);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec4 x = out.point(i);
    out[i] = amplitude * std::polar(1.0, w[0] * x[0] + w[1] * x[1] + w[2] * x[2] + w[3] * x[3]);
  }
  return out;
}

SpectralField random_h1_data(const TorusGeometry& geometry, int band, double h1_norm, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralField out(geometry);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Mode m = mode_at(geometry, i);
    // Draw for every slot so the stream does not depend on the band.
    const double re = gauss(rng), im = gauss(rng);
    bool inside = true;
    for (int a = 0; a < kDim; ++a) inside = inside && std::abs(m.n[a]) <= band;
    if (!inside) continue;
    const double weight = std::pow(1.0 + static_cast<double>(m.norm_sq()), -1.5);
    out[i] = weight * cplx(re, im);
  }
  const double h1 = tnls::h1_norm(out);
  if (h1 > 0.0) out = (h1_norm / h1) * out;
  return out;
}

EuclideanProfile profile_by_name(const std::string& name, double amplitude, double width) {
  if (name == "ground_state") return EuclideanProfile::ground_state(amplitude);
  if (name == "gaussian") return EuclideanProfile::gaussian(amplitude, width);
  throw ConfigError("profile", "unknown profile '" + name + "'");
}

PhysicalField make_initial_data(const Config& config, const TorusGeometry& geometry) {
  const std::string& kind = config.text("data", "kind");
  const double amp = config.real("data", "amplitude");
  if (kind == "constant") {
    PhysicalField out(geometry);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = amp;
    return out;
  }
  if (kind == "single_mode") {
    const auto n = config.integers("data", "mode");
    const Mode m{{int(n[0]), int(n[1]), int(n[2]), int(n[3])}};
    if (!in_nyquist_range(geometry, m)) throw ConfigError("mode", "outside the Nyquist range of the grid");
    return single_mode_data(geometry, m, amp);
  }
  if (kind == "random_h1") {
    int band = static_cast<int>(config.integer("data", "band"));
    if (band == 0) {
      band = geometry.grid()[0];
      for (int g : geometry.grid()) band = std::min(band, g);
      band /= 3;
    }
    return inverse_transform(random_h1_data(geometry, band, config.real("data", "norm"), config.seed()));
  }
  const EuclideanProfile phi =
      profile_by_name(config.text("data", "profile"), amp, config.real("data", "width"));
  const double scaling = config.real("data", "scaling");
  auto scaled = [&](const PhysicalField& f) {
    if (config.text("data", "scaling_mode") == "amplitude") return scaling * f;
    const double hd = hdot1_norm(forward_transform(f));
    if (hd == 0.0) return f;
    return (scaling * std::sqrt(32.0 * kPi * kPi / 3.0) / hd) * f;
  };
  if (kind == "torus_bubble") {
    const ChartMap chart = ChartMap::for_geometry(geometry, config.vec4("data", "center"));
    return scaled(make_profile_on_torus(phi, config.real("data", "N"), geometry, chart));
  }
  // sum_of_bubbles
  const auto Ns = config.reals("data", "Ns");
  if (Ns.empty()) throw ConfigError("Ns", "sum_of_bubbles needs at least one scale");
  const auto centers = config.reals("data", "centers");
  const auto amps = config.reals("data", "amplitudes");
  PhysicalField out(geometry);
  for (std::size_t j = 0; j < Ns.size(); ++j) {
    const Vec4 c{centers[4 * j], centers[4 * j + 1], centers[4 * j + 2], centers[4 * j + 3]};
    const EuclideanProfile pj =
        amps.empty() ? phi : profile_by_name(config.text("data", "profile"), amps[j], config.real("data", "width"));
    out = out + make_profile_on_torus(pj, Ns[j], geometry, ChartMap::for_geometry(geometry, c));
  }
  return scaled(out);
}

}  // namespace tnls::lab
