#pragma once

#include <cstdint>
#include <random>

#include "tnls/field.hpp"

namespace testsupport {

// Band-limited random coefficients, |n_i| <= band on every axis.
inline tnls::SpectralField random_spectral(const tnls::TorusGeometry& g, int band, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  tnls::SpectralField s(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const tnls::Mode m = tnls::mode_at(g, i);
    bool inside = true;
    for (int v : m.n) inside = inside && std::abs(v) <= band;
    if (inside) s[i] = {gauss(rng), gauss(rng)};
  }
  return s;
}

inline tnls::PhysicalField random_physical(const tnls::TorusGeometry& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  tnls::PhysicalField f(g);
  for (auto& v : f.samples()) v = {u(rng), u(rng)};
  return f;
}

inline double max_abs_diff(const tnls::ComplexArray& a, const tnls::ComplexArray& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const tnls::ComplexArray& a) {
  double m = 0.0;
  for (const auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace testsupport
