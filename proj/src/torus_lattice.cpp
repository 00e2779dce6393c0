#include "tnls/torus_lattice.hpp"

#include <cmath>
#include <string>

#include "tnls/errors.hpp"

namespace tnls {

TorusGeometry::TorusGeometry(const Vec4& lambda, const Index4& grid) : lambda_(lambda), grid_(grid) {
  for (int i = 0; i < kDim; ++i) {
    if (!(lambda[i] > 0.0) || !std::isfinite(lambda[i])) {
      throw DomainError("lambda[" + std::to_string(i) + "] must be positive and finite");
    }
    if (grid[i] < 8 || grid[i] % 2 != 0) {
      throw DomainError("grid[" + std::to_string(i) + "] must be even and >= 8, got " +
                        std::to_string(grid[i]));
    }
  }
}

TorusGeometry TorusGeometry::cube(double side, int grid) {
  return TorusGeometry({side, side, side, side}, {grid, grid, grid, grid});
}

double TorusGeometry::volume() const noexcept {
  return lambda_[0] * lambda_[1] * lambda_[2] * lambda_[3];
}

std::size_t TorusGeometry::size() const noexcept {
  std::size_t total = 1;
  for (int g : grid_) total *= static_cast<std::size_t>(g);
  return total;
}

std::int64_t Mode::norm_sq() const noexcept {
  std::int64_t s = 0;
  for (int v : n) s += static_cast<std::int64_t>(v) * v;
  return s;
}

double Mode::norm() const noexcept { return std::sqrt(static_cast<double>(norm_sq())); }

DyadicShell DyadicShell::of_scale(std::int64_t scale) {
  if (scale < 1 || (scale & (scale - 1)) != 0) {
    throw DomainError("dyadic shell scale must be a power of two, got " + std::to_string(scale));
  }
  return DyadicShell{scale};
}

bool DyadicShell::contains(const Mode& mode) const noexcept {
  return shell_scale_for_norm_sq(mode.norm_sq()) == N;
}

bool in_nyquist_range(const TorusGeometry& geometry, const Mode& mode) noexcept {
  for (int i = 0; i < kDim; ++i) {
    if (std::abs(mode.n[i]) > geometry.grid()[i] / 2) return false;
  }
  return true;
}

Vec4 frequency(const TorusGeometry& geometry, const Mode& mode) {
  if (!in_nyquist_range(geometry, mode)) throw RangeError("mode outside Nyquist range");
  Vec4 w{};
  for (int i = 0; i < kDim; ++i) w[i] = 2.0 * kPi * mode.n[i] / geometry.lambda()[i];
  return w;
}

double dispersion(const TorusGeometry& geometry, const Mode& mode) {
  const Vec4 w = frequency(geometry, mode);
  return w[0] * w[0] + w[1] * w[1] + w[2] * w[2] + w[3] * w[3];
}

std::int64_t shell_scale_for_norm_sq(std::int64_t norm_sq) noexcept {
  // Smallest power of two N with N^2 >= |n|^2 (exact integer comparison).
  std::int64_t N = 1;
  while (N * N < norm_sq) N *= 2;
  return N;
}

DyadicShell shell_of(const Mode& mode) noexcept { return DyadicShell{shell_scale_for_norm_sq(mode.norm_sq())}; }

std::vector<DyadicShell> shells_for(const TorusGeometry& geometry) {
  std::int64_t max_sq = 0;
  for (int g : geometry.grid()) max_sq += static_cast<std::int64_t>(g / 2) * (g / 2);
  const std::int64_t top = shell_scale_for_norm_sq(max_sq);
  std::vector<DyadicShell> out;
  for (std::int64_t N = 1; N <= top; N *= 2) out.push_back(DyadicShell{N});
  return out;
}

Mode mode_at(const TorusGeometry& geometry, std::size_t linear) noexcept {
  Mode m;
  const auto& g = geometry.grid();
  for (int i = kDim - 1; i >= 0; --i) {
    const auto gi = static_cast<std::size_t>(g[i]);
    m.n[i] = frequency_index(static_cast<int>(linear % gi), g[i]);
    linear /= gi;
  }
  return m;
}

std::size_t linear_index(const TorusGeometry& geometry, const Mode& mode) {
  if (!in_nyquist_range(geometry, mode)) throw RangeError("mode outside Nyquist range");
  const auto& g = geometry.grid();
  std::size_t idx = 0;
  for (int i = 0; i < kDim; ++i) {
    idx = idx * static_cast<std::size_t>(g[i]) + static_cast<std::size_t>(slot_of(mode.n[i], g[i]));
  }
  return idx;
}

LatticeTables::LatticeTables(const TorusGeometry& geometry) {
  for (int i = 0; i < kDim; ++i) {
    const int g = geometry.grid()[i];
    n[i].resize(g);
    omega[i].resize(g);
    omega_sq[i].resize(g);
    for (int k = 0; k < g; ++k) {
      n[i][k] = frequency_index(k, g);
      omega[i][k] = 2.0 * kPi * n[i][k] / geometry.lambda()[i];
      omega_sq[i][k] = omega[i][k] * omega[i][k];
    }
  }
}

std::optional<double> recurrence_period(const TorusGeometry& geometry) noexcept {
  const auto& l = geometry.lambda();
  if (l[0] == l[1] && l[1] == l[2] && l[2] == l[3]) return l[0] * l[0] / (2.0 * kPi);
  return std::nullopt;
}

Vec4 torus_displacement(const TorusGeometry& geometry, const Vec4& from, const Vec4& to) noexcept {
  Vec4 d{};
  for (int i = 0; i < kDim; ++i) {
    const double L = geometry.lambda()[i];
    double v = std::fmod(to[i] - from[i], L);
    if (v < -0.5 * L) v += L;
    if (v >= 0.5 * L) v -= L;
    d[i] = v;
  }
  return d;
}

double torus_distance(const TorusGeometry& geometry, const Vec4& a, const Vec4& b) noexcept {
  const Vec4 d = torus_displacement(geometry, a, b);
  return std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3]);
}

}  // namespace tnls
