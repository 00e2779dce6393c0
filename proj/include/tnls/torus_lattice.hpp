#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace tnls {

inline constexpr int kDim = 4;
inline constexpr double kPi = 3.14159265358979323846;

using Vec4 = std::array<double, kDim>;
using Index4 = std::array<int, kDim>;

/// Rectangular torus R^4 / (prod lambda_i Z) sampled on a uniform grid.
///
/// Grid point j along axis i sits at x = j * lambda_i / grid_i. Spectral data is
/// stored in FFT order: slot k holds the integer frequency n = k for k < grid/2
/// and n = k - grid otherwise, so the stored range is [-grid/2, grid/2 - 1].
class TorusGeometry {
 public:
  TorusGeometry() = default;

  /// Validates lambda_i > 0 (finite) and grid_i even, >= 8. Throws DomainError.
  TorusGeometry(const Vec4& lambda, const Index4& grid);

  static TorusGeometry cube(double side, int grid);

  const Vec4& lambda() const noexcept { return lambda_; }
  const Index4& grid() const noexcept { return grid_; }
  double volume() const noexcept;
  std::size_t size() const noexcept;
  double spacing(int axis) const noexcept { return lambda_[axis] / grid_[axis]; }
  double cell_volume() const noexcept { return volume() / static_cast<double>(size()); }

  /// Same side lengths, different sampling.
  TorusGeometry with_grid(const Index4& grid) const { return TorusGeometry(lambda_, grid); }

  bool operator==(const TorusGeometry& other) const = default;

 private:
  Vec4 lambda_{1.0, 1.0, 1.0, 1.0};
  Index4 grid_{8, 8, 8, 8};
};

struct Mode {
  Index4 n{0, 0, 0, 0};

  double norm() const noexcept;
  std::int64_t norm_sq() const noexcept;
  bool operator==(const Mode& other) const = default;
};

/// Dyadic frequency shell. N = 1 collects |n| <= 1, N > 1 collects N/2 < |n| <= N.
struct DyadicShell {
  std::int64_t N = 1;

  /// Throws DomainError unless N is a power of two >= 1.
  static DyadicShell of_scale(std::int64_t scale);
  bool contains(const Mode& mode) const noexcept;
  bool operator==(const DyadicShell& other) const = default;
  auto operator<=>(const DyadicShell& other) const = default;
};

bool in_nyquist_range(const TorusGeometry& geometry, const Mode& mode) noexcept;

/// omega_i = 2 pi n_i / lambda_i. Throws RangeError outside the Nyquist range.
Vec4 frequency(const TorusGeometry& geometry, const Mode& mode);

/// |omega(n)|^2, the symbol of -Laplacian.
double dispersion(const TorusGeometry& geometry, const Mode& mode);

DyadicShell shell_of(const Mode& mode) noexcept;

/// Shell containing an integer frequency of squared length |n|^2.
std::int64_t shell_scale_for_norm_sq(std::int64_t norm_sq) noexcept;

/// All shells that intersect the stored frequency range of the geometry, ascending.
std::vector<DyadicShell> shells_for(const TorusGeometry& geometry);

/// Integer frequency stored at FFT slot k of an axis with `grid` samples.
inline int frequency_index(int k, int grid) noexcept { return k < grid / 2 ? k : k - grid; }

/// FFT slot of integer frequency n; n = grid/2 aliases onto -grid/2.
inline int slot_of(int n, int grid) noexcept {
  int k = n % grid;
  return k < 0 ? k + grid : k;
}

Mode mode_at(const TorusGeometry& geometry, std::size_t linear_index) noexcept;
std::size_t linear_index(const TorusGeometry& geometry, const Mode& mode);

/// Per-geometry lookup tables used by the spectral kernels.
struct LatticeTables {
  std::array<std::vector<int>, kDim> n;           // integer frequency per slot
  std::array<std::vector<double>, kDim> omega;    // 2 pi n / lambda per slot
  std::array<std::vector<double>, kDim> omega_sq;

  explicit LatticeTables(const TorusGeometry& geometry);
};

/// Period of the free flow when all sides are equal (lambda^2 / 2 pi); empty otherwise.
std::optional<double> recurrence_period(const TorusGeometry& geometry) noexcept;

/// Shortest displacement between two torus points, componentwise in [-lambda/2, lambda/2).
Vec4 torus_displacement(const TorusGeometry& geometry, const Vec4& from, const Vec4& to) noexcept;
double torus_distance(const TorusGeometry& geometry, const Vec4& a, const Vec4& b) noexcept;

}  // namespace tnls
