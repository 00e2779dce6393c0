#pragma once

#include <array>
#include <complex>
#include <optional>

#include "tnls/fft.hpp"
#include "tnls/torus_lattice.hpp"

namespace tnls {

/// Grid samples u(x_j) of a complex field on the torus.
class PhysicalField {
 public:
  PhysicalField() = default;
  explicit PhysicalField(const TorusGeometry& geometry);
  /// Throws DomainError when the sample count does not match the grid.
  PhysicalField(const TorusGeometry& geometry, ComplexArray samples);

  const TorusGeometry& geometry() const noexcept { return geometry_; }
  const ComplexArray& samples() const noexcept { return samples_; }
  ComplexArray& samples() noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  cplx& operator[](std::size_t i) noexcept { return samples_[i]; }
  const cplx& operator[](std::size_t i) const noexcept { return samples_[i]; }

  /// Coordinates of grid point `linear` (x_i = j_i * lambda_i / grid_i).
  Vec4 point(std::size_t linear) const noexcept;
  bool all_finite() const noexcept;

 private:
  TorusGeometry geometry_;
  ComplexArray samples_;
};

/// Mean-type Fourier coefficients: u(x) = sum_n c(n) e^{i omega(n) . x}, stored in FFT order.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const TorusGeometry& geometry);
  SpectralField(const TorusGeometry& geometry, ComplexArray coefficients);

  const TorusGeometry& geometry() const noexcept { return geometry_; }
  const ComplexArray& coefficients() const noexcept { return coefficients_; }
  ComplexArray& coefficients() noexcept { return coefficients_; }
  std::size_t size() const noexcept { return coefficients_.size(); }
  cplx& operator[](std::size_t i) noexcept { return coefficients_[i]; }
  const cplx& operator[](std::size_t i) const noexcept { return coefficients_[i]; }

  /// Throws RangeError outside the Nyquist range.
  cplx coefficient(const Mode& mode) const;
  void set_coefficient(const Mode& mode, cplx value);
  bool all_finite() const noexcept;

 private:
  TorusGeometry geometry_;
  ComplexArray coefficients_;
};

SpectralField forward_transform(const PhysicalField& field);
PhysicalField inverse_transform(const SpectralField& spec);

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(cplx s, const SpectralField& a);
PhysicalField operator+(const PhysicalField& a, const PhysicalField& b);
PhysicalField operator-(const PhysicalField& a, const PhysicalField& b);
PhysicalField operator*(cplx s, const PhysicalField& a);

// Norms. Spectral ones use Plancherel: ||u||^2 = volume * sum |c(n)|^2.
double l2_norm(const SpectralField& spec);
double hdot1_norm(const SpectralField& spec);
double h1_norm(const SpectralField& spec);
/// sqrt(||u||_{Hdot1}^2 + c_star ||u||_{L2}^2). Throws DomainError for c_star <= 0.
double h1_star_norm(const SpectralField& spec, double c_star);
/// Grid-quadrature L^p norm. Throws DomainError for p < 1.
double lp_norm(const PhysicalField& field, double p);
double l4_norm(const PhysicalField& field);
double l4_fourth(const PhysicalField& field);
double linf_norm(const PhysicalField& field) noexcept;

struct FieldNorms {
  double l2 = 0.0;
  double l4 = 0.0;
  double hdot1 = 0.0;
  double h1 = 0.0;
  std::optional<double> h1_star;
};

FieldNorms norms(const PhysicalField& field, std::optional<double> c_star = std::nullopt);

/// Sharp Littlewood-Paley projector onto one dyadic shell.
SpectralField lp_project(const SpectralField& spec, DyadicShell shell);

/// Keeps modes with center_i - N/2 <= n_i < center_i + N/2 on every axis.
/// Throws DomainError when N exceeds the grid on some axis.
SpectralField cube_project(const SpectralField& spec, const Mode& center, DyadicShell side);

/// Smooth radial bump: 1 on |x| <= radius1, 0 on |x| >= radius2.
struct CutoffProfile {
  double radius1 = 1.0;
  double radius2 = 2.0;
};

double cutoff_radial(const CutoffProfile& profile, double r) noexcept;
double cutoff_eval(const CutoffProfile& profile, const Vec4& x) noexcept;

/// Partial derivatives d_i u, computed by multiplying c(n) by i omega_i(n).
std::array<PhysicalField, kDim> spectral_gradient(const SpectralField& spec);

/// Copies every mode representable on both grids into a field on `grid`.
/// Used for zero-padding (dealiasing, refinement) and truncation.
SpectralField resample(const SpectralField& spec, const Index4& grid);

/// Coefficients of u(x - shift): c(n) -> c(n) e^{-i omega(n) . shift}.
SpectralField spectral_shift(const SpectralField& spec, const Vec4& shift);

/// volume * sum_n w(n) a(n) conj(b(n)) with w = 1 + |omega|^2.
cplx h1_inner(const SpectralField& a, const SpectralField& b);
/// volume * sum_n a(n) conj(b(n)).
cplx l2_inner(const SpectralField& a, const SpectralField& b);

}  // namespace tnls
