#include "tnls/field.hpp"

#include <algorithm>
#include <cmath>

#include "tnls/errors.hpp"

namespace tnls {

namespace {

void require_same_geometry(const TorusGeometry& a, const TorusGeometry& b) {
  if (!(a == b)) throw DomainError("fields live on different geometries");
}

bool finite_array(const ComplexArray& v) noexcept {
  for (const cplx& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

// Calls f(linear, i0, i1, i2, i3) over the grid in storage order.
template <class F>
void for_each_slot(const Index4& g, F&& f) {
  std::size_t idx = 0;
  for (int a = 0; a < g[0]; ++a)
    for (int b = 0; b < g[1]; ++b)
      for (int c = 0; c < g[2]; ++c)
        for (int d = 0; d < g[3]; ++d) f(idx++, a, b, c, d);
}

double weighted_sum(const SpectralField& spec, bool gradient, bool mass) {
  const LatticeTables t(spec.geometry());
  const auto& c = spec.coefficients();
  double s = 0.0;
  for_each_slot(spec.geometry().grid(), [&](std::size_t i, int a, int b, int cc, int d) {
    double w = 0.0;
    if (gradient) w += t.omega_sq[0][a] + t.omega_sq[1][b] + t.omega_sq[2][cc] + t.omega_sq[3][d];
    if (mass) w += 1.0;
    s += w * std::norm(c[i]);
  });
  return s * spec.geometry().volume();
}

}  // namespace

PhysicalField::PhysicalField(const TorusGeometry& geometry)
    : geometry_(geometry), samples_(geometry.size(), cplx{}) {}

PhysicalField::PhysicalField(const TorusGeometry& geometry, ComplexArray samples)
    : geometry_(geometry), samples_(std::move(samples)) {
  if (samples_.size() != geometry_.size()) throw DomainError("sample count does not match grid");
}

Vec4 PhysicalField::point(std::size_t linear) const noexcept {
  Vec4 x{};
  const auto& g = geometry_.grid();
  for (int i = kDim - 1; i >= 0; --i) {
    const auto gi = static_cast<std::size_t>(g[i]);
    x[i] = static_cast<double>(linear % gi) * geometry_.spacing(i);
    linear /= gi;
  }
  return x;
}

bool PhysicalField::all_finite() const noexcept { return finite_array(samples_); }

SpectralField::SpectralField(const TorusGeometry& geometry)
    : geometry_(geometry), coefficients_(geometry.size(), cplx{}) {}

SpectralField::SpectralField(const TorusGeometry& geometry, ComplexArray coefficients)
    : geometry_(geometry), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != geometry_.size()) throw DomainError("coefficient count does not match grid");
}

cplx SpectralField::coefficient(const Mode& mode) const { return coefficients_[linear_index(geometry_, mode)]; }

void SpectralField::set_coefficient(const Mode& mode, cplx value) {
  coefficients_[linear_index(geometry_, mode)] = value;
}

bool SpectralField::all_finite() const noexcept { return finite_array(coefficients_); }

SpectralField forward_transform(const PhysicalField& field) {
  if (!field.all_finite()) throw DataError("non-finite samples in forward transform");
  ComplexArray data = field.samples();
  fft_forward_inplace(field.geometry().grid(), data);
  const double inv = 1.0 / static_cast<double>(data.size());
  for (cplx& z : data) z *= inv;
  return SpectralField(field.geometry(), std::move(data));
}

PhysicalField inverse_transform(const SpectralField& spec) {
  if (!spec.all_finite()) throw DataError("non-finite coefficients in inverse transform");
  ComplexArray data = spec.coefficients();
  fft_backward_inplace(spec.geometry().grid(), data);
  return PhysicalField(spec.geometry(), std::move(data));
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  require_same_geometry(a.geometry(), b.geometry());
  SpectralField r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  require_same_geometry(a.geometry(), b.geometry());
  SpectralField r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

SpectralField operator*(cplx s, const SpectralField& a) {
  SpectralField r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] *= s;
  return r;
}

PhysicalField operator+(const PhysicalField& a, const PhysicalField& b) {
  require_same_geometry(a.geometry(), b.geometry());
  PhysicalField r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

PhysicalField operator-(const PhysicalField& a, const PhysicalField& b) {
  require_same_geometry(a.geometry(), b.geometry());
  PhysicalField r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

PhysicalField operator*(cplx s, const PhysicalField& a) {
  PhysicalField r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] *= s;
  return r;
}

double l2_norm(const SpectralField& spec) { return std::sqrt(weighted_sum(spec, false, true)); }
double hdot1_norm(const SpectralField& spec) { return std::sqrt(weighted_sum(spec, true, false)); }
double h1_norm(const SpectralField& spec) { return std::sqrt(weighted_sum(spec, true, true)); }

double h1_star_norm(const SpectralField& spec, double c_star) {
  if (!(c_star > 0.0)) throw DomainError("c_star must be positive");
  const double l2 = weighted_sum(spec, false, true);
  const double hd = weighted_sum(spec, true, false);
  return std::sqrt(hd + c_star * l2);
}

double lp_norm(const PhysicalField& field, double p) {
  if (!(p >= 1.0)) throw DomainError("L^p norm requires p >= 1");
  if (std::isinf(p)) return linf_norm(field);
  double s = 0.0;
  for (const cplx& z : field.samples()) s += std::pow(std::abs(z), p);
  return std::pow(s * field.geometry().cell_volume(), 1.0 / p);
}

double l4_fourth(const PhysicalField& field) {
  double s = 0.0;
  for (const cplx& z : field.samples()) {
    const double m = std::norm(z);
    s += m * m;
  }
  return s * field.geometry().cell_volume();
}

double l4_norm(const PhysicalField& field) { return std::sqrt(std::sqrt(l4_fourth(field))); }

double linf_norm(const PhysicalField& field) noexcept {
  double m = 0.0;
  for (const cplx& z : field.samples()) m = std::max(m, std::abs(z));
  return m;
}

FieldNorms norms(const PhysicalField& field, std::optional<double> c_star) {
  const SpectralField spec = forward_transform(field);
  FieldNorms out;
  const double l2sq = weighted_sum(spec, false, true);
  const double hdsq = weighted_sum(spec, true, false);
  out.l2 = std::sqrt(l2sq);
  out.hdot1 = std::sqrt(hdsq);
  out.h1 = std::sqrt(l2sq + hdsq);
  out.l4 = l4_norm(field);
  if (c_star) {
    if (!(*c_star > 0.0)) throw DomainError("c_star must be positive");
    out.h1_star = std::sqrt(hdsq + *c_star * l2sq);
  }
  return out;
}

SpectralField lp_project(const SpectralField& spec, DyadicShell shell) {
  const LatticeTables t(spec.geometry());
  SpectralField r(spec.geometry());
  for_each_slot(spec.geometry().grid(), [&](std::size_t i, int a, int b, int c, int d) {
    const std::int64_t nsq = static_cast<std::int64_t>(t.n[0][a]) * t.n[0][a] +
                             static_cast<std::int64_t>(t.n[1][b]) * t.n[1][b] +
                             static_cast<std::int64_t>(t.n[2][c]) * t.n[2][c] +
                             static_cast<std::int64_t>(t.n[3][d]) * t.n[3][d];
    if (shell_scale_for_norm_sq(nsq) == shell.N) r[i] = spec[i];
  });
  return r;
}

SpectralField cube_project(const SpectralField& spec, const Mode& center, DyadicShell side) {
  const auto& g = spec.geometry().grid();
  std::array<std::vector<char>, kDim> keep;
  for (int ax = 0; ax < kDim; ++ax) {
    if (side.N > g[ax]) throw DomainError("cube side exceeds the grid");
    keep[ax].resize(g[ax]);
    const std::int64_t lo = center.n[ax] - side.N / 2;
    const std::int64_t hi = center.n[ax] + side.N / 2;
    for (int k = 0; k < g[ax]; ++k) {
      const int n = frequency_index(k, g[ax]);
      keep[ax][k] = (n >= lo && n < hi) ? 1 : 0;
    }
  }
  SpectralField r(spec.geometry());
  for_each_slot(g, [&](std::size_t i, int a, int b, int c, int d) {
    if (keep[0][a] && keep[1][b] && keep[2][c] && keep[3][d]) r[i] = spec[i];
  });
  return r;
}

double cutoff_radial(const CutoffProfile& profile, double r) noexcept {
  r = std::abs(r);
  if (r <= profile.radius1) return 1.0;
  if (r >= profile.radius2) return 0.0;
  // C-infinity step built from h(u) = exp(-1/u); every derivative vanishes at both radii.
  const double s = (r - profile.radius1) / (profile.radius2 - profile.radius1);
  const double up = std::exp(-1.0 / (1.0 - s));
  const double down = std::exp(-1.0 / s);
  return up / (up + down);
}

double cutoff_eval(const CutoffProfile& profile, const Vec4& x) noexcept {
  return cutoff_radial(profile, std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]));
}

std::array<PhysicalField, kDim> spectral_gradient(const SpectralField& spec) {
  const LatticeTables t(spec.geometry());
  std::array<PhysicalField, kDim> out;
  for (int ax = 0; ax < kDim; ++ax) {
    SpectralField d(spec.geometry());
    for_each_slot(spec.geometry().grid(), [&](std::size_t i, int a, int b, int c, int e) {
      const int slot[kDim] = {a, b, c, e};
      d[i] = cplx(0.0, t.omega[ax][slot[ax]]) * spec[i];
    });
    out[ax] = inverse_transform(d);
  }
  return out;
}

SpectralField resample(const SpectralField& spec, const Index4& grid) {
  const TorusGeometry target = spec.geometry().with_grid(grid);
  const auto& src = spec.geometry().grid();
  // Destination slot per source slot, -1 when the frequency is not representable.
  std::array<std::vector<int>, kDim> map;
  for (int ax = 0; ax < kDim; ++ax) {
    map[ax].resize(src[ax]);
    for (int k = 0; k < src[ax]; ++k) {
      const int n = frequency_index(k, src[ax]);
      map[ax][k] = (n >= -grid[ax] / 2 && n < grid[ax] / 2) ? slot_of(n, grid[ax]) : -1;
    }
  }
  SpectralField out(target);
  for_each_slot(src, [&](std::size_t i, int a, int b, int c, int d) {
    const int da = map[0][a], db = map[1][b], dc = map[2][c], dd = map[3][d];
    if (da < 0 || db < 0 || dc < 0 || dd < 0) return;
    const std::size_t j = ((static_cast<std::size_t>(da) * grid[1] + db) * grid[2] + dc) * grid[3] + dd;
    out[j] = spec[i];
  });
  return out;
}

SpectralField spectral_shift(const SpectralField& spec, const Vec4& shift) {
  const LatticeTables t(spec.geometry());
  std::array<std::vector<cplx>, kDim> phase;
  for (int ax = 0; ax < kDim; ++ax) {
    phase[ax].resize(t.omega[ax].size());
    for (std::size_t k = 0; k < phase[ax].size(); ++k) phase[ax][k] = std::polar(1.0, -t.omega[ax][k] * shift[ax]);
  }
  SpectralField r = spec;
  for_each_slot(spec.geometry().grid(), [&](std::size_t i, int a, int b, int c, int d) {
    r[i] *= phase[0][a] * phase[1][b] * phase[2][c] * phase[3][d];
  });
  return r;
}

cplx h1_inner(const SpectralField& a, const SpectralField& b) {
  require_same_geometry(a.geometry(), b.geometry());
  const LatticeTables t(a.geometry());
  cplx s{};
  for_each_slot(a.geometry().grid(), [&](std::size_t i, int p, int q, int r, int u) {
    const double w = 1.0 + t.omega_sq[0][p] + t.omega_sq[1][q] + t.omega_sq[2][r] + t.omega_sq[3][u];
    s += w * a[i] * std::conj(b[i]);
  });
  return s * a.geometry().volume();
}

cplx l2_inner(const SpectralField& a, const SpectralField& b) {
  require_same_geometry(a.geometry(), b.geometry());
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s * a.geometry().volume();
}

}  // namespace tnls
