#include "tnls/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tnls/errors.hpp"
#include "tnls/evolution.hpp"

namespace tnls {

namespace {

constexpr double kSphere = 2.0 * kPi * kPi;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class F>
double half_line_integral(F f) {
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0;
  const double v = integrator.integrate(f, 0.0, kInf, 1e-12, &err);
  if (!std::isfinite(v)) throw NumericError("profile norm quadrature failed");
  return v;
}

template <class F>
double interval_integral(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-13);
}

}  // namespace

EuclideanProfile EuclideanProfile::ground_state(double amplitude) {
  EuclideanProfile p;
  p.kind_ = ProfileKind::ground_state;
  p.amplitude_ = amplitude;
  p.compute_norms();
  return p;
}

EuclideanProfile EuclideanProfile::gaussian(double amplitude, double width) {
  if (!(width > 0.0)) throw DomainError("gaussian width must be positive");
  EuclideanProfile p;
  p.kind_ = ProfileKind::gaussian;
  p.amplitude_ = amplitude;
  p.width_ = width;
  p.compute_norms();
  return p;
}

EuclideanProfile EuclideanProfile::radial_samples(std::vector<double> radii, std::vector<double> values) {
  if (radii.size() < 2 || radii.size() != values.size()) {
    throw DomainError("radial samples need at least two (radius, value) pairs");
  }
  if (radii.front() != 0.0) throw DomainError("radial samples must start at r = 0");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) throw DomainError("radial sample radii must increase strictly");
  }
  if (values.back() != 0.0) throw DomainError("last radial sample must be 0 so the profile is continuous");
  EuclideanProfile p;
  p.kind_ = ProfileKind::radial_samples;
  p.radii_ = std::move(radii);
  p.values_ = std::move(values);
  p.compute_norms();
  return p;
}

std::string EuclideanProfile::name() const {
  switch (kind_) {
    case ProfileKind::ground_state: return "ground_state";
    case ProfileKind::gaussian: return "gaussian";
    case ProfileKind::radial_samples: return "radial_samples";
  }
  return "unknown";
}

double EuclideanProfile::value(double r) const noexcept {
  r = std::abs(r);
  switch (kind_) {
    case ProfileKind::ground_state: return amplitude_ / (1.0 + r * r / 8.0);
    case ProfileKind::gaussian: return amplitude_ * std::exp(-r * r / (2.0 * width_ * width_));
    case ProfileKind::radial_samples: {
      if (r >= radii_.back()) return 0.0;
      const auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
      const std::size_t j = static_cast<std::size_t>(it - radii_.begin());
      const double s = (r - radii_[j - 1]) / (radii_[j] - radii_[j - 1]);
      return (1.0 - s) * values_[j - 1] + s * values_[j];
    }
  }
  return 0.0;
}

double EuclideanProfile::derivative(double r) const noexcept {
  r = std::abs(r);
  switch (kind_) {
    case ProfileKind::ground_state: {
      const double s = 1.0 + r * r / 8.0;
      return -amplitude_ * (r / 4.0) / (s * s);
    }
    case ProfileKind::gaussian:
      return -amplitude_ * r / (width_ * width_) * std::exp(-r * r / (2.0 * width_ * width_));
    case ProfileKind::radial_samples: {
      if (r >= radii_.back()) return 0.0;
      const auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
      const std::size_t j = static_cast<std::size_t>(it - radii_.begin());
      return (values_[j] - values_[j - 1]) / (radii_[j] - radii_[j - 1]);
    }
  }
  return 0.0;
}

void EuclideanProfile::compute_norms() {
  auto d2 = [this](double r) { const double d = derivative(r); return kSphere * d * d * r * r * r; };
  auto a1 = [this](double r) { return kSphere * std::abs(value(r)) * r * r * r; };
  auto a2 = [this](double r) { const double v = value(r); return kSphere * v * v * r * r * r; };
  auto a4 = [this](double r) { const double v = value(r); return kSphere * v * v * v * v * r * r * r; };
  if (kind_ == ProfileKind::radial_samples) {
    double h = 0.0, s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (std::size_t i = 1; i < radii_.size(); ++i) {
      h += interval_integral(d2, radii_[i - 1], radii_[i]);
      s1 += interval_integral(a1, radii_[i - 1], radii_[i]);
      s2 += interval_integral(a2, radii_[i - 1], radii_[i]);
      s4 += interval_integral(a4, radii_[i - 1], radii_[i]);
    }
    hdot1_ = std::sqrt(h);
    l1_ = s1;
    l2_ = std::sqrt(s2);
    l4_ = std::pow(s4, 0.25);
    return;
  }
  hdot1_ = std::sqrt(half_line_integral(d2));
  l4_ = std::pow(half_line_integral(a4), 0.25);
  if (kind_ == ProfileKind::ground_state) {
    // W decays like 8 / r^2: the L1 and L2 integrals diverge in four dimensions.
    l1_ = amplitude_ == 0.0 ? 0.0 : kInf;
    l2_ = amplitude_ == 0.0 ? 0.0 : kInf;
  } else {
    l1_ = half_line_integral(a1);
    l2_ = std::sqrt(half_line_integral(a2));
  }
}

ChartMap ChartMap::for_geometry(const TorusGeometry& geometry, const Vec4& center) {
  const auto& l = geometry.lambda();
  ChartMap c;
  c.rho = std::min(1.0, 0.5 * *std::min_element(l.begin(), l.end()));
  c.center = center;
  return c;
}

PhysicalField make_profile_on_torus(const EuclideanProfile& phi, double N, const TorusGeometry& geometry,
                                    const ChartMap& chart, const CutoffProfile& cutoff) {
  if (!(N >= 1.0)) throw DomainError("profile scale N must be >= 1");
  const auto& l = geometry.lambda();
  if (chart.rho > 0.5 * *std::min_element(l.begin(), l.end()) * (1.0 + 1e-12)) {
    throw GeometryError("chart radius exceeds half the shortest side; the chart would not be injective");
  }
  const double sqrtN = std::sqrt(N);
  const double support = cutoff.radius2 / sqrtN;
  if (support > chart.rho * (1.0 + 1e-12)) {
    throw GeometryError("profile support " + std::to_string(support) + " exceeds chart radius " +
                        std::to_string(chart.rho) + "; need N >= " +
                        std::to_string(std::pow(cutoff.radius2 / chart.rho, 2)));
  }
  PhysicalField out(geometry);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec4 d = torus_displacement(geometry, chart.center, out.point(i));
    const double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3]);
    if (r >= chart.rho || r >= support) continue;
    out[i] = N * cutoff_radial(cutoff, sqrtN * r) * phi.value(N * r);
  }
  return out;
}

SpectralField translate_modulate(const SpectralField& spec, double t0, const Vec4& x0) {
  return spectral_shift(free_propagate(spec, -t0), x0);
}

PhysicalField translate_modulate(const PhysicalField& field, double t0, const Vec4& x0) {
  return inverse_transform(translate_modulate(forward_transform(field), t0, x0));
}

Frame Frame::geometric(double N0, double ratio, double t_scale, double t_power, const Vec4& x0, const Vec4& x_rate,
                       double x_power) {
  if (!(N0 >= 1.0) || !(ratio >= 1.0)) throw DomainError("frame needs N0 >= 1 and ratio >= 1");
  return Frame([=](int k) {
    FrameElement e;
    e.N = N0 * std::pow(ratio, k);
    e.t = t_scale * std::pow(static_cast<double>(k), t_power) / (e.N * e.N);
    for (int i = 0; i < kDim; ++i) e.x[i] = x0[i] + x_rate[i] * std::pow(static_cast<double>(k), x_power) / e.N;
    return e;
  });
}

Frame Frame::explicit_list(std::vector<FrameElement> list) {
  if (list.empty()) throw DomainError("explicit frame list is empty");
  return Frame([list = std::move(list)](int k) {
    const std::size_t i = static_cast<std::size_t>(std::clamp(k, 1, static_cast<int>(list.size())) - 1);
    return list[i];
  });
}

std::vector<FrameElement> Frame::prefix(int length) const {
  std::vector<FrameElement> out;
  for (int k = 1; k <= length; ++k) out.push_back(at(k));
  return out;
}

FrameComparison frames_orthogonal(const Frame& a, const Frame& b, int prefix_len, double threshold,
                                  const TorusGeometry& geometry) {
  if (prefix_len < 8) throw DomainError("frame comparison needs a prefix of at least 8 elements");
  FrameComparison out;
  for (int k = 1; k <= prefix_len; ++k) {
    const FrameElement e = a.at(k), f = b.at(k);
    out.trace.push_back(std::abs(std::log(e.N / f.N)) + e.N * e.N * std::abs(e.t - f.t) +
                        e.N * torus_distance(geometry, e.x, f.x));
  }
  bool nondecreasing = true;
  for (std::size_t k = out.trace.size() / 2 + 1; k < out.trace.size(); ++k) {
    if (out.trace[k] < out.trace[k - 1]) nondecreasing = false;
  }
  out.orthogonal = out.trace.back() > threshold && nondecreasing;
  out.equivalent = !out.orthogonal;
  return out;
}

cplx profile_inner_h1(const SpectralField& f, const SpectralField& g) { return h1_inner(f, g); }

cplx profile_inner_h1(const PhysicalField& f, const PhysicalField& g) {
  return h1_inner(forward_transform(f), forward_transform(g));
}

cplx kernel_K_M(int M, const Vec4& x, double t, const CutoffProfile& cutoff) {
  if (M < 1) throw DomainError("kernel order M must be >= 1");
  const int R = 2 * M;
  const std::int64_t R2 = static_cast<std::int64_t>(R) * R;
  cplx sum{};
  for (int a = -R; a <= R; ++a)
    for (int b = -R; b <= R; ++b)
      for (int c = -R; c <= R; ++c)
        for (int d = -R; d <= R; ++d) {
          const std::int64_t q = static_cast<std::int64_t>(a) * a + b * b + c * c + d * d;
          if (q > R2) continue;
          const double w = cutoff_radial(cutoff, std::sqrt(static_cast<double>(q)) / M);
          if (w == 0.0) continue;
          const double phase = t * static_cast<double>(q) + x[0] * a + x[1] * b + x[2] * c + x[3] * d;
          sum += w * std::polar(1.0, -phase);
        }
  return sum;
}

namespace {

// |K_M| on the grid x_j = 2 pi j / G + offset (offset equal on every axis), by one FFT.
double kernel_grid_sup(int M, double t, double offset, const CutoffProfile& cutoff, Vec4& argmax) {
  const int G = 4 * M;
  const Index4 grid{G, G, G, G};
  const std::int64_t qmax = 4LL * M * M;
  std::vector<double> weight(static_cast<std::size_t>(4 * G * G / 4 + 1), 0.0);
  std::vector<cplx> phase(weight.size());
  for (std::size_t q = 0; q < weight.size(); ++q) {
    if (static_cast<std::int64_t>(q) < qmax) weight[q] = cutoff_radial(cutoff, std::sqrt(static_cast<double>(q)) / M);
    phase[q] = std::polar(1.0, -t * static_cast<double>(q));
  }
  std::vector<cplx> shift(G);
  for (int k = 0; k < G; ++k) shift[k] = std::polar(1.0, -offset * frequency_index(k, G));
  ComplexArray data(static_cast<std::size_t>(G) * G * G * G);
  std::size_t idx = 0;
  for (int a = 0; a < G; ++a) {
    const int na = frequency_index(a, G);
    for (int b = 0; b < G; ++b) {
      const int nb = frequency_index(b, G);
      for (int c = 0; c < G; ++c) {
        const int nc = frequency_index(c, G);
        for (int d = 0; d < G; ++d, ++idx) {
          const int nd = frequency_index(d, G);
          const std::size_t q = static_cast<std::size_t>(na * na + nb * nb + nc * nc + nd * nd);
          const double w = q < weight.size() ? weight[q] : 0.0;
          data[idx] = w == 0.0 ? cplx{} : w * phase[q] * shift[a] * shift[b] * shift[c] * shift[d];
        }
      }
    }
  }
  fft_forward_inplace(grid, data);
  double best = -1.0;
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double m = std::abs(data[i]);
    if (m > best) {
      best = m;
      best_idx = i;
    }
  }
  for (int i = kDim - 1; i >= 0; --i) {
    argmax[i] = 2.0 * kPi * static_cast<double>(best_idx % G) / G + offset;
    best_idx /= G;
  }
  return best;
}

}  // namespace

KernelReport kernel_sup_bound_check(int M, double S, int time_samples, const CutoffProfile& cutoff) {
  if (M < 1) throw DomainError("kernel order M must be >= 1");
  if (!(S >= 1.0) || S > M) throw DomainError("kernel bound check requires 1 <= S <= M");
  if (time_samples < 1) throw DomainError("time_samples must be >= 1");
  KernelReport rep;
  rep.M = M;
  rep.S = S;
  rep.space_grid = 4 * M;
  const double t0 = S / (static_cast<double>(M) * M), t1 = 1.0 / S;
  // S = M collapses the window to the single time 1/M.
  const int nt = t1 > t0 ? time_samples : 1;
  rep.time_samples = nt;
  rep.origin_value = kernel_K_M(M, {0.0, 0.0, 0.0, 0.0}, 0.0, cutoff).real();
  auto time_at = [&](int j, int n) { return n == 1 ? t0 : t0 + (t1 - t0) * j / (n - 1); };
  for (int j = 0; j < nt; ++j) {
    Vec4 arg{};
    const double t = time_at(j, nt);
    const double v = kernel_grid_sup(M, t, 0.0, cutoff, arg);
    if (v > rep.sup) {
      rep.sup = v;
      rep.argmax_x = arg;
      rep.argmax_t = t;
    }
  }
  const int nt2 = nt == 1 ? 1 : 2 * nt - 1;
  const double half_cell = kPi / (4.0 * M);
  for (int j = 0; j < nt2; ++j) {
    Vec4 arg{};
    const double t = time_at(j, nt2);
    const double v = kernel_grid_sup(M, t, half_cell, cutoff, arg);
    if (v > rep.refined_sup) rep.refined_sup = v;
    if (v > rep.sup && v >= rep.refined_sup) {
      rep.argmax_x = arg;
      rep.argmax_t = t;
    }
  }
  const double m4 = std::pow(static_cast<double>(M), 4);
  rep.constant = std::max(rep.sup, rep.refined_sup) * S * S / m4;
  return rep;
}

namespace {

std::vector<double> graded_times(double a, double b, double first_step, int n) {
  // Geometric spacing from a (step first_step) up to b.
  std::vector<double> out{a};
  if (!(b > a)) return out;
  const double span = b - a;
  const double h0 = std::min(first_step, span / n);
  // Ratio q with h0 (q^n - 1) / (q - 1) = span, by bisection.
  double lo = 1.0 + 1e-12, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double q = 0.5 * (lo + hi);
    const double total = h0 * (std::pow(q, n) - 1.0) / (q - 1.0);
    (total < span ? lo : hi) = q;
  }
  double t = a, h = h0;
  for (int i = 1; i < n; ++i) {
    t += h;
    out.push_back(t);
    h *= lo;
  }
  out.push_back(b);
  return out;
}

ShellTable free_shell_table(const SpectralField& f, const std::vector<double>& times) {
  // One state at a time: fine grids times many samples would not fit in memory together.
  ShellTable table;
  table.times = times;
  for (double t : times) {
    ShellTable row = shell_table({t}, {free_propagate(f, t)});
    table.shells = std::move(row.shells);
    table.l4_fourth.push_back(std::move(row.l4_fourth.front()));
    table.linf.push_back(std::move(row.linf.front()));
  }
  return table;
}

}  // namespace

std::vector<ExtinctionPoint> run_extinction(const EuclideanProfile& phi, double N, const std::vector<double>& T_values,
                                            const TorusGeometry& geometry, const ExtinctionOptions& options) {
  for (double T : T_values) {
    if (!(T >= 1.0)) throw DomainError("extinction requires T >= 1");
    if (T / (N * N) > 1.0 / T * (1.0 + 1e-12)) throw DomainError("extinction window [T/N^2, 1/T] is inverted");
  }
  const SpectralField f = forward_transform(make_profile_on_torus(phi, N, geometry, ChartMap::for_geometry(geometry)));
  std::vector<ExtinctionPoint> out;
  const auto period = recurrence_period(geometry);
  if (period) {
    // On a cubic torus u(t + P) is a translate of u(t) for P = lambda^2 / (4 pi), so each
    // ||P_K u(t)||_4^4 is P-periodic. Sample one period, graded towards both refocusing ends.
    const double P = 0.5 * *period;
    const int n_side = std::max(4, options.samples_per_period / 3);
    const int n_mid = std::max(4, options.samples_per_period - 2 * n_side);
    const double first = 0.05 / (N * N);
    std::vector<double> times = graded_times(0.0, 0.25 * P, first, n_side);
    for (int i = 1; i < n_mid; ++i) times.push_back(0.25 * P + 0.5 * P * i / n_mid);
    std::vector<double> tail = graded_times(0.0, 0.25 * P, first, n_side);
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) times.push_back(P - *it);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    const ShellTable table = free_shell_table(f, times);
    std::vector<std::vector<double>> columns(table.shells.size());
    for (std::size_t k = 0; k < table.shells.size(); ++k)
      for (const auto& row : table.l4_fourth) columns[k].push_back(row[k]);
    for (double T : T_values) {
      ExtinctionPoint p{N, T, 0.0, {T / (N * N), 1.0 / T}, {}};
      double sum = 0.0;
      for (std::size_t k = 0; k < table.shells.size(); ++k) {
        const double K = static_cast<double>(table.shells[k]);
        const double v = p.window.length() > 0.0
                             ? K * K * integrate_periodic(times, columns[k], P, p.window.t_start, p.window.t_end)
                             : 0.0;
        p.shell_contributions[table.shells[k]] = v;
        sum += v;
      }
      p.z_value = std::pow(std::max(sum, 0.0), 0.25);
      out.push_back(p);
    }
    return out;
  }
  for (double T : T_values) {
    ExtinctionPoint p{N, T, 0.0, {T / (N * N), 1.0 / T}, {}};
    if (p.window.length() > 0.0) {
      const auto times = graded_times(p.window.t_start, p.window.t_end, 0.05 / (N * N), options.window_samples);
      const NormReport r = z_norm(free_shell_table(f, times), p.window);
      p.z_value = r.value;
      p.shell_contributions = r.shell_contributions;
    }
    out.push_back(p);
  }
  return out;
}

ExtinctionPoint run_extinction(const EuclideanProfile& phi, double N, double T, const TorusGeometry& geometry,
                               const ExtinctionOptions& options) {
  return run_extinction(phi, N, std::vector<double>{T}, geometry, options).front();
}

namespace {

double remainder_z(const SpectralField& R, const ExtractionOptions& opt) {
  if (opt.z_samples < 2) throw DomainError("z_samples must be >= 2");
  std::vector<double> times;
  for (int j = 0; j < opt.z_samples; ++j) {
    times.push_back(opt.z_window.t_start + opt.z_window.length() * j / (opt.z_samples - 1));
  }
  return z_norm(free_shell_table(R, times), opt.z_window).value;
}

PhysicalField window_field(const PhysicalField& v, const Vec4& center, double radius) {
  PhysicalField out(v.geometry());
  const CutoffProfile eta;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec4 d = torus_displacement(v.geometry(), center, v.point(i));
    const double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3]);
    const double w = cutoff_radial(eta, r / radius);
    if (w != 0.0) out[i] = w * v[i];
  }
  return out;
}

// Scale of the W-bubble with the same ratio sup|psi| / ||psi||_{Hdot1}: N W(0) / ||W||_{Hdot1}.
double scale_estimate(const PhysicalField& psi) {
  const double hd = hdot1_norm(forward_transform(psi));
  if (hd == 0.0) return 1.0;
  const double w_hdot1 = std::sqrt(32.0 * kPi * kPi / 3.0);
  return std::max(1.0, linf_norm(psi) * w_hdot1 / hd);
}

}  // namespace

ExtractionResult extract_bubbles(const PhysicalField& f, const ExtractionOptions& opt) {
  if (!f.all_finite()) throw DataError("non-finite field passed to extraction");
  if (opt.max_profiles < 0) throw DomainError("max_profiles must be >= 0");
  const TorusGeometry& g = f.geometry();
  const ChartMap chart = ChartMap::for_geometry(g);
  const SpectralField f_hat = forward_transform(f);
  ExtractionResult res;
  res.remainder = f_hat;
  res.remainder_z = remainder_z(res.remainder, opt);
  while (res.remainder_z >= opt.z_tolerance) {
    if (static_cast<int>(res.profiles.size()) >= opt.max_profiles) {
      res.complete = false;
      break;
    }
    ExtractedProfile best;
    double best_val = 0.0;
    for (double t : opt.candidate_times) {
      const SpectralField evolved = free_propagate(res.remainder, t);
      for (const DyadicShell& s : shells_for(g)) {
        const PhysicalField p = inverse_transform(lp_project(evolved, s));
        for (std::size_t i = 0; i < p.size(); ++i) {
          const double v = std::abs(p[i]) / static_cast<double>(s.N);
          if (v > best_val) {
            best_val = v;
            best.shell = s.N;
            best.t_star = t;
            best.x_star = p.point(i);
          }
        }
      }
    }
    if (best_val == 0.0) break;
    const PhysicalField v = inverse_transform(free_propagate(res.remainder, best.t_star));
    double radius = 0.5 * chart.rho;
    PhysicalField psi = window_field(v, best.x_star, radius);
    best.N_estimate = scale_estimate(psi);
    const double refined = std::min(2.0 / std::sqrt(best.N_estimate), 0.5 * chart.rho);
    if (refined != radius) {
      radius = refined;
      psi = window_field(v, best.x_star, radius);
      best.N_estimate = scale_estimate(psi);
    }
    best.window_radius = radius;
    best.field = free_propagate(forward_transform(psi), -best.t_star);
    res.remainder = res.remainder - best.field;
    res.profiles.push_back(std::move(best));
    res.remainder_z = remainder_z(res.remainder, opt);
  }

  const double f_l2 = std::pow(l2_norm(f_hat), 2), f_hd = std::pow(hdot1_norm(f_hat), 2), f_l4 = l4_fourth(f);
  double s_l2 = std::pow(l2_norm(res.remainder), 2), s_hd = std::pow(hdot1_norm(res.remainder), 2);
  double s_l4 = l4_fourth(inverse_transform(res.remainder));
  for (const auto& p : res.profiles) {
    s_l2 += std::pow(l2_norm(p.field), 2);
    s_hd += std::pow(hdot1_norm(p.field), 2);
    s_l4 += l4_fourth(inverse_transform(p.field));
  }
  res.residuals.l2 = f_l2 > 0.0 ? std::abs(f_l2 - s_l2) / f_l2 : 0.0;
  res.residuals.hdot1 = f_hd > 0.0 ? std::abs(f_hd - s_hd) / f_hd : 0.0;
  res.residuals.l4 = f_l4 > 0.0 ? std::abs(f_l4 - s_l4) / f_l4 : 0.0;
  return res;
}

}  // namespace tnls
