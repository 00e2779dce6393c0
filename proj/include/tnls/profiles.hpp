#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tnls/critical_norms.hpp"
#include "tnls/field.hpp"

namespace tnls {

enum class ProfileKind { ground_state, gaussian, radial_samples };

/// Radial profile phi on R^4 with cached Euclidean norms (infinite where the integral diverges).
class EuclideanProfile {
 public:
  /// W(r) = 1 / (1 + r^2 / 8), scaled by `amplitude`.
  static EuclideanProfile ground_state(double amplitude = 1.0);
  /// amplitude * exp(-r^2 / (2 width^2)).
  static EuclideanProfile gaussian(double amplitude = 1.0, double width = 1.0);
  /// Piecewise-linear interpolation of (radii, values); zero beyond the last radius, which must carry value 0.
  /// Radii must start at 0 and increase strictly. Throws DomainError otherwise.
  static EuclideanProfile radial_samples(std::vector<double> radii, std::vector<double> values);

  ProfileKind kind() const noexcept { return kind_; }
  std::string name() const;
  double value(double r) const noexcept;
  double derivative(double r) const noexcept;

  double hdot1() const noexcept { return hdot1_; }
  double l1() const noexcept { return l1_; }
  double l2() const noexcept { return l2_; }
  double l4() const noexcept { return l4_; }

 private:
  EuclideanProfile() = default;
  void compute_norms();

  ProfileKind kind_ = ProfileKind::ground_state;
  double amplitude_ = 1.0;
  double width_ = 1.0;
  std::vector<double> radii_, values_;
  double hdot1_ = 0.0, l1_ = 0.0, l2_ = 0.0, l4_ = 0.0;
};

/// Identity chart from the ball |x| < rho in R^4 onto a neighbourhood of `center` in the torus.
struct ChartMap {
  double rho = 1.0;
  Vec4 center{0.0, 0.0, 0.0, 0.0};

  /// rho = min(1, min(lambda) / 2).
  static ChartMap for_geometry(const TorusGeometry& geometry, const Vec4& center = {0.0, 0.0, 0.0, 0.0});
};

/// f_N(y) = N (eta(. / sqrt N) phi)(N Psi^{-1}(y)), zero outside the chart image.
/// Throws DomainError for N < 1 and GeometryError when the support 2 / sqrt(N) exceeds rho
/// or the chart is not injective on the torus.
PhysicalField make_profile_on_torus(const EuclideanProfile& phi, double N, const TorusGeometry& geometry,
                                    const ChartMap& chart, const CutoffProfile& cutoff = {});

/// Pi_{t0,x0} f = (e^{-i t0 Laplacian} f)(. - x0).
SpectralField translate_modulate(const SpectralField& spec, double t0, const Vec4& x0);
PhysicalField translate_modulate(const PhysicalField& field, double t0, const Vec4& x0);

struct FrameElement {
  double N = 1.0;
  double t = 0.0;
  Vec4 x{0.0, 0.0, 0.0, 0.0};
};

/// Concentration frame (N_k, t_k, x_k), k = 1, 2, ...
class Frame {
 public:
  using Generator = std::function<FrameElement(int)>;
  explicit Frame(Generator generator) : generator_(std::move(generator)) {}

  /// N_k = N0 r^k, t_k = t_scale k^t_power / N_k^2, x_k = x0 + x_rate k^x_power / N_k.
  static Frame geometric(double N0, double ratio, double t_scale = 0.0, double t_power = 0.0,
                         const Vec4& x0 = {0.0, 0.0, 0.0, 0.0}, const Vec4& x_rate = {0.0, 0.0, 0.0, 0.0},
                         double x_power = 0.0);
  /// Element k is list[k - 1]; k beyond the list repeats the last element.
  static Frame explicit_list(std::vector<FrameElement> list);

  FrameElement at(int k) const { return generator_(k); }
  std::vector<FrameElement> prefix(int length) const;

 private:
  Generator generator_;
};

struct FrameComparison {
  bool orthogonal = false;
  bool equivalent = true;
  std::vector<double> trace;  // |ln(N_k/M_k)| + N_k^2 |t_k - s_k| + N_k |x_k - y_k|, k = 1..prefix_len
};

/// Declares orthogonality when the last trace value exceeds the threshold and the trace is
/// nondecreasing over the last half of the prefix. Throws DomainError for prefix_len < 8.
FrameComparison frames_orthogonal(const Frame& a, const Frame& b, int prefix_len, double divergence_threshold,
                                  const TorusGeometry& geometry);

/// volume * sum_n (1 + |omega(n)|^2) f(n) conj(g(n)).
cplx profile_inner_h1(const SpectralField& f, const SpectralField& g);
cplx profile_inner_h1(const PhysicalField& f, const PhysicalField& g);

/// K_M(x, t) = sum_{xi in Z^4, |xi| <= 2M} e^{-i (t |xi|^2 + x . xi)} eta(|xi| / M) with x in [0, 2 pi)^4.
cplx kernel_K_M(int M, const Vec4& x, double t, const CutoffProfile& cutoff = {});

struct KernelReport {
  int M = 0;
  double S = 0.0;
  double origin_value = 0.0;
  double sup = 0.0;          // on the base sampling
  double refined_sup = 0.0;  // doubled time sampling, half-cell shifted spatial grid
  double constant = 0.0;     // max(sup, refined_sup) * S^2 / M^4
  Vec4 argmax_x{};
  double argmax_t = 0.0;
  int space_grid = 0;
  int time_samples = 0;
};

/// Samples |K_M| on a (4M)^4 spatial grid of [0, 2 pi)^4 at `time_samples` uniform times in
/// [S M^-2, 1/S], then again on a refined sampling. Throws DomainError unless 1 <= S <= M.
KernelReport kernel_sup_bound_check(int M, double S, int time_samples = 64, const CutoffProfile& cutoff = {});

struct ExtinctionOptions {
  int samples_per_period = 96;  // used when the geometry has a recurrence period
  int window_samples = 96;      // used otherwise
};

struct ExtinctionPoint {
  double N = 0.0;
  double T = 0.0;
  double z_value = 0.0;
  TimeWindow window;
  std::map<std::int64_t, double> shell_contributions;
};

/// Z-norm of e^{it Laplacian} f_N on [T N^-2, 1/T]. A zero-length window gives 0.
/// Throws DomainError for T < 1 or an inverted window.
ExtinctionPoint run_extinction(const EuclideanProfile& phi, double N, double T, const TorusGeometry& geometry,
                               const ExtinctionOptions& options = {});

/// Several T values for one N, sharing the sampled free evolution.
std::vector<ExtinctionPoint> run_extinction(const EuclideanProfile& phi, double N, const std::vector<double>& T_values,
                                            const TorusGeometry& geometry, const ExtinctionOptions& options = {});

struct ExtractionOptions {
  int max_profiles = 4;
  double z_tolerance = 1e-3;
  std::vector<double> candidate_times{0.0};
  TimeWindow z_window{0.0, 0.05};
  int z_samples = 9;
};

struct ExtractedProfile {
  std::int64_t shell = 1;  // shell attaining the concentration maximum
  double N_estimate = 0.0;
  double t_star = 0.0;
  Vec4 x_star{};
  double window_radius = 0.0;
  SpectralField field;
};

struct DecouplingResiduals {
  double l2 = 0.0;     // | ||f||_2^2 - sum ||psi||_2^2 - ||R||_2^2 | / ||f||_2^2
  double hdot1 = 0.0;  // same with ||grad .||_2^2
  double l4 = 0.0;     // | ||f||_4^4 - sum ||psi||_4^4 - ||R||_4^4 | / ||f||_4^4
};

struct ExtractionResult {
  std::vector<ExtractedProfile> profiles;
  SpectralField remainder;
  double remainder_z = 0.0;
  bool complete = true;
  DecouplingResiduals residuals;
};

/// Greedy bubble extraction driven by the maximum of N^{-1} |P_N e^{it Laplacian} R(x)|.
ExtractionResult extract_bubbles(const PhysicalField& f, const ExtractionOptions& options = {});

}  // namespace tnls
