#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tnls/field.hpp"
#include "tnls/trajectory.hpp"

namespace tnls {

struct SobolevConstants {
  double W_hdot1_sq = 0.0;   // ||W||^2 in Hdot1(R^4)
  double W_l4_fourth = 0.0;  // ||W||^4 in L4(R^4), integrated separately
  double C4 = 0.0;
  double E_W = 0.0;
  double c_star = 0.0;
  double quadrature_error = 0.0;
  double tolerance = 0.0;

  double C4_fourth() const noexcept { return C4 * C4 * C4 * C4; }
  /// W_hdot1_sq C4^4 = 1, 4 E_W C4^4 = 1 and Hdot1^2 = L4^4, each to `rel_tol`.
  bool relations_hold(double rel_tol) const noexcept;
};

double mass(const SpectralField& spec);
double mass(const PhysicalField& field);
/// 1/2 ||grad u||^2 + mu/4 ||u||_4^4.
double energy(const PhysicalField& field, int mu);
double energy(const SpectralField& spec, const PhysicalField& field, int mu);

// Modified energies. With the default mu = -1 these are the focusing quantities
// E_* = 1/2 (||u||_{Hdot1}^2 + c_* ||u||_2^2) - 1/4 ||u||_4^4 and E_** = E_* + c_*^2 C4^4 ||u||_2^4 / 4.
// Passing mu = +1 flips the quartic sign, giving the conserved analogue for defocusing runs.
double modified_energy_star(const PhysicalField& field, const SobolevConstants& constants, int mu = -1);
double modified_energy_star_star(const PhysicalField& field, const SobolevConstants& constants, int mu = -1);
/// Same, from precomputed norms: hdot1^2, l2^2 and ||u||_4^4.
double modified_energy_star(double hdot1_sq, double l2_sq, double l4_fourth, const SobolevConstants& constants,
                            int mu = -1);
double modified_energy_star_star(double hdot1_sq, double l2_sq, double l4_fourth,
                                 const SobolevConstants& constants, int mu = -1);

/// W(x) = 1 / (1 + |x|^2 / 8).
double ground_state_value(const Vec4& x) noexcept;
double ground_state_radial(double r) noexcept;

struct GroundStateResidual {
  double max_abs_residual = 0.0;
  double at_radius = 0.0;
  std::size_t samples = 0;
};

/// Evaluates Delta W + W^3 with exact radial derivatives W'' + 3 W' / r.
GroundStateResidual verify_ground_state_equation(const std::vector<double>& radial_grid);

/// Radial quadrature over R^4 with surface measure 2 pi^2. c_star is left at 0.
/// Throws DomainError for tolerance <= 0 and NumericError if the error estimate stays above it.
SobolevConstants compute_sobolev_constants(double quadrature_tolerance = 1e-12);

/// 1 / (C4^2 vol^{1/2}): the constant-function lower bound for c_star.
double c_star_lower_bound(const TorusGeometry& geometry, const SobolevConstants& constants);
/// Lower bound times `safety`.
double default_c_star(const TorusGeometry& geometry, const SobolevConstants& constants, double safety = 1.05);
SobolevConstants with_c_star(SobolevConstants constants, double c_star);

/// Smallest c making ||f||_4^2 <= C4^2 (||f||_{Hdot1}^2 + c ||f||_2^2) for every nonzero trial,
/// never below c_star_lower_bound. Throws DomainError when no trial is nonzero.
double estimate_c_star(const TorusGeometry& geometry, const SobolevConstants& constants,
                       const std::vector<PhysicalField>& trials);

enum class TrappingVariant { star, star_star };

std::string to_string(TrappingVariant variant);

struct TrappingSample {
  double t = 0.0;
  double y = 0.0;            // ||f||_{H1*}^2 (star) or ||f||_{Hdot1}^2 (star_star)
  double energy = 0.0;       // E_* or E_**
  double coercivity = 0.0;   // left side of the coercivity inequality
  bool below_threshold = false;
  bool coercive = false;
  bool energy_bound = false;
  bool all() const noexcept { return below_threshold && coercive && energy_bound; }
};

struct TrappingReport {
  TrappingVariant variant = TrappingVariant::star;
  double delta0 = 0.0;
  std::optional<double> delta_bar;  // empty when a precondition failed
  bool preconditions_ok = false;
  std::string precondition_failure;  // which condition failed and by how much
  std::vector<TrappingSample> samples;
  std::optional<double> first_failure_time;
  double initial_norm_ratio = 0.0;    // sqrt(y) / ||W||
  double initial_energy_ratio = 0.0;  // energy / E_W

  bool passed() const noexcept { return preconditions_ok && delta_bar && !first_failure_time; }
};

inline constexpr double kDeltaBarCeiling = 0.999;

/// g1(y) = y/2 - C4^4 y^2 / 4.
double trapping_quadratic(double y, const SobolevConstants& constants) noexcept;

/// Margin d with g1((1 - d) ||W||^2) = level, found by bisection on the increasing branch of g1
/// and capped at kDeltaBarCeiling. Requires level < E_W.
double bisect_delta_bar(double level, const SobolevConstants& constants);

TrappingReport check_energy_trapping(const PhysicalField& field, const SobolevConstants& constants,
                                     TrappingVariant variant, double delta0);
/// Uses the recorded diagnostics (norms and energies) of every sample; c_star is taken from `constants`.
TrappingReport trapping_along_flow(const TrajectoryRecord& trajectory, const SobolevConstants& constants,
                                   TrappingVariant variant, double delta0);

}  // namespace tnls
