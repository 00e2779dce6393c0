#pragma once

#include <optional>
#include <vector>

#include "tnls/field.hpp"
#include "tnls/invariants.hpp"
#include "tnls/trajectory.hpp"

namespace tnls {

enum class Dealias { pad3_2, none };

std::string to_string(Dealias dealias);

struct EvolutionParams {
  int mu = 0;
  double dt = 1e-3;
  double t_end = 1e-3;
  int snapshot_stride = 1;
  Dealias dealias = Dealias::pad3_2;
  /// Hdot1 level that halts the run; unset means 10 x the initial H1 norm.
  std::optional<double> blowup_threshold;
  bool record_snapshots = true;

  /// Throws DomainError when mu is not in {-1, 0, 1}, dt <= 0, dt > t_end, stride < 1 or threshold <= 0.
  void validate() const;
};

/// e^{it Laplacian}: c(n) -> e^{-i |omega(n)|^2 t} c(n).
SpectralField free_propagate(const SpectralField& spec, double t);

/// Exact flow of i u_t = mu |u|^2 u over dt: u -> u e^{-i mu |u|^2 dt}. Throws DataError on non-finite input.
PhysicalField nonlinear_phase_step(const PhysicalField& field, double dt, int mu);

/// Grid on which the cubic term is evaluated (3/2 padding, rounded up to even sizes).
Index4 dealias_grid(const Index4& grid, Dealias dealias);

/// Spectral coefficients of |u|^2 u, evaluated on the dealiasing grid and truncated back.
SpectralField cubic_term(const SpectralField& spec, Dealias dealias);

/// Reusable split-step integrator for one geometry.
class Stepper {
 public:
  Stepper(const TorusGeometry& geometry, int mu, Dealias dealias);

  void free_step(ComplexArray& coefficients, double t) const;
  void nonlinear_step(ComplexArray& coefficients, double dt) const;
  /// Half free step, full nonlinear step, half free step.
  void strang_step(ComplexArray& coefficients, double dt) const;

  const TorusGeometry& geometry() const noexcept { return geometry_; }

 private:
  TorusGeometry geometry_;
  LatticeTables tables_;
  int mu_;
  Dealias dealias_;
  Index4 work_grid_;
};

SpectralField strang_step(const SpectralField& state, double dt, const EvolutionParams& params);

/// Runs the Strang integrator to t_end. Consecutive half free steps between samples are merged.
/// Samples are taken at t = 0, every `snapshot_stride` steps and at the final step; diagnostics use
/// constants.c_star and the run's mu for the quartic sign of the modified energies.
TrajectoryRecord evolve(const SpectralField& u0, const EvolutionParams& params, const SobolevConstants& constants);
TrajectoryRecord evolve(const PhysicalField& u0, const EvolutionParams& params, const SobolevConstants& constants);

Diagnostics diagnose(const SpectralField& spec, double t, int mu, const SobolevConstants& constants);

/// Integral over the window of e^{i(t_end - s) Laplacian} |u(s)|^2 u(s) ds by the composite trapezoid
/// rule on the stored snapshots inside the window (endpoints must be sample times).
/// Throws DomainError for an empty window or one not covered by snapshots.
SpectralField duhamel_integral(const TrajectoryRecord& trajectory, const TimeWindow& window,
                               Dealias dealias = Dealias::pad3_2);

/// Same integral evaluated cumulatively: entry j integrates from times[0] to times[j].
std::vector<SpectralField> duhamel_cumulative(const std::vector<double>& times,
                                              const std::vector<SpectralField>& states, Dealias dealias);

struct PicardResult {
  std::vector<double> times;
  std::vector<SpectralField> final_values;  // iterate k evaluated at the window end, k = 0..iters
  std::vector<double> sup_h1_distance;      // sup_t ||Phi^{k+1} - Phi^k||_{H1}, k = 0..iters-1
  std::vector<SpectralField> last_iterate;  // full time series of the final iterate
};

/// Iterates Phi(v) = e^{i(t - t0) Laplacian} u0 - i mu int_{t0}^t e^{i(t - s) Laplacian} |v|^2 v ds,
/// starting from the free solution, on `samples` + 1 uniform times across the window.
/// Throws DomainError for an empty window, a window longer than 1, iters < 1 or samples < 2.
PicardResult picard_iterate(const SpectralField& u0, const TimeWindow& window, int iters, int mu, int samples,
                            Dealias dealias = Dealias::pad3_2);

/// sup over snapshots of || u(t) - [e^{i(t-t0)Lap} u(t0) - i mu Duhamel(t)] ||_{H1}.
double duhamel_residual(const TrajectoryRecord& trajectory, Dealias dealias = Dealias::pad3_2);

}  // namespace tnls
