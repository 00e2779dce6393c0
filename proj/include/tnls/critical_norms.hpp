#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "tnls/field.hpp"
#include "tnls/trajectory.hpp"

namespace tnls {

struct NormReport {
  double value = 0.0;
  std::map<std::int64_t, double> shell_contributions;  // N -> N^2 ||P_N u||_{L4(J x T^4)}^4
  TimeWindow window;                                    // attaining subwindow
};

/// Spatial ||P_N u(t)||_4^4 and sup |P_N u(t)| for every snapshot and every shell of the grid.
struct ShellTable {
  std::vector<double> times;
  std::vector<std::int64_t> shells;
  std::vector<std::vector<double>> l4_fourth;  // [time][shell]
  std::vector<std::vector<double>> linf;       // [time][shell]
};

ShellTable shell_table(const TrajectoryRecord& trajectory);
ShellTable shell_table(const std::vector<double>& times, const std::vector<SpectralField>& states);

/// Trapezoid integral over [a, b] of the piecewise-linear interpolant of (times, values),
/// held constant outside the sampled range.
double integrate_linear(const std::vector<double>& times, const std::vector<double>& values, double a, double b);
/// Same for a period-periodic integrand sampled on [0, period] (both ends included).
double integrate_periodic(const std::vector<double>& times, const std::vector<double>& values, double period,
                          double a, double b);

/// L^p over window x T^4: trapezoid in time of the spatial integrals, linearly interpolated at
/// window endpoints that fall between samples. Throws DomainError for p < 1 or a window outside the samples.
double spacetime_lp(const TrajectoryRecord& trajectory, double p, const TimeWindow& window);

/// sup over sample-aligned maximal subwindows J with |J| <= 1 of (sum_N N^2 ||P_N u||_{L4(J)}^4)^{1/4}.
/// A window of zero length gives 0; an inverted or uncovered window throws DomainError.
NormReport z_norm(const ShellTable& table, const TimeWindow& window);
NormReport z_norm(const TrajectoryRecord& trajectory, const TimeWindow& window);

double z_prime(double z, double x1_proxy) noexcept;
double z_prime(const TrajectoryRecord& trajectory, const TimeWindow& window);

/// sqrt of max over increasing index subsequences of sum |v_{i_j} - v_{i_{j-1}}|^2.
/// Throws DomainError on an empty sequence.
double discrete_v2_norm(const std::vector<cplx>& values);

/// sqrt(sum_n vol (1 + |omega(n)|^2) V2(track_n)^2) with track_n(t) = e^{i |omega(n)|^2 t} u(t)(n).
/// A proxy, not the atomic Y1 norm. Throws DomainError with fewer than 8 snapshots.
double y1_proxy(const TrajectoryRecord& trajectory);
/// max(sup_t ||u(t)||_{H1}, y1_proxy). A proxy, not the X1 norm.
double x1_proxy(const TrajectoryRecord& trajectory);

/// sup over shells and samples in the window of N^{-1} sup_x |P_N u(t, x)|.
double concentration_sup(const ShellTable& table, const TimeWindow& window);

}  // namespace tnls
