#pragma once

#include <string>
#include <vector>

#include "tnls/field.hpp"

namespace tnls {

/// Closed time interval [t_start, t_end].
struct TimeWindow {
  double t_start = 0.0;
  double t_end = 0.0;
  double length() const noexcept { return t_end - t_start; }
};

enum class HaltReason { completed, blowup_threshold, non_finite };

std::string to_string(HaltReason reason);

/// Per-sample quantities recorded during an evolution run.
struct Diagnostics {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double e_star = 0.0;
  double e_star_star = 0.0;
  double hdot1 = 0.0;
  double h1_star = 0.0;
  double l4_fourth = 0.0;
};

struct TrajectoryRecord {
  TorusGeometry geometry;
  int mu = 0;
  double c_star = 0.0;
  std::vector<double> times;
  std::vector<SpectralField> snapshots;  // empty, or one per entry of `times`
  std::vector<Diagnostics> diagnostics;  // one per entry of `times`
  HaltReason halt_reason = HaltReason::completed;

  bool has_snapshots() const noexcept { return !snapshots.empty() && snapshots.size() == times.size(); }
};

}  // namespace tnls
