#pragma once

#include <vector>

namespace tnls::lab {

/// Ordinary least squares y = intercept + slope x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double rms_residual = 0.0;  // sqrt(mean residual^2)
  double r_squared = 0.0;
  std::size_t n = 0;
  std::vector<double> residuals;

  /// Lower end of the one-sided confidence bound on the slope (Student t, n - 2 dof).
  /// Returns -inf with fewer than three points.
  double slope_lower_bound(double confidence) const;
};

/// Throws DomainError with fewer than two points, mismatched sizes or constant x.
LinearFit ols(const std::vector<double>& x, const std::vector<double>& y);

/// OLS of log y on log x. Throws DomainError for non-positive entries.
LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tnls::lab
