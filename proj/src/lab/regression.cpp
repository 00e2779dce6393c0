#include "tnls/lab/regression.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "tnls/errors.hpp"

namespace tnls::lab {

double LinearFit::slope_lower_bound(double confidence) const {
  if (n < 3) return -std::numeric_limits<double>::infinity();
  const boost::math::students_t dist(static_cast<double>(n - 2));
  return slope - boost::math::quantile(dist, confidence) * slope_stderr;
}

LinearFit ols(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("regression inputs differ in length");
  if (x.size() < 2) throw DomainError("regression needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("regression abscissae are all equal");
  LinearFit f;
  f.n = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    f.residuals.push_back(r);
    sse += r * r;
  }
  f.rms_residual = std::sqrt(sse / n);
  f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  f.slope_stderr = x.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : std::numeric_limits<double>::infinity();
  return f;
}

LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("log-log fit needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  if (x.size() != y.size()) throw DomainError("regression inputs differ in length");
  return ols(lx, ly);
}

}  // namespace tnls::lab
