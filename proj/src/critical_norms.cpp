#include "tnls/critical_norms.hpp"

#include <algorithm>
#include <cmath>

#include "tnls/errors.hpp"

namespace tnls {

namespace {

constexpr double kTimeTol = 1e-12;

void check_window_covered(const std::vector<double>& times, const TimeWindow& w) {
  if (times.empty()) throw DomainError("trajectory has no samples");
  if (!(w.t_end >= w.t_start)) throw DomainError("inverted time window");
  const double tol = kTimeTol * std::max(1.0, std::abs(w.t_end));
  if (w.t_start < times.front() - tol || w.t_end > times.back() + tol) {
    throw DomainError("window is not covered by the sampled times");
  }
}

}  // namespace

double integrate_linear(const std::vector<double>& times, const std::vector<double>& values, double a, double b) {
  if (b <= a) return 0.0;
  auto value_at = [&](double t) {
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times.begin());
    const double t0 = times[j - 1], t1 = times[j];
    const double s = (t - t0) / (t1 - t0);
    return (1.0 - s) * values[j - 1] + s * values[j];
  };
  double sum = 0.0;
  double prev_t = a, prev_v = value_at(a);
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (times[j] <= a) continue;
    if (times[j] >= b) break;
    sum += 0.5 * (times[j] - prev_t) * (prev_v + values[j]);
    prev_t = times[j];
    prev_v = values[j];
  }
  sum += 0.5 * (b - prev_t) * (prev_v + value_at(b));
  return sum;
}

double integrate_periodic(const std::vector<double>& times, const std::vector<double>& values, double period,
                          double a, double b) {
  if (!(period > 0.0)) throw DomainError("period must be positive");
  if (b <= a) return 0.0;
  auto primitive = [&](double t) {
    const double whole = std::floor(t / period);
    return whole * integrate_linear(times, values, 0.0, period) +
           integrate_linear(times, values, 0.0, t - whole * period);
  };
  return primitive(b) - primitive(a);
}


ShellTable shell_table(const std::vector<double>& times, const std::vector<SpectralField>& states) {
  if (times.size() != states.size()) throw DomainError("times and snapshots differ in length");
  ShellTable table;
  table.times = times;
  if (states.empty()) return table;
  for (const DyadicShell& s : shells_for(states.front().geometry())) table.shells.push_back(s.N);
  for (const SpectralField& st : states) {
    std::vector<double> l4, inf;
    for (std::int64_t N : table.shells) {
      const PhysicalField p = inverse_transform(lp_project(st, DyadicShell{N}));
      l4.push_back(l4_fourth(p));
      inf.push_back(linf_norm(p));
    }
    table.l4_fourth.push_back(std::move(l4));
    table.linf.push_back(std::move(inf));
  }
  return table;
}

ShellTable shell_table(const TrajectoryRecord& traj) {
  if (!traj.has_snapshots()) throw DomainError("trajectory has no snapshots");
  return shell_table(traj.times, traj.snapshots);
}

double spacetime_lp(const TrajectoryRecord& traj, double p, const TimeWindow& window) {
  if (!(p >= 1.0) || std::isinf(p)) throw DomainError("spacetime L^p requires finite p >= 1");
  if (!traj.has_snapshots()) throw DomainError("trajectory has no snapshots");
  check_window_covered(traj.times, window);
  std::vector<double> vals;
  vals.reserve(traj.snapshots.size());
  for (const SpectralField& s : traj.snapshots) vals.push_back(std::pow(lp_norm(inverse_transform(s), p), p));
  return std::pow(integrate_linear(traj.times, vals, window.t_start, window.t_end), 1.0 / p);
}

NormReport z_norm(const ShellTable& table, const TimeWindow& window) {
  check_window_covered(table.times, window);
  NormReport best;
  best.window = window;
  for (std::int64_t N : table.shells) best.shell_contributions[N] = 0.0;
  if (window.length() <= 0.0) return best;

  // Candidate left ends: the window start and every sample inside the window.
  std::vector<double> starts{window.t_start};
  for (double t : table.times) {
    if (t > window.t_start && t < window.t_end) starts.push_back(t);
  }
  std::vector<std::vector<double>> columns(table.shells.size());
  for (std::size_t k = 0; k < table.shells.size(); ++k) {
    for (const auto& row : table.l4_fourth) columns[k].push_back(row[k]);
  }
  double best_sum = -1.0;
  for (double a : starts) {
    double b = window.t_end;
    if (b - a > 1.0) {
      // Largest sample time not beyond a + 1.
      const auto it = std::upper_bound(table.times.begin(), table.times.end(), a + 1.0 + kTimeTol);
      if (it == table.times.begin()) continue;
      b = *(it - 1);
      if (!(b > a)) continue;
    }
    double sum = 0.0;
    std::vector<double> contrib(table.shells.size());
    for (std::size_t k = 0; k < table.shells.size(); ++k) {
      const double N = static_cast<double>(table.shells[k]);
      contrib[k] = N * N * integrate_linear(table.times, columns[k], a, b);
      sum += contrib[k];
    }
    if (sum > best_sum) {
      best_sum = sum;
      best.window = {a, b};
      for (std::size_t k = 0; k < table.shells.size(); ++k) best.shell_contributions[table.shells[k]] = contrib[k];
    }
    if (b >= window.t_end) break;  // later starts only shrink the window
  }
  if (best_sum < 0.0) throw DomainError("no valid subwindow of length <= 1");
  best.value = std::pow(best_sum, 0.25);
  return best;
}

NormReport z_norm(const TrajectoryRecord& traj, const TimeWindow& window) { return z_norm(shell_table(traj), window); }

double z_prime(double z, double x1) noexcept { return std::pow(z, 0.75) * std::pow(x1, 0.25); }

double z_prime(const TrajectoryRecord& traj, const TimeWindow& window) {
  return z_prime(z_norm(traj, window).value, x1_proxy(traj));
}

double discrete_v2_norm(const std::vector<cplx>& v) {
  if (v.empty()) throw DomainError("V2 variation of an empty sequence");
  std::vector<double> best(v.size(), 0.0);
  double top = 0.0;
  for (std::size_t j = 1; j < v.size(); ++j) {
    double b = 0.0;
    for (std::size_t i = 0; i < j; ++i) b = std::max(b, best[i] + std::norm(v[j] - v[i]));
    best[j] = b;
    top = std::max(top, b);
  }
  return std::sqrt(top);
}

double y1_proxy(const TrajectoryRecord& traj) {
  if (!traj.has_snapshots() || traj.snapshots.size() < 8) throw DomainError("y1_proxy needs at least 8 snapshots");
  const TorusGeometry& g = traj.geometry;
  const std::size_t L = traj.snapshots.size();
  const LatticeTables t(g);
  const auto& grid = g.grid();
  double total = 0.0;
  std::vector<cplx> track(L);
  std::size_t idx = 0;
  for (int a = 0; a < grid[0]; ++a)
    for (int b = 0; b < grid[1]; ++b)
      for (int c = 0; c < grid[2]; ++c)
        for (int d = 0; d < grid[3]; ++d, ++idx) {
          const double w2 = t.omega_sq[0][a] + t.omega_sq[1][b] + t.omega_sq[2][c] + t.omega_sq[3][d];
          bool nonzero = false;
          for (std::size_t j = 0; j < L; ++j) {
            const cplx z = traj.snapshots[j][idx];
            nonzero = nonzero || z != cplx{};
            track[j] = std::polar(1.0, w2 * traj.times[j]) * z;
          }
          if (!nonzero) continue;
          const double v = discrete_v2_norm(track);
          total += (1.0 + w2) * v * v;
        }
  return std::sqrt(total * g.volume());
}

double x1_proxy(const TrajectoryRecord& traj) {
  double sup = 0.0;
  for (const SpectralField& s : traj.snapshots) sup = std::max(sup, h1_norm(s));
  return std::max(sup, y1_proxy(traj));
}

double concentration_sup(const ShellTable& table, const TimeWindow& window) {
  check_window_covered(table.times, window);
  double sup = 0.0;
  const double tol = kTimeTol * std::max(1.0, std::abs(window.t_end));
  for (std::size_t j = 0; j < table.times.size(); ++j) {
    if (table.times[j] < window.t_start - tol || table.times[j] > window.t_end + tol) continue;
    for (std::size_t k = 0; k < table.shells.size(); ++k) {
      sup = std::max(sup, table.linf[j][k] / static_cast<double>(table.shells[k]));
    }
  }
  return sup;
}

}  // namespace tnls
