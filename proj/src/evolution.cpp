#include "tnls/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tnls/errors.hpp"

namespace tnls {

std::string to_string(Dealias dealias) { return dealias == Dealias::pad3_2 ? "pad3_2" : "none"; }

void EvolutionParams::validate() const {
  if (mu < -1 || mu > 1) throw DomainError("mu must be -1, 0 or 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be positive");
  if (dt > t_end * (1.0 + 1e-12)) throw DomainError("dt must not exceed t_end");
  if (snapshot_stride < 1) throw DomainError("snapshot_stride must be >= 1");
  if (blowup_threshold && !(*blowup_threshold > 0.0)) throw DomainError("blowup_threshold must be positive");
}

namespace {

void apply_free(const LatticeTables& t, const Index4& g, ComplexArray& c, double time) {
  std::array<std::vector<cplx>, kDim> ph;
  for (int ax = 0; ax < kDim; ++ax) {
    ph[ax].resize(g[ax]);
    for (int k = 0; k < g[ax]; ++k) ph[ax][k] = std::polar(1.0, -t.omega_sq[ax][k] * time);
  }
  std::size_t idx = 0;
  for (int a = 0; a < g[0]; ++a)
    for (int b = 0; b < g[1]; ++b) {
      const cplx pab = ph[0][a] * ph[1][b];
      for (int cc = 0; cc < g[2]; ++cc) {
        const cplx pabc = pab * ph[2][cc];
        for (int d = 0; d < g[3]; ++d) c[idx++] *= pabc * ph[3][d];
      }
    }
}

void check_mu(int mu) {
  if (mu < -1 || mu > 1) throw DomainError("mu must be -1, 0 or 1");
}

}  // namespace

SpectralField free_propagate(const SpectralField& spec, double t) {
  SpectralField out = spec;
  if (t == 0.0) return out;
  apply_free(LatticeTables(spec.geometry()), spec.geometry().grid(), out.coefficients(), t);
  return out;
}

PhysicalField nonlinear_phase_step(const PhysicalField& field, double dt, int mu) {
  check_mu(mu);
  if (!field.all_finite()) throw DataError("non-finite samples in nonlinear step");
  PhysicalField out = field;
  if (mu == 0) return out;
  for (cplx& z : out.samples()) z *= std::polar(1.0, -mu * std::norm(z) * dt);
  return out;
}

Index4 dealias_grid(const Index4& grid, Dealias dealias) {
  if (dealias == Dealias::none) return grid;
  Index4 p{};
  for (int i = 0; i < kDim; ++i) {
    const int q = (3 * grid[i] + 1) / 2;
    p[i] = q % 2 == 0 ? q : q + 1;
  }
  return p;
}

SpectralField cubic_term(const SpectralField& spec, Dealias dealias) {
  const Index4 g = spec.geometry().grid();
  const Index4 w = dealias_grid(g, dealias);
  PhysicalField u = inverse_transform(dealias == Dealias::none ? spec : resample(spec, w));
  for (cplx& z : u.samples()) z *= std::norm(z);
  const SpectralField f = forward_transform(u);
  return dealias == Dealias::none ? f : resample(f, g);
}

Stepper::Stepper(const TorusGeometry& geometry, int mu, Dealias dealias)
    : geometry_(geometry), tables_(geometry), mu_(mu), dealias_(dealias),
      work_grid_(dealias_grid(geometry.grid(), dealias)) {
  check_mu(mu);
}

void Stepper::free_step(ComplexArray& c, double t) const { apply_free(tables_, geometry_.grid(), c, t); }

void Stepper::nonlinear_step(ComplexArray& c, double dt) const {
  if (mu_ == 0) return;
  SpectralField s(geometry_, std::move(c));
  if (dealias_ == Dealias::none) {
    PhysicalField u = inverse_transform(s);
    for (cplx& z : u.samples()) z *= std::polar(1.0, -mu_ * std::norm(z) * dt);
    c = std::move(forward_transform(u).coefficients());
    return;
  }
  PhysicalField u = inverse_transform(resample(s, work_grid_));
  for (cplx& z : u.samples()) z *= std::polar(1.0, -mu_ * std::norm(z) * dt);
  c = std::move(resample(forward_transform(u), geometry_.grid()).coefficients());
}

void Stepper::strang_step(ComplexArray& c, double dt) const {
  free_step(c, 0.5 * dt);
  nonlinear_step(c, dt);
  free_step(c, 0.5 * dt);
}

SpectralField strang_step(const SpectralField& state, double dt, const EvolutionParams& params) {
  check_mu(params.mu);
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!state.all_finite()) throw DataError("non-finite state");
  Stepper stepper(state.geometry(), params.mu, params.dealias);
  SpectralField out = state;
  stepper.strang_step(out.coefficients(), dt);
  return out;
}

Diagnostics diagnose(const SpectralField& spec, double t, int mu, const SobolevConstants& k) {
  const PhysicalField u = inverse_transform(spec);
  const double hd = hdot1_norm(spec);
  const double l2 = l2_norm(spec);
  Diagnostics d;
  d.t = t;
  d.mass = l2 * l2;
  d.hdot1 = hd;
  d.l4_fourth = l4_fourth(u);
  d.energy = 0.5 * hd * hd + 0.25 * mu * d.l4_fourth;
  d.e_star = modified_energy_star(hd * hd, d.mass, d.l4_fourth, k, mu);
  d.e_star_star = modified_energy_star_star(hd * hd, d.mass, d.l4_fourth, k, mu);
  d.h1_star = std::sqrt(hd * hd + k.c_star * d.mass);
  return d;
}

TrajectoryRecord evolve(const SpectralField& u0, const EvolutionParams& params, const SobolevConstants& k) {
  params.validate();
  if (!u0.all_finite()) throw DataError("initial data is not finite");
  const double h1_0 = h1_norm(u0);
  const double threshold = params.blowup_threshold.value_or(
      h1_0 > 0.0 ? 10.0 * h1_0 : std::numeric_limits<double>::infinity());
  if (!(h1_0 < threshold)) throw DomainError("initial H1 norm is not below the blow-up threshold");

  const auto steps = static_cast<long long>(std::ceil(params.t_end / params.dt - 1e-9));
  const double dt = params.t_end / static_cast<double>(steps);

  TrajectoryRecord rec;
  rec.geometry = u0.geometry();
  rec.mu = params.mu;
  rec.c_star = k.c_star;
  auto record = [&](const SpectralField& s, double t) {
    rec.times.push_back(t);
    rec.diagnostics.push_back(diagnose(s, t, params.mu, k));
    if (params.record_snapshots) rec.snapshots.push_back(s);
  };

  Stepper stepper(u0.geometry(), params.mu, params.dealias);
  SpectralField state = u0;
  record(state, 0.0);
  bool owe_half = false;
  for (long long step = 1; step <= steps; ++step) {
    stepper.free_step(state.coefficients(), owe_half ? dt : 0.5 * dt);
    stepper.nonlinear_step(state.coefficients(), dt);
    owe_half = true;
    const double t = step == steps ? params.t_end : static_cast<double>(step) * dt;
    const double hd = hdot1_norm(state);
    if (!std::isfinite(hd)) {
      rec.halt_reason = HaltReason::non_finite;
      return rec;
    }
    const bool blown = hd > threshold;
    if (blown || step % params.snapshot_stride == 0 || step == steps) {
      stepper.free_step(state.coefficients(), 0.5 * dt);
      owe_half = false;
      record(state, t);
    }
    if (blown) {
      rec.halt_reason = HaltReason::blowup_threshold;
      return rec;
    }
  }
  rec.halt_reason = HaltReason::completed;
  return rec;
}

TrajectoryRecord evolve(const PhysicalField& u0, const EvolutionParams& params, const SobolevConstants& k) {
  return evolve(forward_transform(u0), params, k);
}

std::vector<SpectralField> duhamel_cumulative(const std::vector<double>& times,
                                              const std::vector<SpectralField>& states, Dealias dealias) {
  if (times.size() != states.size() || times.empty()) throw DomainError("times and states must match");
  for (std::size_t j = 1; j < times.size(); ++j) {
    if (!(times[j] > times[j - 1])) throw DomainError("sample times must increase");
  }
  std::vector<SpectralField> out;
  out.reserve(times.size());
  SpectralField acc(states.front().geometry());
  SpectralField prev = free_propagate(cubic_term(states.front(), dealias), -times.front());
  out.push_back(acc);
  for (std::size_t j = 1; j < times.size(); ++j) {
    SpectralField cur = free_propagate(cubic_term(states[j], dealias), -times[j]);
    const double h = 0.5 * (times[j] - times[j - 1]);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += h * (prev[i] + cur[i]);
    out.push_back(free_propagate(acc, times[j]));
    prev = std::move(cur);
  }
  return out;
}

SpectralField duhamel_integral(const TrajectoryRecord& traj, const TimeWindow& window, Dealias dealias) {
  if (!(window.t_end > window.t_start)) throw DomainError("empty time window");
  if (!traj.has_snapshots()) throw DomainError("trajectory has no snapshots");
  auto find = [&](double t) -> std::size_t {
    const double tol = 1e-12 * std::max(1.0, std::abs(t));
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
      if (std::abs(traj.times[j] - t) <= tol) return j;
    }
    throw DomainError("window endpoint " + std::to_string(t) + " is not a sample time");
  };
  const std::size_t a = find(window.t_start), b = find(window.t_end);
  SpectralField acc(traj.geometry);
  SpectralField prev = free_propagate(cubic_term(traj.snapshots[a], dealias), -traj.times[a]);
  for (std::size_t j = a + 1; j <= b; ++j) {
    SpectralField cur = free_propagate(cubic_term(traj.snapshots[j], dealias), -traj.times[j]);
    const double h = 0.5 * (traj.times[j] - traj.times[j - 1]);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += h * (prev[i] + cur[i]);
    prev = std::move(cur);
  }
  return free_propagate(acc, window.t_end);
}

PicardResult picard_iterate(const SpectralField& u0, const TimeWindow& window, int iters, int mu, int samples,
                            Dealias dealias) {
  check_mu(mu);
  if (!(window.t_end > window.t_start)) throw DomainError("empty time window");
  if (window.length() > 1.0 + 1e-12) throw DomainError("window length must not exceed 1");
  if (iters < 1) throw DomainError("iters must be >= 1");
  if (samples < 2) throw DomainError("at least two time samples are required");

  PicardResult res;
  for (int j = 0; j <= samples; ++j) {
    res.times.push_back(window.t_start + window.length() * static_cast<double>(j) / samples);
  }
  res.times.back() = window.t_end;
  std::vector<SpectralField> linear;
  linear.reserve(res.times.size());
  for (double t : res.times) linear.push_back(free_propagate(u0, t - window.t_start));

  std::vector<SpectralField> current = linear;
  res.final_values.push_back(current.back());
  const cplx coef(0.0, -static_cast<double>(mu));
  for (int k = 0; k < iters; ++k) {
    const std::vector<SpectralField> duh = duhamel_cumulative(res.times, current, dealias);
    std::vector<SpectralField> next;
    next.reserve(current.size());
    double sup = 0.0;
    for (std::size_t j = 0; j < current.size(); ++j) {
      SpectralField v = linear[j];
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += coef * duh[j][i];
      sup = std::max(sup, h1_norm(v - current[j]));
      next.push_back(std::move(v));
    }
    res.sup_h1_distance.push_back(sup);
    current = std::move(next);
    res.final_values.push_back(current.back());
  }
  res.last_iterate = std::move(current);
  return res;
}

double duhamel_residual(const TrajectoryRecord& traj, Dealias dealias) {
  if (!traj.has_snapshots()) throw DomainError("trajectory has no snapshots");
  const std::vector<SpectralField> duh = duhamel_cumulative(traj.times, traj.snapshots, dealias);
  const cplx coef(0.0, -static_cast<double>(traj.mu));
  double sup = 0.0;
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    SpectralField expected = free_propagate(traj.snapshots.front(), traj.times[j] - traj.times.front());
    for (std::size_t i = 0; i < expected.size(); ++i) expected[i] += coef * duh[j][i];
    sup = std::max(sup, h1_norm(traj.snapshots[j] - expected));
  }
  return sup;
}

}  // namespace tnls
