#include "tnls/invariants.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tnls/errors.hpp"

namespace tnls {

std::string to_string(HaltReason reason) {
  switch (reason) {
    case HaltReason::completed: return "completed";
    case HaltReason::blowup_threshold: return "blowup_threshold";
    case HaltReason::non_finite: return "non_finite";
  }
  return "unknown";
}

std::string to_string(TrappingVariant variant) {
  return variant == TrappingVariant::star ? "star" : "star_star";
}

bool SobolevConstants::relations_hold(double rel_tol) const noexcept {
  const double c4 = C4_fourth();
  return std::abs(W_hdot1_sq * c4 - 1.0) <= rel_tol && std::abs(4.0 * E_W * c4 - 1.0) <= rel_tol &&
         std::abs(W_l4_fourth / W_hdot1_sq - 1.0) <= rel_tol;
}

double mass(const SpectralField& spec) {
  const double n = l2_norm(spec);
  return n * n;
}

double mass(const PhysicalField& field) { return mass(forward_transform(field)); }

double energy(const SpectralField& spec, const PhysicalField& field, int mu) {
  const double hd = hdot1_norm(spec);
  return 0.5 * hd * hd + 0.25 * mu * l4_fourth(field);
}

double energy(const PhysicalField& field, int mu) { return energy(forward_transform(field), field, mu); }

double modified_energy_star(double hdot1_sq, double l2_sq, double l4_4, const SobolevConstants& k, int mu) {
  return 0.5 * (hdot1_sq + k.c_star * l2_sq) + 0.25 * mu * l4_4;
}

double modified_energy_star_star(double hdot1_sq, double l2_sq, double l4_4, const SobolevConstants& k, int mu) {
  return modified_energy_star(hdot1_sq, l2_sq, l4_4, k, mu) +
         0.25 * k.c_star * k.c_star * k.C4_fourth() * l2_sq * l2_sq;
}

double modified_energy_star(const PhysicalField& field, const SobolevConstants& k, int mu) {
  const SpectralField s = forward_transform(field);
  const double hd = hdot1_norm(s), l2 = l2_norm(s);
  return modified_energy_star(hd * hd, l2 * l2, l4_fourth(field), k, mu);
}

double modified_energy_star_star(const PhysicalField& field, const SobolevConstants& k, int mu) {
  const SpectralField s = forward_transform(field);
  const double hd = hdot1_norm(s), l2 = l2_norm(s);
  return modified_energy_star_star(hd * hd, l2 * l2, l4_fourth(field), k, mu);
}

double ground_state_radial(double r) noexcept { return 1.0 / (1.0 + r * r / 8.0); }

double ground_state_value(const Vec4& x) noexcept {
  return ground_state_radial(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]));
}

GroundStateResidual verify_ground_state_equation(const std::vector<double>& radial_grid) {
  GroundStateResidual out;
  for (double r : radial_grid) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("radial grid entries must be finite and >= 0");
    const double s = 1.0 + r * r / 8.0;
    const double s2 = s * s, s3 = s2 * s;
    const double w = 1.0 / s;
    const double d2 = -1.0 / (4.0 * s2) + r * r / (8.0 * s3);
    // 3 W'(r) / r with W' = -(r/4) s^-2; the r -> 0 limit is the same expression.
    const double d1_over_r = -3.0 / (4.0 * s2);
    const double residual = std::abs(d2 + d1_over_r + w * w * w);
    if (out.samples == 0 || residual > out.max_abs_residual) {
      out.max_abs_residual = residual;
      out.at_radius = r;
    }
    ++out.samples;
  }
  return out;
}

namespace {

struct RadialIntegral {
  double value = 0.0;
  double error = 0.0;
};

// Integrates f over [0, R] on dyadic pieces [0,1], [1,2], [2,4], ..., doubling R until the
// supplied analytic bound on the tail beyond R drops below tol * value.
template <class F, class Tail>
RadialIntegral radial_integral(F f, Tail tail_bound, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  RadialIntegral out;
  double a = 0.0, b = 1.0;
  for (int piece = 0; piece < 80; ++piece) {
    double err = 0.0;
    const double v = gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol * 0.1, &err);
    out.value += v;
    out.error += err;
    if (out.value > 0.0 && tail_bound(b) < tol * out.value) {
      out.error += tail_bound(b);
      return out;
    }
    a = b;
    b *= 2.0;
  }
  throw NumericError("radial quadrature did not converge");
}

}  // namespace

SobolevConstants compute_sobolev_constants(double tol) {
  if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  constexpr double sphere = 2.0 * kPi * kPi;  // surface measure of S^3
  auto hdot1_density = [](double r) {
    const double s = 1.0 + r * r / 8.0;
    return sphere * (r * r / 16.0) * r * r * r / (s * s * s * s);
  };
  auto l4_density = [](double r) {
    const double s = 1.0 + r * r / 8.0;
    return sphere * r * r * r / (s * s * s * s);
  };
  // For r > 0: (r^2/16) r^3 s^-4 <= 256 r^-3 and r^3 s^-4 <= 4096 r^-5.
  auto hdot1_tail = [](double R) { return sphere * 128.0 / (R * R); };
  auto l4_tail = [](double R) { return sphere * 1024.0 / (R * R * R * R); };

  const RadialIntegral hd = radial_integral(hdot1_density, hdot1_tail, tol);
  const RadialIntegral l4 = radial_integral(l4_density, l4_tail, tol);
  const double rel_err = std::max(hd.error / hd.value, l4.error / l4.value);
  if (!(rel_err <= 10.0 * tol)) throw NumericError("radial quadrature error estimate above tolerance");

  SobolevConstants k;
  k.W_hdot1_sq = hd.value;
  k.W_l4_fourth = l4.value;
  k.C4 = std::pow(hd.value, -0.25);
  k.E_W = 0.5 * hd.value - 0.25 * l4.value;
  k.quadrature_error = rel_err;
  k.tolerance = tol;
  return k;
}

double c_star_lower_bound(const TorusGeometry& geometry, const SobolevConstants& k) {
  return 1.0 / (k.C4 * k.C4 * std::sqrt(geometry.volume()));
}

double default_c_star(const TorusGeometry& geometry, const SobolevConstants& k, double safety) {
  return safety * c_star_lower_bound(geometry, k);
}

SobolevConstants with_c_star(SobolevConstants k, double c_star) {
  if (!(c_star > 0.0)) throw DomainError("c_star must be positive");
  k.c_star = c_star;
  return k;
}

double estimate_c_star(const TorusGeometry& geometry, const SobolevConstants& k,
                       const std::vector<PhysicalField>& trials) {
  double best = c_star_lower_bound(geometry, k);
  int used = 0;
  for (const PhysicalField& f : trials) {
    const SpectralField s = forward_transform(f);
    const double l2 = l2_norm(s);
    if (l2 == 0.0) continue;
    const double hd = hdot1_norm(s);
    const double l4sq = std::sqrt(l4_fourth(f));
    best = std::max(best, (l4sq / (k.C4 * k.C4) - hd * hd) / (l2 * l2));
    ++used;
  }
  if (used == 0) throw DomainError("trial family has no nonzero member");
  return best;
}

double trapping_quadratic(double y, const SobolevConstants& k) noexcept {
  return 0.5 * y - 0.25 * k.C4_fourth() * y * y;
}

double bisect_delta_bar(double level, const SobolevConstants& k) {
  if (!(level < k.E_W)) throw DomainError("energy level must lie below E_W");
  level = std::max(level, 0.0);
  // g1 increases on [0, ||W||^2] from 0 to E_W.
  double lo = 0.0, hi = k.W_hdot1_sq;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * k.W_hdot1_sq; ++it) {
    const double mid = 0.5 * (lo + hi);
    (trapping_quadratic(mid, k) < level ? lo : hi) = mid;
  }
  return std::min(kDeltaBarCeiling, 1.0 - hi / k.W_hdot1_sq);
}

namespace {

struct SampleNorms {
  double t, hdot1_sq, l2_sq, l4_4;
};

TrappingReport evaluate_trapping(const std::vector<SampleNorms>& samples, const SobolevConstants& k,
                                 TrappingVariant variant, double delta0) {
  if (!(delta0 > 0.0 && delta0 < 1.0)) throw DomainError("delta0 must lie in (0, 1)");
  if (!(k.c_star > 0.0)) throw DomainError("c_star must be set before checking trapping");
  if (samples.empty()) throw DomainError("no samples to check");
  TrappingReport rep;
  rep.variant = variant;
  rep.delta0 = delta0;

  const bool star = variant == TrappingVariant::star;
  auto y_of = [&](const SampleNorms& s) { return star ? s.hdot1_sq + k.c_star * s.l2_sq : s.hdot1_sq; };
  auto e_of = [&](const SampleNorms& s) {
    return star ? modified_energy_star(s.hdot1_sq, s.l2_sq, s.l4_4, k)
                : modified_energy_star_star(s.hdot1_sq, s.l2_sq, s.l4_4, k);
  };

  const double y0 = y_of(samples.front());
  const double e0 = e_of(samples.front());
  rep.initial_norm_ratio = std::sqrt(y0 / k.W_hdot1_sq);
  rep.initial_energy_ratio = e0 / k.E_W;
  const std::string tag = star ? "star hypothesis" : "star_star hypothesis";
  const std::string norm_name = star ? "||f||_{H1*}" : "||f||_{Hdot1}";
  const std::string energy_name = star ? "E_*" : "E_**";
  if (!(y0 < k.W_hdot1_sq)) {
    rep.precondition_failure = tag + ": " + norm_name + " / ||W|| = " + std::to_string(rep.initial_norm_ratio) +
                               " is not below 1";
    return rep;
  }
  if (!(e0 < (1.0 - delta0) * k.E_W)) {
    rep.precondition_failure = tag + ": " + energy_name + " / E_W = " + std::to_string(rep.initial_energy_ratio) +
                               " is not below 1 - delta0 = " + std::to_string(1.0 - delta0);
    return rep;
  }
  rep.preconditions_ok = true;

  // The margin is certified from the largest sampled energy; it is at least sqrt(delta0).
  double level = 0.0;
  for (const auto& s : samples) level = std::max(level, e_of(s));
  if (!(level < k.E_W)) {
    rep.precondition_failure = "sampled energy reached E_W along the flow";
    rep.first_failure_time = samples.front().t;
    return rep;
  }
  const double d = bisect_delta_bar(level, k);
  rep.delta_bar = d;

  for (const auto& s : samples) {
    TrappingSample ts;
    ts.t = s.t;
    ts.y = y_of(s);
    ts.energy = e_of(s);
    ts.below_threshold = ts.y < (1.0 - d) * k.W_hdot1_sq;
    if (star) {
      ts.coercivity = ts.y - s.l4_4;
    } else {
      ts.coercivity = ts.y - s.l4_4 + 2.0 * k.c_star * s.l2_sq + k.c_star * k.c_star * k.C4_fourth() * s.l2_sq * s.l2_sq;
    }
    ts.coercive = ts.coercivity >= d * ts.y;
    ts.energy_bound = ts.energy >= 0.25 * (1.0 + d) * ts.y;
    if (!ts.all() && !rep.first_failure_time) rep.first_failure_time = ts.t;
    rep.samples.push_back(ts);
  }
  return rep;
}

}  // namespace

TrappingReport check_energy_trapping(const PhysicalField& field, const SobolevConstants& k,
                                     TrappingVariant variant, double delta0) {
  const SpectralField s = forward_transform(field);
  const double hd = hdot1_norm(s), l2 = l2_norm(s);
  return evaluate_trapping({{0.0, hd * hd, l2 * l2, l4_fourth(field)}}, k, variant, delta0);
}

TrappingReport trapping_along_flow(const TrajectoryRecord& traj, const SobolevConstants& k,
                                   TrappingVariant variant, double delta0) {
  std::vector<SampleNorms> samples;
  samples.reserve(traj.diagnostics.size());
  for (const Diagnostics& d : traj.diagnostics) samples.push_back({d.t, d.hdot1 * d.hdot1, d.mass, d.l4_fourth});
  return evaluate_trapping(samples, k, variant, delta0);
}

}  // namespace tnls
