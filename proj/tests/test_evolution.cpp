#include <cmath>
#include <limits>

#include "doctest.h"
#include "support.hpp"
#include "tnls/errors.hpp"
#include "tnls/evolution.hpp"

using namespace tnls;
using testsupport::max_abs;
using testsupport::max_abs_diff;

namespace {

const SobolevConstants& consts() {
  static const SobolevConstants k = with_c_star(compute_sobolev_constants(), 10.5);
  return k;
}

SpectralField small_random(const TorusGeometry& g, double h1, std::uint64_t seed) {
  auto s = testsupport::random_spectral(g, 2, seed);
  return (h1 / h1_norm(s)) * s;
}

}  // namespace

TEST_CASE("free propagator examples") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto u = testsupport::random_spectral(g, 3, 1);
  CHECK(free_propagate(u, 0.0).coefficients() == u.coefficients());

  const auto later = free_propagate(u, 0.37);
  CHECK(later.coefficient(Mode{}) == u.coefficient(Mode{}));

  SpectralField one(g);
  one.set_coefficient(Mode{{1, 0, 0, 0}}, 1.0);
  const cplx c = free_propagate(one, 1.0 / (4 * kPi * kPi)).coefficient(Mode{{1, 0, 0, 0}});
  CHECK(std::abs(c - std::exp(cplx(0.0, -1.0))) < 1e-15);
}

TEST_CASE("free flow group law and reversibility") {
  const TorusGeometry g({1, 1.4, 0.9, 1}, {8, 8, 8, 8});
  const auto u = testsupport::random_spectral(g, 4, 2);
  const auto ab = free_propagate(free_propagate(u, 0.013), 0.029);
  CHECK(max_abs_diff(ab.coefficients(), free_propagate(u, 0.042).coefficients()) < 1e-12 * max_abs(u.coefficients()));
  const auto back = free_propagate(free_propagate(u, 0.75), -0.75);
  CHECK(max_abs_diff(back.coefficients(), u.coefficients()) < 1e-12 * max_abs(u.coefficients()));
}

TEST_CASE("nonlinear phase step") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto f = testsupport::random_physical(g, 8);
  CHECK(nonlinear_phase_step(f, 0.1, 0).samples() == f.samples());
  const auto s = nonlinear_phase_step(f, 0.3, -1);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(s[i]) == doctest::Approx(std::abs(f[i])).epsilon(1e-15));

  PhysicalField c(g);
  for (auto& v : c.samples()) v = {0.8, 0.6};
  const auto cs = nonlinear_phase_step(c, 0.25, 1);
  CHECK(std::abs(cs[5] - cplx(0.8, 0.6) * std::exp(cplx(0.0, -0.25))) < 1e-15);

  auto bad = f;
  bad[3] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(nonlinear_phase_step(bad, 0.1, 1), DataError);
}

TEST_CASE("parameter validation") {
  EvolutionParams p;
  p.dt = 1e-2;
  p.t_end = 1e-3;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.t_end = 1.0;
  p.mu = 2;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.mu = 1;
  p.blowup_threshold = -1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("mu = 0 evolution is the free flow") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto u0 = testsupport::random_spectral(g, 3, 3);
  EvolutionParams p;
  p.mu = 0;
  p.dt = 1e-3;
  p.t_end = 2e-2;
  p.snapshot_stride = 5;
  const auto tr = evolve(u0, p, consts());
  REQUIRE(tr.has_snapshots());
  CHECK(tr.halt_reason == HaltReason::completed);
  for (std::size_t j = 0; j < tr.times.size(); ++j) {
    const auto ref = free_propagate(u0, tr.times[j]);
    CHECK(max_abs_diff(tr.snapshots[j].coefficients(), ref.coefficients()) < 1e-12 * max_abs(u0.coefficients()));
  }
}

TEST_CASE("single-mode closed form") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const Mode m{{1, -1, 0, 0}};
  const cplx c(0.5, 0.2);
  SpectralField u0(g);
  u0.set_coefficient(m, c);
  for (int mu : {-1, 1}) {
    EvolutionParams p;
    p.mu = mu;
    p.dt = 1e-4;
    p.t_end = 0.1;
    p.snapshot_stride = 1000;
    p.dealias = Dealias::none;
    const auto tr = evolve(u0, p, consts());
    const double t = tr.times.back();
    CHECK(t == doctest::Approx(0.1).epsilon(1e-12));
    const cplx expect = c * std::exp(cplx(0.0, -(dispersion(g, m) + mu * std::norm(c)) * t));
    auto ref = SpectralField(g);
    ref.set_coefficient(m, expect);
    CHECK(max_abs_diff(inverse_transform(tr.snapshots.back()).samples(), inverse_transform(ref).samples()) < 1e-9);
  }
}

TEST_CASE("constant data keeps its modulus") {
  const auto g = TorusGeometry::cube(1.0, 8);
  SpectralField u0(g);
  u0.set_coefficient(Mode{}, 0.9);
  EvolutionParams p;
  p.mu = -1;
  p.dt = 1e-3;
  p.t_end = 0.05;
  p.snapshot_stride = 50;
  const auto tr = evolve(u0, p, consts());
  const cplx end = tr.snapshots.back().coefficient(Mode{});
  CHECK(std::abs(end) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(std::arg(end) == doctest::Approx(0.81 * 0.05).epsilon(1e-10));
}

TEST_CASE("gauge covariance") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto u0 = small_random(g, 1.0, 4);
  const cplx phase = std::exp(cplx(0.0, 0.7));
  EvolutionParams p;
  p.mu = 1;
  p.dt = 1e-3;
  p.t_end = 1e-2;
  p.snapshot_stride = 10;
  const auto a = evolve(u0, p, consts());
  const auto b = evolve(phase * u0, p, consts());
  const auto rotated = phase * a.snapshots.back();
  CHECK(max_abs_diff(b.snapshots.back().coefficients(), rotated.coefficients()) <
        1e-12 * max_abs(rotated.coefficients()));
}

TEST_CASE("conservation on a small grid") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto u0 = small_random(g, 1.0, 5);
  EvolutionParams p;
  p.mu = 1;
  p.dt = 1e-3;
  p.t_end = 0.05;
  p.snapshot_stride = 10;
  const auto tr = evolve(u0, p, consts());
  const auto& d0 = tr.diagnostics.front();
  const auto& d1 = tr.diagnostics.back();
  // Truncating the padded cubic back to the grid is the only source of mass drift.
  CHECK(std::abs(d1.mass - d0.mass) < 1e-8 * d0.mass);
  CHECK(std::abs(d1.energy - d0.energy) < 1e-6 * std::abs(d0.energy));
  CHECK(std::abs(d1.e_star - d0.e_star) < 1e-6 * std::abs(d0.e_star));
}

TEST_CASE("blow-up threshold must start above the data") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto u0 = small_random(g, 1.0, 6);
  EvolutionParams p;
  p.mu = 0;
  p.dt = 1e-3;
  p.t_end = 1e-2;
  p.blowup_threshold = 0.5 * h1_norm(u0);
  CHECK_THROWS_AS(evolve(u0, p, consts()), DomainError);
}

TEST_CASE("Duhamel quadrature and Picard iteration") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto u0 = small_random(g, 0.01, 7);
  CHECK_THROWS_AS(picard_iterate(u0, {0.1, 0.1}, 3, 1, 10), DomainError);
  CHECK_THROWS_AS(picard_iterate(u0, {0.0, 1.5}, 3, 1, 10), DomainError);

  const auto free_only = picard_iterate(u0, {0.0, 0.05}, 2, 0, 20);
  for (double d : free_only.sup_h1_distance) CHECK(d == 0.0);

  const auto res = picard_iterate(u0, {0.0, 0.05}, 5, -1, 50);
  REQUIRE(res.sup_h1_distance.size() == 5);
  // Once an iterate reproduces the previous one to rounding there is nothing left to contract.
  const double floor = 64 * std::numeric_limits<double>::epsilon() * h1_norm(u0);
  for (int k = 1; k < 5; ++k) {
    CAPTURE(k);
    CAPTURE(res.sup_h1_distance[k - 1]);
    CHECK((res.sup_h1_distance[k] < 0.5 * res.sup_h1_distance[k - 1] || res.sup_h1_distance[k] <= floor));
  }
  CHECK(res.sup_h1_distance[0] > floor);

  EvolutionParams p;
  p.mu = -1;
  p.dt = 1e-3;
  p.t_end = 0.05;
  p.snapshot_stride = 1;
  const auto tr = evolve(u0, p, consts());
  CHECK(h1_norm(tr.snapshots.back() - res.final_values.back()) < 1e-6);
  CHECK(duhamel_residual(tr) < 1e-8);
  CHECK_THROWS_AS(duhamel_integral(tr, {0.02, 0.02}), DomainError);
}
