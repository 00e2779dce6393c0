#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "tnls/critical_norms.hpp"
#include "tnls/errors.hpp"
#include "tnls/evolution.hpp"

using namespace tnls;

namespace {

TrajectoryRecord free_trajectory(const SpectralField& u0, double t_end, int samples) {
  TrajectoryRecord tr;
  tr.geometry = u0.geometry();
  for (int j = 0; j <= samples; ++j) {
    const double t = t_end * j / samples;
    tr.times.push_back(t);
    tr.snapshots.push_back(free_propagate(u0, t));
  }
  tr.diagnostics.resize(tr.times.size());
  return tr;
}

// Exhaustive maximum over all index subsets of size >= 2, kept in increasing order.
double v2_brute(const std::vector<cplx>& v) {
  const std::size_t L = v.size();
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << L); ++mask) {
    double s = 0.0;
    int prev = -1;
    for (std::size_t i = 0; i < L; ++i) {
      if (!(mask & (1u << i))) continue;
      if (prev >= 0) s += std::norm(v[i] - v[prev]);
      prev = static_cast<int>(i);
    }
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

SpectralField single_mode(const TorusGeometry& g, const Mode& m, cplx c) {
  SpectralField s(g);
  s.set_coefficient(m, c);
  return s;
}

}  // namespace

TEST_CASE("discrete V2 examples") {
  CHECK(discrete_v2_norm({0.0, 1.0, 0.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(discrete_v2_norm({0.0, 1.0}) == 1.0);
  CHECK(discrete_v2_norm({2.5, 2.5, 2.5, 2.5}) == 0.0);
  CHECK(discrete_v2_norm({cplx(1, 1)}) == 0.0);
  CHECK_THROWS_AS(discrete_v2_norm({}), DomainError);
  // Skipping the middle sample beats using it: |0-3|^2 = 9 > 1 + 4.
  CHECK(discrete_v2_norm({0.0, 1.0, 3.0}) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("discrete V2 matches exhaustive search") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> len(1, 12);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<cplx> v(len(rng));
    for (auto& z : v) z = {gauss(rng), gauss(rng)};
    const double dp = discrete_v2_norm(v), brute = v2_brute(v);
    CHECK(std::abs(dp - brute) <= 1e-12 * std::max(1.0, brute));
  }
}

TEST_CASE("space-time Lp") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto one = single_mode(g, Mode{}, 1.0);
  const auto tr = free_trajectory(one, 1.0, 8);
  CHECK(spacetime_lp(tr, 4.0, {0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(spacetime_lp(free_trajectory(SpectralField(g), 1.0, 8), 4.0, {0.0, 1.0}) == 0.0);

  const TorusGeometry r({1, 2, 1, 1.5}, {8, 8, 8, 8});
  const cplx c(0.3, 0.4);
  const auto wave = free_trajectory(single_mode(r, Mode{{1, 2, 0, -1}}, c), 0.6, 12);
  for (double p : {1.0, 2.0, 3.5, 6.0}) {
    const double expect = std::abs(c) * std::pow(r.volume(), 1 / p) * std::pow(0.45, 1 / p);
    CHECK(spacetime_lp(wave, p, {0.1, 0.55}) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK_THROWS_AS(spacetime_lp(wave, 0.5, {0.0, 0.5}), DomainError);
  CHECK_THROWS_AS(spacetime_lp(wave, 4.0, {0.0, 0.7}), DomainError);
}

TEST_CASE("Z norm single-shell reduction and zero") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto wave = free_trajectory(single_mode(g, Mode{{3, 0, 0, 0}}, 0.5), 0.5, 10);
  const auto rep = z_norm(wave, {0.0, 0.5});
  const double a = spacetime_lp(wave, 4.0, {0.0, 0.5});
  CHECK(rep.value == doctest::Approx(std::sqrt(4.0) * a).epsilon(1e-12));
  CHECK(rep.shell_contributions.at(4) == doctest::Approx(16 * std::pow(a, 4)).epsilon(1e-12));
  CHECK(rep.shell_contributions.at(2) == 0.0);

  CHECK(z_norm(free_trajectory(SpectralField(g), 0.5, 10), {0.0, 0.5}).value == 0.0);
  CHECK(z_norm(wave, {0.2, 0.2}).value == 0.0);
  CHECK_THROWS_AS(z_norm(wave, {0.3, 0.2}), DomainError);
  CHECK_THROWS_AS(z_norm(wave, {0.0, 0.9}), DomainError);
}

TEST_CASE("Z norm shell additivity and monotonicity") {
  const auto g = TorusGeometry::cube(1.0, 8);
  auto u = single_mode(g, Mode{{1, 0, 0, 0}}, 0.4);
  auto v = single_mode(g, Mode{{0, 3, 0, 0}}, 0.2);
  v.set_coefficient(Mode{{0, 0, 3, 0}}, cplx(0.0, 0.3));
  const auto tu = free_trajectory(u, 0.3, 12), tv = free_trajectory(v, 0.3, 12), tw = free_trajectory(u + v, 0.3, 12);
  const TimeWindow w{0.0, 0.3};
  const double zu = z_norm(tu, w).value, zv = z_norm(tv, w).value, zw = z_norm(tw, w).value;
  CHECK(std::pow(zw, 4) == doctest::Approx(std::pow(zu, 4) + std::pow(zv, 4)).epsilon(1e-12));

  const auto rand = free_trajectory(testsupport::random_spectral(g, 3, 17), 1.5, 30);
  const double outer = z_norm(rand, {0.0, 1.5}).value;
  CHECK(z_norm(rand, {0.2, 0.7}).value <= outer * (1 + 1e-14));
  CHECK(z_norm(rand, {0.0, 1.0}).value <= outer * (1 + 1e-14));
  CHECK(z_norm(rand, {0.0, 1.5}).window.length() <= 1.0 + 1e-12);
}

TEST_CASE("Z prime") {
  CHECK(z_prime(16.0, 1.0) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(z_prime(0.0, 3.0) == 0.0);
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto wave = free_trajectory(single_mode(g, Mode{{1, 1, 0, 0}}, 0.5), 0.2, 10);
  const double z = z_norm(wave, {0.0, 0.2}).value;
  CHECK(z_prime(wave, {0.0, 0.2}) == doctest::Approx(std::pow(z, 0.75) * std::pow(x1_proxy(wave), 0.25)));
}

TEST_CASE("Y1 and X1 proxies") {
  const TorusGeometry g({1, 1.2, 1, 0.8}, {8, 8, 8, 8});
  const auto u0 = testsupport::random_spectral(g, 3, 23);
  const auto tr = free_trajectory(u0, 0.1, 12);
  CHECK(y1_proxy(tr) < 1e-10 * h1_norm(u0));
  CHECK(x1_proxy(tr) == doctest::Approx(h1_norm(u0)).epsilon(1e-12));
  CHECK(y1_proxy(free_trajectory(SpectralField(g), 0.1, 12)) == 0.0);
  CHECK_THROWS_AS(y1_proxy(free_trajectory(u0, 0.1, 4)), DomainError);

  EvolutionParams p;
  p.mu = 1;
  p.dt = 1e-3;
  p.t_end = 0.02;
  p.snapshot_stride = 2;
  const auto k = with_c_star(compute_sobolev_constants(), 10.5);
  const auto small = (0.5 / h1_norm(u0)) * u0;
  const auto nl = evolve(small, p, k);
  double sup = 0.0;
  for (const auto& s : nl.snapshots) sup = std::max(sup, h1_norm(s));
  CHECK(y1_proxy(nl) > 0.0);
  CHECK(x1_proxy(nl) <= 2 * sup);
}

TEST_CASE("integration helpers") {
  const std::vector<double> t{0.0, 0.5, 1.0}, v{1.0, 3.0, 1.0};
  CHECK(integrate_linear(t, v, 0.0, 1.0) == doctest::Approx(2.0));
  CHECK(integrate_linear(t, v, 0.25, 0.75) == doctest::Approx(1.25));
  CHECK(integrate_periodic(t, v, 1.0, -1.0, 2.0) == doctest::Approx(6.0));
  CHECK(integrate_periodic(t, v, 1.0, 0.75, 1.25) == doctest::Approx(0.75));
}
