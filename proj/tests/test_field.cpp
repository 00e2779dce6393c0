#include <cmath>
#include <limits>

#include "doctest.h"
#include "support.hpp"
#include "tnls/errors.hpp"
#include "tnls/field.hpp"

using namespace tnls;
using testsupport::max_abs;
using testsupport::max_abs_diff;

namespace {

PhysicalField plane_wave(const TorusGeometry& g, const Mode& m, cplx c) {
  PhysicalField f(g);
  const Vec4 w = frequency(g, m);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec4 x = f.point(i);
    f[i] = c * std::exp(cplx(0.0, w[0] * x[0] + w[1] * x[1] + w[2] * x[2] + w[3] * x[3]));
  }
  return f;
}

PhysicalField constant(const TorusGeometry& g, cplx c) {
  PhysicalField f(g);
  for (auto& v : f.samples()) v = c;
  return f;
}

}  // namespace

TEST_CASE("transform of a constant") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto s = forward_transform(constant(g, {0.3, -1.2}));
  CHECK(std::abs(s.coefficient(Mode{}) - cplx(0.3, -1.2)) < 1e-15);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(std::abs(s[i]) < 1e-15);
}

TEST_CASE("transform of a single mode") {
  const TorusGeometry g({1, 2, 1.5, 1}, {8, 8, 10, 8});
  const Mode m{{1, 0, 0, 0}};
  const auto s = forward_transform(plane_wave(g, m, 1.0));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const cplx expect = (mode_at(g, i) == m) ? 1.0 : 0.0;
    CHECK(std::abs(s[i] - expect) < 1e-14);
  }
}

TEST_CASE("roundtrip and Plancherel") {
  const TorusGeometry g({1, 1.3, 0.8, 2}, {8, 10, 8, 12});
  const auto f = testsupport::random_physical(g, 5);
  const auto s = forward_transform(f);
  const auto back = inverse_transform(s);
  CHECK(max_abs_diff(back.samples(), f.samples()) < 1e-12 * max_abs(f.samples()));
  CHECK(lp_norm(f, 2.0) == doctest::Approx(l2_norm(s)).epsilon(1e-12));
  CHECK(lp_norm(back, 2.0) == doctest::Approx(l2_norm(s)).epsilon(1e-12));
}

TEST_CASE("non-finite data is rejected") {
  const auto g = TorusGeometry::cube(1.0, 8);
  auto f = constant(g, 1.0);
  f[17] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(forward_transform(f), DataError);
}

TEST_CASE("norm examples") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto one = norms(constant(g, 1.0), 10.5);
  CHECK(*one.h1_star == doctest::Approx(std::sqrt(10.5)).epsilon(1e-14));
  CHECK(*one.h1_star == doctest::Approx(3.24037).epsilon(1e-6));
  const auto two = norms(constant(g, 2.0));
  CHECK(two.l2 * two.l2 == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(two.l4 == doctest::Approx(2.0).epsilon(1e-14));

  const cplx c(0.6, -0.2);
  const auto wave = norms(plane_wave(g, Mode{{1, 0, 0, 0}}, c));
  CHECK(wave.hdot1 * wave.hdot1 == doctest::Approx(4 * kPi * kPi * std::norm(c)).epsilon(1e-12));
  CHECK(wave.h1 * wave.h1 == doctest::Approx(wave.l2 * wave.l2 + wave.hdot1 * wave.hdot1).epsilon(1e-14));

  CHECK_THROWS_AS(lp_norm(constant(g, 1.0), 0.5), DomainError);
  CHECK_THROWS_AS(h1_star_norm(forward_transform(constant(g, 1.0)), 0.0), DomainError);
}

TEST_CASE("h1_star is comparable to h1") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto s = testsupport::random_spectral(g, 3, 11);
  for (double c : {0.2, 1.0, 10.5}) {
    const double h1 = h1_norm(s), hs = h1_star_norm(s, c);
    CHECK(hs >= std::min(1.0, std::sqrt(c)) * h1 * (1 - 1e-14));
    CHECK(hs <= std::max(1.0, std::sqrt(c)) * h1 * (1 + 1e-14));
  }
}

TEST_CASE("gradient agrees with the spectral Hdot1 norm") {
  const TorusGeometry g({1, 1.5, 1, 0.75}, {8, 8, 8, 8});
  const auto s = testsupport::random_spectral(g, 3, 3);
  double grad_sq = 0.0;
  for (const auto& d : spectral_gradient(s)) grad_sq += std::pow(lp_norm(d, 2.0), 2);
  CHECK(std::sqrt(grad_sq) == doctest::Approx(hdot1_norm(s)).epsilon(1e-10));
}

TEST_CASE("L4 quadrature converges under refinement") {
  // Band-limited field: |u|^4 has degree <= 4 band, so a grid above that integrates it exactly.
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto s = testsupport::random_spectral(g, 1, 21);
  const double coarse = l4_norm(inverse_transform(s));
  const double fine = l4_norm(inverse_transform(resample(s, {16, 16, 16, 16})));
  CHECK(coarse == doctest::Approx(fine).epsilon(1e-12));
}

TEST_CASE("Littlewood-Paley projector algebra") {
  const auto g = TorusGeometry::cube(1.0, 16);
  const auto u = testsupport::random_spectral(g, 8, 1);
  const auto v = testsupport::random_spectral(g, 8, 2);

  SpectralField single(g);
  single.set_coefficient(Mode{{3, 0, 0, 0}}, 1.0);
  CHECK(l2_norm(lp_project(single, {4})) == doctest::Approx(1.0));
  CHECK(l2_norm(lp_project(single, {2})) == 0.0);
  CHECK(l2_norm(lp_project(single, {8})) == 0.0);

  SpectralField sum(g);
  for (const auto& shell : shells_for(g)) {
    const auto p = lp_project(u, shell);
    CHECK(lp_project(p, shell).coefficients() == p.coefficients());
    for (const auto& other : shells_for(g)) {
      if (other != shell) CHECK(l2_norm(lp_project(p, other)) == 0.0);
    }
    CHECK(h1_norm(p) <= h1_norm(u));
    const cplx lhs = l2_inner(p, v), rhs = l2_inner(u, lp_project(v, shell));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    sum = sum + p;
  }
  CHECK(max_abs_diff(sum.coefficients(), u.coefficients()) < 1e-12 * max_abs(u.coefficients()));
}

TEST_CASE("cube projector") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto u = testsupport::random_spectral(g, 4, 9);
  CHECK(cube_project(u, Mode{}, {8}).coefficients() == u.coefficients());

  const auto a = cube_project(u, Mode{{-2, 0, 0, 0}}, {4});
  const auto b = cube_project(u, Mode{{2, 0, 0, 0}}, {4});
  for (std::size_t i = 0; i < g.size(); ++i) CHECK((a[i] == cplx{} || b[i] == cplx{}));
  CHECK(std::abs(l2_inner(a, b)) == 0.0);
  CHECK(l2_norm(a) <= l2_norm(u));
  CHECK(l2_norm(b) <= l2_norm(u));
  CHECK_THROWS_AS(cube_project(u, Mode{}, {16}), DomainError);
}

TEST_CASE("cutoff bump") {
  const CutoffProfile eta;
  CHECK(cutoff_eval(eta, {0.5, 0, 0, 0}) == 1.0);
  CHECK(cutoff_eval(eta, {0, 0, 3, 0}) == 0.0);
  CHECK(cutoff_eval(eta, {1, 0, 0, 0}) == 1.0);
  CHECK(cutoff_eval(eta, {0, 2, 0, 0}) == 0.0);
  const double mid = cutoff_eval(eta, {0.75, 0.75, 0.75, 0.75});  // |x| = 1.5
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  // The step is symmetric about the midpoint of [1, 2].
  CHECK(mid == doctest::Approx(0.5).epsilon(1e-15));
  double prev = 1.0;
  for (double r = 1.0; r <= 2.0; r += 1.0 / 64) {
    const double v = cutoff_radial(eta, r);
    CHECK(v <= prev);
    CHECK(v >= 0.0);
    prev = v;
  }
  CHECK(cutoff_radial(eta, 1.25) + cutoff_radial(eta, 1.75) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("spectral shift and H1 inner product") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto u = testsupport::random_spectral(g, 3, 4);
  CHECK(std::abs(h1_inner(u, u) - h1_norm(u) * h1_norm(u)) < 1e-10 * h1_norm(u) * h1_norm(u));
  // Shift by one grid cell equals a cyclic roll of the samples.
  const auto shifted = inverse_transform(spectral_shift(u, {g.spacing(0), 0, 0, 0}));
  const auto base = inverse_transform(u);
  const std::size_t stride = 8 * 8 * 8;
  double dev = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t j0 = i / stride;
    const std::size_t src = ((j0 + 7) % 8) * stride + i % stride;
    dev = std::max(dev, std::abs(shifted[i] - base[src]));
  }
  CHECK(dev < 1e-12 * max_abs(base.samples()));
}
