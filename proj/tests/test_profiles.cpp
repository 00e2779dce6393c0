#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "tnls/errors.hpp"
#include "tnls/lab/scenarios.hpp"
#include "tnls/profiles.hpp"

using namespace tnls;
using testsupport::max_abs;
using testsupport::max_abs_diff;

TEST_CASE("Euclidean profile norms") {
  const auto W = EuclideanProfile::ground_state();
  CHECK(W.hdot1() * W.hdot1() == doctest::Approx(32 * kPi * kPi / 3).epsilon(1e-10));
  CHECK(std::pow(W.l4(), 4) == doctest::Approx(32 * kPi * kPi / 3).epsilon(1e-10));
  CHECK(std::isinf(W.l1()));

  // Gaussian e^{-r^2/2}: ||.||_1 = (2 pi)^2, ||.||_2^2 = pi^2, ||grad||_2^2 = 2 pi^2.
  const auto G = EuclideanProfile::gaussian();
  CHECK(G.l1() == doctest::Approx(4 * kPi * kPi).epsilon(1e-10));
  CHECK(G.l2() * G.l2() == doctest::Approx(kPi * kPi).epsilon(1e-10));
  CHECK(G.hdot1() * G.hdot1() == doctest::Approx(2 * kPi * kPi).epsilon(1e-10));

  // Tent 1 - r on [0, 1]: ||grad||^2 = 2 pi^2 / 4, ||.||_1 = 2 pi^2 / 20.
  const auto T = EuclideanProfile::radial_samples({0.0, 1.0}, {1.0, 0.0});
  CHECK(T.hdot1() * T.hdot1() == doctest::Approx(kPi * kPi / 2).epsilon(1e-12));
  CHECK(T.l1() == doctest::Approx(kPi * kPi / 10).epsilon(1e-12));
  CHECK_THROWS_AS(EuclideanProfile::radial_samples({0.0, 1.0}, {1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(EuclideanProfile::radial_samples({0.1, 1.0}, {1.0, 0.0}), DomainError);
}

TEST_CASE("profile on the torus") {
  const auto g = TorusGeometry::cube(2.0, 32);
  const auto chart = ChartMap::for_geometry(g);
  CHECK(chart.rho == 1.0);
  const auto W = EuclideanProfile::ground_state();
  for (double N : {4.0, 9.0, 16.0}) {
    const auto f = make_profile_on_torus(W, N, g, chart);
    CHECK(f[0] == N * W.value(0.0));
  }
  CHECK_THROWS_AS(make_profile_on_torus(W, 3.0, g, chart), GeometryError);
  CHECK_THROWS_AS(make_profile_on_torus(W, 0.5, g, chart), DomainError);
  ChartMap wide = chart;
  wide.rho = 1.5;
  CHECK_THROWS_AS(make_profile_on_torus(W, 16.0, g, wide), GeometryError);

  const auto shifted = make_profile_on_torus(W, 16.0, g, ChartMap::for_geometry(g, {1, 1, 1, 1}));
  const auto base = make_profile_on_torus(W, 16.0, g, chart);
  CHECK(linf_norm(shifted) == linf_norm(base));
  CHECK(l4_norm(shifted) == doctest::Approx(l4_norm(base)).epsilon(1e-14));
}

TEST_CASE("L1 collapse and transfer bound") {
  const auto g = TorusGeometry::cube(2.0, 32);
  const auto chart = ChartMap::for_geometry(g);
  const auto G = EuclideanProfile::gaussian();
  const auto W = EuclideanProfile::ground_state();
  for (double N : {4.0, 8.0, 16.0}) {
    const auto f = make_profile_on_torus(G, N, g, chart);
    CHECK(lp_norm(f, 1.0) <= G.l1() / (N * N * N));
    for (const auto* phi : {&G, &W}) {
      const auto s = forward_transform(make_profile_on_torus(*phi, N, g, chart));
      CHECK(h1_norm(s) <= 3 * phi->hdot1());
    }
  }
}

TEST_CASE("spectral localization of f_N") {
  // Beyond the profile's own scale the shell masses fall off fast.
  const auto g = TorusGeometry::cube(2.0, 32);
  const auto f = forward_transform(make_profile_on_torus(EuclideanProfile::gaussian(), 4.0, g, ChartMap::for_geometry(g)));
  double prev = l2_norm(lp_project(f, {4}));
  for (std::int64_t K : {8, 16}) {
    const double v = l2_norm(lp_project(f, {K}));
    CHECK(v < 0.2 * prev);
    prev = v;
  }
  CHECK(prev < 1e-2 * l2_norm(f));
}

TEST_CASE("translate and modulate") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto u = testsupport::random_spectral(g, 3, 31);
  CHECK(translate_modulate(u, 0.0, {0, 0, 0, 0}).coefficients() == u.coefficients());

  SpectralField one(g);
  one.set_coefficient(Mode{{1, 0, 0, 0}}, 1.0);
  const cplx c = translate_modulate(one, 0.0, {0.5, 0, 0, 0}).coefficient(Mode{{1, 0, 0, 0}});
  CHECK(std::abs(c + 1.0) < 1e-15);

  const auto back = translate_modulate(translate_modulate(u, -0.3, {0, 0, 0, 0}), 0.3, {0, 0, 0, 0});
  CHECK(max_abs_diff(back.coefficients(), u.coefficients()) < 1e-12 * max_abs(u.coefficients()));
}

TEST_CASE("frame orthogonality") {
  const auto g = TorusGeometry::cube(1.0, 8);
  const auto a = Frame::geometric(1.0, 2.0);
  const auto same = frames_orthogonal(a, a, 8, 3.0, g);
  CHECK(same.equivalent);
  for (double v : same.trace) CHECK(v == 0.0);

  const auto scales = frames_orthogonal(a, Frame::geometric(1.0, 4.0), 8, 3.0, g);
  CHECK(scales.orthogonal);
  CHECK(scales.trace[4] == doctest::Approx(5 * std::log(2.0)).epsilon(1e-14));

  const auto timed = frames_orthogonal(Frame::geometric(1.0, 2.0, 1.0, 1.0), a, 10, 3.0, g);
  CHECK(timed.orthogonal);
  for (std::size_t k = 0; k < timed.trace.size(); ++k) CHECK(timed.trace[k] == doctest::Approx(k + 1.0).epsilon(1e-12));

  CHECK_THROWS_AS(frames_orthogonal(a, a, 7, 3.0, g), DomainError);
  const auto list = Frame::explicit_list({{2.0, 0.0, {}}, {5.0, 0.0, {}}});
  CHECK(list.at(1).N == 2.0);
  CHECK(list.at(9).N == 5.0);
}

TEST_CASE("H1 inner product of profiles") {
  const auto g = TorusGeometry::cube(2.0, 32);
  const auto f = forward_transform(make_profile_on_torus(EuclideanProfile::ground_state(), 4.0, g, ChartMap::for_geometry(g)));
  const cplx self = profile_inner_h1(f, f);
  CHECK(std::abs(self.imag()) < 1e-12 * self.real());
  CHECK(self.real() == doctest::Approx(h1_norm(f) * h1_norm(f)).epsilon(1e-12));
  CHECK(profile_inner_h1(lp_project(f, {2}), lp_project(f, {4})) == cplx{});

  // Frame (4, k / 16, 0) against (4, 0, 0): N^2 |t_k| = k diverges and the overlap dies out.
  double prev = std::abs(self);
  for (int k = 1; k <= 5; ++k) {
    const auto moved = translate_modulate(f, k / 16.0, {0, 0, 0, 0});
    const double v = std::abs(profile_inner_h1(f, moved));
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 0.05 * h1_norm(f) * h1_norm(f));
}

TEST_CASE("lattice kernel") {
  const double origin = kernel_K_M(2, {0, 0, 0, 0}, 0.0).real();
  CHECK(origin == doctest::Approx(429.18170035066746).epsilon(1e-12));
  for (int M : {1, 2, 3, 5, 8}) {
    CHECK(kernel_K_M(M, {0, 0, 0, 0}, 0.0).real() == doctest::Approx(lab::kernel_origin_by_counts(M)).epsilon(1e-12));
  }
  const Vec4 x{0.3, 1.7, 4.1, 2.2};
  const Vec4 minus{2 * kPi - 0.3, 2 * kPi - 1.7, 2 * kPi - 4.1, 2 * kPi - 2.2};
  for (double t : {0.0, 0.05, 0.4}) {
    const cplx a = kernel_K_M(3, x, t), b = kernel_K_M(3, minus, t);
    CHECK(std::abs(a - b) < 1e-10 * std::abs(a));
    CHECK(std::abs(a) <= kernel_K_M(3, {0, 0, 0, 0}, 0.0).real());
  }
  CHECK_THROWS_AS(kernel_sup_bound_check(4, 5.0), DomainError);
  CHECK_THROWS_AS(kernel_sup_bound_check(4, 0.5), DomainError);

  const auto rep = kernel_sup_bound_check(4, 4.0, 16);
  CHECK(rep.origin_value == kernel_K_M(4, {0, 0, 0, 0}, 0.0).real());
  CHECK(rep.sup > 0.0);
  CHECK(rep.sup <= rep.origin_value);
  CHECK(rep.constant == doctest::Approx(std::max(rep.sup, rep.refined_sup) * 16.0 / 256.0));
}

TEST_CASE("extinction and extraction edge cases") {
  const auto g = TorusGeometry::cube(0.5, 16);
  const auto zero = EuclideanProfile::gaussian(0.0);
  CHECK(run_extinction(zero, 64.0, 4.0, g).z_value == 0.0);
  CHECK_THROWS_AS(run_extinction(zero, 64.0, 0.5, g), DomainError);

  const auto g2 = TorusGeometry::cube(1.0, 8);
  const auto res = extract_bubbles(PhysicalField(g2));
  CHECK(res.profiles.empty());
  CHECK(l2_norm(res.remainder) == 0.0);
  CHECK(res.complete);
}
