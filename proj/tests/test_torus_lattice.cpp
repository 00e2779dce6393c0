#include <cmath>
#include <map>

#include "doctest.h"
#include "tnls/errors.hpp"
#include "tnls/torus_lattice.hpp"

using namespace tnls;

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(TorusGeometry({1, 1, 0, 1}, {8, 8, 8, 8}), DomainError);
  CHECK_THROWS_AS(TorusGeometry({1, 1, 1, 1}, {8, 9, 8, 8}), DomainError);
  CHECK_THROWS_AS(TorusGeometry({1, 1, 1, 1}, {8, 8, 6, 8}), DomainError);
  const TorusGeometry g({1, 2, 0.5, 3}, {8, 8, 10, 12});
  CHECK(g.volume() == doctest::Approx(3.0));
  CHECK(g.size() == 8u * 8u * 10u * 12u);
}

TEST_CASE("frequency convention") {
  const auto unit = TorusGeometry::cube(1.0, 8);
  const Vec4 w = frequency(unit, Mode{{1, 0, 0, 0}});
  CHECK(w[0] == doctest::Approx(2 * kPi));
  CHECK(w[1] == 0.0);
  for (double v : frequency(TorusGeometry({1.3, 0.7, 2, 5}, {8, 8, 8, 8}), Mode{})) CHECK(v == 0.0);

  const TorusGeometry aniso({1, 2, 1, 1}, {8, 8, 8, 8});
  CHECK(frequency(aniso, Mode{{0, 1, 0, 0}})[1] == doctest::Approx(kPi));
  CHECK_THROWS_AS(frequency(unit, Mode{{5, 0, 0, 0}}), RangeError);
}

TEST_CASE("dispersion") {
  const auto unit = TorusGeometry::cube(1.0, 8);
  const TorusGeometry aniso({1, 2, 1, 1}, {8, 8, 8, 8});
  CHECK(dispersion(unit, Mode{{1, 0, 0, 0}}) == doctest::Approx(39.4784176).epsilon(1e-9));
  CHECK(dispersion(unit, Mode{}) == 0.0);
  CHECK(dispersion(aniso, Mode{{0, 1, 0, 0}}) == doctest::Approx(9.8696044).epsilon(1e-8));
  // Doubling a side halves the frequency, so n = 2 there is n = 1 on the unit torus, bit for bit.
  CHECK(dispersion(aniso, Mode{{0, 2, 0, 0}}) == dispersion(unit, Mode{{1, 0, 0, 0}}));
}

TEST_CASE("dispersion grows along rays and vanishes only at the origin") {
  const TorusGeometry g({1, 1.7, 0.9, 2.3}, {16, 16, 16, 16});
  for (std::size_t i = 0; i < g.size(); i += 37) {
    const Mode m = mode_at(g, i);
    const double d = dispersion(g, m);
    CHECK(d >= 0.0);
    CHECK((d == 0.0) == (m.norm_sq() == 0));
    Mode half = m;
    bool fits = true;
    for (int a = 0; a < kDim; ++a) {
      if (m.n[a] % 2 != 0) fits = false;
      half.n[a] = m.n[a] / 2;
    }
    if (fits && m.norm_sq() > 0) CHECK(dispersion(g, half) < d);
  }
}

TEST_CASE("shell_of examples") {
  CHECK(shell_of(Mode{}).N == 1);
  CHECK(shell_of(Mode{{3, 0, 0, 0}}).N == 4);
  CHECK(shell_of(Mode{{1, 1, 1, 1}}).N == 2);
  CHECK(shell_of(Mode{{1, 0, 0, 0}}).N == 1);
  CHECK(shell_of(Mode{{2, 0, 0, 0}}).N == 2);
  CHECK(shell_of(Mode{{1, 1, 0, 0}}).N == 2);
  CHECK_THROWS_AS(DyadicShell::of_scale(3), DomainError);
}

TEST_CASE("shells partition every mode of a 16^4 grid") {
  const auto g = TorusGeometry::cube(1.0, 16);
  const auto shells = shells_for(g);
  std::map<std::int64_t, std::size_t> counts;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Mode m = mode_at(g, i);
    int owners = 0;
    for (const auto& s : shells) owners += s.contains(m) ? 1 : 0;
    REQUIRE(owners == 1);
    const auto N = shell_of(m).N;
    CHECK((N == 1 ? m.norm_sq() <= 1 : (N * N / 4 < m.norm_sq() && m.norm_sq() <= N * N)));
    ++counts[N];
  }
  std::size_t total = 0;
  for (auto& [N, c] : counts) total += c;
  CHECK(total == g.size());
  // |n| <= 1 holds the origin and the 8 unit vectors.
  CHECK(counts[1] == 9);
}

TEST_CASE("linear index roundtrip") {
  const TorusGeometry g({1, 1, 1, 1}, {8, 10, 12, 8});
  for (std::size_t i = 0; i < g.size(); i += 7) CHECK(linear_index(g, mode_at(g, i)) == i);
  CHECK(frequency_index(3, 8) == 3);
  CHECK(frequency_index(4, 8) == -4);
  CHECK(slot_of(-1, 8) == 7);
}

TEST_CASE("torus distance wraps") {
  const TorusGeometry g({1, 2, 1, 1}, {8, 8, 8, 8});
  CHECK(torus_distance(g, {0.1, 0, 0, 0}, {0.9, 0, 0, 0}) == doctest::Approx(0.2));
  CHECK(torus_distance(g, {0, 0.1, 0, 0}, {0, 1.9, 0, 0}) == doctest::Approx(0.2));
  CHECK(recurrence_period(TorusGeometry::cube(2.0, 8)).value() == doctest::Approx(4.0 / (2 * kPi)));
  CHECK_FALSE(recurrence_period(g).has_value());
}
