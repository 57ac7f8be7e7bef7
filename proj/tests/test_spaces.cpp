#include <doctest.h>

#include <cmath>

#include "multixfer/spaces.hpp"

using namespace multixfer;

TEST_CASE("make_exponents computes the Holder relation") {
  CHECK(make_exponents({2, 2}).p == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(make_exponents({4, 2}).p == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(make_exponents({3, 3, 3}).p == doctest::Approx(1.0).epsilon(1e-12));

  const auto t = make_exponents({1.5, 2.5, 7.0});
  Real inv = 0.0;
  for (Real pl : t.p_list) inv += 1.0 / pl;
  CHECK(std::abs(1.0 / t.p - inv) <= 1e-12 * inv);
}

TEST_CASE("make_exponents rejects bad entries, naming the index") {
  CHECK_THROWS_WITH_AS(make_exponents({0.5, 2}), doctest::Contains("p_list[0]"), std::domain_error);
  CHECK_THROWS_WITH_AS(make_exponents({2, 0.99}), doctest::Contains("p_list[1]"),
                       std::domain_error);
  CHECK_THROWS_AS(make_exponents({2}), std::domain_error);
  CHECK_THROWS_AS(make_exponents({2, 2, 2, 2}), std::domain_error);
  CHECK_THROWS_AS(make_exponents({2, std::nan("")}), std::domain_error);
}

TEST_CASE("make_exponents is permutation invariant in p") {
  const Real a = make_exponents({1.5, 4.0, 3.0}).p;
  const Real b = make_exponents({4.0, 3.0, 1.5}).p;
  CHECK(a == doctest::Approx(b).epsilon(1e-14));
}

TEST_CASE("kolmogorov_constant matches the closed form") {
  CHECK(kolmogorov_constant(1.0, 0.5) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(kolmogorov_constant(2.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(kolmogorov_constant(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(kolmogorov_constant(1.0, 2.0), std::domain_error);

  // q -> 0+ along 10^{-k}: values decrease toward e
  Real prev = std::numeric_limits<Real>::infinity();
  for (int k = 1; k <= 8; ++k) {
    const Real c = kolmogorov_constant(1.0, std::pow(10.0, -k));
    CHECK(c < prev);
    CHECK(c > std::exp(1.0));
    prev = c;
  }
  CHECK(prev == doctest::Approx(std::exp(1.0)).epsilon(1e-6));
}

TEST_CASE("kolmogorov_constant is monotone in q on the upper half grid") {
  for (Real p : {1.0, 2.0, 4.0}) {
    Real prev = 0.0;
    for (int i = 0; i <= 64; ++i) {
      const Real q = p / 2.0 + (p * 0.999 - p / 2.0) * i / 64.0;
      const Real c = kolmogorov_constant(p, q);
      CHECK(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("weak_constant approaches e^{1/p}") {
  CHECK(weak_constant(1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-3));
  CHECK(weak_constant(2.0) == doctest::Approx(std::exp(0.5)).epsilon(1e-3));
  CHECK(weak_constant(0.5) == doctest::Approx(std::exp(2.0)).epsilon(1e-3));

  for (Real p : {0.5, 1.0, 2.0, 4.0}) {
    const Real w = weak_constant(p);
    CHECK(std::abs(std::pow(w, p) - std::exp(1.0)) <= 0.002 * std::exp(1.0));
    // dominated by every grid evaluation of the closed form
    for (int i = 0; i < 40; ++i) {
      const Real q = p * 1e-4 * std::pow(0.999 / 1e-4, i / 39.0);
      CHECK(w <= kolmogorov_constant(p, q) * (1.0 + 1e-14));
    }
  }
}

TEST_CASE("grids validate their invariants") {
  CHECK_THROWS_AS(make_torus_grid(1, 3), std::domain_error);
  CHECK_THROWS_AS(make_torus_grid(1, 48), std::domain_error);
  CHECK_THROWS_AS(make_torus_grid(3, 8), std::domain_error);
  CHECK_THROWS_AS(make_line_grid(1, -1.0, 8), std::domain_error);
  CHECK_THROWS_AS(make_frequency_box(1, 0), std::domain_error);

  const Grid t{make_torus_grid(2, 8)};
  CHECK(grid_size(t) == 64);
  CHECK(cell_measure(t) == doctest::Approx(1.0 / 64.0));
  const Vec2 pt = grid_point(t, 9);  // row-major: (1,1)
  CHECK(pt[0] == doctest::Approx(1.0 / 8.0));
  CHECK(pt[1] == doctest::Approx(1.0 / 8.0));

  const Grid l{make_line_grid(1, 4.0, 16)};
  CHECK(grid_spacing(l) == doctest::Approx(0.5));
  CHECK(grid_point(l, 0)[0] == doctest::Approx(-4.0));
}
