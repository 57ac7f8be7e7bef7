#include <doctest.h>

#include <cmath>

#include "multixfer/functions.hpp"

using namespace multixfer;

namespace {

TrigPolynomial random_poly(Rng& rng, int modes, int max_k) {
  TrigPolynomial g;
  g.dim = 1;
  for (int i = 0; i < modes; ++i) g.coeffs[{rng.uniform_int(-max_k, max_k), 0}] += rng.complex_normal();
  return g;
}

Real poly_distance(const TrigPolynomial& a, const TrigPolynomial& b) {
  Real d = 0.0;
  auto keys = a.coeffs;
  for (const auto& [k, v] : b.coeffs) keys[k];  // ensure presence
  for (const auto& [k, unused] : keys) {
    const auto ia = a.coeffs.find(k);
    const auto ib = b.coeffs.find(k);
    const Complex va = ia == a.coeffs.end() ? Complex(0, 0) : ia->second;
    const Complex vb = ib == b.coeffs.end() ? Complex(0, 0) : ib->second;
    d = std::max(d, std::abs(va - vb));
  }
  return d;
}

}  // namespace

TEST_CASE("fourier_coefficients: constants and the sign convention") {
  const TorusGrid grid = make_torus_grid(1, 64);
  {
    const GridFunction one{Grid{grid}, ArrayXcd::Ones(64)};
    const auto c = fourier_coefficients(one, FrequencyBox{1, 4});
    CHECK(std::abs(c.coeffs.at({0, 0}) - Complex(1, 0)) < 1e-13);
    for (const auto& [k, v] : c.coeffs)
      if (k[0] != 0) CHECK(std::abs(v) < 1e-13);
  }
  {
    // g(x) = e^{2 pi i 3 x}: the coefficient lands on k = +3 (pinned convention)
    ArrayXcd vals(64);
    for (int i = 0; i < 64; ++i) vals[i] = unit_phase(kTwoPi * 3.0 * i / 64.0);
    const auto c = fourier_coefficients(GridFunction{Grid{grid}, vals}, FrequencyBox{1, 4});
    CHECK(std::abs(c.coeffs.at({3, 0}) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(c.coeffs.at({-3, 0})) < 1e-12);
  }
  CHECK_THROWS_AS(
      fourier_coefficients(GridFunction{Grid{grid}, ArrayXcd::Ones(64)}, FrequencyBox{1, 40}),
      std::domain_error);
}

TEST_CASE("analysis/synthesis round trip is exact for band-limited data") {
  Rng rng(42);
  const TorusGrid grid = make_torus_grid(1, 64);
  for (int t = 0; t < 1000; ++t) {
    const TrigPolynomial g = random_poly(rng, 5, 12);
    const GridFunction s = synthesize(g, grid);
    const TrigPolynomial back = fourier_coefficients(s, FrequencyBox{1, 12});
    CHECK(poly_distance(g, back) < 1e-12);
  }
}

TEST_CASE("synthesize basics") {
  const TorusGrid grid = make_torus_grid(1, 32);
  {
    const GridFunction c = synthesize(trig_constant(1, Complex(2.5, -1.0)), grid);
    for (int i = 0; i < 32; ++i) CHECK(std::abs(c.values[i] - Complex(2.5, -1.0)) < 1e-13);
  }
  {
    TrigPolynomial cosx;
    cosx.dim = 1;
    cosx.coeffs[{1, 0}] = Complex(1, 0);
    cosx.coeffs[{-1, 0}] = Complex(1, 0);
    const GridFunction c = synthesize(cosx, grid);
    for (int i = 0; i < 32; ++i)
      CHECK(std::abs(c.values[i] - 2.0 * std::cos(kTwoPi * i / 32.0)) < 1e-12);
  }
  {
    Rng rng(7);
    const TrigPolynomial a = random_poly(rng, 4, 8), b = random_poly(rng, 4, 8);
    const GridFunction sum = synthesize(trig_sum(a, b), grid);
    const ArrayXcd direct = synthesize(a, grid).values + synthesize(b, grid).values;
    CHECK((sum.values - direct).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("translate: group law, phases, lattice-only shifts") {
  Rng rng(3);
  const TorusGrid grid = make_torus_grid(1, 32);
  const GridFunction f = synthesize(random_poly(rng, 5, 8), grid);
  {
    const GridFunction same = translate(f, Vec2(0, 0));
    CHECK((same.values - f.values).abs().maxCoeff() == 0.0);
  }
  {
    const Vec2 y(3.0 / 32.0, 0.0);
    const GridFunction roundtrip = translate(translate(f, y), -y);
    CHECK((roundtrip.values - f.values).abs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(translate(f, Vec2(0.01, 0.0)), std::domain_error);
  {
    TrigPolynomial mode;
    mode.dim = 1;
    mode.coeffs[{2, 0}] = Complex(1, 0);
    const TrigPolynomial shifted = translate(mode, Vec2(0.25, 0.0));
    CHECK(std::abs(shifted.coeffs.at({2, 0}) - Complex(-1, 0)) < 1e-14);
  }
  {
    // grid translate agrees with the polynomial phase shift
    const TrigPolynomial g = random_poly(rng, 4, 6);
    const Vec2 y(5.0 / 32.0, 0.0);
    const GridFunction a = translate(synthesize(g, grid), y);
    const GridFunction b = synthesize(translate(g, y), grid);
    CHECK((a.values - b.values).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("modulate: unimodular, invertible") {
  Rng rng(5);
  const TorusGrid grid = make_torus_grid(1, 32);
  const GridFunction f = synthesize(random_poly(rng, 5, 8), grid);
  CHECK((modulate(f, Vec2(0, 0)).values - f.values).abs().maxCoeff() == 0.0);
  const GridFunction m = modulate(f, Vec2(1.7, 0.0));
  CHECK((m.values.abs() - f.values.abs()).abs().maxCoeff() < 1e-13);
  const GridFunction back = modulate(m, Vec2(-1.7, 0.0));
  CHECK((back.values - f.values).abs().maxCoeff() < 1e-13);
}

TEST_CASE("periodize folds line functions onto the torus") {
  {
    // f supported in [0,1): samples pass through unchanged
    const LineGrid lg = make_line_grid(1, 4.0, 64);  // h = 1/8
    ArrayXcd vals = ArrayXcd::Zero(64);
    for (int i = 0; i < 64; ++i) {
      const Real x = grid_point(Grid{lg}, i)[0];
      if (x >= 0.0 && x < 1.0) vals[i] = Complex(std::sin(x) + 1.0, 0.0);
    }
    const GridFunction folded = periodize(GridFunction{Grid{lg}, vals});
    const auto& tg = std::get<TorusGrid>(folded.grid);
    CHECK(tg.n_per_axis == 8);
    for (int j = 0; j < 8; ++j) {
      const Real theta = static_cast<Real>(j) / 8.0;
      CHECK(std::abs(folded.values[j] - Complex(std::sin(theta) + 1.0, 0.0)) < 1e-13);
    }
  }
  {
    // chi_[0,1) + chi_[1,2) on (-4,4) folds to the constant 2
    const LineGrid lg = make_line_grid(1, 4.0, 64);
    ArrayXcd vals = ArrayXcd::Zero(64);
    for (int i = 0; i < 64; ++i) {
      const Real x = grid_point(Grid{lg}, i)[0];
      if (x >= 0.0 && x < 2.0) vals[i] = Complex(1, 0);
    }
    const GridFunction folded = periodize(GridFunction{Grid{lg}, vals});
    for (int j = 0; j < 8; ++j) CHECK(std::abs(folded.values[j] - Complex(2, 0)) < 1e-14);
  }
  {
    // mass preservation for a bump, L = 8
    const LineGrid lg = make_line_grid(1, 8.0, 256);  // h = 1/16
    ArrayXcd vals(256);
    for (int i = 0; i < 256; ++i) {
      const Real x = grid_point(Grid{lg}, i)[0];
      vals[i] = Complex(std::exp(-x * x), 0.0);
    }
    const GridFunction f{Grid{lg}, vals};
    const GridFunction folded = periodize(f);
    const Real line_mass = (f.values.real().sum()) * cell_measure(f.grid);
    const Real torus_mass = folded.values.real().sum() * cell_measure(folded.grid);
    CHECK(std::abs(line_mass - torus_mass) < 1e-10);
  }
  {
    // periodize commutes with integer-lattice translation
    Rng rng(11);
    const LineGrid lg = make_line_grid(1, 4.0, 64);
    ArrayXcd vals(64);
    for (int i = 0; i < 64; ++i) vals[i] = rng.complex_normal();
    const GridFunction f{Grid{lg}, vals};
    const GridFunction a = periodize(translate(f, Vec2(1.0, 0.0)));
    const GridFunction b = periodize(f);
    CHECK((a.values - b.values).abs().maxCoeff() < 1e-12);
  }
  {
    const LineGrid bad = make_line_grid(1, 3.0, 16);  // h = 3/8
    CHECK_THROWS_AS(periodize(GridFunction{Grid{bad}, ArrayXcd::Zero(16)}), std::domain_error);
  }
}

TEST_CASE("line_fourier: Parseval, shift theorem, inversion") {
  Rng rng(13);
  const LineGrid lg = make_line_grid(1, 4.0, 128);
  ArrayXcd vals(128);
  for (int i = 0; i < 128; ++i) vals[i] = rng.complex_normal();
  const GridFunction f{Grid{lg}, vals};

  const GridFunction zero = line_fourier(zero_function(Grid{lg}));
  CHECK(zero.values.abs().maxCoeff() == 0.0);

  const GridFunction fh = line_fourier(f);
  const Real lhs = std::sqrt((f.values.abs2() * cell_measure(f.grid)).sum());
  const Real rhs = std::sqrt((fh.values.abs2() * cell_measure(fh.grid)).sum());
  CHECK(std::abs(lhs - rhs) < 1e-10 * lhs);

  // translate-then-transform = transform-then-phase
  const Vec2 y(grid_spacing(f.grid) * 5, 0.0);
  const GridFunction a = line_fourier(translate(f, y));
  ArrayXcd phased(fh.values.size());
  for (std::int64_t i = 0; i < phased.size(); ++i) {
    const Real xi = grid_point(fh.grid, i)[0];
    phased[i] = fh.values[i] * unit_phase(kTwoPi * xi * y[0]);
  }
  CHECK((a.values - phased).abs().maxCoeff() < 1e-10);

  const GridFunction back = line_fourier_inverse(fh);
  CHECK((back.values - f.values).abs().maxCoeff() < 1e-11);
}

TEST_CASE("transforms are linear over complex scalars") {
  Rng rng(17);
  const LineGrid lg = make_line_grid(1, 2.0, 64);
  ArrayXcd u(64), v(64);
  for (int i = 0; i < 64; ++i) {
    u[i] = rng.complex_normal();
    v[i] = rng.complex_normal();
  }
  const Complex c(rng.normal(), rng.normal());
  const GridFunction fu{Grid{lg}, u}, fv{Grid{lg}, v};
  const GridFunction combo{Grid{lg}, c * u + v};
  const ArrayXcd lhs = line_fourier(combo).values;
  const ArrayXcd rhs = c * line_fourier(fu).values + line_fourier(fv).values;
  CHECK((lhs - rhs).abs().maxCoeff() < 1e-12 * rhs.abs().maxCoeff());
}

TEST_CASE("2-d line transform round trip") {
  Rng rng(19);
  const LineGrid lg = make_line_grid(2, 1.0, 16);
  ArrayXcd vals(grid_size(Grid{lg}));
  for (std::int64_t i = 0; i < vals.size(); ++i) vals[i] = rng.complex_normal();
  const GridFunction f{Grid{lg}, vals};
  const GridFunction fh = line_fourier(f);
  const Real lhs = std::sqrt((f.values.abs2() * cell_measure(f.grid)).sum());
  const Real rhs = std::sqrt((fh.values.abs2() * cell_measure(fh.grid)).sum());
  CHECK(std::abs(lhs - rhs) < 1e-10 * lhs);
  const GridFunction back = line_fourier_inverse(fh);
  CHECK((back.values - f.values).abs().maxCoeff() < 1e-11);
}

TEST_CASE("bump profile has unit mass and compact support") {
  const Profile p = bump_profile(1, 1.0, 512, 1.0);
  CHECK(std::abs(p.mass() - 1.0) < 1e-12);
  CHECK(p.values.minCoeff() >= 0.0);
  CHECK(p.values.maxCoeff() < 1.0);
  CHECK(p.values[0] == 0.0);  // vanishes at the support edge
}
