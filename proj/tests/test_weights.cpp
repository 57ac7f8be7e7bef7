#include <doctest.h>

#include <cmath>

#include "multixfer/norms.hpp"

using namespace multixfer;

TEST_CASE("ap_constant is exactly 1 for constant weights") {
  const WeightSpec unit = WeightSpec::constant(1, 1.0);
  for (Real p : {1.0, 2.0, 4.0}) CHECK(ap_constant(unit, p, 6) == doctest::Approx(1.0).epsilon(1e-14));
  const WeightSpec unit2 = WeightSpec::constant(2, 1.0);
  CHECK(ap_constant(unit2, 2.0, 4) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("ap_constant matches the exhaustive interval scan for a step weight") {
  // levels 1 and 9 with half the mass each: breakpoint at 0.9
  const WeightSpec w = WeightSpec::step({0.0, 0.9, 1.0}, {1.0, 9.0});
  const Real estimator = ap_constant(w, 2.0, 6);  // sampled at n = 256 midpoints

  // oracle: every subinterval of the same 256-cell sampling
  const int n = 256;
  const Grid torus{make_torus_grid(1, n)};
  const ArrayXd ws = sample_weight(w, torus);
  const ArrayXd sg = ws.pow(-1.0);
  Real brute = 0.0;
  std::vector<Real> pw(n + 1, 0.0), ps(n + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    pw[i + 1] = pw[i] + ws[i];
    ps[i + 1] = ps[i] + sg[i];
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b <= n; ++b) {
      const Real len = b - a;
      brute = std::max(brute, (pw[b] - pw[a]) / len * ((ps[b] - ps[a]) / len));
    }
  CHECK(estimator == doctest::Approx(brute).epsilon(1e-12));
  CHECK(brute == doctest::Approx(25.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("ap_constant refinement: stabilization inside A_2, doubling outside") {
  for (Real alpha : {-0.5, 0.5}) {
    const WeightSpec w = WeightSpec::power_sine(1, {alpha, 0.0});
    const Real a = ap_constant(w, 2.0, 6);
    const Real b = ap_constant(w, 2.0, 8);
    CHECK(b / a < 1.05);
    CHECK(b >= a);  // monotone under refinement
  }
  {
    const WeightSpec w = WeightSpec::power_sine(1, {1.5, 0.0});
    const Real a = ap_constant(w, 2.0, 6);
    const Real b = ap_constant(w, 2.0, 8);
    CHECK(b > 2.0 * a);
  }
}

TEST_CASE("ap_constant >= 1 and monotone in depth") {
  const std::vector<WeightSpec> corpus{
      WeightSpec::constant(1, 3.0), WeightSpec::power_sine(1, {0.5, 0.0}),
      WeightSpec::step({0.0, 0.25, 0.6, 1.0}, {0.5, 4.0, 1.0})};
  for (const auto& w : corpus) {
    Real prev = 0.0;
    for (int depth = 1; depth <= 6; ++depth) {
      const Real c = ap_constant(w, 2.0, depth);
      CHECK(c >= 1.0 - 1e-13);
      CHECK(c >= prev - 1e-13);
      prev = c;
    }
  }
  // equality holds only for constants: a non-constant witness stays > 1
  CHECK(ap_constant(WeightSpec::step({0.0, 0.5, 1.0}, {1.0, 2.0}), 2.0, 4) > 1.0 + 1e-6);
}

TEST_CASE("two-dimensional ap_constant matches direct cube enumeration") {
  const WeightSpec w = WeightSpec::power_sine(2, {0.5, -0.25});
  const int depth = 2;
  const Real estimator = ap_constant(w, 2.0, depth);

  // direct recomputation: same midpoint sampling, same dyadic cubes on the
  // two half-shifted grids, averages summed one cell at a time
  const int n = 1 << (depth + 2);
  const Grid torus{make_torus_grid(2, n)};
  const ArrayXd ws = sample_weight(w, torus);
  const auto at = [&](int r, int c) { return ws[std::int64_t(((r % n) + n) % n) * n + ((c % n) + n) % n]; };
  Real brute = 0.0;
  for (int j = 0; j <= depth; ++j) {
    const int side = n >> j;
    for (int shift : {0, side / 2}) {
      for (int r0 = shift; r0 < n + shift; r0 += side)
        for (int c0 = shift; c0 < n + shift; c0 += side) {
          Real sw = 0.0, ss = 0.0;
          for (int r = r0; r < r0 + side; ++r)
            for (int c = c0; c < c0 + side; ++c) {
              sw += at(r, c);
              ss += 1.0 / at(r, c);
            }
          const Real cells = static_cast<Real>(side) * side;
          brute = std::max(brute, (sw / cells) * (ss / cells));
        }
    }
  }
  CHECK(estimator == doctest::Approx(brute).epsilon(1e-11));
  CHECK(estimator > 1.0);
}

TEST_CASE("a_vec_p_check") {
  const ExponentTuple e22 = make_exponents({2.0, 2.0});
  {
    const std::vector<WeightSpec> ws{WeightSpec::constant(1, 1.0), WeightSpec::constant(1, 1.0)};
    const auto rep = a_vec_p_check(ws, e22, 4);
    CHECK(rep.v_constant == doctest::Approx(1.0).epsilon(1e-13));
    for (Real c : rep.sigma_constant) CHECK(c == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(rep.v_index == doctest::Approx(2.0));
    CHECK(rep.sigma_index[0] == doctest::Approx(4.0));
  }
  {
    const WeightSpec w = WeightSpec::power_sine(1, {0.5, 0.0});
    const auto r1 = a_vec_p_check({w, w}, e22, 4);
    const auto r2 = a_vec_p_check({w, w}, e22, 6);
    CHECK(std::isfinite(r2.v_constant));
    CHECK(r2.v_constant / r1.v_constant < 1.05);
    for (std::size_t j = 0; j < 2; ++j) CHECK(r2.sigma_constant[j] / r1.sigma_constant[j] < 1.05);
  }
  {
    // p_1 = 1 exercises the w^{1/N} in A_1 convention
    const ExponentTuple e12 = make_exponents({1.0, 2.0});
    const std::vector<WeightSpec> ws{WeightSpec::constant(1, 1.0), WeightSpec::constant(1, 1.0)};
    const auto rep = a_vec_p_check(ws, e12, 4);
    CHECK(rep.used_a1_convention[0]);
    CHECK_FALSE(rep.used_a1_convention[1]);
    CHECK(rep.sigma_constant[0] == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK_THROWS_AS(a_vec_p_check({WeightSpec::constant(1, 1.0)}, e22, 4), std::domain_error);
}

TEST_CASE("smooth_weight: constants, mass, continuity") {
  const Mollifier psi = Mollifier::bump(1, 0.25, 128);  // node spacing 1/256
  {
    const WeightSpec c = WeightSpec::constant(1, 2.5);
    const WeightSpec sc = smooth_weight(c, psi);
    for (Real x : {0.0, 0.31, 0.77}) CHECK(sc.eval(Vec2(x, 0)) == doctest::Approx(2.5).epsilon(1e-12));
  }
  {
    const WeightSpec w = WeightSpec::step({0.0, 0.4, 1.0}, {0.5, 3.0});
    const WeightSpec sw = smooth_weight(w, psi);
    const Grid g{make_torus_grid(1, 512)};
    const Real mass_w = sample_weight(w, g).sum() / 512.0;
    const Real mass_sw = sample_weight(sw, g).sum() / 512.0;
    CHECK(std::abs(mass_w - mass_sw) < 1e-10);
    CHECK(sample_weight(sw, g).minCoeff() > 0.0);
  }
  {
    // smoothing kills the jump: the max neighbor gap shrinks when the grid and
    // the mollifier quadrature are refined together
    const WeightSpec w = WeightSpec::step({0.0, 0.5, 1.0}, {1.0, 9.0});
    const auto max_jump = [&](int n) {
      const WeightSpec sw = smooth_weight(w, Mollifier::bump(1, 0.25, n / 2));
      const ArrayXd s = sample_weight(sw, Grid{make_torus_grid(1, n)});
      Real m = 0.0;
      for (int i = 0; i < n; ++i) m = std::max(m, std::abs(s[(i + 1) % n] - s[i]));
      return m;
    };
    const Real j256 = max_jump(256);
    const Real j1024 = max_jump(1024);
    CHECK(j1024 < j256 / 2.0);
    const ArrayXd raw = sample_weight(w, Grid{make_torus_grid(1, 1024)});
    Real raw_jump = 0.0;
    for (int i = 0; i < 1024; ++i)
      raw_jump = std::max(raw_jump, std::abs(raw[(i + 1) % 1024] - raw[i]));
    CHECK(raw_jump > 7.9);  // the unsmoothed weight keeps its jump
  }
}

TEST_CASE("smoothed_min stays positive") {
  const Mollifier psi = Mollifier::bump(1, 0.25, 128);
  CHECK(smoothed_min(WeightSpec::constant(1, 1.0), psi) == doctest::Approx(1.0).epsilon(1e-12));
  {
    const WeightSpec near_singular = WeightSpec::step({0.0, 0.49, 0.51, 1.0}, {1.0, 1e-6, 1.0});
    const Real m = smoothed_min(near_singular, psi);
    CHECK(m > 0.0);
    CHECK(m < 1.0);
  }
  {
    const Real m = smoothed_min(WeightSpec::power_sine(1, {0.5, 0.0}), psi);
    CHECK(m > 0.0);
    CHECK(m < 1.0);
  }
}

TEST_CASE("mollifier invariants") {
  CHECK_THROWS_AS(Mollifier::bump(1, 0.75, 64), std::domain_error);
  const Mollifier psi = Mollifier::bump(1, 0.5, 256);
  CHECK(std::abs(psi.profile.mass() - 1.0) < 1e-10);
  CHECK(psi.profile.values.minCoeff() >= 0.0);
}

TEST_CASE("power weights sampled at midpoints avoid the sine zero") {
  const WeightSpec w = WeightSpec::power_sine(1, {0.5, 0.0});
  CHECK(sample_weight(w, Grid{make_torus_grid(1, 64)}).minCoeff() > 0.0);
}

TEST_CASE("approx_identity_norm on the unit weight is about 1") {
  const WeightSpec unit = WeightSpec::constant(1, 1.0);
  for (Real p : {1.0, 2.0}) {
    const auto rep = approx_identity_norm(unit, p, 8, 5, 1);
    CHECK(rep.estimate >= 0.99);
    CHECK(rep.estimate <= 1.0 + 1e-9);
    CHECK(rep.within);
    CHECK(rep.threshold == doctest::Approx(std::pow(2.0, 1.0 / p)));
    CHECK(rep.analytic_upper == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("the fixed bump is admissible and its transform is calibrated") {
  const Profile& h = approx_identity_bump(1);
  CHECK(std::abs(h.mass() - 1.0) < 1e-12);
  CHECK(h.values.maxCoeff() < 1.0);
  CHECK(h.values.minCoeff() >= 0.0);
  CHECK(std::abs(approx_identity_bump_transform(1, 4, Vec2(0, 0)) - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(approx_identity_bump_value(1, Vec2(0.999, 0))) < 1e-3);
  // closed form and tabulated normalizations agree
  CHECK(approx_identity_bump_value(1, Vec2(0, 0)) ==
        doctest::Approx(h.values.maxCoeff()).epsilon(1e-6));
}
