#include <doctest.h>

#include <cmath>

#include "multixfer/norms.hpp"

using namespace multixfer;

namespace {

// random step data on n cells: |f| values (possibly zero) and a positive measure
void random_step_instance(Rng& rng, int n, ArrayXd& absf, ArrayXd& dmu) {
  absf.resize(n);
  dmu.resize(n);
  const int pieces = rng.uniform_int(2, 6);
  std::vector<int> cuts{0, n};
  for (int t = 1; t < pieces; ++t) cuts.push_back(rng.uniform_int(1, n - 1));
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const Real level = rng.uniform() < 0.25 ? 0.0 : std::exp(rng.uniform(-1.0, 1.0));
    for (int i = cuts[s]; i < cuts[s + 1]; ++i) absf[i] = level;
  }
  for (int i = 0; i < n; ++i) dmu[i] = std::exp(rng.uniform(-1.5, 1.5)) / n;
}

}  // namespace

TEST_CASE("lp_norm basics") {
  const TorusGrid grid = make_torus_grid(1, 64);
  const WeightSpec unit = WeightSpec::constant(1, 1.0);
  const GridFunction one{Grid{grid}, ArrayXcd::Ones(64)};
  CHECK(lp_norm(one, 1.0, unit) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(lp_norm(one, 0.5, unit) == doctest::Approx(1.0).epsilon(1e-13));

  // indicator of a grid-aligned set: ||chi_E||_p = w(E)^{1/p}
  const WeightSpec w = WeightSpec::step({0.0, 0.5, 1.0}, {2.0, 0.5});
  ArrayXcd chi = ArrayXcd::Zero(64);
  for (int i = 0; i < 16; ++i) chi[i] = Complex(1, 0);  // E = [0, 1/4)
  const GridFunction f{Grid{grid}, chi};
  const Real wE = 2.0 * 0.25;
  for (Real p : {0.5, 1.0, 2.0, 3.0})
    CHECK(lp_norm(f, p, w) == doctest::Approx(std::pow(wE, 1.0 / p)).epsilon(1e-12));

  // homogeneity
  Rng rng(2);
  ArrayXcd vals(64);
  for (int i = 0; i < 64; ++i) vals[i] = rng.complex_normal();
  const GridFunction g{Grid{grid}, vals};
  const Complex c(1.3, -0.4);
  const GridFunction cg{Grid{grid}, c * vals};
  for (Real p : {0.7, 1.0, 2.0})
    CHECK(lp_norm(cg, p, unit) ==
          doctest::Approx(std::abs(c) * lp_norm(g, p, unit)).epsilon(1e-12));

  CHECK_THROWS_AS(lp_norm(g, 2.0, WeightSpec::constant(2, 1.0)), std::domain_error);
}

TEST_CASE("weak_norm: indicators, Chebyshev, brute-force oracle") {
  const TorusGrid grid = make_torus_grid(1, 64);
  const WeightSpec w = WeightSpec::step({0.0, 0.3, 1.0}, {1.5, 0.5});
  ArrayXcd chi = ArrayXcd::Zero(64);
  for (int i = 0; i < 32; ++i) chi[i] = Complex(1, 0);
  const GridFunction f{Grid{grid}, chi};
  for (Real p : {0.5, 1.0, 2.0}) {
    CHECK(weak_norm(f, p, w) == lp_norm(f, p, w));  // exact equality for indicators
  }

  Rng rng(23);
  for (int t = 0; t < 1000; ++t) {
    ArrayXd absf, dmu;
    random_step_instance(rng, 64, absf, dmu);
    for (Real p : {0.5, 1.0, 2.0})
      CHECK(weak_norm_core(absf, p, dmu) <= lp_norm_core(absf, p, dmu) * (1.0 + 1e-12) + 1e-300);
  }

  // two-value function: closed form, cross-checked against a dense t grid
  {
    ArrayXd absf(64), dmu(64);
    for (int i = 0; i < 64; ++i) {
      absf[i] = i < 8 ? 3.0 : 1.0;
      dmu[i] = (i % 2 == 0 ? 0.8 : 1.2) / 64.0;
    }
    Real wE1 = 0.0, wAll = 0.0;
    for (int i = 0; i < 64; ++i) {
      if (i < 8) wE1 += dmu[i];
      wAll += dmu[i];
    }
    const Real p = 1.5;
    const Real expected = std::max(3.0 * std::pow(wE1, 1.0 / p), std::pow(wAll, 1.0 / p));
    CHECK(weak_norm_core(absf, p, dmu) == doctest::Approx(expected).epsilon(1e-13));
    Real brute = 0.0;
    for (int it = 0; it < 30000; ++it) {
      const Real t = 3.2 * (it + 0.5) / 30000.0;
      Real meas = 0.0;
      for (int i = 0; i < 64; ++i)
        if (absf[i] > t) meas += dmu[i];
      brute = std::max(brute, t * std::pow(meas, 1.0 / p));
    }
    CHECK(weak_norm_core(absf, p, dmu) >= brute - 1e-10);
    CHECK(weak_norm_core(absf, p, dmu) <= brute + 1e-3);  // grid fineness gap only
  }
}

TEST_CASE("kolmogorov_norm: indicators, sandwich, zero input") {
  const int n = 64;
  {
    ArrayXd absf = ArrayXd::Zero(n), dmu = ArrayXd::Constant(n, 1.0 / n);
    CHECK(kolmogorov_norm_core(absf, 1.0, 0.5, dmu) == 0.0);
  }
  {
    ArrayXd absf = ArrayXd::Zero(n), dmu = ArrayXd::Constant(n, 1.0 / n);
    for (int i = 0; i < 16; ++i) absf[i] = 1.0;
    const Real p = 1.0, q = 0.5;
    CHECK(kolmogorov_norm_core(absf, p, q, dmu) ==
          doctest::Approx(std::pow(0.25, 1.0 / p)).epsilon(1e-13));
  }
  Rng rng(29);
  for (int t = 0; t < 1000; ++t) {
    ArrayXd absf, dmu;
    random_step_instance(rng, 64, absf, dmu);
    for (const auto& [p, q] :
         std::vector<std::pair<Real, Real>>{{1.0, 0.5}, {2.0, 1.0}, {2.0 / 3.0, 1.0 / 3.0}}) {
      const Real wk = weak_norm_core(absf, p, dmu);
      const Real ko = kolmogorov_norm_core(absf, p, q, dmu);
      const Real c = kolmogorov_constant(p, q);
      CHECK(wk <= ko * (1.0 + 1e-12) + 1e-300);
      CHECK(ko <= c * wk * (1.0 + 1e-12) + 1e-300);
    }
  }
}

TEST_CASE("random sets never beat the superlevel maximum") {
  Rng rng(31);
  for (int t = 0; t < 300; ++t) {
    ArrayXd absf, dmu;
    random_step_instance(rng, 64, absf, dmu);
    const Real p = 1.0, q = 0.5;
    const Real ko = kolmogorov_norm_core(absf, p, q, dmu);
    for (int trial = 0; trial < 20; ++trial) {
      Real mass_q = 0.0, meas = 0.0;
      for (int i = 0; i < 64; ++i) {
        if (rng.uniform() < 0.5) continue;
        meas += dmu[i];
        mass_q += std::pow(absf[i], q) * dmu[i];
      }
      if (meas <= 0.0) continue;
      const Real val = std::pow(mass_q, 1.0 / q) * std::pow(meas, 1.0 / p - 1.0 / q);
      CHECK(val <= ko * (1.0 + 1e-12) + 1e-300);
    }
  }
}

TEST_CASE("triangle inequalities in the right regime") {
  Rng rng(37);
  const int n = 64;
  for (int t = 0; t < 200; ++t) {
    ArrayXcd u(n), v(n);
    for (int i = 0; i < n; ++i) {
      u[i] = rng.complex_normal();
      v[i] = rng.complex_normal();
    }
    ArrayXd dmu(n);
    for (int i = 0; i < n; ++i) dmu[i] = std::exp(rng.uniform(-1.0, 1.0)) / n;
    const ArrayXd au = u.abs(), av = v.abs(), as = (u + v).abs();
    for (Real p : {0.5, 0.8}) {
      const Real lhs = std::pow(lp_norm_core(as, p, dmu), p);
      const Real rhs = std::pow(lp_norm_core(au, p, dmu), p) + std::pow(lp_norm_core(av, p, dmu), p);
      CHECK(lhs <= rhs * (1.0 + 1e-10));
    }
    for (Real p : {1.0, 2.0, 3.0}) {
      const Real lhs = lp_norm_core(as, p, dmu);
      const Real rhs = lp_norm_core(au, p, dmu) + lp_norm_core(av, p, dmu);
      CHECK(lhs <= rhs * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("norms are invariant under simultaneous lattice shifts") {
  Rng rng(41);
  const int n = 64;
  ArrayXd absf(n), dmu(n);
  for (int i = 0; i < n; ++i) {
    absf[i] = std::abs(rng.normal());
    dmu[i] = std::exp(rng.uniform(-1.0, 1.0)) / n;
  }
  ArrayXd absf_s(n), dmu_s(n);
  const int shift = 17;
  for (int i = 0; i < n; ++i) {
    absf_s[i] = absf[(i + shift) % n];
    dmu_s[i] = dmu[(i + shift) % n];
  }
  for (Real p : {0.5, 1.0, 2.0}) {
    // identical multisets of (value, measure) pairs; only the FP summation
    // order differs
    CHECK(lp_norm_core(absf, p, dmu) ==
          doctest::Approx(lp_norm_core(absf_s, p, dmu_s)).epsilon(1e-14));
    CHECK(weak_norm_core(absf, p, dmu) ==
          doctest::Approx(weak_norm_core(absf_s, p, dmu_s)).epsilon(1e-14));
  }
  CHECK(kolmogorov_norm_core(absf, 1.0, 0.5, dmu) ==
        doctest::Approx(kolmogorov_norm_core(absf_s, 1.0, 0.5, dmu_s)).epsilon(1e-14));
}
