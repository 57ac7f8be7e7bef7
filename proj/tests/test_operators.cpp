#include <doctest.h>

#include <cmath>

#include "multixfer/operators.hpp"

using namespace multixfer;

namespace {

TrigPolynomial random_poly(Rng& rng, int modes, int max_k) {
  TrigPolynomial g;
  g.dim = 1;
  for (int i = 0; i < modes; ++i) g.coeffs[{rng.uniform_int(-max_k, max_k), 0}] += rng.complex_normal();
  return g;
}

LatticeSymbol random_lattice(Rng& rng, int K) {
  LatticeSymbol m;
  m.dim = 1;
  m.arity = 2;
  m.max_freq = K;
  m.values.resize(std::int64_t(m.slot_box()) * m.slot_box());
  for (std::int64_t i = 0; i < m.values.size(); ++i) m.values[i] = rng.complex_normal() * 0.5;
  m.sup_norm = m.values.abs().maxCoeff();
  return m;
}

LatticeSymbol ones_lattice(int K, int arity = 2) {
  LatticeSymbol m;
  m.dim = 1;
  m.arity = arity;
  m.max_freq = K;
  std::int64_t total = 1;
  for (int l = 0; l < arity; ++l) total *= m.slot_box();
  m.values = ArrayXcd::Ones(total);
  m.sup_norm = 1.0;
  return m;
}

}  // namespace

TEST_CASE("apply_periodic: identity symbol gives the pointwise product") {
  Rng rng(2);
  const TorusGrid grid = make_torus_grid(1, 64);
  const TrigPolynomial g1 = random_poly(rng, 5, 6), g2 = random_poly(rng, 5, 6);
  const GridFunction out = apply_periodic(ones_lattice(6), {g1, g2}, grid);
  const ArrayXcd prod = synthesize(g1, grid).values * synthesize(g2, grid).values;
  CHECK((out.values - prod).abs().maxCoeff() < 1e-12 * (1.0 + prod.abs().maxCoeff()));
}

TEST_CASE("apply_periodic: delta symbol keeps only the zero mode") {
  Rng rng(4);
  const TorusGrid grid = make_torus_grid(1, 64);
  const TrigPolynomial g1 = random_poly(rng, 5, 4), g2 = random_poly(rng, 5, 4);
  LatticeSymbol delta = ones_lattice(4);
  delta.values.setZero();
  delta.values[delta.slot_index({0, 0}) * delta.slot_box() + delta.slot_index({0, 0})] =
      Complex(1, 0);
  const GridFunction out = apply_periodic(delta, {g1, g2}, grid);
  const Complex expect = g1.coeffs.count({0, 0}) && g2.coeffs.count({0, 0})
                             ? g1.coeffs.at({0, 0}) * g2.coeffs.at({0, 0})
                             : Complex(0, 0);
  for (int i = 0; i < 64; ++i) CHECK(std::abs(out.values[i] - expect) < 1e-12);
}

TEST_CASE("accelerated periodic path agrees with direct summation") {
  Rng rng(6);
  const TorusGrid grid = make_torus_grid(1, 64);
  for (int t = 0; t < 10; ++t) {
    const LatticeSymbol m = random_lattice(rng, 6);
    const TrigPolynomial g1 = random_poly(rng, 6, 6), g2 = random_poly(rng, 6, 6);
    const GridFunction fast = apply_periodic(m, {g1, g2}, grid);
    const GridFunction slow = apply_periodic_direct(m, {g1, g2}, grid);
    CHECK((fast.values - slow.values).abs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("apply_periodic rejects out-of-box supports and unresolved bands") {
  Rng rng(8);
  const TrigPolynomial big = random_poly(rng, 3, 10);
  CHECK_THROWS_AS(apply_periodic(ones_lattice(4), {big, big}, make_torus_grid(1, 64)),
                  std::domain_error);
  const TrigPolynomial g = random_poly(rng, 3, 6);
  CHECK_THROWS_AS(apply_periodic(ones_lattice(6), {g, g}, make_torus_grid(1, 16)),
                  std::domain_error);
}

TEST_CASE("periodic multiplier is multilinear and commutes with translation") {
  Rng rng(10);
  const TorusGrid grid = make_torus_grid(1, 64);
  const LatticeSymbol m = random_lattice(rng, 5);
  const TrigPolynomial a = random_poly(rng, 4, 5), b = random_poly(rng, 4, 5),
                       c = random_poly(rng, 4, 5);
  const Complex z(0.7, -1.1);
  {
    const ArrayXcd lhs = apply_periodic(m, {trig_sum(trig_scale(a, z), b), c}, grid).values;
    const ArrayXcd rhs =
        z * apply_periodic(m, {a, c}, grid).values + apply_periodic(m, {b, c}, grid).values;
    CHECK((lhs - rhs).abs().maxCoeff() < 1e-10);
  }
  {
    const Vec2 y(7.0 / 64.0, 0.0);
    const GridFunction lhs = translate(apply_periodic(m, {a, b}, grid), y);
    const GridFunction rhs = apply_periodic(m, {translate(a, y), translate(b, y)}, grid);
    CHECK((lhs.values - rhs.values).abs().maxCoeff() < 1e-11);
  }
  {
    // sup-norm control by sup|m| sum|a^| sum|b^|
    Real s1 = 0.0, s2 = 0.0;
    for (const auto& [k, v] : a.coeffs) s1 += std::abs(v);
    for (const auto& [k, v] : b.coeffs) s2 += std::abs(v);
    const GridFunction out = apply_periodic(m, {a, b}, grid);
    CHECK(out.values.abs().maxCoeff() <= m.sup_norm * s1 * s2 * (1.0 + 1e-12));
  }
}

TEST_CASE("maximal operators: singleton, idempotence, monotonicity, unions") {
  Rng rng(12);
  const TorusGrid grid = make_torus_grid(1, 64);
  const TrigPolynomial a = random_poly(rng, 4, 5), b = random_poly(rng, 4, 5);
  const LatticeSymbol m1 = random_lattice(rng, 5), m2 = random_lattice(rng, 5),
                      m3 = random_lattice(rng, 5);
  const GridFunction single = maximal_periodic({m1}, {a, b}, grid);
  CHECK((single.values - apply_periodic(m1, {a, b}, grid).values.abs()).abs().maxCoeff() < 1e-13);

  const GridFunction dup = maximal_periodic({m1, m1}, {a, b}, grid);
  CHECK((dup.values - single.values).abs().maxCoeff() == 0.0);

  const GridFunction two = maximal_periodic({m1, m2}, {a, b}, grid);
  for (int i = 0; i < 64; ++i) CHECK(two.values[i].real() >= single.values[i].real() - 1e-14);

  const GridFunction all3 = maximal_periodic({m1, m2, m3}, {a, b}, grid);
  const GridFunction third = maximal_periodic({m3}, {a, b}, grid);
  for (int i = 0; i < 64; ++i)
    CHECK(all3.values[i].real() ==
          doctest::Approx(std::max(two.values[i].real(), third.values[i].real())).epsilon(1e-14));
}

namespace {

// band-limited random input on the line grid: spectrum in |xi| <= band
GridFunction band_limited(Rng& rng, const LineGrid& lg, Real band) {
  const LineGrid dual = dual_grid(lg);
  ArrayXcd spec = ArrayXcd::Zero(grid_size(Grid{dual}));
  for (std::int64_t i = 0; i < spec.size(); ++i)
    if (std::abs(grid_point(Grid{dual}, i)[0]) <= band) spec[i] = rng.complex_normal();
  return line_fourier_inverse(GridFunction{Grid{dual}, std::move(spec)});
}

}  // namespace

TEST_CASE("trilinear identity symbol gives the triple product") {
  Rng rng(13);
  const TorusGrid grid = make_torus_grid(1, 64);
  const TrigPolynomial g1 = random_poly(rng, 3, 3), g2 = random_poly(rng, 3, 3),
                       g3 = random_poly(rng, 3, 3);
  const GridFunction out = apply_periodic(ones_lattice(3, 3), {g1, g2, g3}, grid);
  const ArrayXcd prod =
      synthesize(g1, grid).values * synthesize(g2, grid).values * synthesize(g3, grid).values;
  CHECK((out.values - prod).abs().maxCoeff() < 1e-11 * (1.0 + prod.abs().maxCoeff()));
}

TEST_CASE("two-dimensional periodic multiplier: identity gives the product") {
  Rng rng(15);
  const TorusGrid grid = make_torus_grid(2, 16);
  TrigPolynomial g1, g2;
  g1.dim = g2.dim = 2;
  for (int t = 0; t < 4; ++t) {
    g1.coeffs[{rng.uniform_int(-2, 2), rng.uniform_int(-2, 2)}] += rng.complex_normal();
    g2.coeffs[{rng.uniform_int(-2, 2), rng.uniform_int(-2, 2)}] += rng.complex_normal();
  }
  const SymbolSpec one = SymbolSpec::constant(2, 2, Complex(1, 0));
  const LatticeSymbol lat = restrict_lattice(one, FrequencyBox{2, 2});
  const GridFunction out = apply_periodic(lat, {g1, g2}, grid);
  const ArrayXcd prod = synthesize(g1, grid).values * synthesize(g2, grid).values;
  CHECK((out.values - prod).abs().maxCoeff() < 1e-11 * (1.0 + prod.abs().maxCoeff()));
}

TEST_CASE("trilinear line multiplier: identity gives the triple product") {
  Rng rng(17);
  const LineGrid lg = make_line_grid(1, 4.0, 128);
  const GridFunction f1 = band_limited(rng, lg, 2.0), f2 = band_limited(rng, lg, 2.0),
                     f3 = band_limited(rng, lg, 2.0);
  const SymbolSpec one = SymbolSpec::constant(1, 3, Complex(1, 0));
  const GridFunction out = apply_line(one, {f1, f2, f3}, 1e9);
  const ArrayXcd prod = f1.values * f2.values * f3.values;
  CHECK((out.values - prod).abs().maxCoeff() < 1e-8 * (1.0 + prod.abs().maxCoeff()));
}

TEST_CASE("apply_line: identity symbol multiplies band-limited inputs") {
  Rng rng(14);
  const LineGrid lg = make_line_grid(1, 4.0, 128);
  const GridFunction f1 = band_limited(rng, lg, 3.0), f2 = band_limited(rng, lg, 3.0);
  const SymbolSpec one = SymbolSpec::constant(1, 2, Complex(1, 0));
  const GridFunction out = apply_line(one, {f1, f2}, 1e9);  // cutoff clamps to Nyquist
  const ArrayXcd prod = f1.values * f2.values;
  CHECK((out.values - prod).abs().maxCoeff() < 1e-8 * (1.0 + prod.abs().maxCoeff()));
}

TEST_CASE("apply_line: modulation symbols translate the inputs") {
  Rng rng(16);
  const LineGrid lg = make_line_grid(1, 4.0, 128);  // h = 1/16
  const GridFunction f1 = band_limited(rng, lg, 3.0), f2 = band_limited(rng, lg, 3.0);
  const Real a = 0.5, b = -0.25;  // lattice shifts
  const SymbolSpec mod = SymbolSpec::modulation(1, 2, {Vec2(a, 0), Vec2(b, 0)});
  const GridFunction out = apply_line(mod, {f1, f2}, 1e9);
  const ArrayXcd expect =
      translate(f1, Vec2(a, 0)).values * translate(f2, Vec2(b, 0)).values;
  CHECK((out.values - expect).abs().maxCoeff() < 1e-8 * (1.0 + expect.abs().maxCoeff()));
}

TEST_CASE("apply_line: separable symbols factor into linear multiplier passes") {
  Rng rng(18);
  const LineGrid lg = make_line_grid(1, 4.0, 128);
  const GridFunction f1 = band_limited(rng, lg, 3.0), f2 = band_limited(rng, lg, 3.0);
  const auto ga = [](const Vec2& xi) { return Complex(std::exp(-xi.squaredNorm()), 0.0); };
  const auto gb = [](const Vec2& xi) { return Complex(std::exp(-0.5 * xi.squaredNorm()), 0.0); };
  const SymbolSpec sep = SymbolSpec::separable(1, {ga, gb}, {1.0, 1.0}, "gauss_pair");
  const GridFunction out = apply_line(sep, {f1, f2}, 1e9);

  // oracle: apply each linear multiplier separately, then multiply pointwise
  const auto linear_apply = [&](const GridFunction& f, auto&& sym) {
    GridFunction fh = line_fourier(f);
    for (std::int64_t i = 0; i < fh.values.size(); ++i)
      fh.values[i] *= sym(Vec2(grid_point(fh.grid, i)[0], 0.0));
    return line_fourier_inverse(fh);
  };
  const ArrayXcd expect = linear_apply(f1, ga).values * linear_apply(f2, gb).values;
  CHECK((out.values - expect).abs().maxCoeff() < 1e-8 * (1.0 + expect.abs().maxCoeff()));
}

TEST_CASE("apply_kernel: point-mass tensor, positivity, BK identity") {
  Rng rng(20);
  const LineGrid lg = make_line_grid(1, 4.0, 256);  // h = 1/32
  {
    // K = tensor of near-point masses at 0: recovers the product
    const LineGrid kg = make_line_grid(2, 1.0 / 16.0, 4);  // 2x2 cells around 0
    ArrayXcd kv = ArrayXcd::Zero(grid_size(Grid{kg}));
    // mass concentrated on the cell at the origin
    const Real cell = cell_measure(Grid{kg});
    for (std::int64_t i = 0; i < kv.size(); ++i) {
      const Vec2 y = grid_point(Grid{kg}, i);
      if (y[0] == 0.0 && y[1] == 0.0) kv[i] = Complex(1.0 / cell, 0.0);
    }
    const GridFunction K{Grid{kg}, kv};
    const GridFunction f1 = band_limited(rng, lg, 2.0), f2 = band_limited(rng, lg, 2.0);
    const GridFunction out = apply_kernel(K, {f1, f2});
    const ArrayXcd prod = f1.values * f2.values;
    CHECK((out.values - prod).abs().maxCoeff() < 1e-10 * (1.0 + prod.abs().maxCoeff()));
  }
  {
    // nonnegative kernel, nonnegative inputs: nonnegative output
    const LineGrid kg = make_line_grid(2, 0.5, 32);  // spacing 1/32 matches lg
    ArrayXcd kv(grid_size(Grid{kg}));
    for (std::int64_t i = 0; i < kv.size(); ++i) {
      const Vec2 y = grid_point(Grid{kg}, i);
      kv[i] = std::exp(-8.0 * y.squaredNorm());
    }
    const GridFunction K{Grid{kg}, kv};
    ArrayXcd pos1(grid_size(Grid{lg})), pos2(grid_size(Grid{lg}));
    for (std::int64_t i = 0; i < pos1.size(); ++i) {
      pos1[i] = Complex(rng.uniform(), 0.0);
      pos2[i] = Complex(rng.uniform(), 0.0);
    }
    const GridFunction out =
        apply_kernel(K, {GridFunction{Grid{lg}, pos1}, GridFunction{Grid{lg}, pos2}});
    CHECK(out.values.real().minCoeff() >= -1e-14);
    CHECK(out.values.imag().abs().maxCoeff() < 1e-12);
  }
  {
    // agreement with apply_line on the kernel transform (the B_K identity)
    const LineGrid kg = make_line_grid(2, 0.5, 32);  // spacing 1/32 matches lg
    ArrayXcd kv(grid_size(Grid{kg}));
    for (std::int64_t i = 0; i < kv.size(); ++i) {
      const Vec2 y = grid_point(Grid{kg}, i);
      const Real u = (y / 0.5).squaredNorm();
      kv[i] = u < 1.0 ? std::exp(-1.0 / (1.0 - u)) * (1.0 + 0.3 * std::sin(kTwoPi * y[0])) : 0.0;
    }
    const GridFunction K{Grid{kg}, kv};
    const GridFunction f1 = band_limited(rng, lg, 2.0), f2 = band_limited(rng, lg, 2.0);
    const GridFunction via_kernel = apply_kernel(K, {f1, f2});
    const GridFunction via_line =
        apply_line(SymbolSpec::kernel_transform(K, 1, 2), {f1, f2}, 1e9);
    CHECK((via_kernel.values - via_line.values).abs().maxCoeff() <
          1e-6 * (1.0 + via_kernel.values.abs().maxCoeff()));
  }
  {
    // insufficient padding is rejected
    const LineGrid kg = make_line_grid(2, 3.0, 64);
    const GridFunction K{Grid{kg}, ArrayXcd::Zero(grid_size(Grid{kg}))};
    const GridFunction f = band_limited(rng, make_line_grid(1, 4.0, 128), 1.0);
    CHECK_THROWS_AS(apply_kernel(K, {f, f}), std::domain_error);
  }
}

TEST_CASE("apply_line is multilinear") {
  Rng rng(22);
  const LineGrid lg = make_line_grid(1, 4.0, 128);
  const GridFunction f1 = band_limited(rng, lg, 2.0), f2 = band_limited(rng, lg, 2.0),
                     f3 = band_limited(rng, lg, 2.0);
  const SymbolSpec g = SymbolSpec::closed_form(
      1, 2,
      [](const SlotArgs& xi) {
        return Complex(std::exp(-(xi[0].squaredNorm() + 0.5 * xi[1].squaredNorm())), 0.0);
      },
      1.0, "gauss");
  const Complex z(0.3, 1.2);
  const LineMultiplierTable table = sample_line_symbol(g, lg, 8.0);
  const GridFunction combo{Grid{lg}, z * f1.values + f3.values};
  const ArrayXcd lhs = apply_line(table, {combo, f2}).values;
  const ArrayXcd rhs =
      z * apply_line(table, {f1, f2}).values + apply_line(table, {f3, f2}).values;
  CHECK((lhs - rhs).abs().maxCoeff() < 1e-10 * (1.0 + rhs.abs().maxCoeff()));
}

TEST_CASE("mollification domination") {
  Rng rng(24);
  const LineGrid lg = make_line_grid(1, 4.0, 128);
  const Profile phi = bump_profile(1, 1.0, 16, 1.0);  // nodes on the dual lattice (spacing 1/8)
  {
    const SymbolSpec zero = SymbolSpec::constant(1, 2, Complex(0, 0));
    const GridFunction f1 = band_limited(rng, lg, 3.0), f2 = band_limited(rng, lg, 3.0);
    const auto rep = mollification_domination(zero, phi, f1, f2, 6.0);
    CHECK(rep.left_sup == 0.0);
    CHECK(rep.right_sup == 0.0);
    CHECK(rep.pass);
  }
  {
    const SymbolSpec one = SymbolSpec::constant(1, 2, Complex(1, 0));
    const GridFunction f1 = band_limited(rng, lg, 3.0), f2 = band_limited(rng, lg, 3.0);
    const auto rep = mollification_domination(one, phi, f1, f2, 6.0);
    CHECK(rep.max_violation <= 1e-8);  // equality up to rounding for m = 1
    CHECK(rep.max_violation >= -1e-8);
    CHECK(rep.pass);
  }
  for (int t = 0; t < 5; ++t) {
    const SymbolSpec m = SymbolSpec::closed_form(
        1, 2,
        [a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), c = rng.complex_normal()](
            const SlotArgs& xi) {
          const Real dx = xi[0][0] - a, dy = xi[1][0] - b;
          return c * std::exp(-(dx * dx + dy * dy));
        },
        3.0, "lobe");
    const GridFunction f1 = band_limited(rng, lg, 3.0), f2 = band_limited(rng, lg, 3.0);
    const auto rep = mollification_domination(m, phi, f1, f2, 6.0);
    CHECK(rep.pass);
  }
}
