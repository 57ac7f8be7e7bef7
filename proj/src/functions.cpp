#include "multixfer/functions.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

namespace multixfer {

namespace {

// 1-D DFT along the flat array (dim 1) or along both axes of a row-major
// n x n array (dim 2). Forward is unnormalized sum with e^{-2 pi i}, inverse
// carries the 1/n per axis (Eigen's convention).
void dft_inplace(ArrayXcd& a, int dim, int n, bool inverse) {
  Eigen::FFT<Real> fft;
  using Vec = Eigen::VectorXcd;
  if (dim == 1) {
    Vec in = a.matrix();
    Vec out(n);
    if (inverse)
      fft.inv(out, in);
    else
      fft.fwd(out, in);
    a = out.array();
    return;
  }
  Vec in(n), out(n);
  // rows
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) in[c] = a[std::int64_t(r) * n + c];
    if (inverse)
      fft.inv(out, in);
    else
      fft.fwd(out, in);
    for (int c = 0; c < n; ++c) a[std::int64_t(r) * n + c] = out[c];
  }
  // columns
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) in[r] = a[std::int64_t(r) * n + c];
    if (inverse)
      fft.inv(out, in);
    else
      fft.fwd(out, in);
    for (int r = 0; r < n; ++r) a[std::int64_t(r) * n + c] = out[r];
  }
}

int wrap_mod(int k, int n) {
  int r = k % n;
  return r < 0 ? r + n : r;
}

}  // namespace

Complex TrigPolynomial::eval(const Vec2& x) const {
  Complex acc(0.0, 0.0);
  for (const auto& [k, a] : coeffs) {
    const Real phase = kTwoPi * (k[0] * x[0] + k[1] * x[1]);
    acc += a * unit_phase(phase);
  }
  return acc;
}

int TrigPolynomial::max_abs_freq() const {
  int m = 0;
  for (const auto& [k, a] : coeffs) m = std::max({m, std::abs(k[0]), std::abs(k[1])});
  return m;
}

TrigPolynomial& TrigPolynomial::add(const std::array<int, 2>& k, Complex a) {
  if (dim == 1 && k[1] != 0) throw std::domain_error("dim-1 trig polynomial with k[1] != 0");
  coeffs[k] += a;
  return *this;
}

TrigPolynomial trig_constant(int dim, Complex c) {
  TrigPolynomial t;
  t.dim = dim;
  t.coeffs[{0, 0}] = c;
  return t;
}

TrigPolynomial trig_sum(const TrigPolynomial& a, const TrigPolynomial& b) {
  if (a.dim != b.dim) throw std::domain_error("trig_sum: dimension mismatch");
  TrigPolynomial out = a;
  for (const auto& [k, c] : b.coeffs) out.coeffs[k] += c;
  return out;
}

TrigPolynomial trig_scale(const TrigPolynomial& a, Complex c) {
  TrigPolynomial out = a;
  for (auto& [k, v] : out.coeffs) v *= c;
  return out;
}

GridFunction make_grid_function(const Grid& grid, ArrayXcd values) {
  if (values.size() != grid_size(grid))
    throw std::domain_error("grid function value count does not match grid cardinality");
  if (!values.isFinite().all()) throw std::domain_error("grid function samples must be finite");
  return GridFunction{grid, std::move(values)};
}

GridFunction zero_function(const Grid& grid) {
  return GridFunction{grid, ArrayXcd::Zero(grid_size(grid))};
}

Vec2 Profile::node(std::int64_t flat) const {
  const Real h = spacing();
  Vec2 y(0.0, 0.0);
  if (dim == 1) {
    y[0] = -radius + h * static_cast<Real>(flat);
  } else {
    y[0] = -radius + h * static_cast<Real>(flat / n_per_axis);
    y[1] = -radius + h * static_cast<Real>(flat % n_per_axis);
  }
  return y;
}

Profile bump_profile(int dim, Real radius, int n_per_axis, Real mass) {
  if (dim < 1 || dim > 2) throw std::domain_error("profile dim must be 1 or 2");
  if (!(radius > 0.0)) throw std::domain_error("profile radius must be positive");
  if (n_per_axis < 2) throw std::domain_error("profile needs at least 2 samples per axis");
  Profile p;
  p.dim = dim;
  p.radius = radius;
  p.n_per_axis = n_per_axis;
  const auto bump1 = [&](Real t) -> Real {
    const Real u = t / radius;
    const Real s = 1.0 - u * u;
    return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
  };
  p.values.resize(p.size());
  for (std::int64_t j = 0; j < p.size(); ++j) {
    const Vec2 y = p.node(j);
    p.values[j] = dim == 1 ? bump1(y[0]) : bump1(y[0]) * bump1(y[1]);
  }
  const Real m0 = p.values.sum() * p.cell();
  if (!(m0 > 0.0)) throw std::domain_error("profile quadrature mass vanished");
  p.values *= mass / m0;
  return p;
}

TrigPolynomial fourier_coefficients(const GridFunction& g, const FrequencyBox& box) {
  const auto* torus = std::get_if<TorusGrid>(&g.grid);
  if (!torus) throw std::domain_error("fourier_coefficients expects a torus grid function");
  const int n = torus->n_per_axis;
  const int d = torus->dim;
  if (box.dim != d) throw std::domain_error("frequency box dimension mismatch");
  if (n <= 2 * box.max_freq)
    throw std::domain_error("aliasing: grid does not resolve the frequency box (need n > 2K)");

  ArrayXcd spec = g.values;
  dft_inplace(spec, d, n, /*inverse=*/false);
  const Real scale = cell_measure(g.grid);

  TrigPolynomial out;
  out.dim = d;
  const int K = box.max_freq;
  if (d == 1) {
    for (int k = -K; k <= K; ++k) out.coeffs[{k, 0}] = spec[wrap_mod(k, n)] * scale;
  } else {
    for (int k0 = -K; k0 <= K; ++k0)
      for (int k1 = -K; k1 <= K; ++k1)
        out.coeffs[{k0, k1}] =
            spec[std::int64_t(wrap_mod(k0, n)) * n + wrap_mod(k1, n)] * scale;
  }
  return out;
}

GridFunction synthesize(const TrigPolynomial& t, const TorusGrid& grid) {
  const int n = grid.n_per_axis;
  if (grid.dim != t.dim) throw std::domain_error("synthesize: dimension mismatch");
  if (n <= 2 * t.max_abs_freq())
    throw std::domain_error("aliasing: grid does not resolve the polynomial support");
  ArrayXcd spec = ArrayXcd::Zero(grid_size(Grid{grid}));
  for (const auto& [k, a] : t.coeffs) {
    if (t.dim == 1)
      spec[wrap_mod(k[0], n)] += a;
    else
      spec[std::int64_t(wrap_mod(k[0], n)) * n + wrap_mod(k[1], n)] += a;
  }
  dft_inplace(spec, t.dim, n, /*inverse=*/true);
  const Real scale = std::pow(static_cast<Real>(n), t.dim);  // undo Eigen's 1/n per axis
  return GridFunction{Grid{grid}, spec * scale};
}

namespace {

// Shift expressed in whole lattice steps; throws if y is off the lattice.
std::array<int, 2> lattice_steps(const Grid& g, const Vec2& y) {
  const Real h = grid_spacing(g);
  std::array<int, 2> s{0, 0};
  for (int a = 0; a < grid_dim(g); ++a) {
    const Real steps = y[a] / h;
    const Real r = std::round(steps);
    if (std::abs(steps - r) > 1e-9)
      throw std::domain_error("translate: shift is not a lattice vector (no interpolation)");
    s[a] = static_cast<int>(r);
  }
  return s;
}

}  // namespace

GridFunction translate(const GridFunction& f, const Vec2& y) {
  const auto s = lattice_steps(f.grid, y);
  const int n = grid_n(f.grid);
  const int d = grid_dim(f.grid);
  ArrayXcd out(f.values.size());
  if (d == 1) {
    for (int i = 0; i < n; ++i) out[i] = f.values[wrap_mod(i + s[0], n)];
  } else {
    for (int i0 = 0; i0 < n; ++i0)
      for (int i1 = 0; i1 < n; ++i1)
        out[std::int64_t(i0) * n + i1] =
            f.values[std::int64_t(wrap_mod(i0 + s[0], n)) * n + wrap_mod(i1 + s[1], n)];
  }
  return GridFunction{f.grid, std::move(out)};
}

TrigPolynomial translate(const TrigPolynomial& g, const Vec2& y) {
  TrigPolynomial out;
  out.dim = g.dim;
  for (const auto& [k, a] : g.coeffs)
    out.coeffs[k] = a * unit_phase(kTwoPi * (k[0] * y[0] + k[1] * y[1]));
  return out;
}

GridFunction modulate(const GridFunction& f, const Vec2& xi) {
  ArrayXcd out(f.values.size());
  for (std::int64_t i = 0; i < f.values.size(); ++i) {
    const Vec2 x = grid_point(f.grid, i);
    out[i] = f.values[i] * unit_phase(-kTwoPi * (xi[0] * x[0] + xi[1] * x[1]));
  }
  return GridFunction{f.grid, std::move(out)};
}

GridFunction periodize(const GridFunction& f) {
  const auto* line = std::get_if<LineGrid>(&f.grid);
  if (!line) throw std::domain_error("periodize expects a line grid function");
  const Real h = grid_spacing(f.grid);
  const Real m_real = 1.0 / h;
  const int m = static_cast<int>(std::round(m_real));
  if (std::abs(m_real - m) > 1e-9 || m < 4 || !is_pow2(m))
    throw std::domain_error(
        "periodize: line spacing must be 1/m with m a power-of-two integer >= 4");
  const int n = line->n_per_axis;
  const int d = line->dim;
  const TorusGrid torus = make_torus_grid(d, m);
  ArrayXcd out = ArrayXcd::Zero(grid_size(Grid{torus}));
  // x_i = (i - n/2) * h, so x_i mod 1 corresponds to torus index (i - n/2) mod m.
  const auto fold = [&](int i) { return wrap_mod(i - n / 2, m); };
  if (d == 1) {
    for (int i = 0; i < n; ++i) out[fold(i)] += f.values[i];
  } else {
    for (int i0 = 0; i0 < n; ++i0)
      for (int i1 = 0; i1 < n; ++i1)
        out[std::int64_t(fold(i0)) * m + fold(i1)] += f.values[std::int64_t(i0) * n + i1];
  }
  return GridFunction{Grid{torus}, std::move(out)};
}

LineGrid dual_grid(const LineGrid& g) {
  return LineGrid{g.dim, g.n_per_axis / (4.0 * g.half_width), g.n_per_axis};
}

namespace {

// Centered transform. With x_i = (i - n/2) h and xi_m = (m - n/2) / (n h),
//   f^(xi_m) = h (-1)^{n/2} (-1)^m DFT[(-1)^i f_i]_m          (per axis)
//   f(x_i)   = (1/h) (-1)^{n/2} (-1)^i n IDFT[(-1)^m f^_m]_i  (per axis)
// where IDFT is Eigen's normalized inverse. `h` is the primal spacing in
// both directions.
void centered_axis_transform(ArrayXcd& a, int dim, int n, Real h, bool inverse) {
  const auto apply_signs = [&](ArrayXcd& v) {
    if (dim == 1) {
      for (int i = 1; i < n; i += 2) v[i] = -v[i];
    } else {
      for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1)
          if ((i0 + i1) % 2 != 0) v[std::int64_t(i0) * n + i1] = -v[std::int64_t(i0) * n + i1];
    }
  };
  apply_signs(a);
  dft_inplace(a, dim, n, inverse);
  apply_signs(a);
  const Real half_sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;
  // forward: h per axis; inverse: dxi * n = 1/h per axis on top of Eigen's
  // normalized inverse.
  const Real axis_scale = inverse ? half_sign / h : half_sign * h;
  Real scale = 1.0;
  for (int axis = 0; axis < dim; ++axis) scale *= axis_scale;
  a *= scale;
}

}  // namespace

GridFunction line_fourier(const GridFunction& f) {
  const auto* line = std::get_if<LineGrid>(&f.grid);
  if (!line) throw std::domain_error("line_fourier expects a line grid function");
  const int n = line->n_per_axis;
  const Real h = grid_spacing(f.grid);
  ArrayXcd spec = f.values;
  centered_axis_transform(spec, line->dim, n, h, /*inverse=*/false);
  return GridFunction{Grid{dual_grid(*line)}, std::move(spec)};
}

GridFunction line_fourier_inverse(const GridFunction& fhat) {
  const auto* line = std::get_if<LineGrid>(&fhat.grid);
  if (!line) throw std::domain_error("line_fourier_inverse expects a line grid function");
  const LineGrid primal = dual_grid(*line);
  const int n = primal.n_per_axis;
  const Real h = grid_spacing(Grid{primal});
  ArrayXcd vals = fhat.values;
  centered_axis_transform(vals, primal.dim, n, h, /*inverse=*/true);
  return GridFunction{Grid{primal}, std::move(vals)};
}

}  // namespace multixfer
