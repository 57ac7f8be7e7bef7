#pragma once

#include <array>
#include <map>

#include "multixfer/spaces.hpp"

namespace multixfer {

/// Finitely supported map k in Z^d -> a_k; g(x) = sum a_k e^{2 pi i k.x}.
/// For d = 1 the second frequency coordinate is fixed to 0.
struct TrigPolynomial {
  int dim = 1;
  std::map<std::array<int, 2>, Complex> coeffs;

  Complex eval(const Vec2& x) const;
  int max_abs_freq() const;
  TrigPolynomial& add(const std::array<int, 2>& k, Complex a);
};

TrigPolynomial trig_constant(int dim, Complex c);
TrigPolynomial trig_sum(const TrigPolynomial& a, const TrigPolynomial& b);
TrigPolynomial trig_scale(const TrigPolynomial& a, Complex c);

/// Complex samples on a torus or line grid, one value per grid point.
struct GridFunction {
  Grid grid;
  ArrayXcd values;
};

GridFunction make_grid_function(const Grid& grid, ArrayXcd values);
GridFunction zero_function(const Grid& grid);

/// Compactly supported real profile on R^d, tabulated at the left-endpoint
/// lattice y_j = -radius + j*spacing with spacing = 2*radius/n_per_axis
/// (row-major for d = 2). Quadrature against it is the plain Riemann sum.
struct Profile {
  int dim = 1;
  Real radius = 0.5;
  int n_per_axis = 4;
  ArrayXd values;

  Real spacing() const { return 2.0 * radius / n_per_axis; }
  std::int64_t size() const { return dim == 1 ? n_per_axis : std::int64_t(n_per_axis) * n_per_axis; }
  Vec2 node(std::int64_t flat) const;
  Real cell() const { return dim == 1 ? spacing() : spacing() * spacing(); }
  Real mass() const { return values.sum() * cell(); }
  Real l1_mass() const { return values.abs().sum() * cell(); }
};

/// The standard C^inf bump exp(-1/(1-(|x|/radius)^2)) (tensorized for d = 2),
/// scaled so the Riemann-sum integral is exactly `mass`.
Profile bump_profile(int dim, Real radius, int n_per_axis, Real mass = 1.0);

// -- Fourier analysis / synthesis on the torus --------------------------------

/// Quadrature approximation of g^(k) = int g(x) e^{-2 pi i k.x} dx for every k
/// in the box; exact for band-limited input when n_per_axis > 2*max_freq.
TrigPolynomial fourier_coefficients(const GridFunction& g, const FrequencyBox& box);

/// Pointwise evaluation of the defining sum on the grid.
GridFunction synthesize(const TrigPolynomial& t, const TorusGrid& grid);

// -- Translation / modulation / periodization ---------------------------------

/// R_y f = f(. + y). Grid functions require a lattice shift (no interpolation);
/// trig polynomials accept any y (coefficients pick up the phase e^{2 pi i k.y}).
GridFunction translate(const GridFunction& f, const Vec2& y);
TrigPolynomial translate(const TrigPolynomial& g, const Vec2& y);

/// Pointwise multiplication by e^{-2 pi i xi.x}.
GridFunction modulate(const GridFunction& f, const Vec2& xi);

/// Sum of f over integer translates, folded to [0,1)^d. Requires the line
/// spacing to be 1/m with m a power-of-two integer >= 4.
GridFunction periodize(const GridFunction& f);

// -- Line transforms -----------------------------------------------------------

/// Dual grid of a line grid: same n, half_width n/(4L) (spacing 1/(2L)).
LineGrid dual_grid(const LineGrid& g);

/// Riemann-sum approximation of f^(xi) = int f(x) e^{-2 pi i xi.x} dx on the
/// dual lattice. Parseval holds exactly on the grid.
GridFunction line_fourier(const GridFunction& f);

/// Inverse of line_fourier (round-trips exactly up to rounding).
GridFunction line_fourier_inverse(const GridFunction& fhat);

}  // namespace multixfer
