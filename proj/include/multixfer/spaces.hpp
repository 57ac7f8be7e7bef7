#pragma once

#include <string>
#include <variant>
#include <vector>

#include "multixfer/common.hpp"

namespace multixfer {

/// Exponent tuple (p; p_1..p_N) with 1/p = sum 1/p_l. N is 2 or 3, every
/// p_l >= 1 and finite; p itself may drop below 1.
struct ExponentTuple {
  std::vector<Real> p_list;
  Real p = 1.0;
  int n_linear = 2;
};

ExponentTuple make_exponents(const std::vector<Real>& p_list);

/// Uniform lattice on [0,1)^d, points i/n per axis, quadrature weight n^{-d}.
struct TorusGrid {
  int dim = 1;
  int n_per_axis = 4;
};
TorusGrid make_torus_grid(int dim, int n_per_axis);

/// Uniform lattice on the box (-L,L)^d, points -L + i*h with h = 2L/n.
/// Lattice shifts act cyclically on the box (period-2L extension).
struct LineGrid {
  int dim = 1;
  Real half_width = 1.0;
  int n_per_axis = 4;
};
LineGrid make_line_grid(int dim, Real half_width, int n_per_axis);

/// Frequencies k with every coordinate in [-K, K].
struct FrequencyBox {
  int dim = 1;
  int max_freq = 1;
};
FrequencyBox make_frequency_box(int dim, int max_freq);

using Grid = std::variant<TorusGrid, LineGrid>;

int grid_dim(const Grid& g);
int grid_n(const Grid& g);
std::int64_t grid_size(const Grid& g);   // n^d
Real grid_spacing(const Grid& g);        // 1/n or 2L/n
Real cell_measure(const Grid& g);        // spacing^d
Vec2 grid_point(const Grid& g, std::int64_t flat);
bool same_grid(const Grid& a, const Grid& b);

inline std::int64_t flat_index(int dim, int n, int i0, int i1) {
  return dim == 1 ? i0 : static_cast<std::int64_t>(i0) * n + i1;
}

/// c_{p,q} = (p/(p-q))^{1/q} for 0 < q < p.
Real kolmogorov_constant(Real p, Real q);

/// Grid infimum of c_{p,q} over a log-spaced q grid in (p*1e-4, p). The
/// analytic infimum (q -> 0+) is e^{1/p} and is not attained; the returned
/// value is within 0.1% of it.
Real weak_constant(Real p);

}  // namespace multixfer
