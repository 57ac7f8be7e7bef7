#include "multixfer/spaces.hpp"

#include <cmath>
#include <limits>

namespace multixfer {

ExponentTuple make_exponents(const std::vector<Real>& p_list) {
  const int n = static_cast<int>(p_list.size());
  if (n < 2 || n > 3)
    throw std::domain_error("p_list must have 2 or 3 entries, got " + std::to_string(n));
  Real inv = 0.0;
  for (int i = 0; i < n; ++i) {
    const Real pl = p_list[i];
    if (!std::isfinite(pl) || pl < 1.0)
      throw std::domain_error("p_list[" + std::to_string(i) + "] must be finite and >= 1, got " +
                              std::to_string(pl));
    inv += 1.0 / pl;
  }
  ExponentTuple t;
  t.p_list = p_list;
  t.p = 1.0 / inv;
  t.n_linear = n;
  return t;
}

TorusGrid make_torus_grid(int dim, int n_per_axis) {
  if (dim < 1 || dim > 2) throw std::domain_error("torus grid dim must be 1 or 2");
  if (n_per_axis < 4 || !is_pow2(n_per_axis))
    throw std::domain_error("torus grid n_per_axis must be a power of two >= 4");
  return TorusGrid{dim, n_per_axis};
}

LineGrid make_line_grid(int dim, Real half_width, int n_per_axis) {
  if (dim < 1 || dim > 2) throw std::domain_error("line grid dim must be 1 or 2");
  if (!(half_width > 0.0)) throw std::domain_error("line grid half_width must be positive");
  if (n_per_axis < 4 || !is_pow2(n_per_axis))
    throw std::domain_error("line grid n_per_axis must be a power of two >= 4");
  return LineGrid{dim, half_width, n_per_axis};
}

FrequencyBox make_frequency_box(int dim, int max_freq) {
  if (dim < 1 || dim > 2) throw std::domain_error("frequency box dim must be 1 or 2");
  if (max_freq < 1) throw std::domain_error("frequency box max_freq must be >= 1");
  return FrequencyBox{dim, max_freq};
}

int grid_dim(const Grid& g) {
  return std::visit([](const auto& x) { return x.dim; }, g);
}

int grid_n(const Grid& g) {
  return std::visit([](const auto& x) { return x.n_per_axis; }, g);
}

std::int64_t grid_size(const Grid& g) {
  const std::int64_t n = grid_n(g);
  return grid_dim(g) == 1 ? n : n * n;
}

Real grid_spacing(const Grid& g) {
  if (const auto* t = std::get_if<TorusGrid>(&g)) return 1.0 / t->n_per_axis;
  const auto& l = std::get<LineGrid>(g);
  return 2.0 * l.half_width / l.n_per_axis;
}

Real cell_measure(const Grid& g) {
  const Real h = grid_spacing(g);
  return grid_dim(g) == 1 ? h : h * h;
}

Vec2 grid_point(const Grid& g, std::int64_t flat) {
  const int n = grid_n(g);
  const int d = grid_dim(g);
  const Real h = grid_spacing(g);
  const Real origin = std::holds_alternative<LineGrid>(g) ? -std::get<LineGrid>(g).half_width : 0.0;
  Vec2 x(0.0, 0.0);
  if (d == 1) {
    x[0] = origin + h * static_cast<Real>(flat);
  } else {
    x[0] = origin + h * static_cast<Real>(flat / n);
    x[1] = origin + h * static_cast<Real>(flat % n);
  }
  return x;
}

bool same_grid(const Grid& a, const Grid& b) {
  if (a.index() != b.index()) return false;
  if (const auto* t = std::get_if<TorusGrid>(&a)) {
    const auto& u = std::get<TorusGrid>(b);
    return t->dim == u.dim && t->n_per_axis == u.n_per_axis;
  }
  const auto& l = std::get<LineGrid>(a);
  const auto& m = std::get<LineGrid>(b);
  return l.dim == m.dim && l.n_per_axis == m.n_per_axis && l.half_width == m.half_width;
}

Real kolmogorov_constant(Real p, Real q) {
  if (!(q > 0.0) || !(q < p) || !std::isfinite(p))
    throw std::domain_error("kolmogorov_constant requires 0 < q < p < inf");
  return std::pow(p / (p - q), 1.0 / q);
}

Real weak_constant(Real p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::domain_error("weak_constant requires p > 0");
  // c_{p,q} is increasing in q, so the grid infimum sits at the low end of
  // the grid; we still scan the whole grid rather than hard-code that fact.
  const Real q_floor = p * 1e-4;
  const Real q_top = p * 0.999;
  const int kPoints = 256;
  Real best = std::numeric_limits<Real>::infinity();
  for (int i = 0; i < kPoints; ++i) {
    const Real t = static_cast<Real>(i) / (kPoints - 1);
    const Real q = q_floor * std::pow(q_top / q_floor, t);
    best = std::min(best, kolmogorov_constant(p, q));
  }
  return best;
}

}  // namespace multixfer
