#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "multixfer/functions.hpp"

namespace multixfer {

/// Nonnegative smooth bump with unit Riemann-sum integral and support inside
/// [-1/2,1/2]^d; the kernel used to regularize weights.
struct Mollifier {
  Profile profile;

  static Mollifier bump(int dim, Real support_radius, int n_per_axis);
  int dim() const { return profile.dim; }
};

/// Evaluable 1-periodic weight: strictly positive and finite at every grid
/// point. On a grid, weights are always sampled at cell midpoints
/// (x_i + h/2 per axis), which keeps power weights away from their zeros.
class WeightSpec {
 public:
  static WeightSpec constant(int dim, Real c);
  /// prod_i |sin(pi x_i)|^{alpha_i}
  static WeightSpec power_sine(int dim, std::array<Real, 2> alpha);
  /// d = 1 step weight: levels[i] on [breaks[i], breaks[i+1]) with
  /// breaks[0] = 0, breaks.back() = 1.
  static WeightSpec step(std::vector<Real> breaks, std::vector<Real> levels);
  /// d = 2 tensor partition: levels is row-major (len(bx)-1) x (len(by)-1).
  static WeightSpec step2(std::vector<Real> breaks_x, std::vector<Real> breaks_y,
                          std::vector<Real> levels);
  static WeightSpec smoothed(const WeightSpec& base, const Mollifier& psi);
  static WeightSpec power_of(const WeightSpec& base, Real exponent);
  static WeightSpec product(const std::vector<WeightSpec>& factors);

  Real eval(const Vec2& x) const;  // 1-periodic in each variable
  int dim() const;
  const std::string& id() const;
  WeightSpec with_id(std::string label) const;

  struct Node;

 private:
  std::shared_ptr<const Node> node_;
  explicit WeightSpec(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

/// Midpoint samples of w on the grid; throws if any sample is nonpositive or
/// non-finite (the WeightSpec invariant).
ArrayXd sample_weight(const WeightSpec& w, const Grid& grid);

/// Samples multiplied by the quadrature cell measure (the discrete measure
/// used by every norm).
ArrayXd weight_cell_measure(const WeightSpec& w, const Grid& grid);

/// Supremum of the A_p quotient over dyadic cubes of side 2^{-j}, j = 0..depth,
/// on two half-shifted dyadic grids, evaluated on a 2^{depth+2}-per-axis
/// midpoint sampling. p = 1 uses the essential-sup form via the grid max.
Real ap_constant(const WeightSpec& w, Real p, int depth);

struct AVecReport {
  std::vector<Real> sigma_constant;  // A_{N p_j} constant of w_j^{1-p_j'} (or the p_j = 1 convention)
  std::vector<Real> sigma_index;     // the index N p_j
  std::vector<bool> used_a1_convention;
  Real v_constant = 0.0;  // A_{Np} constant of v_w
  Real v_index = 0.0;
  WeightSpec v_weight = WeightSpec::constant(1, 1.0);
};

/// The multilinear weight condition: checks w_j^{1-p_j'} against A_{N p_j}
/// (w_j^{1/N} against A_1 when p_j = 1) and v_w = prod w_j^{p/p_j} against A_{Np}.
AVecReport a_vec_p_check(const std::vector<WeightSpec>& w_list, const ExponentTuple& exps,
                         int depth);

/// psi * w as a WeightSpec (periodic convolution quadrature).
WeightSpec smooth_weight(const WeightSpec& w, const Mollifier& psi);

/// Grid minimum of psi * w; throws if it fails to be strictly positive.
Real smoothed_min(const WeightSpec& w, const Mollifier& psi);

struct ApproxIdentityReport {
  Real estimate = 0.0;      // lower estimate of || h_n * . ||_{L^p(w) -> L^p(w)}
  Real threshold = 0.0;     // 2^{1/p}
  bool within = false;      // estimate <= threshold
  Real analytic_upper = 0.0;  // sup_x ((h_n * w)(x) / w(x))^{1/p} on the grid
  int n = 0;
  Real p = 0.0;
};

/// Witness-search lower estimate of the norm of f -> h_n * f on L^p(w) for the
/// fixed bump h (0 <= h <= 1, unit integral), h_n(x) = n^d h(n x). The weight
/// should be continuous with positive minimum (smooth it first).
ApproxIdentityReport approx_identity_norm(const WeightSpec& w, Real p, int n,
                                          std::uint64_t seed = 1, int jobs = 1);

/// The fixed bump h used by approx_identity_norm (radius 1, unit mass,
/// max value < 1), tabulated once per dimension.
const Profile& approx_identity_bump(int dim);

/// Closed-form evaluation of the same bump (unit integral, 0 <= h <= 1).
Real approx_identity_bump_value(int dim, const Vec2& x);

/// f^ of the bump's dilate: h_n^(xi) = h^(xi / n), by profile quadrature.
Complex approx_identity_bump_transform(int dim, int n, const Vec2& xi);

}  // namespace multixfer
