#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "multixfer/functions.hpp"
#include "multixfer/weights.hpp"

namespace multixfer {

/// Per-slot frequency arguments of an N-linear symbol (slots beyond arity are
/// ignored; unused coordinates are zero).
using SlotArgs = std::array<Vec2, 3>;

/// Evaluable bounded symbol on R^{Nd}. Immutable; evaluation is pure and
/// reentrant. The stored bound is a sup-norm majorant, not necessarily sharp.
class SymbolSpec {
 public:
  static SymbolSpec constant(int dim, int arity, Complex value);
  /// e^{2 pi i sum_l y_l . xi_l}
  static SymbolSpec modulation(int dim, int arity, std::vector<Vec2> shifts);
  /// prod_l factor_l(xi_l); factor bounds multiply into the symbol bound
  static SymbolSpec separable(int dim, std::vector<std::function<Complex(const Vec2&)>> factors,
                              std::vector<Real> factor_bounds, std::string name);
  static SymbolSpec closed_form(int dim, int arity, std::function<Complex(const SlotArgs&)> fn,
                                Real bound, std::string name,
                                Real support_radius = std::numeric_limits<Real>::infinity());
  /// nearest-node evaluation of samples living on a LineGrid of dimension
  /// arity*dim (only arity*dim <= 2 is representable)
  static SymbolSpec tabulated(GridFunction samples, int dim, int arity);
  /// m = K^ for a stored kernel K on R^{arity*dim}; evaluation by quadrature
  static SymbolSpec kernel_transform(GridFunction kernel, int dim, int arity);
  static SymbolSpec dilated(const SymbolSpec& base, Real r);
  /// ((phi x ... x phi) * m), phi a compactly supported profile on R^d
  static SymbolSpec mollified(const SymbolSpec& base, const Profile& phi);
  /// K^ of the truncated kernel K chi_{|y| > 2^{-j}}
  static SymbolSpec truncated_kernel(const GridFunction& kernel, int dim, int arity, int j);
  /// c * m
  static SymbolSpec scaled(const SymbolSpec& base, Complex c);

  Complex eval(const SlotArgs& xi) const;
  int dim() const;
  int arity() const;
  Real bound() const;
  /// radius R such that m vanishes for |(xi_1,..,xi_N)| > R (inf if unknown)
  Real support_radius() const;
  const std::string& id() const;
  SymbolSpec with_id(std::string label) const;

  struct Node;

 private:
  std::shared_ptr<const Node> node_;
  explicit SymbolSpec(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

struct SymbolFamily {
  std::vector<SymbolSpec> members;
  std::string index_meaning;

  Real bound() const;
};

/// m tabulated on the lattice points (k_1,..,k_N), each slot in [-K,K]^d.
struct LatticeSymbol {
  int dim = 1;
  int arity = 2;
  int max_freq = 1;
  ArrayXcd values;  // slot-major flat layout
  Real sup_norm = 0.0;

  int side() const { return 2 * max_freq + 1; }
  int slot_box() const { return dim == 1 ? side() : side() * side(); }
  int slot_index(const std::array<int, 2>& k) const;
  Complex at(const std::array<std::array<int, 2>, 3>& k) const;
};

LatticeSymbol restrict_lattice(const SymbolSpec& m, const FrequencyBox& box);
LatticeSymbol scale_lattice(const LatticeSymbol& m, Complex c);

SymbolFamily dilate_family(const SymbolSpec& m, const std::vector<Real>& r_list);
SymbolSpec mollify(const SymbolSpec& m, const Profile& phi);
SymbolFamily truncation_family(const GridFunction& kernel, int dim, int arity,
                               const std::vector<int>& j_range);

// -- Normalization (pointwise convergence of mollifications) -------------------

struct NormalizedPointTrace {
  SlotArgs point;
  std::vector<Real> errors;  // |m*Phi_n - m| along the n schedule
};

struct NormalizedReport {
  std::vector<NormalizedPointTrace> points;
  std::vector<int> n_schedule;
  Real tol = 0.0;
  bool consistent = false;
  int failing_point = -1;  // index into points when not consistent
};

/// Evaluates m * Phi_n at the requested points along the n schedule, where
/// Phi_n concentrates like the transform of the dilated profile of Def-style
/// mollification (unit mass, even, nonnegative). Verdict "normalized-
/// consistent" iff at every point the final error is below tol and the tail
/// of the error sequence is nonincreasing.
NormalizedReport normalized_check(const SymbolSpec& m, const std::vector<SlotArgs>& points,
                                  const std::vector<int>& n_schedule, Real tol = 0.05);

// -- Derivative-decay checks ----------------------------------------------------

struct DerivativeEntry {
  std::vector<int> order;      // per flat coordinate of R^{Nd}
  Real constant = 0.0;         // sup over samples of the weighted derivative
  Real mid_radius_sup = 0.0;   // sup over radii in [1, 10]
  Real high_radius_sup = 0.0;  // sup over radii in [1e2, 1e3]
  Real growth_ratio = 0.0;     // high/mid (divergence signature when >> 1)
  Real richardson_gap = 0.0;   // relative step-size disagreement
  bool consistent = false;     // Richardson gate passed and growth bounded
};

struct DerivativeReport {
  std::vector<DerivativeEntry> entries;
  bool all_consistent = false;
  bool flagged = false;  // some entry shows unbounded growth
};

/// All multi-index pairs with total order <= max_total on R^{Nd}.
std::vector<std::vector<int>> derivative_orders(int flat_dim, int max_total);

/// Coifman-Meyer decay: sup |d^a m| (|xi_1|+..+|xi_N|)^{|a|} at log-spaced
/// sample radii with random directions; finite differences at two step sizes
/// with a Richardson consistency gate. Evidence, not proof.
DerivativeReport cm_check(const SymbolSpec& m, const std::vector<std::vector<int>>& orders,
                          int sample_count, std::uint64_t seed);

/// S^m_{rho,0} decay: sup |d^a m| (1+|xi_1|+..+|xi_N|)^{-m_order+rho|a|}.
DerivativeReport hormander_class_check(const SymbolSpec& m, Real m_order, Real rho,
                                       const std::vector<std::vector<int>>& orders,
                                       int sample_count, std::uint64_t seed);

// -- Littlewood-Paley window and Sobolev norms ----------------------------------

/// Smoothed-step radial window: eta(t) = s(t) - s(t/2) supported in
/// [1/2, 2] with sum_k eta(2^{-k} t) = 1 for t > 0 (exact telescoping).
/// Construction re-verifies the partition property at random points.
class LittlewoodPaleyWindow {
 public:
  LittlewoodPaleyWindow();

  Real radial(Real t) const;
  /// psi(xi) = eta(|xi|) for flat xi in R^{Nd} (Nd <= 2 uses both coords)
  Real eval_flat(const Vec2& xi) const { return radial(xi.norm()); }
  Real partition_error() const { return partition_error_; }

 private:
  Real partition_error_ = 0.0;
};

struct HsNormResult {
  Real value = 0.0;
  Real nyquist_tail = 0.0;  // mass fraction of the integrand in the outer shell
  int resolution = 0;
};

/// || m(2^k .) psi ||_{H^s} (scalar smoothness.size() == 1) or the per-slot
/// anisotropic form (smoothness.size() == arity), computed from samples of the
/// windowed dilate on the box of half-width 4. Requires arity*dim == 2.
HsNormResult hs_norm(const SymbolSpec& m, int k, const std::vector<Real>& smoothness,
                     const LittlewoodPaleyWindow& window, int resolution);

// -- Classification against the multiplier-class hypotheses ---------------------

struct ClassifyOptions {
  int derivative_samples = 48;
  int hs_resolution = 256;
  int hs_k_range = 8;
  Real hs_smoothness = 0.0;  // 0 -> 0.75 * Nd
  Real sm_order = 0.0;
  Real sm_rho = 1.0;
  int ap_depth = 4;
  std::uint64_t seed = 1;
};

struct ClassEntry {
  std::string name;
  bool satisfied = false;
  std::string detail;
  Real constant = 0.0;
};

struct ClassifyReport {
  std::vector<ClassEntry> entries;
  int satisfied_count = 0;
};

/// Runs the derivative/Sobolev/weight checks and reports which multiplier-class
/// hypothesis sets are numerically consistent for these exponents and weights.
ClassifyReport classify(const SymbolSpec& m, const ExponentTuple& exps,
                        const std::vector<WeightSpec>& w_list, const ClassifyOptions& opt);

}  // namespace multixfer
