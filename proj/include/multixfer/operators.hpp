#pragma once

#include "multixfer/symbols.hpp"

namespace multixfer {

// -- Periodic multipliers --------------------------------------------------------

/// Output coefficients sum_{k_1..k_N} m(k) prod g_l^(k_l) at k_1+..+k_N.
/// Input supports must lie inside the symbol's box.
TrigPolynomial multiplier_coefficients(const LatticeSymbol& m,
                                       const std::vector<TrigPolynomial>& inputs);

/// Exact evaluation of the periodic multiplier sum on the grid (transform-based
/// synthesis of the output coefficients). Errors if the grid does not resolve
/// the output band.
GridFunction apply_periodic(const LatticeSymbol& m, const std::vector<TrigPolynomial>& inputs,
                            const TorusGrid& grid);

/// Reference path: the same sum evaluated point by point without transforms.
GridFunction apply_periodic_direct(const LatticeSymbol& m,
                                   const std::vector<TrigPolynomial>& inputs,
                                   const TorusGrid& grid);

// -- Line multipliers ------------------------------------------------------------

/// Symbol sampled on active dual-frequency tuples (|xi| <= cutoff per slot);
/// reusable across apply calls. d = 1 only.
struct LineMultiplierTable {
  int arity = 2;
  std::vector<Real> freqs;       // active dual frequencies
  std::vector<int> dual_index;   // index of each active frequency in the dual grid
  ArrayXcd values;               // flat arity-dimensional table
  Real cutoff = 0.0;
};

LineMultiplierTable sample_line_symbol(const SymbolSpec& m, const LineGrid& grid, Real cutoff);

/// Quadrature of the T_m frequency integral over the dual grid: transforms the
/// inputs, multiplies by the sampled symbol over dual tuples within the
/// cutoff, and inverse-transforms the frequency sums. d = 1, N in {2,3}.
GridFunction apply_line(const LineMultiplierTable& table, const std::vector<GridFunction>& inputs);
GridFunction apply_line(const SymbolSpec& m, const std::vector<GridFunction>& inputs, Real cutoff);

// -- Kernel form -------------------------------------------------------------------

/// B_K quadrature: out(x) = sum_j K(y_j) prod_l f_l(x - y_{j,l}) cell(K), with
/// cyclic reads of f on its box. Kernel grid spacing must match the input
/// grid; the input box must dominate the kernel box (padding).
GridFunction apply_kernel(const GridFunction& kernel, const std::vector<GridFunction>& inputs);

// -- Maximal operators ---------------------------------------------------------------

GridFunction maximal_periodic(const std::vector<LatticeSymbol>& members,
                              const std::vector<TrigPolynomial>& inputs, const TorusGrid& grid);

GridFunction maximal_line(const std::vector<LineMultiplierTable>& members,
                          const std::vector<GridFunction>& inputs);

// -- Mollification domination ---------------------------------------------------------

struct DominationReport {
  Real max_violation = 0.0;  // max over grid points of (left - right)
  Real left_sup = 0.0;
  Real right_sup = 0.0;
  bool pass = false;
  Real tol = 0.0;
};

/// Checks |T_{(phi x phi) * m}(f1,f2)| <= S^phi(f1,f2) pointwise, computing the
/// left side through the mollified symbol and the right side by quadrature of
/// the modulated-input integral over phi's own nodes. N = 2, d = 1.
DominationReport mollification_domination(const SymbolSpec& m, const Profile& phi,
                                          const GridFunction& f1, const GridFunction& f2,
                                          Real cutoff, Real tol = 1e-6);

}  // namespace multixfer
