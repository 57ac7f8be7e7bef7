#include "multixfer/operators.hpp"

#include <cmath>

namespace multixfer {

namespace {

void check_inputs(const LatticeSymbol& m, const std::vector<TrigPolynomial>& inputs) {
  if (static_cast<int>(inputs.size()) != m.arity)
    throw std::domain_error("multiplier arity does not match the input count");
  for (const auto& g : inputs) {
    if (g.dim != m.dim) throw std::domain_error("multiplier dimension mismatch");
    if (g.max_abs_freq() > m.max_freq)
      throw std::domain_error("input support exceeds the symbol's frequency box");
  }
}

}  // namespace

TrigPolynomial multiplier_coefficients(const LatticeSymbol& m,
                                       const std::vector<TrigPolynomial>& inputs) {
  check_inputs(m, inputs);
  TrigPolynomial out;
  out.dim = m.dim;
  std::array<std::array<int, 2>, 3> k{};
  std::array<Complex, 3> a{};
  const int N = m.arity;

  const std::function<void(int, Complex)> rec = [&](int slot, Complex prod) {
    if (slot == N) {
      std::array<int, 2> sum{0, 0};
      for (int l = 0; l < N; ++l) {
        sum[0] += k[l][0];
        sum[1] += k[l][1];
      }
      out.coeffs[sum] += m.at(k) * prod;
      return;
    }
    for (const auto& [kk, aa] : inputs[slot].coeffs) {
      k[slot] = kk;
      a[slot] = aa;
      rec(slot + 1, prod * aa);
    }
  };
  rec(0, Complex(1.0, 0.0));
  return out;
}

GridFunction apply_periodic(const LatticeSymbol& m, const std::vector<TrigPolynomial>& inputs,
                            const TorusGrid& grid) {
  return synthesize(multiplier_coefficients(m, inputs), grid);
}

GridFunction apply_periodic_direct(const LatticeSymbol& m,
                                   const std::vector<TrigPolynomial>& inputs,
                                   const TorusGrid& grid) {
  const TrigPolynomial out = multiplier_coefficients(m, inputs);
  if (grid.n_per_axis <= 2 * out.max_abs_freq())
    throw std::domain_error("aliasing: grid does not resolve the output band");
  ArrayXcd vals(grid_size(Grid{grid}));
  for (std::int64_t i = 0; i < vals.size(); ++i) vals[i] = out.eval(grid_point(Grid{grid}, i));
  return GridFunction{Grid{grid}, std::move(vals)};
}

LineMultiplierTable sample_line_symbol(const SymbolSpec& m, const LineGrid& grid, Real cutoff) {
  if (grid.dim != 1 || m.dim() != 1)
    throw std::domain_error("line multipliers are implemented for d = 1");
  if (!(cutoff > 0.0)) throw std::domain_error("cutoff must be positive");
  const LineGrid dual = dual_grid(grid);
  const int n = dual.n_per_axis;

  LineMultiplierTable t;
  t.arity = m.arity();
  // restrict to the symbol's support when it is known and smaller
  const Real eff = std::min(cutoff, m.support_radius());
  for (int i = 0; i < n; ++i) {
    const Real xi = grid_point(Grid{dual}, i)[0];
    if (std::abs(xi) <= eff) {
      t.freqs.push_back(xi);
      t.dual_index.push_back(i);
    }
  }
  t.cutoff = eff;
  const int C = static_cast<int>(t.freqs.size());
  if (C == 0) throw std::domain_error("cutoff excludes every dual frequency");
  std::int64_t total = 1;
  for (int l = 0; l < t.arity; ++l) total *= C;
  if (total > (std::int64_t(1) << 26))
    throw std::domain_error("line symbol table too large; lower the cutoff");
  t.values.resize(total);
  SlotArgs xi{Vec2(0, 0), Vec2(0, 0), Vec2(0, 0)};
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t rem = flat;
    for (int l = t.arity - 1; l >= 0; --l) {
      xi[l][0] = t.freqs[rem % C];
      rem /= C;
    }
    t.values[flat] = m.eval(xi);
  }
  return t;
}

GridFunction apply_line(const LineMultiplierTable& table, const std::vector<GridFunction>& inputs) {
  if (static_cast<int>(inputs.size()) != table.arity)
    throw std::domain_error("line multiplier arity does not match the input count");
  const auto* lg = std::get_if<LineGrid>(&inputs[0].grid);
  if (!lg || lg->dim != 1) throw std::domain_error("apply_line expects d = 1 line grid inputs");
  for (const auto& f : inputs)
    if (!same_grid(f.grid, inputs[0].grid)) throw std::domain_error("inputs must share one grid");

  const int n = lg->n_per_axis;
  const int C = static_cast<int>(table.freqs.size());
  const Real dxi = grid_spacing(Grid{dual_grid(*lg)});

  std::vector<ArrayXcd> hats;
  hats.reserve(inputs.size());
  for (const auto& f : inputs) hats.push_back(line_fourier(f).values);

  // Accumulate the frequency sums into the dual spectrum modulo the Nyquist
  // box; on the grid this aliasing is exact, not an approximation.
  ArrayXcd spec = ArrayXcd::Zero(n);
  const int N = table.arity;
  Real pre = 1.0;
  for (int l = 0; l + 1 < N; ++l) pre *= dxi;  // inverse transform supplies the last dxi

  if (N == 2) {
    for (int i = 0; i < C; ++i) {
      const Complex f1 = hats[0][table.dual_index[i]];
      if (f1 == Complex(0.0, 0.0)) continue;
      const std::int64_t row = static_cast<std::int64_t>(i) * C;
      for (int j = 0; j < C; ++j) {
        const Complex mv = table.values[row + j];
        if (mv == Complex(0.0, 0.0)) continue;
        const int idx = (table.dual_index[i] + table.dual_index[j] - n / 2 % n + n * 4) % n;
        spec[idx] += mv * f1 * hats[1][table.dual_index[j]];
      }
    }
  } else if (N == 3) {
    for (int i = 0; i < C; ++i) {
      const Complex f1 = hats[0][table.dual_index[i]];
      if (f1 == Complex(0.0, 0.0)) continue;
      for (int j = 0; j < C; ++j) {
        const Complex f12 = f1 * hats[1][table.dual_index[j]];
        const std::int64_t base = (static_cast<std::int64_t>(i) * C + j) * C;
        for (int l = 0; l < C; ++l) {
          const Complex mv = table.values[base + l];
          if (mv == Complex(0.0, 0.0)) continue;
          const int idx =
              (table.dual_index[i] + table.dual_index[j] + table.dual_index[l] - n + n * 4) % n;
          spec[idx] += mv * f12 * hats[2][table.dual_index[l]];
        }
      }
    }
  } else {
    throw std::domain_error("apply_line supports N = 2 or 3");
  }
  spec *= pre;
  const GridFunction spec_fn{Grid{dual_grid(*lg)}, std::move(spec)};
  return line_fourier_inverse(spec_fn);
}

GridFunction apply_line(const SymbolSpec& m, const std::vector<GridFunction>& inputs, Real cutoff) {
  const auto* lg = std::get_if<LineGrid>(&inputs.at(0).grid);
  if (!lg) throw std::domain_error("apply_line expects line grid inputs");
  return apply_line(sample_line_symbol(m, *lg, cutoff), inputs);
}

GridFunction apply_kernel(const GridFunction& kernel, const std::vector<GridFunction>& inputs) {
  const auto* kg = std::get_if<LineGrid>(&kernel.grid);
  const auto* fg = std::get_if<LineGrid>(&inputs.at(0).grid);
  if (!kg || !fg) throw std::domain_error("apply_kernel expects line grids");
  const int N = static_cast<int>(inputs.size());
  const int d = fg->dim;
  if (d != 1 || kg->dim != N)
    throw std::domain_error("apply_kernel is implemented for d = 1 kernels on R^N");
  for (const auto& f : inputs)
    if (!same_grid(f.grid, inputs[0].grid)) throw std::domain_error("inputs must share one grid");
  const Real hk = grid_spacing(kernel.grid);
  const Real hf = grid_spacing(inputs[0].grid);
  if (std::abs(hk - hf) > 1e-12 * hf)
    throw std::domain_error("kernel grid spacing must match the input grid");
  if (fg->half_width < 2.0 * kg->half_width)
    throw std::domain_error("insufficient padding: input box must be at least twice the kernel box");

  const int nf = fg->n_per_axis;
  const int nk = kg->n_per_axis;
  const Real cellk = cell_measure(kernel.grid);
  ArrayXcd out = ArrayXcd::Zero(nf);

  // x_i - y_j lands on the input lattice at index i - j + nk/2 (cyclic).
  const auto wrap = [&](int i) { return ((i % nf) + nf) % nf; };
  for (std::int64_t jf = 0; jf < kernel.values.size(); ++jf) {
    const Complex kv = kernel.values[jf];
    if (kv == Complex(0.0, 0.0)) continue;
    std::array<int, 3> joff{};
    std::int64_t rem = jf;
    for (int l = N - 1; l >= 0; --l) {
      joff[l] = static_cast<int>(rem % nk);
      rem /= nk;
    }
    for (int i = 0; i < nf; ++i) {
      Complex prod = kv;
      for (int l = 0; l < N; ++l) prod *= inputs[l].values[wrap(i - joff[l] + nk / 2)];
      out[i] += prod;
    }
  }
  out *= cellk;
  return GridFunction{inputs[0].grid, std::move(out)};
}

namespace {

GridFunction pointwise_abs_max(std::vector<GridFunction> outs) {
  ArrayXcd acc = ArrayXcd::Zero(outs[0].values.size());
  for (const auto& o : outs)
    for (std::int64_t i = 0; i < acc.size(); ++i)
      acc[i] = Complex(std::max(acc[i].real(), std::abs(o.values[i])), 0.0);
  return GridFunction{outs[0].grid, std::move(acc)};
}

}  // namespace

GridFunction maximal_periodic(const std::vector<LatticeSymbol>& members,
                              const std::vector<TrigPolynomial>& inputs, const TorusGrid& grid) {
  if (members.empty()) throw std::domain_error("maximal operator needs a nonempty family");
  std::vector<GridFunction> outs;
  outs.reserve(members.size());
  for (const auto& m : members) outs.push_back(apply_periodic(m, inputs, grid));
  return pointwise_abs_max(std::move(outs));
}

GridFunction maximal_line(const std::vector<LineMultiplierTable>& members,
                          const std::vector<GridFunction>& inputs) {
  if (members.empty()) throw std::domain_error("maximal operator needs a nonempty family");
  std::vector<GridFunction> outs;
  outs.reserve(members.size());
  for (const auto& m : members) outs.push_back(apply_line(m, inputs));
  return pointwise_abs_max(std::move(outs));
}

DominationReport mollification_domination(const SymbolSpec& m, const Profile& phi,
                                          const GridFunction& f1, const GridFunction& f2,
                                          Real cutoff, Real tol) {
  if (m.arity() != 2 || m.dim() != 1)
    throw std::domain_error("mollification_domination is implemented for N = 2, d = 1");
  if (phi.dim != 1) throw std::domain_error("profile must be one-dimensional");
  const auto* lg = std::get_if<LineGrid>(&f1.grid);
  if (!lg || !same_grid(f1.grid, f2.grid))
    throw std::domain_error("inputs must share one line grid");

  // Left side: the mollified symbol applied once. mollify() integrates over
  // phi's own nodes, the same rule the right side uses.
  const SymbolSpec mm = mollify(m, phi);
  const GridFunction left = apply_line(mm, {f1, f2}, cutoff);

  // Right side: quadrature of |phi(u)||phi(v)| |T_m(mod_u f1, mod_v f2)| over
  // the profile nodes.
  const LineMultiplierTable table = sample_line_symbol(m, *lg, cutoff + 2.0 * phi.radius);
  ArrayXd right = ArrayXd::Zero(left.values.size());
  const Real cell2 = phi.cell() * phi.cell();
  for (std::int64_t ju = 0; ju < phi.size(); ++ju) {
    const Real pu = phi.values[ju];
    if (pu == 0.0) continue;
    const GridFunction g1 = modulate(f1, Vec2(phi.node(ju)[0], 0.0));
    for (std::int64_t jv = 0; jv < phi.size(); ++jv) {
      const Real pv = phi.values[jv];
      if (pv == 0.0) continue;
      const GridFunction g2 = modulate(f2, Vec2(phi.node(jv)[0], 0.0));
      const GridFunction tv = apply_line(table, {g1, g2});
      right += std::abs(pu) * std::abs(pv) * cell2 * tv.values.abs();
    }
  }

  DominationReport rep;
  rep.tol = tol;
  for (std::int64_t i = 0; i < right.size(); ++i) {
    rep.max_violation = std::max(rep.max_violation, std::abs(left.values[i]) - right[i]);
    rep.left_sup = std::max(rep.left_sup, std::abs(left.values[i]));
    rep.right_sup = std::max(rep.right_sup, right[i]);
  }
  rep.pass = rep.max_violation <= tol;
  return rep;
}

}  // namespace multixfer
