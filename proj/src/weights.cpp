#include "multixfer/weights.hpp"

#include <algorithm>
#include <cmath>

#include "multixfer/norms.hpp"
#include "multixfer/search.hpp"

namespace multixfer {

Mollifier Mollifier::bump(int dim, Real support_radius, int n_per_axis) {
  if (!(support_radius > 0.0) || support_radius > 0.5)
    throw std::domain_error("mollifier support radius must lie in (0, 1/2]");
  Mollifier m;
  m.profile = bump_profile(dim, support_radius, n_per_axis, 1.0);
  return m;
}

struct WeightSpec::Node {
  enum class Kind { kConstant, kPowerSine, kStep, kSmoothed, kPower, kProduct };
  Kind kind = Kind::kConstant;
  int dim = 1;
  Real c = 1.0;
  std::array<Real, 2> alpha{0.0, 0.0};
  std::vector<Real> breaks_x, breaks_y, levels;
  std::shared_ptr<const Node> base;
  std::optional<Mollifier> psi;
  Real expo = 1.0;
  std::vector<std::shared_ptr<const Node>> factors;
  std::string label;
};

namespace {

using Node = WeightSpec::Node;

Real eval_node(const Node& n, const Vec2& x);

Real fold_unit(Real t) {
  const Real u = t - std::floor(t);
  return u < 1.0 ? u : 0.0;  // guard against u == 1.0 from rounding
}

int step_cell(const std::vector<Real>& breaks, Real u) {
  // breaks[0] = 0 < ... < breaks.back() = 1; cell i covers [breaks[i], breaks[i+1])
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), u);
  const int i = static_cast<int>(it - breaks.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(breaks.size()) - 2);
}

Real eval_node(const Node& n, const Vec2& x) {
  switch (n.kind) {
    case Node::Kind::kConstant:
      return n.c;
    case Node::Kind::kPowerSine: {
      Real v = 1.0;
      for (int a = 0; a < n.dim; ++a) {
        const Real s = std::abs(std::sin(kPi * x[a]));
        v *= n.alpha[a] == 0.0 ? 1.0 : std::pow(s, n.alpha[a]);
      }
      return v;
    }
    case Node::Kind::kStep: {
      const int ix = step_cell(n.breaks_x, fold_unit(x[0]));
      if (n.dim == 1) return n.levels[ix];
      const int iy = step_cell(n.breaks_y, fold_unit(x[1]));
      return n.levels[ix * (n.breaks_y.size() - 1) + iy];
    }
    case Node::Kind::kSmoothed: {
      const Profile& pr = n.psi->profile;
      Real acc = 0.0;
      for (std::int64_t j = 0; j < pr.size(); ++j) {
        if (pr.values[j] == 0.0) continue;
        acc += pr.values[j] * eval_node(*n.base, x - pr.node(j));
      }
      return acc * pr.cell();
    }
    case Node::Kind::kPower:
      return std::pow(eval_node(*n.base, x), n.expo);
    case Node::Kind::kProduct: {
      Real v = 1.0;
      for (const auto& f : n.factors) v *= eval_node(*f, x);
      return v;
    }
  }
  return 1.0;
}

std::shared_ptr<Node> fresh(Node::Kind k, int dim, std::string label) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->dim = dim;
  n->label = std::move(label);
  return n;
}

}  // namespace

WeightSpec WeightSpec::constant(int dim, Real c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::domain_error("constant weight must be positive");
  auto n = fresh(Node::Kind::kConstant, dim, c == 1.0 ? "unit" : "const");
  n->c = c;
  return WeightSpec(std::move(n));
}

WeightSpec WeightSpec::power_sine(int dim, std::array<Real, 2> alpha) {
  auto n = fresh(Node::Kind::kPowerSine, dim, "sinpow");
  n->alpha = alpha;
  return WeightSpec(std::move(n));
}

WeightSpec WeightSpec::step(std::vector<Real> breaks, std::vector<Real> levels) {
  if (breaks.size() < 2 || levels.size() + 1 != breaks.size())
    throw std::domain_error("step weight: need breaks.size() == levels.size() + 1");
  if (breaks.front() != 0.0 || breaks.back() != 1.0 || !std::is_sorted(breaks.begin(), breaks.end()))
    throw std::domain_error("step weight: breaks must increase from 0 to 1");
  for (Real l : levels)
    if (!(l > 0.0) || !std::isfinite(l)) throw std::domain_error("step weight levels must be positive");
  auto n = fresh(Node::Kind::kStep, 1, "step");
  n->breaks_x = std::move(breaks);
  n->breaks_y = {0.0, 1.0};
  n->levels = std::move(levels);
  return WeightSpec(std::move(n));
}

WeightSpec WeightSpec::step2(std::vector<Real> breaks_x, std::vector<Real> breaks_y,
                             std::vector<Real> levels) {
  if (breaks_x.size() < 2 || breaks_y.size() < 2 ||
      levels.size() != (breaks_x.size() - 1) * (breaks_y.size() - 1))
    throw std::domain_error("step2 weight: level count must match the partition");
  for (Real l : levels)
    if (!(l > 0.0) || !std::isfinite(l)) throw std::domain_error("step weight levels must be positive");
  auto n = fresh(Node::Kind::kStep, 2, "step2");
  n->breaks_x = std::move(breaks_x);
  n->breaks_y = std::move(breaks_y);
  n->levels = std::move(levels);
  return WeightSpec(std::move(n));
}

WeightSpec WeightSpec::smoothed(const WeightSpec& base, const Mollifier& psi) {
  if (psi.dim() != base.dim()) throw std::domain_error("mollifier dimension mismatch");
  auto n = fresh(Node::Kind::kSmoothed, base.dim(), "smoothed(" + base.id() + ")");
  n->base = base.node_;
  n->psi = psi;
  return WeightSpec(std::move(n));
}

WeightSpec WeightSpec::power_of(const WeightSpec& base, Real exponent) {
  auto n = fresh(Node::Kind::kPower, base.dim(), "pow(" + base.id() + ")");
  n->base = base.node_;
  n->expo = exponent;
  return WeightSpec(std::move(n));
}

WeightSpec WeightSpec::product(const std::vector<WeightSpec>& factors) {
  if (factors.empty()) throw std::domain_error("weight product needs at least one factor");
  auto n = fresh(Node::Kind::kProduct, factors.front().dim(), "prod");
  for (const auto& f : factors) {
    if (f.dim() != n->dim) throw std::domain_error("weight product dimension mismatch");
    n->factors.push_back(f.node_);
  }
  return WeightSpec(std::move(n));
}

Real WeightSpec::eval(const Vec2& x) const { return eval_node(*node_, x); }
int WeightSpec::dim() const { return node_->dim; }
const std::string& WeightSpec::id() const { return node_->label; }

WeightSpec WeightSpec::with_id(std::string label) const {
  auto n = std::make_shared<Node>(*node_);
  n->label = std::move(label);
  return WeightSpec(std::move(n));
}

ArrayXd sample_weight(const WeightSpec& w, const Grid& grid) {
  if (w.dim() != grid_dim(grid))
    throw std::domain_error("weight dimension does not match the grid");
  const std::int64_t n = grid_size(grid);
  const Real half = grid_spacing(grid) / 2.0;
  ArrayXd out(n);
  for (std::int64_t i = 0; i < n; ++i) {
    Vec2 x = grid_point(grid, i);
    x[0] += half;
    if (grid_dim(grid) == 2) x[1] += half;
    const Real v = w.eval(x);
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::runtime_error("weight invariant violated: nonpositive or non-finite sample");
    out[i] = v;
  }
  return out;
}

ArrayXd weight_cell_measure(const WeightSpec& w, const Grid& grid) {
  return sample_weight(w, grid) * cell_measure(grid);
}

namespace {

Real ap_quotient_max_1d(const ArrayXd& ws, const ArrayXd& sig, Real p, int depth) {
  const int n = static_cast<int>(ws.size());
  std::vector<Real> pw(2 * n + 1, 0.0), ps(2 * n + 1, 0.0);
  for (int i = 0; i < 2 * n; ++i) {
    pw[i + 1] = pw[i] + ws[i % n];
    if (p > 1.0) ps[i + 1] = ps[i] + sig[i % n];
  }
  Real best = 0.0;
  for (int j = 0; j <= depth; ++j) {
    const int c = n >> j;
    for (int shift : {0, c / 2}) {
      for (int s = shift; s < n + shift; s += c) {
        const Real avg_w = (pw[s + c] - pw[s]) / c;
        Real q;
        if (p > 1.0) {
          const Real avg_s = (ps[s + c] - ps[s]) / c;
          q = avg_w * std::pow(avg_s, p - 1.0);
        } else {
          Real mn = ws[s % n];
          for (int i = s + 1; i < s + c; ++i) mn = std::min(mn, ws[i % n]);
          q = avg_w / mn;
        }
        best = std::max(best, q);
      }
    }
  }
  return best;
}

Real ap_quotient_max_2d(const ArrayXd& ws, const ArrayXd& sig, Real p, int depth, int n) {
  // summed tables over the doubled (wrap) domain
  const int m = 2 * n;
  std::vector<Real> tw(std::size_t(m + 1) * (m + 1), 0.0), ts;
  if (p > 1.0) ts.assign(std::size_t(m + 1) * (m + 1), 0.0);
  const auto at = [&](const ArrayXd& a, int r, int c) { return a[std::int64_t(r % n) * n + (c % n)]; };
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      const std::size_t idx = std::size_t(r + 1) * (m + 1) + (c + 1);
      const std::size_t up = std::size_t(r) * (m + 1) + (c + 1);
      const std::size_t left = std::size_t(r + 1) * (m + 1) + c;
      const std::size_t diag = std::size_t(r) * (m + 1) + c;
      tw[idx] = tw[up] + tw[left] - tw[diag] + at(ws, r, c);
      if (p > 1.0) ts[idx] = ts[up] + ts[left] - ts[diag] + at(sig, r, c);
    }
  const auto box_sum = [&](const std::vector<Real>& t, int r, int c, int side) {
    const std::size_t w1 = m + 1;
    return t[std::size_t(r + side) * w1 + (c + side)] - t[std::size_t(r) * w1 + (c + side)] -
           t[std::size_t(r + side) * w1 + c] + t[std::size_t(r) * w1 + c];
  };
  Real best = 0.0;
  for (int j = 0; j <= depth; ++j) {
    const int c = n >> j;
    const Real cells = static_cast<Real>(c) * c;
    for (int shift : {0, c / 2}) {
      for (int r0 = shift; r0 < n + shift; r0 += c) {
        for (int c0 = shift; c0 < n + shift; c0 += c) {
          const Real avg_w = box_sum(tw, r0, c0, c) / cells;
          Real q;
          if (p > 1.0) {
            const Real avg_s = box_sum(ts, r0, c0, c) / cells;
            q = avg_w * std::pow(avg_s, p - 1.0);
          } else {
            Real mn = at(ws, r0, c0);
            for (int r = r0; r < r0 + c; ++r)
              for (int cc = c0; cc < c0 + c; ++cc) mn = std::min(mn, at(ws, r, cc));
            q = avg_w / mn;
          }
          best = std::max(best, q);
        }
      }
    }
  }
  return best;
}

}  // namespace

Real ap_constant(const WeightSpec& w, Real p, int depth) {
  if (!(p >= 1.0)) throw std::domain_error("ap_constant requires p >= 1");
  if (depth < 1) throw std::domain_error("ap_constant requires depth >= 1");
  const int d = w.dim();
  if ((d == 1 && depth > 12) || (d == 2 && depth > 7))
    throw std::domain_error("ap_constant depth too large for the sampling resolution");
  const int n = 1 << (depth + 2);
  const Grid torus{make_torus_grid(d, n)};
  const ArrayXd ws = sample_weight(w, torus);
  ArrayXd sig;
  if (p > 1.0) sig = ws.pow(-1.0 / (p - 1.0));
  return d == 1 ? ap_quotient_max_1d(ws, sig, p, depth) : ap_quotient_max_2d(ws, sig, p, depth, n);
}

AVecReport a_vec_p_check(const std::vector<WeightSpec>& w_list, const ExponentTuple& exps,
                         int depth) {
  const int N = exps.n_linear;
  if (static_cast<int>(w_list.size()) != N)
    throw std::domain_error("a_vec_p_check: weight count must match the exponent tuple");
  AVecReport rep;
  std::vector<WeightSpec> v_factors;
  for (int j = 0; j < N; ++j) {
    const Real pj = exps.p_list[j];
    v_factors.push_back(WeightSpec::power_of(w_list[j], exps.p / pj));
    if (pj == 1.0) {
      rep.sigma_constant.push_back(ap_constant(WeightSpec::power_of(w_list[j], 1.0 / N), 1.0, depth));
      rep.sigma_index.push_back(1.0);
      rep.used_a1_convention.push_back(true);
    } else {
      const Real expo = -1.0 / (pj - 1.0);  // 1 - p_j'
      rep.sigma_constant.push_back(ap_constant(WeightSpec::power_of(w_list[j], expo), N * pj, depth));
      rep.sigma_index.push_back(N * pj);
      rep.used_a1_convention.push_back(false);
    }
  }
  rep.v_weight = WeightSpec::product(v_factors).with_id("v_w");
  rep.v_index = N * exps.p;
  rep.v_constant = ap_constant(rep.v_weight, std::max(1.0, rep.v_index), depth);
  return rep;
}

WeightSpec smooth_weight(const WeightSpec& w, const Mollifier& psi) {
  return WeightSpec::smoothed(w, psi);
}

Real smoothed_min(const WeightSpec& w, const Mollifier& psi) {
  const WeightSpec sw = smooth_weight(w, psi);
  const int d = w.dim();
  const int n = d == 1 ? 1024 : 128;
  const Grid torus{make_torus_grid(d, n)};
  const Real half = grid_spacing(torus) / 2.0;
  Real mn = std::numeric_limits<Real>::infinity();
  for (std::int64_t i = 0; i < grid_size(torus); ++i) {
    Vec2 x = grid_point(torus, i);
    x[0] += half;
    if (d == 2) x[1] += half;
    mn = std::min(mn, sw.eval(x));
  }
  if (!(mn > 0.0))
    throw std::runtime_error("smoothed weight invariant violated: grid minimum not positive");
  return mn;
}

const Profile& approx_identity_bump(int dim) {
  static const Profile p1 = [] {
    Profile p = bump_profile(1, 1.0, 2048, 1.0);
    return p;
  }();
  static const Profile p2 = [] {
    Profile p = bump_profile(2, 1.0, 256, 1.0);
    return p;
  }();
  if (dim == 1) return p1;
  if (dim == 2) return p2;
  throw std::domain_error("approx_identity_bump: dim must be 1 or 2");
}

Real approx_identity_bump_value(int dim, const Vec2& x) {
  // normalizer 1/int_{-1}^{1} exp(-1/(1-t^2)) dt, frozen by fine midpoint quadrature
  static const Real inv_mass = [] {
    const int n = 1 << 20;
    const Real h = 2.0 / n;
    Real acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const Real t = -1.0 + (i + 0.5) * h;
      const Real s = 1.0 - t * t;
      if (s > 0.0) acc += std::exp(-1.0 / s);
    }
    return 1.0 / (acc * h);
  }();
  const auto axis = [](Real t) {
    const Real s = 1.0 - t * t;
    return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
  };
  Real v = axis(x[0]) * inv_mass;
  if (dim == 2) v *= axis(x[1]) * inv_mass;
  return v;
}

Complex approx_identity_bump_transform(int dim, int n, const Vec2& xi) {
  const Profile& h = approx_identity_bump(dim);
  const Vec2 u = xi / static_cast<Real>(n);
  Complex acc(0.0, 0.0);
  for (std::int64_t j = 0; j < h.size(); ++j) {
    const Vec2 y = h.node(j);
    acc += h.values[j] * unit_phase(-kTwoPi * (u[0] * y[0] + (dim == 2 ? u[1] * y[1] : 0.0)));
  }
  return acc * h.cell();
}

ApproxIdentityReport approx_identity_norm(const WeightSpec& w, Real p, int n, std::uint64_t seed,
                                          int jobs) {
  if (!(p >= 1.0)) throw std::domain_error("approx_identity_norm requires p >= 1");
  if (n < 1) throw std::domain_error("approx_identity_norm requires n >= 1");
  const int d = w.dim();
  const int K = 8;
  const int ng = d == 1 ? 256 : 64;
  const Grid torus{make_torus_grid(d, ng)};
  const ArrayXd dmu = weight_cell_measure(w, torus);

  // lattice multiplier h_n^(k) = h^(k/n) on the box [-K,K]^d
  const int side = 2 * K + 1;
  const int box = d == 1 ? side : side * side;
  ArrayXcd diag(box);
  for (int i = 0; i < box; ++i) {
    Vec2 k(0.0, 0.0);
    k[0] = static_cast<Real>(i % side - K);
    if (d == 2) k[1] = static_cast<Real>(i / side - K);
    diag[i] = approx_identity_bump_transform(d, n, k);
  }

  // synthesis table e^{2 pi i k.x} over the grid
  const std::int64_t npts = grid_size(torus);
  Eigen::MatrixXcd basis(box, npts);
  for (int i = 0; i < box; ++i) {
    Vec2 k(0.0, 0.0);
    k[0] = static_cast<Real>(i % side - K);
    if (d == 2) k[1] = static_cast<Real>(i / side - K);
    for (std::int64_t x = 0; x < npts; ++x) {
      const Vec2 pt = grid_point(torus, x);
      basis(i, x) = unit_phase(kTwoPi * (k[0] * pt[0] + k[1] * pt[1]));
    }
  }

  const auto synth_abs = [&](const ArrayXcd& c, bool multiplied) {
    ArrayXcd vals = ArrayXcd::Zero(npts);
    for (int i = 0; i < box; ++i) {
      const Complex a = multiplied ? c[i] * diag[i] : c[i];
      if (a == Complex(0.0, 0.0)) continue;
      vals += a * basis.row(i).transpose().array();
    }
    return ArrayXd(vals.abs());
  };

  const auto slot_norm = [&](const ArrayXcd& c, int) {
    return lp_norm_core(synth_abs(c, false), p, dmu);
  };
  const auto obj = [&](const std::vector<ArrayXcd>& cs) {
    return lp_norm_core(synth_abs(cs[0], true), p, dmu);  // inputs arrive normalized
  };

  AscentConfig cfg;
  cfg.restarts = 4;
  cfg.steps = 60;
  cfg.seed = seed;
  cfg.jobs = jobs;
  const auto res = coordinate_ascent({box}, {d == 1 ? K : K * side + K}, obj, slot_norm, cfg);

  ApproxIdentityReport rep;
  rep.estimate = res.value;
  rep.threshold = std::pow(2.0, 1.0 / p);
  rep.within = rep.estimate <= rep.threshold;
  rep.n = n;
  rep.p = p;

  // Jensen bound: ||h_n * .||^p <= sup (h_n * w) / w, via profile quadrature
  // int h(u) w(x - u/n) du on a coarse grid.
  const Profile& h = approx_identity_bump(d);
  const int coarse = d == 1 ? 128 : 32;
  const Grid cg{make_torus_grid(d, coarse)};
  const Real half = grid_spacing(cg) / 2.0;
  const int stride = d == 1 ? 8 : 16;  // subsample the bump table
  Real worst = 0.0;
  for (std::int64_t i = 0; i < grid_size(cg); ++i) {
    Vec2 x = grid_point(cg, i);
    x[0] += half;
    if (d == 2) x[1] += half;
    Real conv = 0.0, mass = 0.0;
    for (std::int64_t j = 0; j < h.size(); ++j) {
      if (d == 1 && j % stride != 0) continue;
      if (d == 2 && ((j / h.n_per_axis) % stride != 0 || (j % h.n_per_axis) % stride != 0)) continue;
      const Vec2 u = h.node(j);
      conv += h.values[j] * w.eval(x - u / static_cast<Real>(n));
      mass += h.values[j];
    }
    worst = std::max(worst, conv / (mass * w.eval(x)));
  }
  rep.analytic_upper = std::pow(worst, 1.0 / p);
  return rep;
}

}  // namespace multixfer
