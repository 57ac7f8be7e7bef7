#include "multixfer/norms.hpp"

#include <algorithm>
#include <numeric>

namespace multixfer {

Real lp_norm_core(const ArrayXd& absf, Real p, const ArrayXd& dmu) {
  if (!(p > 0.0)) throw std::domain_error("lp_norm requires p > 0");
  if (absf.size() != dmu.size()) throw std::domain_error("lp_norm: sample count mismatch");
  Real acc = 0.0;
  for (Eigen::Index i = 0; i < absf.size(); ++i) acc += std::pow(absf[i], p) * dmu[i];
  return std::pow(acc, 1.0 / p);
}

namespace {

// Indices sorted by |f| descending; shared by the two superlevel scans.
std::vector<int> descending_order(const ArrayXd& absf) {
  std::vector<int> idx(absf.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return absf[a] > absf[b]; });
  return idx;
}

}  // namespace

Real weak_norm_core(const ArrayXd& absf, Real p, const ArrayXd& dmu) {
  if (!(p > 0.0)) throw std::domain_error("weak_norm requires p > 0");
  if (absf.size() != dmu.size()) throw std::domain_error("weak_norm: sample count mismatch");
  const auto idx = descending_order(absf);
  Real best = 0.0;
  Real measure = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const Real v = absf[idx[i]];
    measure += dmu[idx[i]];
    const bool group_end = (i + 1 == idx.size()) || (absf[idx[i + 1]] < v);
    if (group_end && v > 0.0) best = std::max(best, v * std::pow(measure, 1.0 / p));
  }
  return best;
}

Real kolmogorov_norm_core(const ArrayXd& absf, Real p, Real q, const ArrayXd& dmu) {
  if (!(q > 0.0) || !(q < p)) throw std::domain_error("kolmogorov_norm requires 0 < q < p");
  if (absf.size() != dmu.size()) throw std::domain_error("kolmogorov_norm: sample count mismatch");
  const auto idx = descending_order(absf);
  Real best = 0.0;
  Real measure = 0.0;
  Real mass_q = 0.0;
  const Real expo = 1.0 / p - 1.0 / q;  // negative
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const Real v = absf[idx[i]];
    measure += dmu[idx[i]];
    mass_q += std::pow(v, q) * dmu[idx[i]];
    const bool group_end = (i + 1 == idx.size()) || (absf[idx[i + 1]] < v);
    const bool is_superlevel = group_end && v > 0.0;
    const bool is_full_domain = (i + 1 == idx.size());
    if ((is_superlevel || is_full_domain) && measure > 0.0)
      best = std::max(best, std::pow(mass_q, 1.0 / q) * std::pow(measure, expo));
  }
  return best;
}

namespace {

ArrayXd check_domains(const GridFunction& f, const WeightSpec& w) {
  if (w.dim() != grid_dim(f.grid))
    throw std::domain_error("norm: weight dimension does not match the function grid");
  return weight_cell_measure(w, f.grid);
}

}  // namespace

Real lp_norm(const GridFunction& f, Real p, const WeightSpec& w) {
  return lp_norm_core(f.values.abs(), p, check_domains(f, w));
}

Real lp_norm(const TrigPolynomial& g, Real p, const WeightSpec& w, const TorusGrid& grid) {
  return lp_norm(synthesize(g, grid), p, w);
}

Real weak_norm(const GridFunction& f, Real p, const WeightSpec& w) {
  return weak_norm_core(f.values.abs(), p, check_domains(f, w));
}

Real kolmogorov_norm(const GridFunction& f, Real p, Real q, const WeightSpec& w) {
  return kolmogorov_norm_core(f.values.abs(), p, q, check_domains(f, w));
}

}  // namespace multixfer
