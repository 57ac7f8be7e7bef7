#pragma once

#include "multixfer/weights.hpp"

namespace multixfer {

// Core forms take |f| samples and the discrete measure (weight samples times
// quadrature cell measure); the WeightSpec overloads sample and delegate.

/// (sum |f|^p dmu)^{1/p}
Real lp_norm_core(const ArrayXd& absf, Real p, const ArrayXd& dmu);

/// Exact sup_t t mu{|f| > t}^{1/p}: the supremum is attained as max over the
/// distinct sample values v of v * mu{|f| >= v}^{1/p}.
Real weak_norm_core(const ArrayXd& absf, Real p, const ArrayXd& dmu);

/// sup over superlevel sets E = {|f| >= v} (plus the full domain) of
/// ||f chi_E||_{L^q} mu(E)^{1/p - 1/q}, 0 < q < p.
Real kolmogorov_norm_core(const ArrayXd& absf, Real p, Real q, const ArrayXd& dmu);

Real lp_norm(const GridFunction& f, Real p, const WeightSpec& w);
Real lp_norm(const TrigPolynomial& g, Real p, const WeightSpec& w, const TorusGrid& grid);
Real weak_norm(const GridFunction& f, Real p, const WeightSpec& w);
Real kolmogorov_norm(const GridFunction& f, Real p, Real q, const WeightSpec& w);

}  // namespace multixfer
