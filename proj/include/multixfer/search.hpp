#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "multixfer/common.hpp"

namespace multixfer {

/// Restart/step budget for the coordinate ascent shared by the norm
/// estimators. Deterministic given seed: restart r uses a seed derived from
/// (seed, r) only, so adding restarts or steps never invalidates earlier work.
struct AscentConfig {
  int restarts = 8;
  int steps = 200;  // sweep budget per restart
  Real init_scale = 0.5;
  Real min_scale = 1e-9;
  Real accept_margin = 1e-12;  // relative improvement required to accept
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct AscentResult {
  Real value = 0.0;
  std::vector<ArrayXcd> best;                 // per-slot coefficient arrays (normalized)
  std::vector<std::pair<int, Real>> trace;    // (cumulative proposal count, best so far)
  int best_restart = -1;
};

/// Maximize a scale-invariant ratio over per-slot complex coefficient arrays
/// by seeded restarts plus one-coordinate perturbation ascent with slot
/// renormalization after every accepted move. Restart 0 starts from the
/// "constant" input (coefficient dc_index[l] = 1), restarts r with r % 3 == 2
/// from a single random mode, the rest from dense complex gaussians.
AscentResult coordinate_ascent(
    const std::vector<int>& slot_sizes, const std::vector<int>& dc_index,
    const std::function<Real(const std::vector<ArrayXcd>&)>& ratio,
    const std::function<Real(const ArrayXcd&, int)>& slot_norm, const AscentConfig& cfg);

}  // namespace multixfer
