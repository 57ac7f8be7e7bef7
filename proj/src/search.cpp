#include "multixfer/search.hpp"

#include <algorithm>
#include <cmath>

namespace multixfer {

namespace {

struct RestartOutcome {
  Real value = 0.0;
  std::vector<ArrayXcd> coeffs;
  std::vector<std::pair<int, Real>> trace;
  int evals = 0;
};

}  // namespace

AscentResult coordinate_ascent(
    const std::vector<int>& slot_sizes, const std::vector<int>& dc_index,
    const std::function<Real(const std::vector<ArrayXcd>&)>& ratio,
    const std::function<Real(const ArrayXcd&, int)>& slot_norm, const AscentConfig& cfg) {
  if (cfg.restarts < 1 || cfg.steps < 1)
    throw std::domain_error("search config requires restarts >= 1 and steps >= 1");
  const int slots = static_cast<int>(slot_sizes.size());

  Rng master(cfg.seed);

  const auto normalize_slot = [&](ArrayXcd& c, int l) -> bool {
    const Real nrm = slot_norm(c, l);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) return false;
    c /= nrm;
    return true;
  };

  const auto run_restart = [&](int r) -> RestartOutcome {
    Rng rng(master.derive(static_cast<std::uint64_t>(r)));
    RestartOutcome out;
    out.coeffs.resize(slots);
    for (int l = 0; l < slots; ++l) {
      ArrayXcd c = ArrayXcd::Zero(slot_sizes[l]);
      if (r == 0) {
        c[dc_index[l]] = Complex(1.0, 0.0);
      } else if (r % 3 == 2) {
        c[rng.uniform_int(0, slot_sizes[l] - 1)] = rng.complex_normal();
      } else {
        for (int i = 0; i < slot_sizes[l]; ++i) c[i] = rng.complex_normal();
      }
      if (!normalize_slot(c, l)) {
        c.setZero();
        c[dc_index[l]] = Complex(1.0, 0.0);
        if (!normalize_slot(c, l)) throw std::runtime_error("no valid search candidate");
      }
      out.coeffs[l] = std::move(c);
    }
    Real best = ratio(out.coeffs);
    out.evals = 1;
    out.trace.emplace_back(out.evals, best);

    Real scale = cfg.init_scale;
    std::vector<ArrayXcd> cand = out.coeffs;
    for (int sweep = 0; sweep < cfg.steps && scale >= cfg.min_scale; ++sweep) {
      bool improved = false;
      for (int l = 0; l < slots; ++l) {
        for (int i = 0; i < slot_sizes[l]; ++i) {
          for (int part = 0; part < 2; ++part) {
            for (int sgn = -1; sgn <= 1; sgn += 2) {
              cand[l] = out.coeffs[l];
              cand[l][i] += part == 0 ? Complex(sgn * scale, 0.0) : Complex(0.0, sgn * scale);
              if (!normalize_slot(cand[l], l)) continue;
              const Real rv = ratio(cand);
              ++out.evals;
              if (rv > best * (1.0 + cfg.accept_margin)) {
                out.coeffs[l] = cand[l];
                best = rv;
                improved = true;
                out.trace.emplace_back(out.evals, best);
              }
            }
          }
        }
        cand[l] = out.coeffs[l];
      }
      if (!improved) scale *= 0.5;
    }
    out.value = best;
    return out;
  };

  std::vector<RestartOutcome> results(cfg.restarts);
  parallel_for(cfg.jobs, cfg.restarts, [&](int r) { results[r] = run_restart(r); });

  AscentResult merged;
  int eval_offset = 0;
  for (int r = 0; r < cfg.restarts; ++r) {
    for (const auto& [e, v] : results[r].trace)
      if (merged.trace.empty() || v > merged.trace.back().second)
        merged.trace.emplace_back(eval_offset + e, v);
    if (merged.best_restart < 0 || results[r].value > merged.value) {
      merged.value = results[r].value;
      merged.best = results[r].coeffs;
      merged.best_restart = r;
    }
    eval_offset += results[r].evals;
  }
  return merged;
}

}  // namespace multixfer
