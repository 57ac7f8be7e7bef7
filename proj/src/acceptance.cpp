#include "multixfer/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

namespace multixfer {

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(Real v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

SymbolSpec bump_symbol(Real radius) {
  return SymbolSpec::closed_form(
      1, 2,
      [radius](const SlotArgs& xi) {
        const Real r2 = xi[0].squaredNorm() + xi[1].squaredNorm();
        const Real u = r2 / (radius * radius);
        return Complex(u < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u)) : 0.0, 0.0);
      },
      1.0, "bump", radius);
}

// 1. Identity-symbol norm: m = 1 on (2,2) -> 1, unweighted torus.
Outcome criterion_identity_norm(int jobs) {
  SymbolFamily fam;
  fam.members.push_back(SymbolSpec::constant(1, 2, Complex(1.0, 0.0)));
  SearchConfig cfg;
  cfg.restarts = 8;
  cfg.steps = 100;
  cfg.freq_box = FrequencyBox{1, 8};
  cfg.seed = 7;
  cfg.jobs = jobs;
  const TorusGrid grid = make_torus_grid(1, 512);
  const PeriodicOperator op = make_periodic_operator(fam, cfg.freq_box, grid);
  const ExponentTuple exps = make_exponents({2.0, 2.0});
  const WeightSpec unit = WeightSpec::constant(1, 1.0);
  const NormEstimate est = estimate_norm(op, exps, unit, {unit, unit}, Target::kStrong, cfg);
  Outcome o;
  o.pass = est.value >= 0.999 && est.value <= 1.0 + 1e-9;
  o.detail = "estimate=" + fmt(est.value);
  return o;
}

// 2. Kolmogorov sandwich on random step data.
Outcome criterion_kolmogorov(int) {
  const std::vector<std::pair<Real, Real>> pqs{{1.0, 0.5}, {2.0, 1.0}, {2.0 / 3.0, 1.0 / 3.0}};
  const int n = 128;
  int violations = 0;
  Real worst_low = 0.0, worst_high = 0.0;
  for (std::size_t c = 0; c < pqs.size(); ++c) {
    const auto [p, q] = pqs[c];
    const Real cpq = kolmogorov_constant(p, q);
    Rng rng(1000 + c);
    for (int inst = 0; inst < 1000; ++inst) {
      ArrayXd absf(n), w(n);
      // random step function: 2..6 pieces, occasional zero level
      int pieces = rng.uniform_int(2, 6);
      {
        std::vector<int> cuts{0, n};
        for (int t = 1; t < pieces; ++t) cuts.push_back(rng.uniform_int(1, n - 1));
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
          const Real level = rng.uniform() < 0.2 ? 0.0 : std::exp(rng.uniform(-1.0, 1.2));
          for (int i = cuts[s]; i < cuts[s + 1]; ++i) absf[i] = level;
        }
      }
      // random step weight, strictly positive
      {
        int wp = rng.uniform_int(2, 5);
        std::vector<int> cuts{0, n};
        for (int t = 1; t < wp; ++t) cuts.push_back(rng.uniform_int(1, n - 1));
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
          const Real level = std::exp(rng.uniform(-2.0, 2.0));
          for (int i = cuts[s]; i < cuts[s + 1]; ++i) w[i] = level;
        }
      }
      const ArrayXd dmu = w / static_cast<Real>(n);
      const Real wk = weak_norm_core(absf, p, dmu);
      const Real ko = kolmogorov_norm_core(absf, p, q, dmu);
      if (wk > ko * (1.0 + 1e-12) + 1e-300) {
        ++violations;
        worst_low = std::max(worst_low, wk - ko);
      }
      if (ko > cpq * wk * (1.0 + 1e-12) + 1e-300) {
        ++violations;
        worst_high = std::max(worst_high, ko - cpq * wk);
      }
    }
  }
  Outcome o;
  o.pass = violations == 0;
  o.detail = "violations=" + std::to_string(violations);
  return o;
}

// 3. De-periodization identity and factor trace.
Outcome criterion_deperiodization(int) {
  const ExponentTuple exps = make_exponents({2.0, 2.0});
  Real worst = 0.0;
  bool monotone = true;
  for (int inst = 0; inst < 20; ++inst) {
    Rng rng(500 + inst);
    const LineGrid kg = make_line_grid(2, 0.25, 32);
    ArrayXcd vals(grid_size(Grid{kg}));
    const Real a = rng.uniform(-4.0, 4.0);
    const Real b = rng.uniform(-4.0, 4.0);
    const auto bump1 = [](Real t) {
      const Real u = (t / 0.25) * (t / 0.25);
      return u < 1.0 ? std::exp(-1.0 / (1.0 - u)) : 0.0;
    };
    for (std::int64_t i = 0; i < vals.size(); ++i) {
      const Vec2 y = grid_point(Grid{kg}, i);
      vals[i] = bump1(y[0]) * bump1(y[1]) * (1.0 + 0.5 * std::cos(kTwoPi * (a * y[0] + b * y[1])));
    }
    const GridFunction K{Grid{kg}, std::move(vals)};
    TrigPolynomial g1, g2;
    g1.dim = g2.dim = 1;
    for (int t = 0; t < 8; ++t) {
      g1.coeffs[{rng.uniform_int(-8, 8), 0}] += rng.complex_normal();
      g2.coeffs[{rng.uniform_int(-8, 8), 0}] += rng.complex_normal();
    }
    const auto rep =
        deperiodization_check(K, g1, g2, exps, {4.0, 8.0, 16.0}, 64, rng.next_u64(), 1e-6);
    worst = std::max(worst, rep.identity_max_err);
    monotone = monotone && rep.factors_nonincreasing;
  }
  Outcome o;
  o.pass = worst <= 1e-6 && monotone;
  o.detail = "identity_max_err=" + fmt(worst) + (monotone ? "" : " factors not monotone");
  return o;
}

// 4. Transference ratio for the dilation family, strong and weak, unweighted
//    and with the smoothed power weight.
Outcome criterion_transference(int jobs) {
  SymbolFamily fam = dilate_family(bump_symbol(3.0), {0.5, 1.0, 2.0});
  const ExponentTuple exps = make_exponents({2.0, 2.0});
  SearchConfig cfg;
  cfg.restarts = 8;
  cfg.steps = 150;
  cfg.freq_box = FrequencyBox{1, 8};
  cfg.seed = 11;
  cfg.jobs = jobs;
  TransferenceOptions opts;

  const WeightSpec unit = WeightSpec::constant(1, 1.0);
  const WeightSpec smoothed =
      smooth_weight(WeightSpec::power_sine(1, {0.5, 0.0}), Mollifier::bump(1, 0.25, 128));

  Outcome o;
  o.pass = true;
  for (const bool weighted : {false, true}) {
    const WeightSpec& w = weighted ? smoothed : unit;
    for (const Target target : {Target::kStrong, Target::kWeak}) {
      const auto rep = transference_report(fam, exps, w, {w, w}, target, cfg, opts);
      const std::string tag = std::string(weighted ? "w" : "u") + target_name(target);
      if (rep.rejected) {
        o.pass = false;
        o.detail += tag + ":rejected ";
        continue;
      }
      o.detail += tag + ":rho=" + fmt(rep.rho) + " ";
      if (!(rep.rho <= 1.05)) o.pass = false;
    }
  }
  return o;
}

// 5. Marcinkiewicz-Zygmund with oracle Khintchine constants.
Outcome criterion_mz(int) {
  const ExponentTuple exps = make_exponents({2.0, 2.0});
  const TorusGrid grid = make_torus_grid(1, 64);
  int violations = 0;
  Real worst_ratio = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    Rng rng(9000 + inst);
    std::vector<LatticeSymbol> ops;
    for (int j = 0; j < 3; ++j) {
      LatticeSymbol m;
      m.dim = 1;
      m.arity = 2;
      m.max_freq = 3;
      m.values.resize(static_cast<std::int64_t>(m.slot_box()) * m.slot_box());
      for (std::int64_t i = 0; i < m.values.size(); ++i) m.values[i] = rng.complex_normal() * 0.5;
      m.sup_norm = m.values.abs().maxCoeff();
      ops.push_back(std::move(m));
    }
    std::vector<std::vector<TrigPolynomial>> inputs(2);
    for (int l = 0; l < 2; ++l)
      for (int k = 0; k < 3; ++k) {
        TrigPolynomial f;
        f.dim = 1;
        for (int mode = -3; mode <= 3; ++mode) f.coeffs[{mode, 0}] = rng.complex_normal();
        inputs[l].push_back(std::move(f));
      }
    const Real bound = mz_realized_bound(ops, inputs, exps, grid);
    const auto rep = mz_test(ops, inputs, exps, bound, grid);
    if (!rep.pass) ++violations;
    worst_ratio = std::max(worst_ratio, rep.ratio);
  }
  Outcome o;
  o.pass = violations == 0;
  o.detail = "violations=" + std::to_string(violations) + " worst_ratio=" + fmt(worst_ratio);
  return o;
}

// 6. Mollification domination, pointwise, 100 random instances.
Outcome criterion_domination(int) {
  const LineGrid lg = make_line_grid(1, 4.0, 128);
  const Profile phi = bump_profile(1, 1.0, 16, 1.0);
  Real worst = -std::numeric_limits<Real>::infinity();
  int violations = 0;
  for (int inst = 0; inst < 100; ++inst) {
    Rng rng(3000 + inst);
    // random smooth symbol: two gaussian lobes with complex amplitudes
    struct Lobe {
      Real a, b, s;
      Complex c;
    };
    std::vector<Lobe> lobes;
    for (int t = 0; t < 2; ++t)
      lobes.push_back({rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), rng.uniform(0.7, 2.0),
                       rng.complex_normal()});
    const SymbolSpec m = SymbolSpec::closed_form(
        1, 2,
        [lobes](const SlotArgs& xi) {
          Complex acc(0.0, 0.0);
          for (const auto& L : lobes) {
            const Real dx = xi[0][0] - L.a;
            const Real dy = xi[1][0] - L.b;
            acc += L.c * std::exp(-(dx * dx + dy * dy) / (L.s * L.s));
          }
          return acc;
        },
        4.0, "lobes");
    // band-limited random inputs: spectrum supported in |xi| <= 3
    const LineGrid dual = dual_grid(lg);
    auto band_limited = [&](Rng& r) {
      ArrayXcd spec = ArrayXcd::Zero(grid_size(Grid{dual}));
      for (std::int64_t i = 0; i < spec.size(); ++i)
        if (std::abs(grid_point(Grid{dual}, i)[0]) <= 3.0) spec[i] = r.complex_normal();
      return line_fourier_inverse(GridFunction{Grid{dual}, std::move(spec)});
    };
    const GridFunction f1 = band_limited(rng);
    const GridFunction f2 = band_limited(rng);
    const auto rep = mollification_domination(m, phi, f1, f2, 6.0, 1e-6);
    worst = std::max(worst, rep.max_violation);
    if (!rep.pass) ++violations;
  }
  Outcome o;
  o.pass = violations == 0;
  o.detail = "violations=" + std::to_string(violations) + " max(left-right)=" + fmt(worst);
  return o;
}

// 7. A_p estimator: exactness for constants, stabilization/divergence for powers.
Outcome criterion_ap(int) {
  Outcome o;
  o.pass = true;
  for (Real p : {1.0, 2.0, 4.0}) {
    const Real v = ap_constant(WeightSpec::constant(1, 1.0), p, 6);
    if (std::abs(v - 1.0) > 1e-12) {
      o.pass = false;
      o.detail += "unit p=" + fmt(p) + " gave " + fmt(v) + " ";
    }
  }
  for (Real alpha : {-0.5, 0.5}) {
    const WeightSpec w = WeightSpec::power_sine(1, {alpha, 0.0});
    const Real a = ap_constant(w, 2.0, 6);
    const Real b = ap_constant(w, 2.0, 8);
    const Real ratio = b / a;
    o.detail += "alpha=" + fmt(alpha) + ":ratio=" + fmt(ratio) + " ";
    if (!(ratio < 1.05)) o.pass = false;
  }
  {
    const WeightSpec w = WeightSpec::power_sine(1, {1.5, 0.0});
    const Real a = ap_constant(w, 2.0, 6);
    const Real b = ap_constant(w, 2.0, 8);
    o.detail += "alpha=1.5:ratio=" + fmt(b / a);
    if (!(b > 2.0 * a)) o.pass = false;
  }
  return o;
}

// 8. Hormander-Sobolev norms: k-independence for m = 1; finiteness and
//    resolution stability for the decaying symbol.
Outcome criterion_hs(int) {
  const LittlewoodPaleyWindow win;
  Outcome o;
  o.pass = true;
  {
    const SymbolSpec one = SymbolSpec::constant(1, 2, Complex(1.0, 0.0));
    Real lo = std::numeric_limits<Real>::infinity(), hi = 0.0;
    for (int k = -10; k <= 10; ++k) {
      const Real v = hs_norm(one, k, {1.2}, win, 256).value;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    o.detail += "const_variation=" + fmt(hi - lo) + " ";
    if (!(hi - lo <= 1e-10)) o.pass = false;
  }
  {
    const SymbolSpec decay = SymbolSpec::closed_form(
        1, 2,
        [](const SlotArgs& xi) {
          return Complex(1.0 / (1.0 + xi[0].squaredNorm() + xi[1].squaredNorm()), 0.0);
        },
        1.0, "decay");
    Real sup256 = 0.0, sup512 = 0.0;
    for (int k = -8; k <= 8; ++k) {
      sup256 = std::max(sup256, hs_norm(decay, k, {1.2}, win, 256).value);
      sup512 = std::max(sup512, hs_norm(decay, k, {1.2}, win, 512).value);
    }
    const Real change = std::abs(sup512 - sup256) / sup512;
    o.detail += "decay_sup=" + fmt(sup512) + " resolution_change=" + fmt(change);
    if (!std::isfinite(sup512) || !(change < 0.01)) o.pass = false;
  }
  return o;
}

// 9. Normalization check: continuous symbols pass; the boundary half-space
//    indicator converges to 1/2 and is flagged.
Outcome criterion_normalized(int) {
  Outcome o;
  o.pass = true;
  const std::vector<int> schedule{2, 4, 8, 16};
  std::vector<SlotArgs> pts;
  {
    SlotArgs a{Vec2(0, 0), Vec2(0, 0), Vec2(0, 0)};
    pts.push_back(a);
    a[0][0] = 0.3;
    a[1][0] = -1.2;
    pts.push_back(a);
    a[0][0] = 2.0;
    a[1][0] = 1.0;
    pts.push_back(a);
  }
  const SymbolSpec decay = SymbolSpec::closed_form(
      1, 2,
      [](const SlotArgs& xi) {
        return Complex(1.0 / (1.0 + xi[0].squaredNorm() + xi[1].squaredNorm()), 0.0);
      },
      1.0, "decay");
  for (const SymbolSpec& m : {bump_symbol(3.0), decay}) {
    const auto rep = normalized_check(m, pts, schedule, 0.05);
    if (!rep.consistent) {
      o.pass = false;
      o.detail += m.id() + ":not consistent ";
      continue;
    }
    for (const auto& ptrace : rep.points)
      for (std::size_t i = 0; i + 1 < ptrace.errors.size(); ++i)
        if (ptrace.errors[i + 1] > ptrace.errors[i] * (1.0 + 1e-6) + 1e-13) o.pass = false;
    o.detail += m.id() + ":final=" + fmt(rep.points[1].errors.back()) + " ";
  }
  {
    const SymbolSpec half = SymbolSpec::closed_form(
        1, 2, [](const SlotArgs& xi) { return Complex(xi[0][0] >= 0.0 ? 1.0 : 0.0, 0.0); }, 1.0,
        "half_space");
    SlotArgs boundary{Vec2(0, 0), Vec2(1.0, 0.0), Vec2(0, 0)};
    const auto rep = normalized_check(half, {boundary}, schedule, 0.05);
    const Real gap = rep.points[0].errors.back();  // |limit - m| -> 1/2
    o.detail += "half_space_gap=" + fmt(gap);
    if (rep.consistent || !(gap > 0.4)) o.pass = false;
  }
  return o;
}

// 10. Approximate-identity multiplier bounds.
Outcome criterion_approx_identity(int jobs) {
  Outcome o;
  o.pass = true;
  // (a) sup norm of h_n^ via line transform of the sampled dilate
  Real worst_sup = 0.0;
  for (int n : {2, 4, 8, 16}) {
    const LineGrid lg = make_line_grid(1, 1.0, 4096);
    ArrayXcd vals(grid_size(Grid{lg}));
    for (std::int64_t i = 0; i < vals.size(); ++i) {
      const Real x = grid_point(Grid{lg}, i)[0];
      vals[i] = n * approx_identity_bump_value(1, Vec2(n * x, 0.0));
    }
    const GridFunction hn{Grid{lg}, std::move(vals)};
    worst_sup = std::max(worst_sup, line_fourier(hn).values.abs().maxCoeff());
  }
  o.detail += "sup|h_n^|=" + fmt(worst_sup) + " ";
  if (!(worst_sup <= 1.0 + 1e-10)) o.pass = false;

  // (b) pointwise h_n^ -> 1 monotone beyond n = 4 at 20 fixed frequencies
  int mono_fail = 0;
  for (int t = 1; t <= 10; ++t) {
    for (Real sgn : {-1.0, 1.0}) {
      const Real xi = sgn * 0.2 * t;
      Real prev = std::numeric_limits<Real>::infinity();
      for (int n : {4, 8, 16}) {
        const Real err = std::abs(approx_identity_bump_transform(1, n, Vec2(xi, 0.0)) - 1.0);
        if (err > prev * (1.0 + 1e-12)) ++mono_fail;
        prev = err;
      }
    }
  }
  o.detail += "mono_fail=" + std::to_string(mono_fail) + " ";
  if (mono_fail != 0) o.pass = false;

  // (c) operator-norm estimates stay below 2^{1/p} for smoothed weights
  const Mollifier psi = Mollifier::bump(1, 0.25, 128);
  const std::vector<WeightSpec> weights{
      smooth_weight(WeightSpec::power_sine(1, {0.5, 0.0}), psi),
      smooth_weight(WeightSpec::step({0.0, 0.3, 1.0}, {0.2, 2.5}), psi)};
  Real worst_excess = -std::numeric_limits<Real>::infinity();
  for (const auto& w : weights) {
    for (Real p : {1.0, 2.0}) {
      for (int n : {4, 8, 16}) {
        const auto rep = approx_identity_norm(w, p, n, 77, jobs);
        worst_excess = std::max(worst_excess, rep.estimate - rep.threshold);
        if (!(rep.estimate <= rep.threshold + 0.02)) o.pass = false;
      }
    }
  }
  o.detail += "max(estimate-2^{1/p})=" + fmt(worst_excess);
  return o;
}

struct Criterion {
  const char* name;
  Real budget_s;
  Outcome (*fn)(int);
};

}  // namespace

std::vector<CriterionResult> run_acceptance(int jobs, std::ostream& log) {
  const std::vector<Criterion> criteria{
      {"identity_symbol_norm", 10.0, criterion_identity_norm},
      {"kolmogorov_sandwich", 5.0, criterion_kolmogorov},
      {"deperiodization_identity", 60.0, criterion_deperiodization},
      {"transference_ratio", 300.0, criterion_transference},
      {"marcinkiewicz_zygmund", 60.0, criterion_mz},
      {"mollification_domination", 60.0, criterion_domination},
      {"ap_estimator", 10.0, criterion_ap},
      {"hormander_sobolev_norms", 30.0, criterion_hs},
      {"normalization_check", 10.0, criterion_normalized},
      {"approx_identity_bounds", 30.0, criterion_approx_identity},
  };
  std::vector<CriterionResult> results;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = criteria[i].fn(jobs);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const Real secs = std::chrono::duration<Real>(Clock::now() - t0).count();
    CriterionResult r;
    r.index = static_cast<int>(i + 1);
    r.name = criteria[i].name;
    r.pass = out.pass && secs <= criteria[i].budget_s;
    r.elapsed_s = secs;
    r.detail = out.detail + (secs > criteria[i].budget_s ? " [over time budget]" : "");
    log << (r.pass ? "PASS" : "FAIL") << " criterion " << r.index << " " << r.name << " ("
        << fmt(secs) << " s) " << r.detail << "\n";
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace multixfer
