#include "multixfer/config.hpp"

#include <cmath>

namespace multixfer {

namespace {

Complex parse_complex(const json& j, const std::string& field) {
  if (j.is_number()) return Complex(j.get<Real>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<Real>(), j[1].get<Real>());
  throw ConfigError(field, "expected a number or [re, im]");
}

Vec2 parse_point(const json& j, int dim, const std::string& field) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ConfigError(field, "expected an array of " + std::to_string(dim) + " coordinates");
  Vec2 v(0.0, 0.0);
  for (int a = 0; a < dim; ++a) {
    if (!j[a].is_number()) throw ConfigError(field, "coordinates must be numbers");
    v[a] = j[a].get<Real>();
  }
  return v;
}

std::function<Complex(const Vec2&)> parse_factor(const json& j, const std::string& field,
                                                 Real* bound) {
  const std::string kind = j.value("kind", "gaussian");
  if (kind == "gaussian") {
    const Real scale = j.value("scale", 1.0);
    if (!(scale > 0.0)) throw ConfigError(field + ".scale", "must be positive");
    *bound = 1.0;
    return [scale](const Vec2& xi) {
      return Complex(std::exp(-xi.squaredNorm() / (scale * scale)), 0.0);
    };
  }
  if (kind == "decay") {
    const Real order = j.value("order", -1.0);
    if (order > 0.0) throw ConfigError(field + ".order", "must be <= 0 for a bounded factor");
    *bound = 1.0;
    return [order](const Vec2& xi) {
      return Complex(std::pow(1.0 + xi.squaredNorm(), order / 2.0), 0.0);
    };
  }
  if (kind == "bump") {
    const Real radius = j.value("radius", 1.0);
    if (!(radius > 0.0)) throw ConfigError(field + ".radius", "must be positive");
    *bound = 1.0;
    return [radius](const Vec2& xi) {
      const Real u = xi.squaredNorm() / (radius * radius);
      return Complex(u < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u)) : 0.0, 0.0);
    };
  }
  throw ConfigError(field + ".kind", "unknown factor kind '" + kind + "'");
}

SymbolSpec parse_single_symbol(const json& j, int dim, int arity, const std::string& field,
                               std::string* id_out) {
  if (!j.is_object()) throw ConfigError(field, "expected an object with a 'form' key");
  const std::string form = j.value("form", "");
  if (form == "constant") {
    const Complex c = parse_complex(j.value("value", json(1.0)), field + ".value");
    if (id_out) *id_out = "constant";
    return SymbolSpec::constant(dim, arity, c);
  }
  if (form == "modulation") {
    if (!j.contains("shifts") || !j["shifts"].is_array() ||
        static_cast<int>(j["shifts"].size()) != arity)
      throw ConfigError(field + ".shifts", "expected one shift per slot");
    std::vector<Vec2> shifts;
    for (int l = 0; l < arity; ++l)
      shifts.push_back(parse_point(j["shifts"][l], dim, field + ".shifts"));
    if (id_out) *id_out = "modulation";
    return SymbolSpec::modulation(dim, arity, shifts);
  }
  if (form == "bump") {
    const Real radius = j.value("radius", 3.0);
    const Real height = j.value("height", 1.0);
    if (!(radius > 0.0)) throw ConfigError(field + ".radius", "must be positive");
    if (id_out) *id_out = "bump";
    const int d = dim;
    return SymbolSpec::closed_form(
        dim, arity,
        [radius, height, d](const SlotArgs& xi) {
          Real r2 = 0.0;
          for (int l = 0; l < 3; ++l) r2 += xi[l].squaredNorm();
          const Real u = r2 / (radius * radius);
          return Complex(u < 1.0 ? height * std::exp(1.0 - 1.0 / (1.0 - u)) : 0.0, 0.0);
        },
        std::abs(height), "bump", radius);
  }
  if (form == "decay") {
    const Real order = j.value("order", -2.0);
    if (order > 0.0) throw ConfigError(field + ".order", "must be <= 0 for a bounded symbol");
    if (id_out) *id_out = "decay";
    return SymbolSpec::closed_form(
        dim, arity,
        [order](const SlotArgs& xi) {
          Real r2 = 0.0;
          for (int l = 0; l < 3; ++l) r2 += xi[l].squaredNorm();
          return Complex(std::pow(1.0 + r2, order / 2.0), 0.0);
        },
        1.0, "decay");
  }
  if (form == "half_space") {
    if (id_out) *id_out = "half_space";
    return SymbolSpec::closed_form(
        dim, arity,
        [](const SlotArgs& xi) { return Complex(xi[0][0] >= 0.0 ? 1.0 : 0.0, 0.0); }, 1.0,
        "half_space");
  }
  if (form == "ridge") {
    if (id_out) *id_out = "ridge";
    return SymbolSpec::closed_form(
        dim, arity,
        [](const SlotArgs& xi) {
          const Real a = std::abs(xi[0][0]);
          const Real b = std::abs(xi[1][0]);
          return a + b == 0.0 ? Complex(0.0, 0.0) : Complex(xi[0][0] / (a + b), 0.0);
        },
        1.0, "ridge");
  }
  if (form == "separable") {
    if (!j.contains("factors") || static_cast<int>(j["factors"].size()) != arity)
      throw ConfigError(field + ".factors", "expected one factor per slot");
    std::vector<std::function<Complex(const Vec2&)>> factors;
    std::vector<Real> bounds;
    for (int l = 0; l < arity; ++l) {
      Real b = 1.0;
      factors.push_back(parse_factor(j["factors"][l], field + ".factors", &b));
      bounds.push_back(b);
    }
    if (id_out) *id_out = "separable";
    return SymbolSpec::separable(dim, factors, bounds, "separable");
  }
  if (form == "mollified") {
    if (!j.contains("base")) throw ConfigError(field + ".base", "missing");
    const SymbolSpec base = parse_single_symbol(j["base"], dim, arity, field + ".base", nullptr);
    const Real radius = j.value("profile", json::object()).value("radius", 1.0);
    const int n = j.value("profile", json::object()).value("n", 16);
    if (id_out) *id_out = "mollified";
    return mollify(base, bump_profile(dim, radius, n, 1.0));
  }
  throw ConfigError(field + ".form", "unknown symbol form '" + form + "'");
}

GridFunction build_kernel(const json& j, const std::string& field, std::uint64_t seed) {
  const std::string kind = j.value("kind", "bump2");
  const Real radius = j.value("radius", 0.25);
  const int n = j.value("n", 32);
  if (!(radius > 0.0)) throw ConfigError(field + ".radius", "must be positive");
  if (n < 4 || !is_pow2(n)) throw ConfigError(field + ".n", "must be a power of two >= 4");
  if (kind != "bump2") throw ConfigError(field + ".kind", "unknown kernel kind '" + kind + "'");
  const LineGrid kg = make_line_grid(2, radius, n);
  Rng rng(seed);
  const Real a = rng.uniform(-4.0, 4.0);
  const Real b = rng.uniform(-4.0, 4.0);
  ArrayXcd vals(grid_size(Grid{kg}));
  const auto bump1 = [radius](Real t) {
    const Real u = (t / radius) * (t / radius);
    return u < 1.0 ? std::exp(-1.0 / (1.0 - u)) : 0.0;
  };
  for (std::int64_t i = 0; i < vals.size(); ++i) {
    const Vec2 y = grid_point(Grid{kg}, i);
    vals[i] = bump1(y[0]) * bump1(y[1]) * (1.0 + 0.5 * std::cos(kTwoPi * (a * y[0] + b * y[1])));
  }
  return GridFunction{Grid{kg}, std::move(vals)};
}

}  // namespace

SymbolFamily parse_symbol(const json& j, int dim, int arity, std::string* id_out) {
  SymbolFamily fam;
  if (j.is_object() && j.value("form", "") == "dilation") {
    if (!j.contains("base")) throw ConfigError("symbol.base", "missing");
    const SymbolSpec base = parse_single_symbol(j["base"], dim, arity, "symbol.base", nullptr);
    if (!j.contains("r") || !j["r"].is_array() || j["r"].empty())
      throw ConfigError("symbol.r", "expected a nonempty array of dilation factors");
    std::vector<Real> rs;
    for (const auto& r : j["r"]) {
      if (!r.is_number() || !(r.get<Real>() > 0.0))
        throw ConfigError("symbol.r", "dilation factors must be positive numbers");
      rs.push_back(r.get<Real>());
    }
    fam = dilate_family(base, rs);
    if (id_out) *id_out = "dilation";
    return fam;
  }
  if (j.is_object() && j.value("form", "") == "truncated_kernel") {
    const GridFunction K = build_kernel(j.value("kernel", json::object()), "symbol.kernel",
                                        j.value("kernel_seed", 7));
    std::vector<int> jr;
    for (const auto& v : j.value("j_range", json::array({0, 1, 2, 4})))
      jr.push_back(v.get<int>());
    fam = truncation_family(K, 1, 2, jr);
    if (id_out) *id_out = "truncated_kernel";
    return fam;
  }
  std::string id;
  fam.members.push_back(parse_single_symbol(j, dim, arity, "symbol", &id));
  fam.index_meaning = "single";
  if (id_out) *id_out = id;
  return fam;
}

WeightSpec parse_weight(const json& j, int dim) {
  if (j.is_string()) {
    if (j.get<std::string>() == "unit") return WeightSpec::constant(dim, 1.0);
    throw ConfigError("weights", "unknown weight shorthand '" + j.get<std::string>() + "'");
  }
  if (!j.is_object()) throw ConfigError("weights", "expected 'unit' or an object");
  const std::string form = j.value("form", "");
  if (form == "constant") {
    const Real c = j.value("value", 1.0);
    if (!(c > 0.0)) throw ConfigError("weights.value", "must be positive");
    return WeightSpec::constant(dim, c);
  }
  if (form == "power_sine") {
    if (!j.contains("alpha") || !j["alpha"].is_array() ||
        static_cast<int>(j["alpha"].size()) != dim)
      throw ConfigError("weights.alpha", "expected one exponent per axis");
    std::array<Real, 2> alpha{0.0, 0.0};
    for (int a = 0; a < dim; ++a) alpha[a] = j["alpha"][a].get<Real>();
    return WeightSpec::power_sine(dim, alpha);
  }
  if (form == "step") {
    if (dim != 1) throw ConfigError("weights.form", "step weights are one-dimensional here");
    std::vector<Real> breaks, levels;
    for (const auto& v : j.value("breaks", json::array())) breaks.push_back(v.get<Real>());
    for (const auto& v : j.value("levels", json::array())) levels.push_back(v.get<Real>());
    try {
      return WeightSpec::step(breaks, levels);
    } catch (const std::exception& e) {
      throw ConfigError("weights", e.what());
    }
  }
  if (form == "smoothed") {
    if (!j.contains("base")) throw ConfigError("weights.base", "missing");
    const WeightSpec base = parse_weight(j["base"], dim);
    const Real radius = j.value("radius", 0.25);
    const int n = j.value("n", 128);
    if (!(radius > 0.0) || radius > 0.5)
      throw ConfigError("weights.radius", "must lie in (0, 1/2]");
    return smooth_weight(base, Mollifier::bump(dim, radius, n));
  }
  throw ConfigError("weights.form", "unknown weight form '" + form + "'");
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
  ExperimentConfig cfg;
  cfg.raw = doc;
  cfg.task = doc.value("task", "");
  const std::vector<std::string> tasks{"estimate", "transfer", "classify", "mz", "deperiodize"};
  if (std::find(tasks.begin(), tasks.end(), cfg.task) == tasks.end())
    throw ConfigError("task", "expected one of estimate|transfer|classify|mz|deperiodize");

  const int dim = doc.value("d", 1);
  if (dim < 1 || dim > 2) throw ConfigError("d", "dimension must be 1 or 2");

  // exponents
  {
    std::vector<Real> p_list;
    const json pl = doc.value("exponents", json::array({2.0, 2.0}));
    if (!pl.is_array() || pl.size() < 2 || pl.size() > 3)
      throw ConfigError("exponents", "expected 2 or 3 entries");
    for (const auto& v : pl) {
      if (!v.is_number()) throw ConfigError("exponents", "entries must be numbers");
      p_list.push_back(v.get<Real>());
    }
    try {
      cfg.exps = make_exponents(p_list);
    } catch (const std::exception& e) {
      throw ConfigError("exponents", e.what());
    }
  }
  const int N = cfg.exps.n_linear;

  // seed: top-level, overridden by search.seed if present
  cfg.seed = doc.value("seed", 1u);

  // weights: "unit" | single spec (shared) | {output:..., inputs:[...]}
  {
    const json jw = doc.value("weights", json("unit"));
    if (jw.is_object() && jw.contains("output")) {
      cfg.w_out = parse_weight(jw["output"], dim);
      cfg.w_in.clear();
      const json ins = jw.value("inputs", json::array());
      if (static_cast<int>(ins.size()) != N)
        throw ConfigError("weights.inputs", "expected one weight per input slot");
      for (const auto& v : ins) cfg.w_in.push_back(parse_weight(v, dim));
      cfg.weight_id = "custom";
    } else {
      const WeightSpec shared = parse_weight(jw, dim);
      cfg.w_out = shared;
      cfg.w_in.assign(N, shared);
      cfg.weight_id = shared.id();
    }
  }

  // symbol / family
  if (doc.contains("symbol") && doc.contains("family"))
    throw ConfigError("symbol", "give either 'symbol' or 'family', not both");
  const json jsym = doc.contains("family") ? doc["family"]
                    : doc.contains("symbol") ? doc["symbol"]
                                             : json({{"form", "constant"}, {"value", 1.0}});
  cfg.family = parse_symbol(jsym, dim, N, &cfg.symbol_id);

  // search block
  {
    const json js = doc.value("search", json::object());
    cfg.search.restarts = js.value("restarts", 8);
    cfg.search.steps = js.value("steps", 200);
    const int K = js.value("freq_box", 8);
    if (K < 1) throw ConfigError("search.freq_box", "must be >= 1");
    if (N == 3 && (K > 8 || dim > 1))
      throw ConfigError("search.freq_box", "N = 3 searches are capped at K <= 8, d = 1");
    cfg.search.freq_box = FrequencyBox{dim, K};
    cfg.search.seed = js.value("seed", cfg.seed);
    cfg.seed = cfg.search.seed;
    if (cfg.search.restarts < 1 || cfg.search.steps < 1)
      throw ConfigError("search", "restarts and steps must be >= 1");
  }

  // grids block
  {
    const json jg = doc.value("grids", json::object());
    cfg.grid_n = jg.value("n", 512);
    if (!is_pow2(cfg.grid_n) || cfg.grid_n < 4)
      throw ConfigError("grids.n", "must be a power of two >= 4");
    if (cfg.grid_n <= 2 * N * cfg.search.freq_box.max_freq)
      throw ConfigError("grids.n", "grid must resolve the output band (n > 2NK)");
    if (jg.contains("s_schedule")) {
      cfg.transfer.s_schedule.clear();
      for (const auto& v : jg["s_schedule"]) cfg.transfer.s_schedule.push_back(v.get<Real>());
      if (cfg.transfer.s_schedule.empty() ||
          !std::is_sorted(cfg.transfer.s_schedule.begin(), cfg.transfer.s_schedule.end()))
        throw ConfigError("grids.s_schedule", "must be a nondecreasing list");
      cfg.deper_s_schedule = cfg.transfer.s_schedule;
    }
    cfg.transfer.cutoff = jg.value("cutoff", 0.0);
  }

  // tolerances
  {
    const json jt = doc.value("tolerances", json::object());
    cfg.transfer.rho_tol = jt.value("rho_tol", 0.05);
  }

  cfg.target = doc.value("target", "strong") == std::string("weak") ? Target::kWeak : Target::kStrong;

  // task-specific blocks
  if (cfg.task == "mz") {
    const json jm = doc.value("mz", json::object());
    cfg.mz_ops = jm.value("ops", 3);
    cfg.mz_funcs = jm.value("funcs", 3);
    cfg.mz_box = jm.value("box", 3);
    cfg.mz_grid = jm.value("grid", 64);
    if (cfg.mz_funcs < 0 || cfg.mz_funcs > 4)
      throw ConfigError("mz.funcs", "sequence lengths are limited to 4");
  }
  if (cfg.task == "deperiodize") {
    const json jd = doc.value("deperiodize", json::object());
    cfg.deper_radius = jd.value("radius", 0.25);
    cfg.deper_kernel_n = jd.value("kernel_n", 32);
    cfg.deper_modes = jd.value("modes", 8);
    cfg.deper_samples = jd.value("samples", 64);
  }
  if (cfg.task == "classify") {
    const json jc = doc.value("classify", json::object());
    cfg.classify_opts.derivative_samples = jc.value("samples", 48);
    cfg.classify_opts.hs_resolution = jc.value("hs_resolution", 256);
    cfg.classify_opts.hs_smoothness = jc.value("smoothness", 0.0);
    cfg.classify_opts.sm_order = jc.value("sm_order", 0.0);
    cfg.classify_opts.sm_rho = jc.value("sm_rho", 1.0);
    cfg.classify_opts.ap_depth = jc.value("ap_depth", 4);
    cfg.classify_opts.seed = cfg.seed;
  }
  return cfg;
}

}  // namespace multixfer
